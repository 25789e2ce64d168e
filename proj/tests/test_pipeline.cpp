#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "idi/commands.hpp"
#include "idi/pipeline.hpp"

using namespace idi;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = IDI_TEST_FIXTURES;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "idiphase");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("idiphase_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const Json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump();
  return p;
}

Json line_config(std::vector<int> emitters, int order) {
  return {{"emitters", emitters},
          {"grid", {{"dim", 1}, {"pixels", 9}}},
          {"pipeline", {{"order", order}}},
          {"output", {{"formats", {"json", "csv"}}}}};
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = load_run_config(kFixtures + "/nine_pixel.json");
  CHECK(c.pixels == 9);
  CHECK(c.order == 4);
  CHECK(c.use_g4_pruning);
  CHECK(c.emitters.size() == 4);
  CHECK(parse_run_config(c.to_json()).to_json() == c.to_json());

  const auto code_of = [](const Json& j) {
    try {
      parse_run_config(j);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of(line_config({0, 9}, 3)) == ErrorCode::InvalidConfig);
  CHECK(code_of(line_config({}, 3)) == ErrorCode::InvalidConfig);
  CHECK(code_of(line_config({0, 1}, 5)) == ErrorCode::InvalidConfig);
  Json bad = line_config({0, 1}, 3);
  bad["output"]["formats"] = {"xml"};
  CHECK(code_of(bad) == ErrorCode::InvalidConfig);
  bad = line_config({0, 1}, 3);
  bad["emitters"] = {0.5};
  CHECK(code_of(bad) == ErrorCode::InvalidConfig);

  try {
    load_run_config("/nonexistent/config.json");
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("simulate: single emitter and four-emitter zero row") {
  RunConfig one = parse_run_config(line_config({4}, 4));
  for (const auto& t : simulate(one)) {
    for (double v : t.values) CHECK(std::abs(v) < 1e-12);
  }
  RunConfig four = parse_run_config(line_config({0, 2, 3, 7}, 2));
  const auto tables = simulate(four);
  REQUIRE(tables.size() == 1);
  CHECK(tables[0].values[0] == 1.5);
  CHECK(simulate(four, Exec::serial)[0].values == tables[0].values);
}

TEST_CASE("simulate is deterministic and ignores the seed without noise") {
  const fs::path dir = scratch("determinism");
  const fs::path cfg = write_config(dir, line_config({0, 2, 3, 7}, 4));
  const std::string out = (dir / "out").string();
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--seed", "1"}).code == 0);
  const std::string g4a = slurp(dir / "out" / "g4.csv"), ja = slurp(dir / "out" / "simulation.json");
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--seed", "99"}).code == 0);
  CHECK(slurp(dir / "out" / "g4.csv") == g4a);
  CHECK(slurp(dir / "out" / "simulation.json") == ja);
  CHECK(g4a.rfind("# ", 0) == 0);
  CHECK(g4a.find("\nu1,u2,u3,g4\n") != std::string::npos);

  // With noise the seed matters, and repeating it reproduces the output.
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--noise-sigma", "1e-3", "--seed", "5"}).code == 0);
  const std::string n1 = slurp(dir / "out" / "g2.csv");
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--noise-sigma", "1e-3", "--seed", "5"}).code == 0);
  CHECK(slurp(dir / "out" / "g2.csv") == n1);
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--noise-sigma", "1e-3", "--seed", "6"}).code == 0);
  CHECK(slurp(dir / "out" / "g2.csv") != n1);

  const fs::path plot = dir / "plot.csv";
  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", out, "--emit-plot-data", plot.string()}).code == 0);
  CHECK(slurp(plot).find("series,x,y\ng2,0,1.5\n") != std::string::npos);
}

TEST_CASE("enumerate") {
  const auto census = [](const std::string& m, const std::string& d) {
    const Run r = cli({"enumerate", "--pixels", m, "--dim", d});
    REQUIRE(r.code == 0);
    return Json::parse(r.out);
  };
  const Json nine = census("9", "1");
  CHECK(nine["canonical"] == 16);
  CHECK(nine["total"] == 45);
  CHECK(nine["match"] == true);
  CHECK(nine["equations"].size() == 16);
  const Json three = census("3", "2");
  CHECK(three["canonical"] == 11);
  CHECK(three["trivial"] == 9);
  CHECK(three["redundant"] == 16);
  CHECK(census("2", "1")["canonical"] == 0);

  CHECK(cli({"enumerate", "--pixels", "1"}).code == 1);
  CHECK(cli({"enumerate", "--pixels", "5", "--dim", "3"}).code == 1);
  CHECK(cli({"bogus"}).code == 1);
  CHECK(cli({"--version"}).out.find(kToolVersion) != std::string::npos);
}

TEST_CASE("retrieve: worked scenario with and without g4 pruning") {
  const fs::path dir = scratch("worked");
  const std::string cfg = kFixtures + "/worked_example.json";
  const Run plain = cli({"retrieve", "--config", cfg, "--out", dir.string()});
  REQUIRE(plain.code == 0);
  CHECK(plain.out.find("status: ambiguous, hypotheses: 3") != std::string::npos);

  const Run pruned = cli({"retrieve", "--config", cfg, "--out", dir.string(), "--prune-g4"});
  REQUIRE(pruned.code == 0);
  const Json j = Json::parse(slurp(dir / "retrieval.json"));
  CHECK(j["status"] == "unique");
  REQUIRE(j["hypotheses"].size() == 1);
  CHECK(j["hypotheses"][0]["phases"]["4"].get<double>() == doctest::Approx(1.0));
  CHECK(j["hypotheses"][0]["phases"]["3"].get<double>() == doctest::Approx(0.0));
  CHECK(j["alignment_error"].get<double>() < 1e-9);
  CHECK(j["g3_only"]["hypothesis_count"] == 3);

  const Run both = cli({"retrieve", "--config", cfg, "--out", dir.string(), "--both-reflections"});
  CHECK(both.out.find("hypotheses: 6") != std::string::npos);
}

TEST_CASE("retrieve: simulated configurations") {
  RunConfig c = load_run_config(kFixtures + "/nine_pixel.json");
  const RetrievalOutcome o = run_retrieval(c);
  CHECK(o.count_used == 4.0);
  CHECK(o.final_report().status == RetrievalStatus::unique);
  REQUIRE(o.best_alignment_error);
  CHECK(*o.best_alignment_error < 1e-6);

  c.emitters = {{4.0, 0.0}};
  const RetrievalOutcome single = run_retrieval(c);
  CHECK(single.final_report().status == RetrievalStatus::unique);
  CHECK(*single.best_alignment_error < 1e-9);

  c.dim = 2;
  c.emitters = {{0.0, 0.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(run_retrieval(c), Error);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(cli({"retrieve", "--config", (dir / "missing.json").string()}).code == 3);

  const fs::path bad = write_config(dir, line_config({0, 11}, 3));
  const Run r = cli({"simulate", "--config", bad.string(), "--out", dir.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);

  const fs::path noisy = write_config(dir, line_config({0, 2, 3, 7}, 3));
  CHECK(cli({"retrieve", "--config", noisy.string(), "--out", dir.string(), "--noise-sigma", "1e-3", "--seed", "3"})
            .code == 2);

  CHECK(exit_code_for(ErrorCode::ContradictoryMeasurements) == 2);
  CHECK(exit_code_for(ErrorCode::AllHypothesesPruned) == 2);
  CHECK(exit_code_for(ErrorCode::Io) == 3);
  CHECK(exit_code_for(ErrorCode::InvalidConfig) == 1);
}

TEST_CASE("verify subcommand") {
  const Run r = cli({"verify", "--scope", "counting"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(cli({"verify", "--scope", "nope"}).code == 1);
}

TEST_CASE("number formatting") {
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
}
