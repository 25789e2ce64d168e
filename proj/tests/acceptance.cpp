// One line per acceptance criterion; exit status is non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "idi/verify.hpp"

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<idi::CheckList()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence of g2, g3, g4", [] { return idi::verify_oracle(); }},
      {2, "degenerate values at zero difference", [] { return idi::verify_degenerate(); }},
      {3, "closure-equation counting", [] { return idi::verify_counting(); }},
      {4, "g4 collected form vs assembly", [] { return idi::verify_g4_consistency(); }},
      {5, "worked sign-lifting example", [] { return idi::verify_worked_example(); }},
      {6, "end-to-end retrieval soundness", [] { return idi::verify_end_to_end(); }},
      {7, "symmetry suite", [] { return idi::verify_symmetry(); }},
      {8, "permutation census", [] { return idi::verify_permutations(); }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    idi::CheckList checks;
    std::string crash;
    try {
      checks = c.run();
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = crash.empty() && idi::all_pass(checks);
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const idi::Check& k : checks) {
      std::printf("    %s %s: residual %.3g (threshold %.3g)%s%s\n", k.pass ? "ok  " : "FAIL",
                  k.name.c_str(), k.residual, k.threshold, k.pass ? "" : ", worst at ",
                  k.pass ? "" : k.detail.c_str());
    }
    if (!crash.empty()) std::printf("    exception: %s\n", crash.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
