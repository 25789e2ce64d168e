#include "idi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace idi::oracle {

std::vector<int> cycle_lengths(std::span<const int> image) {
  const int k = static_cast<int>(image.size());
  std::vector<bool> seen(k, false);
  std::vector<int> lengths;
  for (int start = 0; start < k; ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (int a = start; !seen[a]; a = image[a] - 1) {
      seen[a] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

CycleType Permutation::kind() const {
  const int longest = cycle_type.empty() ? 1 : cycle_type.front();
  switch (longest) {
    case 1: return CycleType::identity;
    case 2:
      return (cycle_type.size() > 1 && cycle_type[1] == 2) ? CycleType::double_transposition
                                                           : CycleType::transposition;
    case 3: return CycleType::three_cycle;
    default: return CycleType::four_cycle;
  }
}

std::vector<Permutation> enumerate_permutations(int k) {
  if (k < 2 || k > 4) throw Error(ErrorCode::InvalidArgument, "permutation order must be 2..4");
  std::vector<int> image(k);
  std::iota(image.begin(), image.end(), 1);
  std::vector<Permutation> out;
  do {
    out.push_back({image, cycle_lengths(image)});
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

PairingSum::PairingSum(int k, const EmitterConfig& config, std::span<const Vec2> detector)
    : k_(k), n_(config.count()) {
  if (k < 2 || k > 4) throw Error(ErrorCode::InvalidArgument, "oracle order must be 2..4");
  if (static_cast<int>(detector.size()) != k) {
    throw Error(ErrorCode::InvalidArgument, "need exactly k detector momenta");
  }
  if (k == 4 && n_ > kMaxEmittersOrder4) {
    throw Error(ErrorCode::OracleTooLarge,
                "fourth-order brute force refused for N = " + std::to_string(n_));
  }
  phase_.resize(static_cast<std::size_t>(k) * n_);
  for (int a = 0; a < k; ++a) {
    for (int j = 0; j < n_; ++j) {
      const double arg = dot(detector[a], config.positions()[j]);
      phase_[a * n_ + j] = Complex(std::cos(arg), std::sin(arg));
    }
  }
  for (const Permutation& p : enumerate_permutations(k)) {
    std::array<int, 4> img{};
    for (int a = 0; a < k; ++a) img[a] = p.image[a] - 1;
    perms_.push_back(img);
  }
}

Complex PairingSum::partial(int lead) const {
  std::array<int, 4> idx{lead, 0, 0, 0};
  Complex sum{0.0, 0.0};
  const auto distinct_prefix = [&](int upto) {
    for (int a = 0; a < upto; ++a) {
      if (idx[a] == idx[upto]) return false;
    }
    return true;
  };
  const auto visit = [&] {
    for (const auto& img : perms_) {
      Complex term{1.0, 0.0};
      for (int a = 0; a < k_; ++a) {
        term *= phase_[a * n_ + idx[a]] * std::conj(phase_[a * n_ + idx[img[a]]]);
      }
      sum += term;
    }
  };
  // Ordered tuples with pairwise-distinct entries, lexicographic.
  for (idx[1] = 0; idx[1] < n_; ++idx[1]) {
    if (!distinct_prefix(1)) continue;
    if (k_ == 2) {
      visit();
      continue;
    }
    for (idx[2] = 0; idx[2] < n_; ++idx[2]) {
      if (!distinct_prefix(2)) continue;
      if (k_ == 3) {
        visit();
        continue;
      }
      for (idx[3] = 0; idx[3] < n_; ++idx[3]) {
        if (!distinct_prefix(3)) continue;
        visit();
      }
    }
  }
  return sum;
}

double PairingSum::finish(std::span<const Complex> partials, double imag_tol) const {
  Complex total{0.0, 0.0};
  for (const Complex& c : partials) total += c;
  total /= std::pow(static_cast<double>(n_), k_);
  if (std::abs(total.imag()) > imag_tol) {
    throw Error(ErrorCode::ImaginaryResidue,
                "pairing sum has imaginary part " + std::to_string(total.imag()));
  }
  return total.real();
}

double expectation_bruteforce(int k, const EmitterConfig& config, std::span<const Vec2> detector,
                              double imag_tol) {
  const PairingSum sum(k, config, detector);
  std::vector<Complex> partials(sum.emitters());
  for (int lead = 0; lead < sum.emitters(); ++lead) partials[lead] = sum.partial(lead);
  return sum.finish(partials, imag_tol);
}

std::vector<Vec2> detector_from_differences(const QGrid& grid, std::span<const QIndex> diffs) {
  std::vector<Vec2> k{{0.0, 0.0}};
  for (QIndex u : diffs) k.push_back(k.back() + grid.momentum(u));
  return k;
}

int del_product(int i, int j, int k, int l) {
  const auto nd = [](int a, int b) { return a == b ? 0 : 1; };
  return nd(i, j) * nd(i, k) * nd(i, l) * nd(j, k) * nd(j, l) * nd(k, l);
}

int del_expansion(int i, int j, int k, int l) {
  const int ij = i == j, ik = i == k, il = i == l, jk = j == k, jl = j == l, kl = k == l;
  return 1 - ij * ik * il - ij * il * jk - ij * ik * jl - ij * jk * jl - ij * ik * kl -
         ij * jk * kl + ij * kl + il * jk + ik * jl + ij * ik + ij * jk + ij * il + ij * jl +
         ik * il + ik * kl + jk * jl + jk * kl - ij - ik - il - jk - jl - kl;
}

Complex restricted_pairing_sum(CycleType type, const EmitterConfig& config,
                               std::span<const Vec2> q) {
  static constexpr std::size_t kArgs[] = {0, 1, 2, 3, 4};
  if (q.size() != kArgs[static_cast<int>(type)]) {
    throw Error(ErrorCode::InvalidArgument, "wrong argument count for restricted pairing sum");
  }
  const auto& r = config.positions();
  const int n = config.count();
  const auto e = [](double arg) { return Complex(std::cos(arg), std::sin(arg)); };
  Complex sum{0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const int w = del_product(i, j, k, l);
          if (w == 0) continue;
          Complex f{1.0, 0.0};
          switch (type) {
            case CycleType::identity: break;
            case CycleType::transposition: f = e(-dot(q[0], r[k] - r[l])); break;
            case CycleType::double_transposition:
              f = e(-dot(q[0], r[i] - r[j]) - dot(q[1], r[k] - r[l]));
              break;
            case CycleType::three_cycle:
              f = e(-dot(q[2], r[j]) + dot(q[0], r[k]) + dot(q[1], r[l]));
              break;
            case CycleType::four_cycle:
              f = e(-dot(q[3], r[i]) + dot(q[0], r[j]) + dot(q[1], r[k]) + dot(q[2], r[l]));
              break;
          }
          sum += static_cast<double>(w) * f;
        }
      }
    }
  }
  return sum;
}

}  // namespace idi::oracle
