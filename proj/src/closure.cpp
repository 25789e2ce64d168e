#include "idi/closure.hpp"

#include <algorithm>
#include <cmath>

namespace idi {

const char* to_string(EquationClass c) {
  switch (c) {
    case EquationClass::trivial: return "trivial";
    case EquationClass::redundant: return "redundant";
    case EquationClass::canonical: return "canonical";
  }
  return "unknown";
}

EquationClass classify(QIndex m, QIndex n) {
  if (m < n) return EquationClass::redundant;
  if (m.is_zero() || n.is_zero()) return EquationClass::trivial;
  return EquationClass::canonical;
}

std::vector<ClosureEquation> enumerate_equations(int pixels, int dim) {
  if (pixels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 pixels");
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  const int ymax = dim == 2 ? pixels - 1 : 0;
  std::vector<ClosureEquation> out;
  for (int ux = 0; ux < pixels; ++ux) {
    for (int uy = 0; uy <= ymax; ++uy) {
      for (int mx = 0; mx <= ux; ++mx) {
        for (int my = 0; my <= uy; ++my) {
          const QIndex m{mx, my};
          const QIndex n{ux - mx, uy - my};
          out.push_back({m, n, classify(m, n)});
        }
      }
    }
  }
  return out;
}

std::vector<ClosureEquation> canonical_equations(int pixels, int dim) {
  std::vector<ClosureEquation> out;
  for (const ClosureEquation& e : enumerate_equations(pixels, dim)) {
    if (e.cls == EquationClass::canonical) out.push_back(e);
  }
  return out;
}

EquationCensus census_of(const std::vector<ClosureEquation>& equations) {
  EquationCensus c;
  for (const ClosureEquation& e : equations) {
    ++c.total;
    switch (e.cls) {
      case EquationClass::trivial: ++c.trivial; break;
      case EquationClass::redundant: ++c.redundant; break;
      case EquationClass::canonical: ++c.canonical; break;
    }
  }
  return c;
}

EquationCensus census_closed_form(int pixels, int dim) {
  if (pixels < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 pixels");
  const long long m = pixels;
  const bool even = m % 2 == 0;
  EquationCensus c;
  if (dim == 1) {
    c.total = m * (m + 1) / 2;
    c.trivial = m;
    c.redundant = even ? m * m / 4 : (m * m - 1) / 4;
    c.canonical = even ? m * (m - 2) / 4 : (m - 1) * (m - 1) / 4;
  } else if (dim == 2) {
    c.total = m * m * (m + 1) * (m + 1) / 4;
    c.trivial = m * m;
    c.redundant = even ? m * m * m * (m + 2) / 8 : (m - 1) * (m + 1) * (m + 1) * (m + 1) / 8;
    c.canonical = even ? m * m * (m * (m + 2) - 6) / 8 : (m - 1) * (m - 1) * (m * (m + 4) + 1) / 8;
  } else {
    throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  }
  return c;
}

long long unknown_count(int pixels, int dim) {
  const long long f = census_closed_form(pixels, dim).canonical;
  const long long m = pixels;
  return dim == 1 ? f + (m - 2) : f + (m * m - 3);
}

double invert_g2_count(double g2_at_zero) {
  // Below this gap N would exceed ~2e12 emitters; treat as degenerate.
  constexpr double kMinGap = 1e-12;
  if (!std::isfinite(g2_at_zero) || 2.0 - g2_at_zero < kMinGap) {
    throw Error(ErrorCode::DegenerateInput,
                "g2(0) = " + std::to_string(g2_at_zero) + " does not determine an emitter count");
  }
  return 2.0 / (2.0 - g2_at_zero);
}

double invert_g2_magnitude(double g2_value, double n, double clamp) {
  if (!(n >= 1.0)) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  const double n2 = n * n;
  double sq = n2 * (g2_value - 1.0 + 2.0 / n);
  if (sq < -clamp * n2 || sq > (1.0 + clamp) * n2 || !std::isfinite(sq)) {
    throw Error(ErrorCode::OutOfRange,
                "g2 = " + std::to_string(g2_value) + " implies |S|^2 outside [0, N^2]");
  }
  if (sq < 0.0) sq = 0.0;
  if (sq > n2) sq = n2;
  return std::sqrt(sq);
}

ClosureMeasurement invert_g3_cosine(const ClosureEquation& equation, double g3_value, double n,
                                    std::array<double, 3> mags, double eps_mag, double clamp) {
  if (!(n >= 1.0)) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  if (eps_mag < 0.0) eps_mag = 1e-12 * n;
  for (double m : mags) {
    if (!(m > eps_mag)) {
      throw Error(ErrorCode::MagnitudeTooSmall, "structure factor magnitude " + std::to_string(m) +
                                                    " too small to carry a closure phase");
    }
  }
  const double n3 = n * n * n;
  const double sum_sq = (mags[0] * mags[0] + mags[1] * mags[1]) + mags[2] * mags[2];
  const double numerator = n3 * (g3_value - 1.0 + 6.0 / n - 12.0 / (n * n)) - (n - 4.0) * sum_sq;
  double c = numerator / (2.0 * mags[0] * mags[1] * mags[2]);
  if (!std::isfinite(c) || c > 1.0 + clamp || c < -1.0 - clamp) {
    throw Error(ErrorCode::CosOutOfRange, "closure cosine " + std::to_string(c) +
                                              " outside [-1, 1]; inputs are inconsistent");
  }
  c = std::clamp(c, -1.0, 1.0);
  return {equation, c, std::acos(c)};
}

}  // namespace idi
