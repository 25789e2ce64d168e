#include "idi/correlations.hpp"

#include <algorithm>
#include <cmath>

namespace idi {

const char* to_string(CycleType t) {
  switch (t) {
    case CycleType::identity: return "identity";
    case CycleType::transposition: return "transposition";
    case CycleType::double_transposition: return "double-transposition";
    case CycleType::three_cycle: return "3-cycle";
    case CycleType::four_cycle: return "4-cycle";
  }
  return "unknown";
}

namespace {

// |S(u)|^2 as S* S, matching the unreduced closed forms.
double norm_at(const StructureFactorTable& t, QIndex u) { return std::norm(t.at(u)); }

}  // namespace

Complex g1_cdc(const StructureFactorTable& table, QIndex u) { return table.at(u) / table.count(); }

double g2(const StructureFactorTable& table, QIndex u) {
  const double n = table.count();
  return 1.0 - 2.0 / n + norm_at(table, u) / (n * n);
}

double g3(const StructureFactorTable& table, QIndex u1, QIndex u2) {
  const double n = table.count();
  const Complex s1 = table.at(u1);
  const Complex s2 = table.at(u2);
  const Complex s12 = table.at(u1 + u2);
  const double mags = (std::norm(s1) + std::norm(s2)) + std::norm(s12);
  const double closure = (std::conj(s1) * std::conj(s2) * s12).real();
  return 1.0 - 6.0 / n + 12.0 / (n * n) + (n - 4.0) / (n * n * n) * mags +
         2.0 / (n * n * n) * closure;
}

Complex p1(double n) { return n * n * n * n - 6.0 * n * n * n + 11.0 * n * n - 6.0 * n; }

Complex p2(const StructureFactorTable& table, QIndex q) {
  const double n = table.count();
  const Complex s = table.at(q);
  const Complex ss = std::conj(s) * s;
  return n * n * ss - n * n * n + 5.0 * n * n - 5.0 * n * ss - 6.0 * n + 6.0 * ss;
}

Complex p3(const StructureFactorTable& table, QIndex q1, QIndex q2) {
  const double n = table.count();
  const Complex s1 = table.at(q1);
  const Complex s2 = table.at(q2);
  const Complex sd = table.at(q2 - q1);
  const Complex ss = table.at(q1 + q2);
  const Complex n1 = std::conj(s1) * s1;
  const Complex n2 = std::conj(s2) * s2;
  return n * n - n * n1 - n * n2 - 6.0 * n + n1 * n2 - std::conj(s1) * s2 * std::conj(sd) -
         s1 * std::conj(s2) * sd - std::conj(s1) * std::conj(s2) * ss - s1 * s2 * std::conj(ss) +
         std::conj(sd) * sd + std::conj(ss) * ss + 4.0 * n1 + 4.0 * n2;
}

Complex p4(const StructureFactorTable& table, QIndex q1, QIndex q2, QIndex q3) {
  const double n = table.count();
  const Complex s1c = std::conj(table.at(q1));
  const Complex s2c = std::conj(table.at(q2));
  const Complex s3 = table.at(q3);
  const Complex bracket = s1c * s2c * s3 - s2c * table.at(q3 - q1) - s1c * table.at(q3 - q2) -
                          s3 * std::conj(table.at(q1 + q2)) + 2.0 * table.at(q3 - q1 - q2);
  return (n - 3.0) * bracket;
}

Complex p5(const StructureFactorTable& table, QIndex q1, QIndex q2, QIndex q3, QIndex q4) {
  const Complex s1c = std::conj(table.at(q1));
  const Complex s2c = std::conj(table.at(q2));
  const Complex s3c = std::conj(table.at(q3));
  const Complex s4 = table.at(q4);
  const auto S = [&](QIndex u) { return table.at(u); };
  const auto Sc = [&](QIndex u) { return std::conj(table.at(u)); };
  return s1c * s2c * s3c * s4 - s3c * s4 * Sc(q1 + q2) - s2c * s4 * Sc(q1 + q3) -
         s1c * s4 * Sc(q2 + q3) - s2c * s3c * S(q4 - q1) - s1c * s3c * S(q4 - q2) -
         s1c * s2c * S(q4 - q3) + 2.0 * s3c * S(q4 - q1 - q2) + 2.0 * s2c * S(q4 - q1 - q3) +
         2.0 * s1c * S(q4 - q2 - q3) + 2.0 * s4 * Sc(q1 + q2 + q3) + S(q4 - q1) * Sc(q2 + q3) +
         Sc(q1 + q3) * S(q4 - q2) + Sc(q1 + q2) * S(q4 - q3) - 6.0 * S(q4 - q1 - q2 - q3);
}

Complex p_contribution(CycleType type, const StructureFactorTable& table,
                       std::span<const QIndex> args) {
  const auto need = [&](std::size_t k) {
    if (args.size() != k) {
      throw Error(ErrorCode::InvalidArgument, std::string(to_string(type)) + " contribution takes " +
                                                  std::to_string(k) + " arguments");
    }
  };
  switch (type) {
    case CycleType::identity: need(0); return p1(table.count());
    case CycleType::transposition: need(1); return p2(table, args[0]);
    case CycleType::double_transposition: need(2); return p3(table, args[0], args[1]);
    case CycleType::three_cycle: need(3); return p4(table, args[0], args[1], args[2]);
    case CycleType::four_cycle: need(4); return p5(table, args[0], args[1], args[2], args[3]);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown cycle type");
}

Complex g4_assembled_complex(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3) {
  const auto [q1, q2, q3, q4, q5, q6] = G4Differences::from(u1, u2, u3);
  const double n = table.count();
  const StructureFactorTable& t = table;

  Complex sum = p1(n);
  sum += p2(t, q1) + p2(t, q2) + p2(t, q3) + p2(t, q4) + p2(t, q5) + p2(t, q6);
  sum += p3(t, q1, q3) + p3(t, q2, q5) + p3(t, q4, q6);
  sum += p4(t, q1, q2, q4) + p4(t, -q2, q4, q1) + p4(t, q1, q6, q5) + p4(t, -q6, q5, q1) +
         p4(t, q2, q3, q6) + p4(t, -q3, q6, q2) + p4(t, -q3, q5, q4) + p4(t, q4, q3, q5);
  sum += p5(t, q1, q2, q3, q5) + p5(t, -q2, -q3, q5, q1) + p5(t, q1, -q3, q6, q4) +
         p5(t, -q6, q4, q3, q1) + p5(t, -q2, q4, q6, q5) + p5(t, -q6, q2, q5, q4);
  return sum / (n * n * n * n);
}

double g4_assembled(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3) {
  return g4_assembled_complex(table, u1, u2, u3).real();
}

double g4_closed(const StructureFactorTable& table, QIndex u1, QIndex u2, QIndex u3) {
  const double n = table.count();
  const QIndex a = u1, b = u2, c = u3;
  const auto mag = [&](QIndex u) { return std::abs(table.at(u)); };
  const auto ph = [&](QIndex u) { return std::arg(table.at(u)); };

  const double m1 = mag(a), m2 = mag(b), m3 = mag(c);
  const double m12 = mag(a + b), m23 = mag(b + c), m123 = mag(a + b + c);
  const double m13 = mag(a + c), m1223 = mag(a + 2 * b + c), m31 = mag(c - a);
  const double f1 = ph(a), f2 = ph(b), f3 = ph(c);
  const double f12 = ph(a + b), f23 = ph(b + c), f123 = ph(a + b + c);
  const double f13 = ph(a + c), f1223 = ph(a + 2 * b + c), f31 = ph(c - a);

  const double sq = m1 * m1 + m2 * m2 + m3 * m3 + m12 * m12 + m23 * m23 + m123 * m123;

  double total = n * n * n * n - 12.0 * n * n * n + 60.0 * n * n - 144.0 * n;
  total += (n * n - 10.0 * n + 32.0) * sq;
  total += m1 * m1 * m3 * m3 + m12 * m12 * m23 * m23 + m2 * m2 * m123 * m123;
  total += 4.0 * (m13 * m13 + m1223 * m1223 + m31 * m31);
  total -= 4.0 * (m12 * m31 * m23 * std::cos(f12 + f31 - f23) +
                  m2 * m13 * m123 * std::cos(f2 + f13 - f123) +
                  m12 * m23 * m1223 * std::cos(f12 + f23 - f1223) +
                  m2 * m123 * m1223 * std::cos(f2 + f123 - f1223) +
                  m1 * m3 * m31 * std::cos(f1 - f3 + f31) +
                  m1 * m3 * m13 * std::cos(f1 + f3 - f13));
  total += 2.0 * (n - 6.0) *
           (m3 * m12 * m123 * std::cos(f3 + f12 - f123) +
            m1 * m23 * m123 * std::cos(f1 + f23 - f123) + m1 * m2 * m12 * std::cos(f1 + f2 - f12) +
            m2 * m3 * m23 * std::cos(f2 + f3 - f23));
  total += 2.0 * (m1 * m3 * m12 * m23 * std::cos(f1 - f3 + f23 - f12) +
                  m1 * m2 * m3 * m123 * std::cos(f1 + f2 + f3 - f123) +
                  m2 * m12 * m23 * m123 * std::cos(f2 - f12 - f23 + f123));
  return total / (n * n * n * n);
}

std::vector<QIndex> g4_closed_indices(QIndex u1, QIndex u2, QIndex u3) {
  std::vector<QIndex> out{u1,      u2,      u3,          u1 + u2,  u2 + u3,
                          u1 + u2 + u3, u1 + u3, u1 + 2 * u2 + u3, u3 - u1};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace idi
