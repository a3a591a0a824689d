#include "srcomb/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace srcomb::elliptic {

namespace {

struct Agm {
  double K;
  double E;
};

Agm agm(double k) {
  if (k < 0 || k > 1) throw std::domain_error("elliptic modulus must lie in [0, 1]");
  if (k == 1) return {std::numeric_limits<double>::infinity(), 1.0};
  double a = 1.0, b = std::sqrt((1 - k) * (1 + k)), c = k;
  double sum = 0.5 * c * c;
  double pow2 = 0.5;
  for (int i = 0; i < 64 && std::abs(c) > 1e-17 * a; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2;
    sum += pow2 * c * c;
  }
  const double Kv = std::numbers::pi / (2 * a);
  return {Kv, Kv * (1 - sum)};
}

}  // namespace

double K(double k) { return agm(k).K; }
double E(double k) { return agm(k).E; }

JacobiSnCnDn sncndn(double u, double k) {
  if (k < 0 || k > 1) throw std::domain_error("elliptic modulus must lie in [0, 1]");
  if (k == 0) return {std::sin(u), std::cos(u), 1.0};
  if (k == 1) {
    const double s = 1 / std::cosh(u);
    return {std::tanh(u), s, s};
  }
  // Descending Landen sequence via the arithmetic-geometric mean.
  constexpr int kMax = 32;
  double a[kMax + 1], c[kMax + 1];
  a[0] = 1;
  double b = std::sqrt((1 - k) * (1 + k));
  c[0] = k;
  int n = 0;
  while (std::abs(c[n]) > 1e-16 && n < kMax) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int i = n; i >= 1; --i) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  const double sn = std::sin(phi), cn = std::cos(phi);
  const double dn = n >= 1 ? cn / std::cos(phi_prev - phi) : 1.0;
  return {sn, cn, dn};
}

double Y(double k) {
  const double k2 = k * k;
  if (k == 1) return 2.5;
  // Numerator and denominator both vanish like k^4; use the series there.
  if (k2 < 1e-3) return 4 - k2 / 2 - 9 * k2 * k2 / 32 - 11 * k2 * k2 * k2 / 64;
  const double Kv = K(k), Ev = E(k);
  const double num = 5 * k2 * ((2 * k2 - 1) * Ev + (1 - k2) * Kv);
  const double den = 2 * (k2 * k2 - k2 + 1) * Ev - (2 - k2) * (1 - k2) * Kv;
  return num / den;
}

double Z(double k) {
  const double k2 = k * k;
  if (k2 < 1e-3) return k2 * (1 + k2 * (17.0 / 8 + k2 * 555.0 / 128));
  return 4 * k2 / ((1 - 2 * k2) * Y(k));
}

}  // namespace srcomb::elliptic
