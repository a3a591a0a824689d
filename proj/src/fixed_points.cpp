#include "srcomb/fixed_points.hpp"

#include <cmath>
#include <stdexcept>

namespace srcomb {

FixedPoint tss(const ModelParams& p) {
  SpinState s(p.n());
  for (std::size_t t = 0; t < p.n(); ++t) s[3 * t + 2] = 1.0;
  return {FixedPointKind::TSS, s, 0.0};
}

bool ntss_exists(double delta, double W) { return delta * delta + (W - 1) * (W - 1) < 1.0; }

std::optional<NtssValues> ntss_values(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  if (W == 0.0) throw std::domain_error("NTSS is singular at W = 0");
  if (!ntss_exists(d, W)) return std::nullopt;
  NtssValues v;
  v.s_z = (d * d + W * W) / (2 * W);
  v.l_perp = std::sqrt(2 * (1 - (W - 1) * (W - 1) - d * d));
  v.varphi = std::atan(d / W);
  v.s_perp = 0.5 * v.l_perp * std::sqrt(1 + d * d / (W * W));
  return v;
}

std::optional<FixedPoint> ntss(const ModelParams& p, double Phi) {
  const auto v = ntss_values(p);
  if (!v) return std::nullopt;
  const double a = Phi + v->varphi, b = Phi - v->varphi;
  SpinState s(Vec3(v->s_perp * std::cos(a), v->s_perp * std::sin(a), v->s_z),
              Vec3(v->s_perp * std::cos(b), v->s_perp * std::sin(b), v->s_z));
  return FixedPoint{FixedPointKind::NTSS, s, Phi};
}

std::optional<std::array<ReducedState, 2>> ntss_reduced(const ModelParams& p) {
  const auto v = ntss_values(p);
  if (!v) return std::nullopt;
  const double sx = 0.5 * v->l_perp;
  const double sy = sx * p.delta() / p.W;
  return std::array<ReducedState, 2>{ReducedState{sx, sy, v->s_z}, ReducedState{-sx, -sy, v->s_z}};
}

FixedPoint single_clock_attractor(double W) {
  if (W < 0) throw std::invalid_argument("W must be >= 0");
  SpinState s(1);
  if (W >= 1.0) {
    s[2] = 1.0;
    return {FixedPointKind::TSS, s, 0.0};
  }
  s[0] = std::sqrt(2 * W * (1 - W));
  s[2] = W;
  return {FixedPointKind::NTSS, s, 0.0};
}

double toda_lperp(double t, double C1, double C2) {
  const double arg = C1 * t + C2;
  if (std::abs(arg) > 700) return 0.0;
  return std::sqrt(2 * C1 * C1 / (1 + std::cosh(arg)));
}

TodaConstants toda_fit(double l_perp0, double l_z0) {
  const double C1 = std::hypot(l_perp0, l_z0);
  if (C1 == 0.0 || l_perp0 <= 0.0) throw std::domain_error("Toda fit needs l_perp(0) > 0");
  // l_z(t) = -C1 tanh((C1 t + C2)/2)
  return {C1, -2 * std::atanh(l_z0 / C1)};
}

NoPumpVerdict no_pump_classify(const SpinState& s, const ModelParams& p) {
  if (p.W != 0.0) throw std::invalid_argument("no_pump_classify requires W = 0");
  constexpr double tol = 1e-6;
  bool degenerate = true;
  for (std::size_t t = 1; t < p.n(); ++t) degenerate = degenerate && p.omega[t] == p.omega[0];
  if (degenerate) {
    const Vec3 L = s.l();
    return (std::hypot(L[0], L[1]) < tol && L[2] < 0) ? NoPumpVerdict::Stable : NoPumpVerdict::Unstable;
  }
  for (std::size_t t = 0; t < s.n(); ++t) {
    const Vec3 v = s.spin(t);
    if (std::hypot(v[0], v[1]) > tol || !(v[2] < 0)) return NoPumpVerdict::Unstable;
  }
  return NoPumpVerdict::Stable;
}

}  // namespace srcomb
