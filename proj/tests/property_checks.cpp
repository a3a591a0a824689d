#include "property_checks.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/fluctuations.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace srcomb;

namespace checks {

namespace {

SpinState random_box(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpinState s(n);
  for (std::size_t i = 0; i < 3 * n; ++i) s[i] = u(rng);
  return s;
}

double max_diff(const SpinState& a, const SpinState& b) { return (a.flat() - b.flat()).cwiseAbs().maxCoeff(); }

IntegrateOptions tight(double dt_out) {
  IntegrateOptions io;
  io.ode = {1e-12, 1e-14};
  io.dt_out = dt_out;
  return io;
}

}  // namespace

double axial_equivariance(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, 2 * std::numbers::pi);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 4);
    std::vector<double> omega(n);
    for (auto& w : omega) w = u(rng);
    const ModelParams p(omega, 1 + u(rng));
    const SpinState s = random_box(n, rng);
    const double phi = ang(rng);
    worst = std::max(worst, max_diff(eom_full(rotate_z(s, phi), p), rotate_z(eom_full(s, p), phi)));
  }
  return worst;
}

double z2_equivariance(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0), ang(0.0, 2 * std::numbers::pi);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const ModelParams p = ModelParams::two(u(rng), u(rng));
    const SpinState s = random_box(2, rng);
    const double phi = ang(rng);
    worst = std::max(worst, max_diff(eom_full(z2_transform(s, phi), p), z2_transform(eom_full(s, p), phi)));
  }
  return worst;
}

double length_drift(int samples, double t_end, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
    std::vector<double> omega(n);
    for (auto& w : omega) w = u(rng);
    const ModelParams p(omega, 0.0);
    const SpinState s0 = random_box(n, rng);
    const Trajectory tr = integrate(s0, p, t_end, tight(1.0));
    for (const auto& s : tr.states)
      for (std::size_t t = 0; t < n; ++t) worst = std::max(worst, std::abs(s.spin(t).norm() - s0.spin(t).norm()));
  }
  return worst;
}

double group_vs_full(double delta, double W, double t_end, std::uint64_t seed) {
  const ModelParams p = ModelParams::two(delta, W);
  const SpinState s0 = random_unit_state(2, seed);
  const Trajectory full = integrate(s0, p, t_end, tight(1.0));
  const GroupTrajectory grp = integrate(to_group(s0), p, t_end, tight(1.0));
  const std::size_t m = std::min(full.size(), grp.size());
  double worst = 0;
  for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, max_diff(from_group(grp.states[i]), full.states[i]));
  return worst;
}

double reduced_vs_full(double delta, double W, double t_end, std::uint64_t seed) {
  const ModelParams p = ModelParams::two(delta, W);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  const ReducedState r0{u(rng), u(rng), u(rng)};
  const Trajectory full = integrate(embed(r0), p, t_end, tight(1.0));
  const ReducedTrajectory red = integrate(r0, p, t_end, tight(1.0));
  const std::size_t m = std::min(full.size(), red.size());
  double worst = 0;
  for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, max_diff(embed(red.states[i]), full.states[i]));
  return worst;
}

double drift_vs_jacobian(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
    std::vector<double> omega(n);
    for (auto& w : omega) w = u(rng);
    const ModelParams p(omega, 1 + u(rng));
    const SpinState s = random_box(n, rng);
    worst = std::max(worst, (fp_drift(s, p) - jacobian_full(s, p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double toda_deviation(double t_end) {
  const ModelParams p = ModelParams::two(0.0, 0.0);
  const SpinState s0(Vec3(0.3, 0.1, 0.2), Vec3(0.25, -0.05, 0.1));
  const Trajectory tr = integrate(s0, p, t_end, tight(0.5));
  const Vec3 L0 = s0.l();
  const TodaConstants c = toda_fit(std::hypot(L0[0], L0[1]), L0[2]);
  double worst = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const Vec3 L = tr.states[i].l();
    const double ref = toda_lperp(tr.t[i], c.C1, c.C2);
    worst = std::max(worst, std::abs(std::hypot(L[0], L[1]) - ref) / std::max(ref, 1e-3));
  }
  return worst;
}

double half_period_defect(const LimitCycle& c) {
  const auto& S = c.orbit.states;
  const std::size_t n = S.size() - 1, h = n / 2;
  double m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = S[i];
    const auto& b = S[(i + h) % n];
    m = std::max({m, std::abs(a[0] + b[0]), std::abs(a[1] + b[1]), std::abs(a[2] - b[2])});
  }
  return m;
}

}  // namespace checks
