#include "srcomb/model.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace srcomb {

ModelParams::ModelParams(std::vector<double> omega_, double W_) : omega(std::move(omega_)), W(W_) {
  validate();
}

ModelParams ModelParams::two(double delta, double W, double omega_sum) {
  return ModelParams({0.5 * (omega_sum + delta), 0.5 * (omega_sum - delta)}, W);
}

double ModelParams::delta() const {
  if (n() != 2) throw std::invalid_argument("delta is defined for two ensembles");
  return omega[0] - omega[1];
}

double ModelParams::omega_sum() const {
  if (n() != 2) throw std::invalid_argument("omega_sum is defined for two ensembles");
  return omega[0] + omega[1];
}

void ModelParams::validate() const {
  if (omega.empty()) throw std::invalid_argument("need at least one ensemble");
  if (!(W >= 0.0)) throw std::invalid_argument("repump rate W must be >= 0");
}

SpinState::SpinState(Eigen::VectorXd flat) : x_(std::move(flat)) {
  if (x_.size() % 3 != 0) throw std::invalid_argument("flat state length must be a multiple of 3");
}

SpinState::SpinState(const Vec3& a, const Vec3& b) : x_(6) {
  x_.head<3>() = a;
  x_.tail<3>() = b;
}

SpinState SpinState::from_vec6(const Vec6& v) { return SpinState(Eigen::VectorXd(v)); }

Vec6 SpinState::vec6() const {
  if (n() != 2) throw std::invalid_argument("vec6 view requires two ensembles");
  return x_.head<6>();
}

Vec3 SpinState::l() const {
  Vec3 acc = Vec3::Zero();
  for (std::size_t t = 0; t < n(); ++t) acc += spin(t);
  return acc;
}

cplx SpinState::l_minus() const {
  const Vec3 L = l();
  return {L[0], -L[1]};
}

SpinState eom_full(const SpinState& s, const ModelParams& p) {
  if (s.n() != p.n()) throw std::invalid_argument("state dimension does not match ensemble count");
  SpinState d(s.n());
  kernel::full_rhs(s.flat().data(), d.flat().data(), p.omega.data(), p.n(), p.W);
  return d;
}

GroupRate eom_group(const GroupState& g, const ModelParams& p) {
  if (p.n() != 2) throw std::invalid_argument("group variables need two ensembles");
  if (g.s_perp_A < kDegenerate || g.s_perp_B < kDegenerate)
    throw DegenerateState("s_perp below degeneracy threshold");
  const double W = p.W;
  const double c2 = std::cos(2 * g.varphi), s2 = std::sin(2 * g.varphi);
  const double rA = g.s_perp_B / g.s_perp_A, rB = g.s_perp_A / g.s_perp_B;
  GroupRate r;
  r.s_perp_A = -0.5 * W * g.s_perp_A + 0.5 * g.s_z_A * (g.s_perp_A + g.s_perp_B * c2);
  r.s_perp_B = -0.5 * W * g.s_perp_B + 0.5 * g.s_z_B * (g.s_perp_A * c2 + g.s_perp_B);
  r.s_z_A = W * (1 - g.s_z_A) - 0.5 * g.s_perp_A * (g.s_perp_A + g.s_perp_B * c2);
  r.s_z_B = W * (1 - g.s_z_B) - 0.5 * g.s_perp_B * (g.s_perp_A * c2 + g.s_perp_B);
  r.varphi = 0.5 * (p.omega[0] - p.omega[1]) - 0.25 * s2 * (g.s_z_A * rA + g.s_z_B * rB);
  r.Phi = 0.5 * (p.omega[0] + p.omega[1]) - 0.25 * s2 * (g.s_z_A * rA - g.s_z_B * rB);
  return r;
}

ReducedState eom_reduced(const ReducedState& s, const ModelParams& p) {
  Vec3 d;
  kernel::reduced_rhs(s.vec(), d, p.delta(), p.W);
  return ReducedState::from(d);
}

SpinState rotate_z(const SpinState& s, double phi) {
  const double c = std::cos(phi), sn = std::sin(phi);
  SpinState r = s;
  for (std::size_t t = 0; t < s.n(); ++t) {
    const double x = s[3 * t], y = s[3 * t + 1];
    r[3 * t] = c * x - sn * y;
    r[3 * t + 1] = sn * x + c * y;
  }
  return r;
}

SpinState z2_transform(const SpinState& s, double phi0) {
  if (s.n() != 2) throw std::invalid_argument("Z2 map is defined for two ensembles");
  const SpinState q = rotate_z(s, phi0);
  return SpinState(Vec3(q[3], -q[4], q[5]), Vec3(q[0], -q[1], q[2]));
}

GroupState to_group(const SpinState& s) {
  if (s.n() != 2) throw std::invalid_argument("group variables need two ensembles");
  GroupState g;
  g.s_perp_A = std::hypot(s[0], s[1]);
  g.s_perp_B = std::hypot(s[3], s[4]);
  if (g.s_perp_A < kDegenerate || g.s_perp_B < kDegenerate)
    throw DegenerateState("s_perp below degeneracy threshold");
  g.s_z_A = s[2];
  g.s_z_B = s[5];
  const double pA = std::atan2(s[1], s[0]);
  const double pB = std::atan2(s[4], s[3]);
  g.Phi = 0.5 * (pA + pB);
  g.varphi = 0.5 * (pA - pB);
  return g;
}

SpinState from_group(const GroupState& g) {
  const double pA = g.Phi + g.varphi, pB = g.Phi - g.varphi;
  return SpinState(Vec3(g.s_perp_A * std::cos(pA), g.s_perp_A * std::sin(pA), g.s_z_A),
                   Vec3(g.s_perp_B * std::cos(pB), g.s_perp_B * std::sin(pB), g.s_z_B));
}

SpinState embed(const ReducedState& r) {
  return SpinState(Vec3(r.sx, r.sy, r.sz), Vec3(r.sx, -r.sy, r.sz));
}

ReducedState reduce(const SpinState& s) {
  if (s.n() != 2) throw std::invalid_argument("reduction needs two ensembles");
  // Global phase of the pair: half the argument of s+^A s+^B.
  const cplx pa(s[0], s[1]), pb(s[3], s[4]);
  const double Phi = 0.5 * std::arg(pa * pb);
  const SpinState q = rotate_z(s, -Phi);
  return {q[0], q[1], q[2]};
}

Eigen::Matrix<double, 6, 1> invariants(const Vec6& x) {
  Eigen::Matrix<double, 6, 1> c;
  c[0] = std::hypot(x[0], x[1]);
  c[1] = std::hypot(x[3], x[4]);
  c[2] = x[2];
  c[3] = x[5];
  // s+^A s-^B = (xA + i yA)(xB - i yB)
  c[4] = x[0] * x[3] + x[1] * x[4];
  c[5] = x[1] * x[3] - x[0] * x[4];
  return c;
}

SpinState random_unit_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, 2 * std::numbers::pi);
  SpinState s(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double z = u(rng), a = ang(rng);
    const double r = std::sqrt(1 - z * z);
    s.set_spin(t, Vec3(r * std::cos(a), r * std::sin(a), z));
  }
  return s;
}

}  // namespace srcomb
