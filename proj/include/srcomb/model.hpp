#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srcomb {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using cplx = std::complex<double>;

// Threshold on s_perp below which the group representation is refused.
inline constexpr double kDegenerate = 1e-12;

struct ModelParams {
  std::vector<double> omega;  // per-ensemble level splitting
  double W = 0.0;             // repump rate

  ModelParams() = default;
  ModelParams(std::vector<double> omega_, double W_);

  // Two ensembles with omega_A - omega_B = delta, omega_A + omega_B = omega_sum.
  static ModelParams two(double delta, double W, double omega_sum = 0.0);

  std::size_t n() const { return omega.size(); }
  double delta() const;
  double omega_sum() const;
  void validate() const;
};

class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::size_t n) : x_(Eigen::VectorXd::Zero(3 * n)) {}
  explicit SpinState(Eigen::VectorXd flat);
  SpinState(const Vec3& a, const Vec3& b);

  static SpinState from_vec6(const Vec6& v);
  Vec6 vec6() const;

  std::size_t n() const { return static_cast<std::size_t>(x_.size()) / 3; }
  const Eigen::VectorXd& flat() const { return x_; }
  Eigen::VectorXd& flat() { return x_; }

  double& operator[](std::size_t i) { return x_[static_cast<Eigen::Index>(i)]; }
  double operator[](std::size_t i) const { return x_[static_cast<Eigen::Index>(i)]; }

  Vec3 spin(std::size_t tau) const { return x_.segment<3>(3 * static_cast<Eigen::Index>(tau)); }
  void set_spin(std::size_t tau, const Vec3& s) { x_.segment<3>(3 * static_cast<Eigen::Index>(tau)) = s; }
  Vec3 l() const;
  cplx s_minus(std::size_t tau) const { return {x_[3 * tau], -x_[3 * tau + 1]}; }
  cplx l_minus() const;

 private:
  Eigen::VectorXd x_;
};

// s_perp, s_z per ensemble, relative phase varphi (mod pi) and global phase Phi.
struct GroupState {
  double s_perp_A = 0, s_perp_B = 0;
  double s_z_A = 0, s_z_B = 0;
  double varphi = 0;
  double Phi = 0;
};

struct GroupRate {
  double s_perp_A = 0, s_perp_B = 0;
  double s_z_A = 0, s_z_B = 0;
  double varphi = 0;
  double Phi = 0;
};

struct ReducedState {
  double sx = 0, sy = 0, sz = 0;
  Vec3 vec() const { return {sx, sy, sz}; }
  static ReducedState from(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

class DegenerateState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Right-hand sides.
SpinState eom_full(const SpinState& s, const ModelParams& p);
GroupRate eom_group(const GroupState& g, const ModelParams& p);
ReducedState eom_reduced(const ReducedState& s, const ModelParams& p);

// Symmetry maps.
SpinState rotate_z(const SpinState& s, double phi);
SpinState z2_transform(const SpinState& s, double phi0);

// Representation changes.
GroupState to_group(const SpinState& s);
SpinState from_group(const GroupState& g);
SpinState embed(const ReducedState& r);
// Representative spin of a Z2-symmetric state after rotating its global phase away.
ReducedState reduce(const SpinState& s);

// Rotation-invariant coordinates (s_perp_A, s_perp_B, s_z_A, s_z_B, Re, Im of s+^A s-^B).
Eigen::Matrix<double, 6, 1> invariants(const Vec6& x);

// Uniformly random unit spins, one per ensemble.
SpinState random_unit_state(std::size_t n, std::uint64_t seed);

// Inline kernels used by the integrators.
namespace kernel {

inline void full_rhs(const double* x, double* dx, const double* omega, std::size_t n, double W) {
  double lx = 0, ly = 0;
  for (std::size_t t = 0; t < n; ++t) {
    lx += x[3 * t];
    ly += x[3 * t + 1];
  }
  for (std::size_t t = 0; t < n; ++t) {
    const double sx = x[3 * t], sy = x[3 * t + 1], sz = x[3 * t + 2];
    dx[3 * t] = -omega[t] * sy - 0.5 * W * sx + 0.5 * sz * lx;
    dx[3 * t + 1] = omega[t] * sx - 0.5 * W * sy + 0.5 * sz * ly;
    dx[3 * t + 2] = W * (1.0 - sz) - 0.5 * (sx * lx + sy * ly);
  }
}

inline void two_rhs(const Vec6& x, Vec6& dx, double wA, double wB, double W) {
  const double lx = x[0] + x[3], ly = x[1] + x[4];
  dx[0] = -wA * x[1] - 0.5 * W * x[0] + 0.5 * x[2] * lx;
  dx[1] = wA * x[0] - 0.5 * W * x[1] + 0.5 * x[2] * ly;
  dx[2] = W * (1.0 - x[2]) - 0.5 * (x[0] * lx + x[1] * ly);
  dx[3] = -wB * x[4] - 0.5 * W * x[3] + 0.5 * x[5] * lx;
  dx[4] = wB * x[3] - 0.5 * W * x[4] + 0.5 * x[5] * ly;
  dx[5] = W * (1.0 - x[5]) - 0.5 * (x[3] * lx + x[4] * ly);
}

inline void reduced_rhs(const Vec3& s, Vec3& ds, double delta, double W) {
  ds[0] = -0.5 * delta * s[1] - 0.5 * W * s[0] + s[2] * s[0];
  ds[1] = 0.5 * delta * s[0] - 0.5 * W * s[1];
  ds[2] = W * (1.0 - s[2]) - s[0] * s[0];
}

// 6x6 Jacobian of two_rhs.
inline Eigen::Matrix<double, 6, 6> two_jacobian(const Vec6& x, double wA, double wB, double W) {
  Eigen::Matrix<double, 6, 6> J;
  const double lx = x[0] + x[3], ly = x[1] + x[4];
  const double w[2] = {wA, wB};
  for (int a = 0; a < 2; ++a) {
    const int i = 3 * a;
    const double sx = x[i], sy = x[i + 1], sz = x[i + 2];
    for (int b = 0; b < 2; ++b) {
      const int j = 3 * b;
      const bool self = a == b;
      J(i, j) = 0.5 * sz + (self ? -0.5 * W : 0.0);
      J(i, j + 1) = self ? -w[a] : 0.0;
      J(i, j + 2) = self ? 0.5 * lx : 0.0;
      J(i + 1, j) = self ? w[a] : 0.0;
      J(i + 1, j + 1) = 0.5 * sz + (self ? -0.5 * W : 0.0);
      J(i + 1, j + 2) = self ? 0.5 * ly : 0.0;
      J(i + 2, j) = -0.5 * sx - (self ? 0.5 * lx : 0.0);
      J(i + 2, j + 1) = -0.5 * sy - (self ? 0.5 * ly : 0.0);
      J(i + 2, j + 2) = self ? -W : 0.0;
    }
  }
  return J;
}

}  // namespace kernel

}  // namespace srcomb
