#include "srcomb/stability.hpp"

#include "srcomb/fixed_points.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srcomb {

Eigen::MatrixXd jacobian_full(const SpinState& s, const ModelParams& p) {
  const std::size_t n = p.n();
  if (s.n() != n) throw std::invalid_argument("state dimension does not match ensemble count");
  const Vec3 L = s.l();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  for (std::size_t a = 0; a < n; ++a) {
    const Vec3 sa = s.spin(a);
    const auto i = static_cast<Eigen::Index>(3 * a);
    for (std::size_t b = 0; b < n; ++b) {
      const auto j = static_cast<Eigen::Index>(3 * b);
      // Off-diagonal block X^a, the coupling through l.
      J(i, j) = 0.5 * sa[2];
      J(i + 1, j + 1) = 0.5 * sa[2];
      J(i + 2, j) = -0.5 * sa[0];
      J(i + 2, j + 1) = -0.5 * sa[1];
    }
    const double w = p.omega[a];
    J(i, i) += -0.5 * p.W;
    J(i, i + 1) = -w;
    J(i, i + 2) = 0.5 * L[0];
    J(i + 1, i) = w;
    J(i + 1, i + 1) += -0.5 * p.W;
    J(i + 1, i + 2) = 0.5 * L[1];
    J(i + 2, i) += -0.5 * L[0];
    J(i + 2, i + 1) += -0.5 * L[1];
    J(i + 2, i + 2) = -p.W;
  }
  return J;
}

Eigen::Matrix3d jacobian_reduced(const ReducedState& s, const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  Eigen::Matrix3d J;
  J << s.sz - 0.5 * W, -0.5 * d, s.sx,
       0.5 * d, -0.5 * W, 0.0,
       -2 * s.sx, 0.0, -W;
  return J;
}

std::array<cplx, 6> tss_char_values(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  const cplx root = std::sqrt(cplx(1 - d * d, 0.0));
  const cplx lp = 0.5 * ((1 - W) + root), lm = 0.5 * ((1 - W) - root);
  return {cplx(-W), cplx(-W), lp, lp, lm, lm};
}

bool tss_stable(double delta, double W) {
  if (!(W > 0)) return false;
  if (delta >= 1) return W > 1;
  return W > 1 && (W - 1) * (W - 1) + delta * delta > 1;
}

std::optional<NtssCoeffs> ntss_poly_coeffs(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  if (W <= 0 || !ntss_exists(d, W)) return std::nullopt;
  NtssCoeffs c;
  c.c0 = W * (W - 0.5 * (W * W + d * d));
  c.c1 = 2 * W - 0.5 * (W * W + 3 * d * d);
  c.c2 = (3 * W * W - d * d) / (2 * W);
  return c;
}

bool ntss_stable(double delta, double W) {
  if (W <= 0 || !ntss_exists(delta, W)) return false;
  const double d2 = delta * delta;
  const bool b = W > delta / std::sqrt(3.0);
  const bool c = 3 * d2 * d2 - (6 * W * W + 4 * W) * d2 + W * W * W * (8 - W) > 0;
  return b && c;
}

bool ntss_stable(const ModelParams& p) { return ntss_stable(p.delta(), p.W); }

namespace {
double delta_branch(double W, double sign) {
  if (W < 0) throw std::invalid_argument("W must be >= 0");
  const double v = (2 * W / 3) * (1.5 * W + 1 + sign * std::sqrt(3 * W * W - 3 * W + 1));
  return std::sqrt(std::max(0.0, v));
}
}  // namespace

double delta_minus(double W) { return delta_branch(W, -1.0); }
double delta_plus(double W) { return delta_branch(W, +1.0); }

StabilityReport classify_fixed_point(const SpinState& s, const ModelParams& p) {
  const SpinState f = eom_full(s, p);
  if (f.flat().norm() > 1e-8) throw std::invalid_argument("state is not a fixed point (residual > 1e-8)");
  const Eigen::MatrixXd J = jacobian_full(s, p);
  Eigen::EigenSolver<Eigen::MatrixXd> es(J, false);
  StabilityReport r;
  for (Eigen::Index i = 0; i < J.rows(); ++i) r.eigenvalues.push_back(es.eigenvalues()[i]);
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
            [](cplx a, cplx b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); });

  // A state off the z axis lies on a circle of equivalent fixed points.
  double gen = 0;
  for (std::size_t t = 0; t < s.n(); ++t) gen += std::hypot(s[3 * t], s[3 * t + 1]);
  std::size_t skip = r.eigenvalues.size();
  if (gen > 1e-9) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      if (std::abs(r.eigenvalues[i]) < best) {
        best = std::abs(r.eigenvalues[i]);
        skip = i;
      }
    }
    if (best < 1e-7) r.zero_modes = 1;
    else skip = r.eigenvalues.size();
  }
  r.max_real = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    if (i != skip) r.max_real = std::max(r.max_real, r.eigenvalues[i].real());
  r.marginal = std::abs(r.max_real) <= kStabilityMargin;
  r.stable = r.max_real < -kStabilityMargin;

  if (p.n() == 2 && p.W > 0 && gen > 1e-9) {
    const auto v = ntss_values(p);
    if (v && std::abs(s[2] - v->s_z) < 1e-8 && std::abs(std::hypot(s[0], s[1]) - v->s_perp) < 1e-8)
      r.coeffs = ntss_poly_coeffs(p);
  }
  return r;
}

std::array<double, 3> char_poly3(const Eigen::Matrix3d& A) {
  const double tr = A.trace();
  const double m2 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) + A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0) +
                    A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
  return {-tr, m2, -A.determinant()};
}

}  // namespace srcomb
