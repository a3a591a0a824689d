#pragma once

#include "srcomb/model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace srcomb {

inline constexpr double kStabilityMargin = 1e-9;

struct NtssCoeffs {
  double c0, c1, c2;
};

struct StabilityReport {
  std::vector<cplx> eigenvalues;
  bool stable = false;
  bool marginal = false;
  int zero_modes = 0;  // rotational modes excluded from the verdict
  double max_real = 0; // over the non-excluded eigenvalues
  std::optional<NtssCoeffs> coeffs;
};

// 3n x 3n Jacobian of the full equations.
Eigen::MatrixXd jacobian_full(const SpinState& s, const ModelParams& p);
Eigen::Matrix3d jacobian_reduced(const ReducedState& s, const ModelParams& p);

std::array<cplx, 6> tss_char_values(const ModelParams& p);
bool tss_stable(double delta, double W);

std::optional<NtssCoeffs> ntss_poly_coeffs(const ModelParams& p);
bool ntss_stable(const ModelParams& p);
bool ntss_stable(double delta, double W);

double delta_minus(double W);
double delta_plus(double W);

StabilityReport classify_fixed_point(const SpinState& s, const ModelParams& p);

// Coefficients of the monic characteristic polynomial of a 3x3 matrix: l^3 + a2 l^2 + a1 l + a0.
std::array<double, 3> char_poly3(const Eigen::Matrix3d& A);

}  // namespace srcomb
