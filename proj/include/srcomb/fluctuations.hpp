#pragma once

// Linear Fokker-Planck coefficients for fluctuations about a mean-field state.
// Complex basis per ensemble: (nu, nu*, mu), the fluctuations of s_-/2, s_+/2, s_z/2.
// Real basis per ensemble: (a, b, mu) with nu = a - i b, i.e. the fluctuations of s_x/2, s_y/2, s_z/2.

#include "srcomb/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace srcomb {

struct FluctuationCoefficients {
  Eigen::MatrixXcd drift_complex;
  Eigen::MatrixXd drift;
  Eigen::MatrixXcd diffusion_complex;  // coefficient of d_i d_j in the generator
  Eigen::MatrixXd diffusion;           // same operator in the real basis, symmetric
  Eigen::VectorXd diffusion_eigenvalues;
  bool positive_semidefinite = false;
};

Eigen::MatrixXcd fp_drift_complex(const SpinState& s, const ModelParams& p);
Eigen::MatrixXd fp_drift(const SpinState& s, const ModelParams& p);
Eigen::MatrixXcd fp_diffusion_complex(const SpinState& s, const ModelParams& p);
Eigen::MatrixXd fp_diffusion(const SpinState& s, const ModelParams& p);
FluctuationCoefficients fluctuation_coefficients(const SpinState& s, const ModelParams& p);

struct SamplingOptions {
  double dt = 1e-2;
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  bool experimental = false;  // must be set explicitly
};

// Euler-Maruyama paths of the linear fluctuation equation at a fixed state (real basis).
// Refuses to run unless enabled, and when the diffusion matrix is not positive semidefinite.
std::vector<Eigen::VectorXd> sample_fluctuations(const SpinState& s, const ModelParams& p,
                                                 const SamplingOptions& opt);

}  // namespace srcomb
