#include "srcomb/fluctuations.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <stdexcept>

namespace srcomb {

namespace {

using Eigen::Index;

// (nu, nu*, mu) = C (a, b, mu) per ensemble.
Eigen::MatrixXcd to_complex_basis(std::size_t n) {
  const cplx I(0, 1);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(3 * Index(n), 3 * Index(n));
  for (Index t = 0; t < Index(n); ++t) {
    const Index i = 3 * t;
    C(i, i) = 1.0;
    C(i, i + 1) = -I;
    C(i + 1, i) = 1.0;
    C(i + 1, i + 1) = I;
    C(i + 2, i + 2) = 1.0;
  }
  return C;
}

// Derivatives transform as d_complex = U d_real.
Eigen::MatrixXcd derivative_map(std::size_t n) {
  const cplx I(0, 1);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(3 * Index(n), 3 * Index(n));
  for (Index t = 0; t < Index(n); ++t) {
    const Index i = 3 * t;
    U(i, i) = 0.5;
    U(i, i + 1) = 0.5 * I;
    U(i + 1, i) = 0.5;
    U(i + 1, i + 1) = -0.5 * I;
    U(i + 2, i + 2) = 1.0;
  }
  return U;
}

void check(const SpinState& s, const ModelParams& p) {
  if (s.n() != p.n()) throw std::invalid_argument("state dimension does not match ensemble count");
}

}  // namespace

Eigen::MatrixXcd fp_drift_complex(const SpinState& s, const ModelParams& p) {
  check(s, p);
  const std::size_t n = p.n();
  const cplx I(0, 1);
  const cplx lm = s.l_minus(), lp = std::conj(lm);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3 * Index(n), 3 * Index(n));
  for (std::size_t t = 0; t < n; ++t) {
    const Index i = 3 * Index(t);
    const cplx sm = s.s_minus(t), sp = std::conj(sm);
    const double sz = s[3 * t + 2];
    A(i, i) += -I * p.omega[t] - 0.5 * p.W;
    A(i + 1, i + 1) += I * p.omega[t] - 0.5 * p.W;
    A(i, i + 2) = 0.5 * lm;
    A(i + 1, i + 2) = 0.5 * lp;
    A(i + 2, i + 2) = -p.W;
    A(i + 2, i) += -0.25 * lp;
    A(i + 2, i + 1) += -0.25 * lm;
    for (std::size_t u = 0; u < n; ++u) {
      const Index j = 3 * Index(u);
      A(i, j) += 0.5 * sz;
      A(i + 1, j + 1) += 0.5 * sz;
      A(i + 2, j) += -0.25 * sp;
      A(i + 2, j + 1) += -0.25 * sm;
    }
  }
  return A;
}

Eigen::MatrixXd fp_drift(const SpinState& s, const ModelParams& p) {
  const Eigen::MatrixXcd C = to_complex_basis(p.n());
  const Eigen::MatrixXcd R = C.inverse() * fp_drift_complex(s, p) * C;
  return R.real();
}

Eigen::MatrixXcd fp_diffusion_complex(const SpinState& s, const ModelParams& p) {
  check(s, p);
  const std::size_t n = p.n();
  const double W = p.W;
  const cplx lm = s.l_minus(), lp = std::conj(lm);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(3 * Index(n), 3 * Index(n));
  for (std::size_t t = 0; t < n; ++t) {
    const Index i = 3 * Index(t);
    const cplx sm = s.s_minus(t), sp = std::conj(sm);
    const double sz = s[3 * t + 2];
    K(i, i) = 0.25 * sm * lm;
    K(i + 1, i + 1) = 0.25 * sp * lp;
    K(i + 2, i + 2) = (4 * W * (1 - 2 * sz) + 2 * (sm * lp).real()) / 64.0;
    K(i, i + 1) = K(i + 1, i) = 0.5 * W;
    K(i, i + 2) = K(i + 2, i) = W * sm / 8.0;
    K(i + 1, i + 2) = K(i + 2, i + 1) = W * sp / 8.0;
  }
  return K;
}

Eigen::MatrixXd fp_diffusion(const SpinState& s, const ModelParams& p) {
  const Eigen::MatrixXcd U = derivative_map(p.n());
  const Eigen::MatrixXcd R = U.transpose() * fp_diffusion_complex(s, p) * U;
  Eigen::MatrixXd D = R.real();
  return 0.5 * (D + D.transpose());
}

FluctuationCoefficients fluctuation_coefficients(const SpinState& s, const ModelParams& p) {
  FluctuationCoefficients c;
  c.drift_complex = fp_drift_complex(s, p);
  c.drift = fp_drift(s, p);
  c.diffusion_complex = fp_diffusion_complex(s, p);
  c.diffusion = fp_diffusion(s, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.diffusion, Eigen::EigenvaluesOnly);
  c.diffusion_eigenvalues = es.eigenvalues();
  const double scale = std::max(1.0, c.diffusion.cwiseAbs().maxCoeff());
  c.positive_semidefinite = c.diffusion_eigenvalues.minCoeff() >= -1e-12 * scale;
  return c;
}

std::vector<Eigen::VectorXd> sample_fluctuations(const SpinState& s, const ModelParams& p,
                                                 const SamplingOptions& opt) {
  if (!opt.experimental) throw std::logic_error("fluctuation sampling is experimental and must be enabled");
  const FluctuationCoefficients c = fluctuation_coefficients(s, p);
  if (!c.positive_semidefinite)
    throw std::domain_error("diffusion matrix is not positive semidefinite; refusing to sample");
  // Generator (1/2) D d_i d_j with D = 2K; noise amplitude B B^T = D.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(2 * c.diffusion);
  const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd B = es.eigenvectors() * ev.asDiagonal();
  const Index m = c.drift.rows();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  std::vector<Eigen::VectorXd> out;
  out.reserve(opt.steps + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  out.push_back(x);
  const double sq = std::sqrt(opt.dt);
  for (std::size_t k = 0; k < opt.steps; ++k) {
    Eigen::VectorXd dw(m);
    for (Index i = 0; i < m; ++i) dw[i] = nd(rng) * sq;
    x += c.drift * x * opt.dt + B * dw;
    out.push_back(x);
  }
  return out;
}

}  // namespace srcomb
