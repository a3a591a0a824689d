#include "doctest.h"
#include "helpers.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace srcomb;

namespace {

Eigen::MatrixXd fd_jacobian(const SpinState& s, const ModelParams& p, double h = 1e-6) {
  const Eigen::Index n = s.flat().size();
  Eigen::MatrixXd J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    SpinState a = s, b = s;
    a.flat()[j] += h;
    b.flat()[j] -= h;
    J.col(j) = (eom_full(a, p).flat() - eom_full(b, p).flat()) / (2 * h);
  }
  return J;
}

std::vector<cplx> sorted(std::vector<cplx> v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return v;
}

std::vector<cplx> eig(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<cplx> v;
  for (Eigen::Index i = 0; i < A.rows(); ++i) v.push_back(es.eigenvalues()[i]);
  return v;
}

Eigen::Matrix<double, 6, 6> sigma6() {
  Eigen::Matrix<double, 6, 6> S = Eigen::Matrix<double, 6, 6>::Zero();
  const double d[3] = {1, -1, 1};
  for (int i = 0; i < 3; ++i) {
    S(i, i + 3) = d[i];
    S(i + 3, i) = d[i];
  }
  return S;
}

}  // namespace

TEST_CASE("full Jacobian against finite differences") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const ModelParams p = ModelParams::two(0.9 * (k % 5), 0.1 * k, 0.2);
    const SpinState s = testing::random_box_state(2, rng);
    CHECK((jacobian_full(s, p) - fd_jacobian(s, p)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("TSS Jacobian commutes with the ensemble swap") {
  const ModelParams p = ModelParams::two(0.8, 0.6);
  const Eigen::MatrixXd J = jacobian_full(tss(p).state, p);
  const Eigen::MatrixXd S = sigma6();
  CHECK((J * S - S * J).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("NTSS has one zero characteristic value") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int count = 0;
  while (count < 100) {
    const double d = u(rng), W = 2 * u(rng);
    if (!(W > 0.01) || !ntss_exists(d, W)) continue;
    ++count;
    const ModelParams p = ModelParams::two(d, W);
    const auto v = eig(jacobian_full(ntss(p)->state, p));
    double m = 1e300;
    for (auto e : v) m = std::min(m, std::abs(e));
    CHECK(m < 1e-9);
  }
}

TEST_CASE("reduced Jacobian") {
  const ModelParams p = ModelParams::two(0.3, 0.6);
  const ReducedState r{0.2, -0.1, 0.4};
  Eigen::Matrix3d F;
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    Vec3 a = r.vec(), b = r.vec();
    a[j] += h;
    b[j] -= h;
    F.col(j) = (eom_reduced(ReducedState::from(a), p).vec() - eom_reduced(ReducedState::from(b), p).vec()) / (2 * h);
  }
  CHECK((jacobian_reduced(r, p) - F).cwiseAbs().maxCoeff() < 1e-6);

  SUBCASE("TSS polynomial") {
    // (l + W)(l^2 - (1 - W) l + (1 - W)^2/4 + (delta^2 - 1)/4)
    const double d = 0.7, W = 0.4;
    const auto c = char_poly3(jacobian_reduced({0, 0, 1}, ModelParams::two(d, W)));
    const double b1 = -(1 - W), b0 = 0.25 * ((1 - W) * (1 - W) + d * d - 1);
    CHECK(c[0] == doctest::Approx(W + b1).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(W * b1 + b0).epsilon(1e-14));
    CHECK(c[2] == doctest::Approx(W * b0).epsilon(1e-14));
  }
  SUBCASE("NTSS polynomial from the closed-form coefficients") {
    const auto br = ntss_reduced(p);
    const auto c = char_poly3(jacobian_reduced((*br)[0], p));
    const auto k = ntss_poly_coeffs(p);
    REQUIRE(k);
    CHECK(c[0] == doctest::Approx(k->c2).epsilon(1e-13));
    CHECK(c[1] == doctest::Approx(k->c1).epsilon(1e-13));
    CHECK(c[2] == doctest::Approx(k->c0).epsilon(1e-13));
    // independent eigenvalues of the reduced NTSS Jacobian
    const auto ev = sorted(eig(jacobian_reduced((*br)[0], p)));
    CHECK(ev[0].real() == doctest::Approx(-0.31021380355163336).epsilon(1e-12));
    CHECK(ev[1].real() == doctest::Approx(-0.2573930982241833).epsilon(1e-12));
    CHECK(std::abs(ev[1].imag()) == doctest::Approx(0.8118220303554405).epsilon(1e-12));
  }
}

TEST_CASE("TSS characteristic values") {
  const auto v = tss_char_values(ModelParams::two(1.5, 1.0));
  int imag = 0;
  for (auto e : v) {
    if (std::abs(e.imag()) > 0) {
      ++imag;
      CHECK(std::abs(e.real()) < 1e-15);
      CHECK(std::abs(e.imag()) == doctest::Approx(std::sqrt(1.25) / 2).epsilon(1e-15));
    } else {
      CHECK(e.real() == -1.0);
    }
  }
  CHECK(imag == 4);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const ModelParams p = ModelParams::two(u(rng), u(rng));
    const auto ref = tss_char_values(p);
    const auto num = sorted(eig(jacobian_full(tss(p).state, p)));
    const auto cf = sorted(std::vector<cplx>(ref.begin(), ref.end()));
    for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(num[i] - cf[i]) < 1e-7);
    if (p.delta() < 1 && p.W > 1 && (p.W - 1) * (p.W - 1) + p.delta() * p.delta() > 1) {
      for (auto e : ref) CHECK(e.real() < 0);
    }
  }
}

TEST_CASE("NTSS polynomial coefficients") {
  const auto c = ntss_poly_coeffs(ModelParams::two(0.3, 0.6));
  REQUIRE(c);
  CHECK(c->c0 == doctest::Approx(0.225).epsilon(1e-14));
  // c0 vanishes on the semicircle
  const double W = 0.5, d = std::sqrt(1 - 0.25) * (1 - 1e-12);
  const auto e = ntss_poly_coeffs(ModelParams::two(d, W));
  REQUIRE(e);
  CHECK(std::abs(e->c0) < 1e-11);
  CHECK_FALSE(ntss_poly_coeffs(ModelParams::two(0.9, 1.9)));

  // lambda P2 P3 roots reproduce the numeric 6x6 spectrum
  const ModelParams p = ModelParams::two(0.3, 0.6);
  const auto num = sorted(eig(jacobian_full(ntss(p)->state, p)));
  const auto r3 = eig(jacobian_reduced((*ntss_reduced(p))[0], p));
  for (auto z : r3) {
    double best = 1e300;
    for (auto n : num) best = std::min(best, std::abs(n - z));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("Routh-Hurwitz region") {
  CHECK(ntss_stable(0.2, 0.5));
  CHECK_FALSE(ntss_stable(0.7, 0.5));
  CHECK(delta_minus(0.5) == doctest::Approx(0.6455).epsilon(1e-4));
  CHECK(std::abs(delta_minus(0.30) - 0.410) <= 0.001);
  CHECK(std::abs(delta_minus(0.95) - 0.974) <= 0.001);
  CHECK(delta_minus(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double W : {0.1, 0.5, 0.9, 1.4}) CHECK(delta_plus(W) >= delta_minus(W));

  // Routh-Hurwitz verdict against the sign of the largest P3 root on a 50 x 50 grid
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double d = 0.01 + 0.02 * i, W = 0.02 + 0.04 * j;
      if (!ntss_exists(d, W)) continue;
      const ModelParams p = ModelParams::two(d, W);
      double m = -1e300;
      for (auto z : eig(jacobian_reduced((*ntss_reduced(p))[0], p))) m = std::max(m, z.real());
      if (std::abs(m) < 1e-9) continue;
      ++checked;
      CHECK(ntss_stable(p) == (m < 0));
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("fixed-point classification") {
  const ModelParams a = ModelParams::two(0.5, 2.2);
  CHECK(classify_fixed_point(tss(a).state, a).stable);
  const ModelParams b = ModelParams::two(1.5, 0.9);
  CHECK_FALSE(classify_fixed_point(tss(b).state, b).stable);
  const ModelParams c = ModelParams::two(0.3, 0.6);
  const StabilityReport r = classify_fixed_point(ntss(c)->state, c);
  CHECK(r.zero_modes == 1);
  CHECK(r.stable);
  CHECK(r.coeffs);
  CHECK_THROWS(classify_fixed_point(random_unit_state(2, 1), c));
}

TEST_CASE("Phase I/II boundary follows the quarter circle") {
  for (double W = 1.05; W < 1.99; W += 0.05) {
    const double db = std::sqrt(1 - (W - 1) * (W - 1));
    CHECK(tss_stable(db + 1e-3, W));
    CHECK_FALSE(tss_stable(db - 1e-3, W));
    CHECK(ntss_stable(db - 1e-3, W));
  }
}
