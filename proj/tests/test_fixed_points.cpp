#include "doctest.h"
#include "helpers.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/trajectory.hpp"

#include <cmath>
#include <numbers>

using namespace srcomb;

TEST_CASE("TSS") {
  for (double d : {0.0, 0.4, 1.3}) {
    const ModelParams p = ModelParams::two(d, 0.7);
    const FixedPoint f = tss(p);
    CHECK(f.kind == FixedPointKind::TSS);
    const double ref[6] = {0, 0, 1, 0, 0, 1};
    for (std::size_t i = 0; i < 6; ++i) CHECK(f.state[i] == ref[i]);
    CHECK(eom_full(f.state, p).flat().norm() == 0.0);
  }
}

TEST_CASE("NTSS closed form") {
  const ModelParams p = ModelParams::two(0.5, 0.5);
  const auto v = ntss_values(p);
  REQUIRE(v);
  CHECK(v->s_z == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v->l_perp == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v->varphi == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK_FALSE(ntss(ModelParams::two(0.8, 1.9)));
  CHECK_THROWS(ntss(ModelParams::two(0.5, 0.0)));
}

TEST_CASE("NTSS residual and existence boundary") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ud(0.0, 1.0), uw(0.0, 2.0);
  int interior = 0;
  for (int k = 0; k < 1000; ++k) {
    const double d = ud(rng), W = uw(rng);
    if (W == 0.0) continue;
    const ModelParams p = ModelParams::two(d, W);
    const auto f = ntss(p, 0.3 * k);
    CHECK(bool(f) == (d * d + (W - 1) * (W - 1) < 1));
    if (f && interior < 50) {
      ++interior;
      CHECK(eom_full(f->state, p).flat().cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK(interior == 50);
}

TEST_CASE("reduced NTSS branches embed to the two NTSS phases") {
  const ModelParams p = ModelParams::two(0.3, 0.6);
  const auto br = ntss_reduced(p);
  REQUIRE(br);
  const auto f0 = ntss(p, 0.0), fpi = ntss(p, std::numbers::pi);
  REQUIRE(f0);
  REQUIRE(fpi);
  CHECK(testing::max_abs_diff(embed((*br)[0]), f0->state) < 1e-14);
  CHECK(testing::max_abs_diff(embed((*br)[1]), fpi->state) < 1e-14);
}

TEST_CASE("NTSS meets the TSS continuously on the semicircle") {
  const double W = 1.3;
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const double d = std::sqrt(1 - (W - 1) * (W - 1)) - eps;
    const auto v = ntss_values(ModelParams::two(d, W));
    REQUIRE(v);
    CHECK(v->l_perp < 3 * std::sqrt(eps));
  }
}

TEST_CASE("single clock attractor") {
  const FixedPoint a = single_clock_attractor(1.5);
  CHECK(a.state[2] == 1.0);
  CHECK(std::hypot(a.state[0], a.state[1]) == 0.0);
  const FixedPoint b = single_clock_attractor(0.5);
  CHECK(b.state[2] == doctest::Approx(0.5));
  CHECK(std::hypot(b.state[0], b.state[1]) == doctest::Approx(std::sqrt(0.5)));

  // At delta = 0 two identical ensembles reduce to one clock with pump W/2 on a doubled time scale.
  const double W = 0.6;
  const ModelParams p = ModelParams::two(0.0, W);
  const SpinState s = SpinState::from_vec6(advance(random_unit_state(2, 4).vec6(), p, 400.0));
  const FixedPoint c = single_clock_attractor(W / 2);
  for (std::size_t t = 0; t < 2; ++t) {
    const Vec3 v = s.spin(t);
    CHECK(v[2] == doctest::Approx(c.state[2]).epsilon(1e-6));
    CHECK(std::hypot(v[0], v[1]) == doctest::Approx(c.state[0]).epsilon(1e-6));
  }
}

TEST_CASE("Toda closed form") {
  CHECK(toda_lperp(1e4, 0.7, 0.2) == 0.0);
  CHECK(toda_lperp(-0.2 / 0.7, 0.7, 0.2) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("no-pump classification") {
  const ModelParams p = ModelParams::two(0.5, 0.0);
  CHECK(no_pump_classify(SpinState(Vec3(0, 0, -0.4), Vec3(0, 0, -0.9)), p) == NoPumpVerdict::Stable);
  CHECK(no_pump_classify(SpinState(Vec3(0, 0, 0.4), Vec3(0, 0, 0.9)), p) == NoPumpVerdict::Unstable);
  CHECK_THROWS(no_pump_classify(SpinState(Vec3(0, 0, -1), Vec3(0, 0, -1)), ModelParams::two(0.5, 0.1)));

  // delta = 0 family: the collective spin points down, individual spins need not.
  const ModelParams q = ModelParams::two(0.0, 0.0);
  const SpinState s(Vec3(0.3, 0.1, -0.5), Vec3(-0.3, -0.1, -0.2));
  CHECK(no_pump_classify(s, q) == NoPumpVerdict::Stable);
  const Eigen::MatrixXd J = jacobian_full(s, q);
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  CHECK(es.eigenvalues().real().maxCoeff() < 1e-12);
}
