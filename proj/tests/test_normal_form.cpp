#include "doctest.h"

#include "srcomb/limit_cycles.hpp"
#include "srcomb/normal_form.hpp"
#include "srcomb/stability.hpp"

#include <cmath>

using namespace srcomb;

// Re c1 for a unit-norm critical eigenvector, from an independent multilinear-form evaluation.
// Rescaling the eigenvector q scales c1 by |q|^2; our chain uses q = (v_r + i v_i) / 2.
TEST_CASE("a1 agrees with the first Lyapunov coefficient at criticality") {
  SUBCASE("NTSS branch") {
    const double W = 0.95, dH = delta_minus(W);
    CHECK(dH == doctest::Approx(0.974350275507059).epsilon(1e-12));
    const HopfData h = hopf_a1(ModelParams::two(dH, W), HopfBranch::NTSS);
    CHECK(std::abs(h.gamma) < 1e-8);
    CHECK(h.omega == doctest::Approx(0.15720149785856374).epsilon(1e-9));
    const double q2 = (h.vr.squaredNorm() + h.vi.squaredNorm()) / 4;
    CHECK(h.a1 == doctest::Approx(0.971322546198237 * q2).epsilon(1e-8));
  }
  SUBCASE("TSS branch") {
    const HopfData h = hopf_a1(ModelParams::two(1.5, 1.0), HopfBranch::TSS);
    CHECK(std::abs(h.gamma) < 1e-15);
    const double q2 = (h.vr.squaredNorm() + h.vi.squaredNorm()) / 4;
    CHECK(h.a1 == doctest::Approx(-0.5 * q2).epsilon(1e-10));
    CHECK(h.a1 == doctest::Approx(-0.5625).epsilon(1e-12));
  }
}

TEST_CASE("closed-form alpha1 matches the coefficient chain") {
  for (auto [d, W] : {std::pair{0.97, 0.95}, {0.6, 0.45}, {0.4, 0.3}}) {
    const HopfData h = hopf_a1(ModelParams::two(d, W), HopfBranch::NTSS);
    const cplx a = nf::alpha1_closed_form(h);
    CHECK(std::abs(a - h.alpha1) < 1e-10);
  }
}

TEST_CASE("Hopf types") {
  CHECK(classify_hopf(ModelParams::two(1.5, 1.0), HopfBranch::TSS) == HopfType::Supercritical);
  for (double W : {0.3, 0.45, 0.65, 0.95}) {
    CHECK(classify_hopf(ModelParams::two(delta_minus(W), W), HopfBranch::NTSS) == HopfType::Subcritical);
  }
  CHECK_THROWS(hopf_a1(ModelParams::two(0.9, 1.0), HopfBranch::TSS));
}

TEST_CASE("a1 sign change below the Hopf line") {
  const double ref[4][2] = {{0.30, 0.358}, {0.45, 0.520}, {0.65, 0.687}, {0.95, 0.820}};
  for (const auto& r : ref) {
    const double d0 = delta_a1_zero(r[0]);
    CHECK(std::abs(d0 - r[1]) < 0.005);
    const HopfData h = hopf_a1(ModelParams::two(d0, r[0]), HopfBranch::NTSS);
    CHECK(std::abs(h.a1) < 1e-8);
  }
}

TEST_CASE("a1 is continuous along a transect") {
  const double W = 0.65;
  const double step = 2e-3;
  double prev = hopf_a1(ModelParams::two(0.70, W), HopfBranch::NTSS).a1;
  double prev_slope = 0;
  for (double d = 0.70 + step; d < 0.78; d += step) {
    const double a = hopf_a1(ModelParams::two(d, W), HopfBranch::NTSS).a1;
    const double slope = (a - prev) / step;
    if (prev_slope != 0) CHECK(std::abs(a - prev) < 10 * std::abs(prev_slope) * step + 1e-6);
    prev_slope = slope;
    prev = a;
  }
}

TEST_CASE("pitchfork coefficient") {
  CHECK(pitchfork_coeff(0.6) == doctest::Approx(-5.625).epsilon(1e-14));
  CHECK(pitchfork_coeff_chain(ModelParams::two(0.6, 1.8)) == doctest::Approx(-5.625).epsilon(1e-10));
  for (double d = 0.05; d < 1; d += 0.05) CHECK(pitchfork_coeff(d) < 0);
  CHECK(pitchfork_coeff(1 - 1e-10) < -1e4);
  CHECK_THROWS(pitchfork_coeff(0.0));
  CHECK_THROWS(pitchfork_coeff(1.0));
}

TEST_CASE("taper slopes") {
  const TaperSlopes t = taper_slopes();
  CHECK(t.tan_right == 2.0);
  // max of Z(k) from an independent elliptic-integral evaluation: -1.50451128081 at k = 0.964046984
  CHECK(-t.tan_left == doctest::Approx(-1.50451128081).epsilon(1e-8));
  CHECK(t.k_at_max == doctest::Approx(0.964046984).epsilon(1e-5));
  CHECK(t.angle_deg == doctest::Approx(7.0).epsilon(0.02));
}

TEST_CASE("TSS cycle radius follows the normal form past W = 1") {
  const double d = 1.5;
  for (double e : {1e-3, 3e-3, 1e-2}) {
    const ModelParams p = ModelParams::two(d, 1 - e);
    const HopfData h = hopf_a1(p, HopfBranch::TSS);
    const double r_nf = std::sqrt(-h.gamma / h.a1);
    CycleOptions o;
    o.transient = 40 / e;
    const auto c = find_reduced_cycle(p, {0.01, 0.0, 1.0}, o);
    REQUIRE(c);
    // amplitude of s_x on the cycle against the normal-form radius along v_r
    double amp = 0;
    for (const auto& s : c->orbit.states) amp = std::max(amp, std::abs(s.sx));
    const double r_meas = amp / std::hypot(h.vr[0], h.vi[0]);
    CHECK(r_meas == doctest::Approx(r_nf).epsilon(0.2));
    // onset frequency of the harmonic limit
    CHECK(c->T == doctest::Approx(2 * M_PI / h.omega).epsilon(0.05));
    CHECK(amp == doctest::Approx(std::sqrt(2 * e)).epsilon(0.05));
  }
}

TEST_CASE("coexistence probe") {
  CoexistenceOptions o;
  const CoexistenceResult a = coexistence_left_boundary(0.30, o);
  CHECK(a.delta_H == delta_minus(0.30));
  CHECK(a.delta_End < a.delta_H);
  CHECK(a.delta_End > delta_a1_zero(0.30));
  o.parallel = false;
  const CoexistenceResult b = coexistence_left_boundary(0.30, o);
  CHECK(b.delta_End == a.delta_End);
  CHECK(b.steps == a.steps);
  CHECK_THROWS_AS(coexistence_left_boundary(1.2), std::domain_error);
}
