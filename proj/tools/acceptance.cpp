// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "property_checks.hpp"

#include "srcomb/elliptic.hpp"
#include "srcomb/limit_cycles.hpp"
#include "srcomb/normal_form.hpp"
#include "srcomb/parallel.hpp"
#include "srcomb/phase_scan.hpp"
#include "srcomb/spectra.hpp"
#include "srcomb/stability.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace srcomb;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [miss: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(6);
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::printf("CRITERION %2d %s  %-24s %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.str().c_str(), seconds_since(t0));
  std::fflush(stdout);
}

bool within(double x, double ref, double tol) { return std::abs(x - ref) <= tol; }

CombSpectrum measured_comb(double d, double W, LimitCycle* out = nullptr, bool hint = false) {
  const ModelParams p = ModelParams::two(d, W);
  const CycleSearch cs = find_limit_cycle(p, random_unit_state(2, 1));
  if (!cs.periodic()) throw std::runtime_error("no cycle at (" + std::to_string(d) + ", " + std::to_string(W) + ")");
  const auto rec = lminus_record(p, SpinState::from_vec6(cs.cycle->x0), 0.25, std::size_t{1} << 16);
  CombSpectrum s = power_spectrum(rec, 0.25);
  PeakOptions po;
  if (hint) po.f0_hint = 1.0 / cs.cycle->T;
  extract_comb(s, po);
  if (out) *out = *cs.cycle;
  return s;
}

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

int main() {
  std::printf("srcomb acceptance, %d thread(s)\n", resolve_threads());

  run(1, "phase I/II boundary", [](Outcome& o) {
    // 100 angles on each side of the quarter circle W > 1, at distance 0.005.
    std::vector<std::pair<double, double>> pts;
    for (double r : {0.995, 1.005})
      for (int k = 0; k < 100; ++k) {
        const double phi = 0.1 + 1.35 * k / 99.0;
        pts.push_back({r * std::sin(phi), 1 + r * std::cos(phi)});
      }
    ClassifyOptions opt;
    opt.analytic_shortcut = false;
    const auto t0 = Clock::now();
    std::vector<int> bad(pts.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [d, W] = pts[i];
      const PhasePoint p = classify_point(d, W, opt);
      bad[i] = (p.label == PhaseLabel::TSS) != tss_stable(d, W);
    }
    int mismatches = 0;
    for (int b : bad) mismatches += b;
    const double elapsed = seconds_since(t0);
    o.detail << pts.size() << " points, " << mismatches << " disagreements, " << elapsed << " s";
    o.require(mismatches == 0, "zero disagreements");
    o.require(elapsed < 120, "runtime < 2 min");
  });

  run(2, "Hopf line", [](Outcome& o) {
    const double W[4] = {0.30, 0.45, 0.65, 0.95}, ref[4] = {0.410, 0.592, 0.782, 0.974};
    for (int i = 0; i < 4; ++i) {
      const double d = delta_minus(W[i]);
      o.detail << " d-(" << W[i] << ")=" << d;
      o.require(within(d, ref[i], 0.002), "delta-(" + std::to_string(W[i]) + ")");
    }
  });

  run(3, "normal-form coefficient", [](Outcome& o) {
    const double dH = delta_minus(0.95);
    const double a1 = hopf_a1(ModelParams::two(dH, 0.95), HopfBranch::NTSS).a1;
    const double a1_lit = hopf_a1(ModelParams::two(0.97, 0.95), HopfBranch::NTSS).a1;
    const double a1_tss = hopf_a1(ModelParams::two(1.5, 1.0), HopfBranch::TSS).a1;
    const double dz = delta_a1_zero(0.30);
    o.detail << "a1(dH=" << dH << ",0.95)=" << a1 << " (at 0.97: " << a1_lit << ") a1_TSS(1.5,1)=" << a1_tss
             << " d_a1=0(0.30)=" << dz;
    o.require(within(a1, 0.46, 0.02), "a1 at the Hopf point");
    o.require(a1_tss < 0, "TSS a1 < 0");
    o.require(within(dz, 0.358, 0.005), "delta_a1=0(0.30)");
  });

  run(4, "coexistence probe", [](Outcome& o) {
    const double W[4] = {0.95, 0.45, 0.30, 0.65};
    const auto t0 = Clock::now();
    for (double w : W) {
      const CoexistenceResult r = coexistence_left_boundary(w);
      const double dz = delta_a1_zero(w);
      o.detail << " W=" << w << ":" << dz << "<" << r.delta_End << "<" << r.delta_H;
      o.require(dz < r.delta_End && r.delta_End < r.delta_H, "bracket at W=" + std::to_string(w));
      if (w == 0.95) o.require(within(r.delta_End, 0.967, 0.01), "delta_End(0.95)");
      if (w == 0.45) o.require(within(r.delta_End, 0.588, 0.01), "delta_End(0.45)");
    }
    o.require(seconds_since(t0) < 600, "runtime < 10 min");
  });

  run(5, "Floquet multipliers", [](Outcome& o) {
    struct Row {
      double d, rho2;
    };
    for (const Row row : {Row{0.64, 0.97}, Row{0.63, 1.1}}) {
      const ModelParams p = ModelParams::two(row.d, 0.40);
      const auto c = find_reduced_cycle(p, harmonic_solution(p, 0.0));
      if (!c) throw std::runtime_error("no reduced cycle");
      const auto m = floquet_multipliers(*c, p);
      o.detail << " d=" << row.d << ": " << std::abs(m[0]) << ", " << std::abs(m[1]) << ", " << std::abs(m[2]);
      o.require(std::abs(m[0] - 1.0) < 1e-3, "|rho1 - 1| < 1e-3");
      o.require(std::abs(std::abs(m[1]) / row.rho2 - 1) < 0.03, "rho2 within 3%");
      o.require(std::abs(m[2]) < 0.01, "rho3 < 0.01");
    }
    for (auto [d, W] : {std::pair{1.5, 0.5}, {0.5, 0.0802}}) {
      const CycleSearch cs = find_limit_cycle(ModelParams::two(d, W), random_unit_state(2, 1));
      if (!cs.periodic()) throw std::runtime_error("no cycle");
      const auto m = floquet_multipliers(*cs.cycle, ModelParams::two(d, W));
      o.detail << " |rho1-1|(" << d << "," << W << ")=" << std::abs(m[0] - 1.0);
      o.require(std::abs(m[0] - 1.0) < 1e-3, "|rho1 - 1| < 1e-3");
    }
  });

  run(6, "symmetry-breaking boundary", [](Outcome& o) {
    const bool a = detect_symmetry_breaking(ModelParams::two(0.41, 0.051));
    const bool b = detect_symmetry_breaking(ModelParams::two(0.42, 0.051));
    const bool c = detect_symmetry_breaking(ModelParams::two(0.63, 0.40));
    const bool d = detect_symmetry_breaking(ModelParams::two(0.64, 0.40));
    const double wc = symmetry_breaking_wc();
    o.detail << "W=0.051: " << a << "->" << b << "  W=0.40: " << c << "->" << d << "  Wc=" << wc;
    o.require(a && !b, "flip in [0.41, 0.42] at W=0.051");
    o.require(c && !d, "flip in [0.63, 0.64] at W=0.40");
    o.require(within(wc, 0.575, 0.01), "Wc");
  });

  run(7, "spectra", [](Outcome& o) {
    const CombSpectrum a = measured_comb(0.50, 0.0802);
    o.detail << "f0(0.50,0.0802)=" << a.f0 << " even=" << a.even_ratio;
    o.require(within(a.f0, 0.044, 0.002) && a.parity == Parity::OddOnly, "(0.50,0.0802) odd comb");

    const CombSpectrum b = measured_comb(0.44, 0.056);
    o.detail << " f0(0.44,0.056)=" << b.f0 << " even=" << b.even_ratio;
    o.require(within(b.f0, 0.040, 0.002) && b.parity == Parity::OddOnly && b.even_ratio < 1e-4,
              "(0.44,0.056) odd comb");

    const CombSpectrum c = measured_comb(0.42, 0.056);
    double zero = 0, even_max = 0, top = 0;
    for (const auto& pk : c.peaks) {
      top = std::max(top, pk.height);
      const double order = (pk.f - c.fq) / c.f0;
      if (std::abs(order - 2 * std::round(order / 2)) > 0.25) continue;
      even_max = std::max(even_max, pk.height);
      if (std::abs(pk.f) < 0.25 * c.f0) zero = std::max(zero, pk.height);
    }
    o.detail << " f0(0.42,0.056)=" << c.f0 << " P(0)/P_even=" << zero / even_max << " P(0)/P_max=" << zero / top;
    o.require(within(c.f0, 0.038, 0.002), "f0(0.42,0.056)");
    o.require(zero > 0 && zero == even_max, "f=0 dominates the even lines");

    LimitCycle lc;
    const CombSpectrum d = measured_comb(0.225, 0.05, &lc, true);
    const double asym = mirror_asymmetry(d);
    o.detail << " fq(0.225,0.05)=" << d.fq << " omega_q/2pi=" << lc.omega_q / (2 * std::numbers::pi)
             << " mirror=" << asym;
    o.require(std::abs(d.fq) > 0.5 * d.bin, "offset fq != 0");
    o.require(asym > 0.05, "mirror asymmetry > 5%");
  });

  run(8, "analytic solutions", [](Outcome& o) {
    for (auto [d, W] : {std::pair{5.0, 1e-3}, {5.0, 1 - 1e-3}, {500.0, 0.5}}) {
      const ModelParams p = ModelParams::two(d, W);
      CycleOptions co;
      if (d > 100) co.transient = 200;
      const auto c = find_reduced_cycle(p, harmonic_solution(p, 0.0), co);
      if (!c) throw std::runtime_error("no reduced cycle");
      const double dev =
          profile_deviation(*c, [&](double t) { return harmonic_solution(p, t).sy; }, Alignment::UpwardZero);
      o.detail << " harmonic(" << d << "," << W << ")=" << dev;
      o.require(dev < 0.03, "harmonic within 3%");
    }
    const ModelParams p = ModelParams::two(1 - (500.0 / 755) * 1e-3, 1 - 1e-3);
    const EllipticParams e = elliptic_params(p);
    const auto c = refine_reduced_cycle(p, elliptic_solution(p, 0.0).vec(), e.period);
    if (!c) throw std::runtime_error("no elliptic cycle");
    const double dev = profile_deviation(*c, [&](double t) { return elliptic_solution(p, t).sy; }, Alignment::Maximum);
    const double dT = std::abs(c->T - e.period) / c->T;
    o.detail << " elliptic=" << dev << " period=" << dT;
    o.require(dev < 0.05, "elliptic within 5%");
    o.require(dT < 0.02, "elliptic period within 2%");
  });

  run(9, "tricritical taper", [](Outcome& o) {
    const TaperSlopes t = taper_slopes();
    o.detail << "tanR=" << t.tan_right << " tanL=" << t.tan_left;
    o.require(t.tan_right == 2.0, "tanR = 2");
    o.require(within(t.tan_left, 1.50, 0.01), "tanL");
    // boundaries in [0.9, 1]^2: slope dW/d(delta) of the Hopf line and of the coexistence edge
    std::vector<double> W, dH, dE;
    for (double w : {0.90, 0.92, 0.94, 0.96, 0.98}) {
      const CoexistenceResult r = coexistence_left_boundary(w);
      W.push_back(w);
      dH.push_back(r.delta_H);
      dE.push_back(r.delta_End);
    }
    const double sR = lsq_slope(dH, W), sL = lsq_slope(dE, W);
    o.detail << " fitted right=" << sR << " left=" << sL;
    o.require(sR >= 1.85 && sR <= 2.05, "fitted right slope");
    o.require(sL >= 1.45 && sL <= 1.60, "fitted left slope");
  });

  run(10, "SI conversion", [](Outcome& o) {
    const double unit = to_si(1.0, 1e6, 37.0, 9.4e5);
    const double f0 = to_si(0.040, 1e6, 37.0, 9.4e5);
    const double measured = to_si(measured_comb(0.44, 0.056).f0, 1e6, 37.0, 9.4e5);
    o.detail << "N Gamma_c=" << unit << " Hz  f0=" << f0 << " Hz  (measured comb: " << measured << " Hz)";
    o.require(within(unit, 1400, 100), "N Gamma_c");
    o.require(within(f0, 56, 3), "f0");
  });

  run(11, "property suites", [](Outcome& o) {
    const double ax = checks::axial_equivariance(400, 1);
    const double z2 = checks::z2_equivariance(400, 2);
    const double len = checks::length_drift(6, 100.0, 3);
    double eq = 0;
    for (auto [d, W] : {std::pair{0.5, 1.5}, {1.5, 0.5}, {0.5, 0.3}})
      eq = std::max({eq, checks::group_vs_full(d, W, 100.0, 4), checks::reduced_vs_full(d, W, 100.0, 5)});
    const double dr = checks::drift_vs_jacobian(300, 6);
    const double toda = checks::toda_deviation(40.0);
    double half = 0;
    for (auto [d, W] : {std::pair{1.5, 0.5}, {0.5, 0.0802}, {0.8, 0.6}}) {
      const CycleSearch cs = find_limit_cycle(ModelParams::two(d, W), random_unit_state(2, 1));
      if (!cs.periodic() || !cs.cycle->z2_symmetric) throw std::runtime_error("expected a symmetric cycle");
      half = std::max(half, checks::half_period_defect(*cs.cycle));
    }
    o.detail << "axial=" << ax << " Z2=" << z2 << " length=" << len << " equivalence=" << eq << " drift=" << dr
             << " Toda=" << toda << " half-period=" << half;
    o.require(ax < 1e-12 && z2 < 1e-12, "equivariance 1e-12");
    o.require(len < 1e-9, "length 1e-9");
    o.require(eq < 1e-6, "equivalence 1e-6");
    o.require(dr < 1e-10, "drift 1e-10");
    o.require(toda < 1e-6, "Toda 1e-6");
    o.require(half < 1e-5, "half-period 1e-5");
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
