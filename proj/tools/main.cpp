// srcomb command-line interface.
#include "CLI11.hpp"
#include "json.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/fluctuations.hpp"
#include "srcomb/limit_cycles.hpp"
#include "srcomb/normal_form.hpp"
#include "srcomb/parallel.hpp"
#include "srcomb/phase_scan.hpp"
#include "srcomb/spectra.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/trajectory.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

using namespace srcomb;
using json = nlohmann::json;

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json complex_list(const auto& values) {
  json a = json::array();
  for (const cplx& z : values) a.push_back({{"re", z.real()}, {"im", z.imag()}});
  return a;
}

json matrix(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

// "random:SEED" or six comma-separated components.
SpinState parse_ic(const std::string& ic) {
  if (ic.rfind("random", 0) == 0) {
    std::uint64_t seed = 1;
    if (const auto c = ic.find(':'); c != std::string::npos) seed = std::stoull(ic.substr(c + 1));
    return random_unit_state(2, seed);
  }
  std::vector<double> v;
  std::stringstream ss(ic);
  for (std::string tok; std::getline(ss, tok, ',');) v.push_back(std::stod(tok));
  if (v.size() != 6) throw CLI::ValidationError("--ic", "expected random[:SEED] or six numbers");
  Vec6 x;
  for (int i = 0; i < 6; ++i) x[i] = v[static_cast<std::size_t>(i)];
  return SpinState::from_vec6(x);
}

SpinState fixed_point_state(const std::string& which, const ModelParams& p) {
  if (which == "tss") return tss(p).state;
  const auto f = ntss(p);
  if (!f) throw std::runtime_error("NTSS does not exist at these parameters");
  return f->state;
}

std::string hopf_type_name(HopfType t) {
  switch (t) {
    case HopfType::Supercritical: return "supercritical";
    case HopfType::Subcritical: return "subcritical";
    case HopfType::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::string parity_name(Parity p) {
  switch (p) {
    case Parity::None: return "none";
    case Parity::Single: return "single";
    case Parity::OddOnly: return "odd";
    case Parity::EvenAndOdd: return "even+odd";
  }
  return "?";
}

LimitCycle require_cycle(const ModelParams& p, std::uint64_t seed) {
  const CycleSearch cs = find_limit_cycle(p, random_unit_state(2, seed));
  if (!cs.periodic()) throw std::runtime_error("no periodic attractor: " + cs.message);
  return *cs.cycle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-ensemble superradiant laser dynamics"};
  app.require_subcommand(1);

  double delta = 0.5, W = 0.5, t_end = 100, dt_out = 0.1;
  std::uint64_t seed = 1;
  std::string ic = "random:1", out, point = "ntss", branch = "ntss";

  auto* sim = app.add_subcommand("simulate", "integrate the mean-field equations, CSV output");
  sim->add_option("--delta", delta)->required();
  sim->add_option("--w", W)->required();
  sim->add_option("--t-end", t_end)->check(CLI::PositiveNumber);
  sim->add_option("--dt-out", dt_out);
  sim->add_option("--ic", ic, "random[:SEED] or sAx,sAy,sAz,sBx,sBy,sBz");
  sim->add_option("--out", out, "CSV path (default stdout)");

  auto* stab = app.add_subcommand("stability", "fixed-point stability report");
  stab->add_option("--delta", delta)->required();
  stab->add_option("--w", W)->required();
  stab->add_option("--point", point)->check(CLI::IsMember({"tss", "ntss"}));

  std::optional<double> hopf_delta;
  auto* hopf = app.add_subcommand("hopf", "normal-form coefficient at a Hopf point");
  hopf->add_option("--delta", hopf_delta, "default: on the NTSS Hopf line");
  hopf->add_option("--w", W)->required();
  hopf->add_option("--branch", branch)->check(CLI::IsMember({"tss", "ntss"}));

  std::vector<double> coexist_w{0.30, 0.45, 0.65, 0.95};
  CoexistenceOptions copt;
  auto* coex = app.add_subcommand("coexist", "left edge of the coexistence region");
  coex->add_option("--w", coexist_w)->expected(1, -1);
  coex->add_option("--seed", copt.seed);
  coex->add_option("--step", copt.step);

  std::string orbit_out;
  auto* floq = app.add_subcommand("floquet", "limit cycle and Floquet multipliers");
  floq->add_option("--delta", delta)->required();
  floq->add_option("--w", W)->required();
  floq->add_option("--seed", seed);
  floq->add_option("--orbit-out", orbit_out, "CSV of one period");

  double spec_dt = 0.25;
  int spec_log2 = 16;
  auto* spec = app.add_subcommand("spectrum", "power spectrum of l_- on the attractor");
  spec->add_option("--delta", delta)->required();
  spec->add_option("--w", W)->required();
  spec->add_option("--seed", seed);
  spec->add_option("--dt", spec_dt)->check(CLI::PositiveNumber);
  spec->add_option("--log2-samples", spec_log2)->check(CLI::Range(8, 24));
  spec->add_option("--out", out, "CSV of (f, power)");

  std::string state;
  auto* fl = app.add_subcommand("fluct", "Fokker-Planck drift and diffusion");
  fl->add_option("--delta", delta)->required();
  fl->add_option("--w", W)->required();
  fl->add_option("--point", point)->check(CLI::IsMember({"tss", "ntss"}));
  fl->add_option("--state", state, "six components, overrides --point");

  GridSpec grid;
  ScanOptions sopt;
  auto* sc = app.add_subcommand("scan", "phase map on a (delta, W) grid, NDJSON output");
  sc->add_option("--dmin", grid.dmin);
  sc->add_option("--dmax", grid.dmax);
  sc->add_option("--wmin", grid.wmin);
  sc->add_option("--wmax", grid.wmax);
  sc->add_option("--nx", grid.nx)->check(CLI::PositiveNumber);
  sc->add_option("--ny", grid.ny)->check(CLI::PositiveNumber);
  sc->add_option("--seed", sopt.classify.seed);
  sc->add_option("--probes", sopt.classify.probes);
  sc->add_option("--out", sopt.out)->required();
  sc->add_flag("--resume", sopt.resume);
  sc->add_flag("--serial", [&](std::int64_t) { sopt.parallel = false; });

  CLI11_PARSE(app, argc, argv);
  std::cout << std::setprecision(kDigits);

  try {
    if (*sim) {
      const ModelParams p = ModelParams::two(delta, W);
      IntegrateOptions io;
      io.dt_out = dt_out;
      const Trajectory tr = integrate(parse_ic(ic), p, t_end, io);
      if (out.empty()) write_csv(std::cout, tr);
      else write_csv(out, tr);
    } else if (*stab) {
      const ModelParams p = ModelParams::two(delta, W);
      const StabilityReport r = classify_fixed_point(fixed_point_state(point, p), p);
      emit({{"delta", delta}, {"W", W}, {"kind", point == "tss" ? "TSS" : "NTSS"},
            {"eigenvalues", complex_list(r.eigenvalues)}, {"stable", r.stable}, {"marginal", r.marginal},
            {"zero_modes", r.zero_modes}});
    } else if (*hopf) {
      const double d = hopf_delta ? *hopf_delta : delta_minus(W);
      const ModelParams p = ModelParams::two(d, W);
      const HopfBranch b = branch == "tss" ? HopfBranch::TSS : HopfBranch::NTSS;
      const HopfData h = hopf_a1(p, b);
      emit({{"delta", d}, {"W", W}, {"gamma", h.gamma}, {"omega", h.omega}, {"a1", h.a1},
            {"type", hopf_type_name(classify_hopf(p, b))}});
    } else if (*coex) {
      for (double w : coexist_w) {
        const CoexistenceResult r = coexistence_left_boundary(w, copt);
        std::cout << json{{"W", w}, {"delta_H", r.delta_H}, {"delta_a1_0", delta_a1_zero(w)},
                          {"delta_End", r.delta_End}}
                         .dump()
                  << std::endl;
      }
    } else if (*floq) {
      const ModelParams p = ModelParams::two(delta, W);
      const LimitCycle c = require_cycle(p, seed);
      const auto m = floquet_multipliers_full(c, p);
      emit({{"delta", delta}, {"W", W}, {"T", c.T}, {"T_group", c.T_group}, {"multipliers", complex_list(m)},
            {"z2_symmetric", c.z2_symmetric}, {"omega_q", c.omega_q}});
      if (!orbit_out.empty()) write_csv(orbit_out, c.orbit);
    } else if (*spec) {
      const ModelParams p = ModelParams::two(delta, W);
      const LimitCycle c = require_cycle(p, seed);
      const auto rec = lminus_record(p, SpinState::from_vec6(c.x0), spec_dt, std::size_t{1} << spec_log2);
      CombSpectrum s = power_spectrum(rec, spec_dt);
      PeakOptions po;
      po.f0_hint = 1.0 / c.T;
      extract_comb(s, po);
      if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw std::runtime_error("cannot open " + out);
        os << std::setprecision(kDigits) << "f,power\n";
        for (std::size_t i = 0; i < s.f.size(); ++i) os << s.f[i] << ',' << s.power[i] << '\n';
      }
      json peaks = json::array();
      for (const auto& pk : s.peaks) peaks.push_back({{"f", pk.f}, {"h", pk.height}});
      emit({{"delta", delta}, {"W", W}, {"f0", s.f0}, {"fq", s.fq}, {"parity", parity_name(s.parity)},
            {"even_ratio", s.even_ratio}, {"peaks", peaks}});
    } else if (*fl) {
      const ModelParams p = ModelParams::two(delta, W);
      const SpinState s = state.empty() ? fixed_point_state(point, p) : parse_ic(state);
      const FluctuationCoefficients f = fluctuation_coefficients(s, p);
      json ev = json::array();
      for (Eigen::Index i = 0; i < f.diffusion_eigenvalues.size(); ++i) ev.push_back(f.diffusion_eigenvalues[i]);
      emit({{"delta", delta}, {"W", W}, {"basis", "s_x/2, s_y/2, s_z/2 per ensemble"}, {"drift", matrix(f.drift)},
            {"diffusion", matrix(f.diffusion)}, {"diffusion_eigenvalues", ev},
            {"positive_semidefinite", f.positive_semidefinite}});
    } else if (*sc) {
      const auto recs = scan(grid, sopt);
      std::cerr << "wrote " << recs.size() << " records to " << sopt.out << " using " << resolve_threads(sopt.threads)
                << " thread(s)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
