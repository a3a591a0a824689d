#include "srcomb/phase_scan.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/limit_cycles.hpp"
#include "srcomb/normal_form.hpp"
#include "srcomb/parallel.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/trajectory.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace srcomb {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<PhaseLabel, const char*>, 6> kLabels{{
    {PhaseLabel::TSS, "TSS"},
    {PhaseLabel::NTSS, "NTSS"},
    {PhaseLabel::Z2_LIMIT_CYCLE, "Z2_LIMIT_CYCLE"},
    {PhaseLabel::ASYM_LIMIT_CYCLE, "ASYM_LIMIT_CYCLE"},
    {PhaseLabel::NONPERIODIC, "NONPERIODIC"},
    {PhaseLabel::COEXIST_NTSS, "COEXIST_NTSS"},
}};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class ProbeKind { TSS, NTSS, Dynamic };

struct Probe {
  ProbeKind kind = ProbeKind::Dynamic;
  Vec6 x;
  double asymmetry = 0;
};

Probe run_probe(const ModelParams& p, std::uint64_t seed, const ClassifyOptions& opt) {
  Probe pr;
  Vec6 x = advance(random_unit_state(2, seed).vec6(), p, opt.transient);
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  const double tail = opt.horizon - std::min(opt.window, opt.horizon);
  bool fixed = false;
  double tail_speed = 0;
  auto obs = [&](const Segment<Vec6>& seg) {
    const double speed = seg.f1.norm();
    if (speed < opt.fixed_tol) {
      fixed = true;
      return false;
    }
    if (seg.t1 >= tail) {
      tail_speed = std::max(tail_speed, speed);
      pr.asymmetry = std::max(pr.asymmetry, std::abs(seg.x1[2] - seg.x1[5]));
    }
    return true;
  };
  const auto r = integrate_ode(rhs, x, 0.0, opt.horizon, OdeOptions{}, obs);
  pr.x = r.x;
  // Slowly decaying transients near a boundary still count as stationary.
  if (!fixed && tail_speed < 1e2 * opt.fixed_tol) fixed = true;
  if (fixed) {
    // Non-radiating means no collective coherence; at W = 0 this also covers dark states.
    const double l_perp = std::hypot(pr.x[0] + pr.x[3], pr.x[1] + pr.x[4]);
    pr.kind = l_perp < opt.tss_radius ? ProbeKind::TSS : ProbeKind::NTSS;
    pr.asymmetry = std::abs(pr.x[2] - pr.x[5]);
  }
  return pr;
}

// Window where a stable NTSS may share phase space with a time-dependent attractor.
bool coexistence_possible(double delta, double W) {
  if (!(W > 0 && W < 1)) return false;
  const double dH = delta_minus(W);
  if (!std::isfinite(dH) || delta > dH) return false;
  try {
    return delta >= delta_a1_zero(W) - 0.01;
  } catch (const std::exception&) {
    return true;
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_or_nan(const json& v) {
  return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string header_line(const GridSpec& g, const ClassifyOptions& o) {
  json h{{"schema_version", kScanSchemaVersion},
         {"kind", "header"},
         {"created", timestamp()},
         {"grid", {{"dmin", g.dmin}, {"dmax", g.dmax}, {"wmin", g.wmin}, {"wmax", g.wmax}, {"nx", g.nx}, {"ny", g.ny}}},
         {"seed", o.seed},
         {"probes", o.probes},
         {"transient", o.transient},
         {"horizon", o.horizon},
         {"analytic_shortcut", o.analytic_shortcut}};
  return h.dump();
}

ScanRecord classify_node(const GridSpec& g, std::size_t k, const ClassifyOptions& opt) {
  ScanRecord r;
  r.index = k;
  r.i = static_cast<int>(k % static_cast<std::size_t>(g.nx));
  r.j = static_cast<int>(k / static_cast<std::size_t>(g.nx));
  ClassifyOptions o = opt;
  o.seed = splitmix64(opt.seed ^ splitmix64(k));
  r.point = classify_point(g.delta(r.i), g.W(r.j), o);
  return r;
}

void validate(const GridSpec& g) {
  if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("grid needs at least one node per axis");
  if (g.dmin < 0 || g.wmin < 0 || g.dmax < g.dmin || g.wmax < g.wmin)
    throw std::invalid_argument("grid bounds must be ordered and non-negative");
}

}  // namespace

std::string to_string(PhaseLabel l) {
  for (const auto& [k, s] : kLabels)
    if (k == l) return s;
  return "UNKNOWN";
}

std::optional<PhaseLabel> parse_label(std::string_view s) {
  for (const auto& [k, name] : kLabels)
    if (s == name) return k;
  return std::nullopt;
}

std::optional<PhaseLabel> analytic_label(double delta, double W) {
  if (tss_stable(delta, W)) return PhaseLabel::TSS;
  if (ntss_stable(delta, W)) return PhaseLabel::NTSS;
  return std::nullopt;
}

std::uint64_t probe_seed(std::uint64_t base, std::uint64_t node, int k) {
  return splitmix64(base ^ splitmix64(node * 0x100000001b3ULL + static_cast<std::uint64_t>(k)));
}

PhasePoint classify_point(double delta, double W, const ClassifyOptions& opt) {
  if (!(delta >= 0) || !(W >= 0)) throw std::invalid_argument("classify_point needs delta >= 0 and W >= 0");
  if (opt.probes < 1) throw std::invalid_argument("need at least one probe");
  PhasePoint pt;
  pt.delta = delta;
  pt.W = W;
  if (opt.analytic_shortcut) {
    const auto a = analytic_label(delta, W);
    if (a && (*a == PhaseLabel::TSS || !coexistence_possible(delta, W))) {
      pt.label = *a;
      pt.diag.analytic = true;
      return pt;
    }
  }

  const ModelParams p = ModelParams::two(delta, W);
  std::vector<Probe> probes;
  probes.reserve(static_cast<std::size_t>(opt.probes));
  for (int k = 0; k < opt.probes; ++k) probes.push_back(run_probe(p, probe_seed(opt.seed, 0, k), opt));

  int n_tss = 0, n_ntss = 0;
  double asym = 0;
  const Probe* dyn = nullptr;
  for (const auto& pr : probes) {
    if (pr.kind == ProbeKind::TSS) ++n_tss;
    if (pr.kind == ProbeKind::NTSS) ++n_ntss;
    if (pr.kind == ProbeKind::Dynamic) {
      if (!dyn) dyn = &pr;
      asym = std::max(asym, pr.asymmetry);
    }
  }
  pt.diag.fixed_probes = n_tss + n_ntss;
  pt.diag.dynamic_probes = opt.probes - pt.diag.fixed_probes;

  if (!dyn) {
    pt.label = n_ntss > 0 ? PhaseLabel::NTSS : PhaseLabel::TSS;
    for (const auto& pr : probes) asym = std::max(asym, pr.asymmetry);
    pt.diag.asymmetry = asym;
    return pt;
  }
  pt.diag.asymmetry = asym;

  bool all_periodic = true;
  for (const auto& pr : probes) {
    if (pr.kind != ProbeKind::Dynamic) continue;
    if (!opt.cycle_diagnostics) {
      all_periodic = false;
      break;
    }
    CycleOptions co;
    co.transient = 0;
    co.retries = 0;
    co.samples = 64;
    const CycleSearch cs = find_limit_cycle(p, SpinState::from_vec6(pr.x), co);
    if (!cs.periodic()) {
      all_periodic = false;
      break;
    }
    if (!pt.diag.periodic) {
      const LimitCycle& c = *cs.cycle;
      pt.diag.periodic = true;
      pt.diag.f0 = 1.0 / c.T;
      pt.diag.omega_q = c.omega_q;
      const auto m = floquet_multipliers_full(c, p);
      pt.diag.multipliers.assign(m.begin(), m.end());
    }
  }
  if (!all_periodic) {
    pt.diag.periodic = false;
    pt.diag.f0 = pt.diag.omega_q = std::numeric_limits<double>::quiet_NaN();
    pt.diag.multipliers.clear();
  }

  // With the shortcut on, a linearly stable NTSS counts even if no probe landed in its basin.
  const bool ntss_attracts = n_ntss > 0 || (opt.analytic_shortcut && ntss_stable(delta, W));
  if (ntss_attracts) {
    pt.label = PhaseLabel::COEXIST_NTSS;
  } else if (!all_periodic) {
    pt.label = PhaseLabel::NONPERIODIC;
  } else {
    pt.label = asym <= opt.z2_threshold ? PhaseLabel::Z2_LIMIT_CYCLE : PhaseLabel::ASYM_LIMIT_CYCLE;
  }
  return pt;
}

double GridSpec::delta(int i) const { return nx == 1 ? dmin : dmin + (dmax - dmin) * i / (nx - 1); }
double GridSpec::W(int j) const { return ny == 1 ? wmin : wmin + (wmax - wmin) * j / (ny - 1); }

std::vector<ScanRecord> scan_serial(const GridSpec& grid, const ClassifyOptions& opt) {
  validate(grid);
  std::vector<ScanRecord> out;
  out.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(classify_node(grid, k, opt));
  return out;
}

std::vector<ScanRecord> scan_parallel(const GridSpec& grid, const ClassifyOptions& opt, int threads) {
  validate(grid);
  std::vector<ScanRecord> out(grid.size());
  const long n = static_cast<long>(grid.size());
  const int nt = resolve_threads(threads);
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = classify_node(grid, static_cast<std::size_t>(k), opt);
  return out;
}

std::vector<ScanRecord> scan(const GridSpec& grid, const ScanOptions& opt) {
  validate(grid);
  std::map<std::size_t, ScanRecord> done;
  if (opt.resume && !opt.out.empty() && std::filesystem::exists(opt.out)) {
    for (auto& r : read_phase_map(opt.out))
      if (r.index < grid.size()) done.emplace(r.index, std::move(r));
  }
  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (!done.count(k)) todo.push_back(k);

  // Records are appended as they finish so an interrupted run can resume.
  std::ofstream log;
  std::mutex mu;
  if (!opt.out.empty()) {
    if (!opt.resume || !std::filesystem::exists(opt.out)) {
      std::ofstream init(opt.out, std::ios::trunc);
      if (!init) throw std::runtime_error("cannot open " + opt.out);
      init << header_line(grid, opt.classify) << '\n';
    }
    log.open(opt.out, std::ios::app);
    if (!log) throw std::runtime_error("cannot open " + opt.out);
  }
  std::vector<ScanRecord> fresh(todo.size());
  const long n = static_cast<long>(todo.size());
  auto work = [&](long t) {
    ScanRecord r = classify_node(grid, todo[static_cast<std::size_t>(t)], opt.classify);
    if (log.is_open()) {
      const std::string line = to_ndjson(r);
      std::lock_guard<std::mutex> lk(mu);
      log << line << '\n' << std::flush;
    }
    fresh[static_cast<std::size_t>(t)] = std::move(r);
  };
  if (opt.parallel) {
    const int nt = resolve_threads(opt.threads);
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
    for (long t = 0; t < n; ++t) work(t);
  } else {
    for (long t = 0; t < n; ++t) work(t);
  }
  for (auto& r : fresh) done.emplace(r.index, std::move(r));

  std::vector<ScanRecord> out;
  out.reserve(done.size());
  for (auto& [k, r] : done) out.push_back(std::move(r));

  if (!opt.out.empty()) {
    log.close();
    // Final file in node order, independent of completion order.
    const std::string tmp = opt.out + ".tmp";
    {
      std::ofstream os(tmp, std::ios::trunc);
      if (!os) throw std::runtime_error("cannot open " + tmp);
      os << header_line(grid, opt.classify) << '\n';
      for (const auto& r : out) os << to_ndjson(r) << '\n';
      if (!os) throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, opt.out);
  }
  return out;
}

std::string to_ndjson(const ScanRecord& r) {
  const auto& d = r.point.diag;
  json mult = json::array();
  for (const auto& m : d.multipliers) mult.push_back({m.real(), m.imag()});
  json j{{"schema_version", kScanSchemaVersion},
         {"index", r.index},
         {"i", r.i},
         {"j", r.j},
         {"delta", r.point.delta},
         {"W", r.point.W},
         {"label", to_string(r.point.label)},
         {"diagnostics",
          {{"periodic", d.periodic},
           {"f0", number_or_null(d.f0)},
           {"omega_q", number_or_null(d.omega_q)},
           {"multipliers", mult},
           {"asymmetry", number_or_null(d.asymmetry)},
           {"fixed_probes", d.fixed_probes},
           {"dynamic_probes", d.dynamic_probes},
           {"analytic", d.analytic}}}};
  return j.dump();
}

std::optional<ScanRecord> parse_ndjson(const std::string& line) {
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("index")) return std::nullopt;
  if (j.value("schema_version", 0) != kScanSchemaVersion) return std::nullopt;
  try {
    ScanRecord r;
    r.index = j.at("index").get<std::size_t>();
    r.i = j.at("i").get<int>();
    r.j = j.at("j").get<int>();
    r.point.delta = j.at("delta").get<double>();
    r.point.W = j.at("W").get<double>();
    const auto l = parse_label(j.at("label").get<std::string>());
    if (!l) return std::nullopt;
    r.point.label = *l;
    const json& d = j.at("diagnostics");
    r.point.diag.periodic = d.at("periodic").get<bool>();
    r.point.diag.f0 = number_or_nan(d.at("f0"));
    r.point.diag.omega_q = number_or_nan(d.at("omega_q"));
    for (const auto& m : d.at("multipliers")) r.point.diag.multipliers.emplace_back(m.at(0).get<double>(), m.at(1).get<double>());
    r.point.diag.asymmetry = number_or_nan(d.at("asymmetry"));
    r.point.diag.fixed_probes = d.at("fixed_probes").get<int>();
    r.point.diag.dynamic_probes = d.at("dynamic_probes").get<int>();
    r.point.diag.analytic = d.at("analytic").get<bool>();
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::vector<ScanRecord> read_phase_map(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<ScanRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (auto r = parse_ndjson(line)) out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace srcomb
