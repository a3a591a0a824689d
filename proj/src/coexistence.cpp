#include "srcomb/fixed_points.hpp"
#include "srcomb/normal_form.hpp"
#include "srcomb/parallel.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/trajectory.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace srcomb {

namespace {

double ntss_distance(const Vec6& x, const Vec6& ref_inv) { return (invariants(x) - ref_inv).norm(); }

// Samples n states at uniformly random times of a window on the attractor through x.
std::vector<Vec6> harvest(const Vec6& x, const ModelParams& p, double window, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, window);
  std::vector<double> times(static_cast<std::size_t>(n));
  for (auto& t : times) t = u(rng);
  std::sort(times.begin(), times.end());
  std::vector<Vec6> out;
  std::size_t k = 0;
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  auto obs = [&](const Segment<Vec6>& seg) {
    while (k < times.size() && times[k] <= seg.t1) out.push_back(seg(times[k++]));
    return k < times.size();
  };
  integrate_ode(rhs, x, 0.0, window, OdeOptions{}, obs);
  while (out.size() < times.size()) out.push_back(out.empty() ? x : out.back());
  return out;
}

// Integrates until the invariant distance to the NTSS drops below the threshold or the horizon ends.
struct ProbeResult {
  Vec6 x;
  bool converged;
};

ProbeResult probe(const Vec6& x0, const ModelParams& p, const Vec6& ref_inv, const CoexistenceOptions& opt) {
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  bool conv = false;
  auto obs = [&](const Segment<Vec6>& seg) {
    conv = ntss_distance(seg.x1, ref_inv) < opt.proximity;
    return !conv;
  };
  auto r = integrate_ode(rhs, x0, 0.0, opt.horizon, OdeOptions{}, obs);
  return {r.x, conv};
}

}  // namespace

CoexistenceResult coexistence_left_boundary(double W, const CoexistenceOptions& opt) {
  if (!(W > 0 && W < 1)) throw std::domain_error("coexistence probe needs 0 < W < 1");
  if (opt.probes < 1) throw std::invalid_argument("need at least one probe");
  CoexistenceResult res;
  res.W = W;
  res.delta_H = delta_minus(W);

  // Time-dependent attractor just right of the Hopf line.
  double delta = res.delta_H + opt.start_offset;
  ModelParams p = ModelParams::two(delta, W);
  const auto fp = ntss(p);
  if (!fp) throw std::runtime_error("NTSS missing at the starting point");
  Vec6 x = fp->state.vec6();
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1e-3);
  for (int i = 0; i < 6; ++i) x[i] += nd(rng);
  // Growth rates vanish at the Hopf line, so leaving the NTSS can take several transients.
  const Vec6 start_inv = invariants(fp->state.vec6());
  int chunks = 0;
  do {
    x = advance(x, p, opt.transient, OdeOptions{});
  } while (ntss_distance(x, start_inv) < 1e-2 && ++chunks < 20);
  if (ntss_distance(x, start_inv) < 1e-2)
    throw std::runtime_error("no time-dependent attractor found right of the Hopf line");
  x = advance(x, p, opt.transient, OdeOptions{});  // settle onto the attractor
  std::vector<Vec6> seeds = harvest(x, p, opt.harvest_window, opt.probes, opt.seed + 1);

  const int threads = resolve_threads(opt.threads);
  for (int step = 1;; ++step) {
    delta = res.delta_H + opt.start_offset - step * opt.step;
    if (delta < res.delta_H - opt.max_span || delta <= 0)
      throw std::runtime_error("coexistence did not end within the search span");
    p = ModelParams::two(delta, W);
    const auto f = ntss(p);
    if (!f) throw std::runtime_error("NTSS missing inside the probe range");
    const Vec6 ref_inv = invariants(f->state.vec6());
    std::vector<ProbeResult> out(seeds.size());
    const int m = static_cast<int>(seeds.size());
    if (opt.parallel) {
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
      for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = probe(seeds[static_cast<std::size_t>(i)], p, ref_inv, opt);
    } else {
      for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = probe(seeds[static_cast<std::size_t>(i)], p, ref_inv, opt);
    }
    res.steps = step;
    const auto alive = std::find_if(out.begin(), out.end(), [](const ProbeResult& r) { return !r.converged; });
    if (alive == out.end()) {
      res.delta_End = delta;
      return res;
    }
    seeds = harvest(alive->x, p, opt.harvest_window, opt.probes, opt.seed + 1 + static_cast<std::uint64_t>(step));
  }
}

}  // namespace srcomb
