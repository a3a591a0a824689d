#include "srcomb/spectra.hpp"

#include "srcomb/limit_cycles.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace srcomb {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double local_max(const CombSpectrum& s, double f, double half_width) {
  const auto lo = std::lower_bound(s.f.begin(), s.f.end(), f - half_width);
  const auto hi = std::upper_bound(s.f.begin(), s.f.end(), f + half_width);
  double m = 0;
  for (auto it = lo; it != hi; ++it) m = std::max(m, s.power[static_cast<std::size_t>(it - s.f.begin())]);
  return m;
}

}  // namespace

std::vector<cplx> lminus_series(const Trajectory& tr) {
  std::vector<cplx> out;
  out.reserve(tr.size());
  for (const auto& s : tr.states) out.push_back(s.l_minus());
  return out;
}

std::vector<cplx> lminus_record(const ModelParams& p, const SpinState& x0, double dt, std::size_t n) {
  if (n < 2 || !(dt > 0)) throw std::invalid_argument("record needs n >= 2 and dt > 0");
  IntegrateOptions io;
  io.dt_out = dt;
  io.ode = OdeOptions{1e-10, 1e-12};
  const Trajectory tr = integrate(x0, p, dt * static_cast<double>(n - 1), io);
  std::vector<cplx> l = lminus_series(tr);
  l.resize(n, l.back());
  return l;
}

CombSpectrum power_spectrum(const std::vector<cplx>& x, double dt, const SpectrumOptions& opt) {
  const std::size_t N = x.size();
  if (N < opt.min_samples) throw std::invalid_argument("trajectory too short for a spectrum");
  if (!(dt > 0)) throw std::invalid_argument("sample spacing must be positive");
  const int pad = std::max(1, opt.zero_pad);
  const std::size_t M = N * static_cast<std::size_t>(pad);

  std::vector<double> w(N, 1.0);
  if (opt.window == Window::Hann)
    for (std::size_t n = 0; n < N; ++n)
      w[n] = 0.5 * (1 - std::cos(2 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(N)));
  double wsum = 0;
  for (double v : w) wsum += v;

  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * M));
  if (!buf) throw std::bad_alloc();
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(M), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t n = 0; n < M; ++n) {
    const cplx v = n < N ? x[n] * w[n] : cplx(0);
    buf[n][0] = v.real();
    buf[n][1] = v.imag();
  }
  fftw_execute(plan);

  CombSpectrum s;
  s.dt = dt;
  s.samples = N;
  s.zero_pad = pad;
  s.bin = 1.0 / (static_cast<double>(N) * dt);
  s.f.resize(M);
  s.power.resize(M);
  const double norm = 1.0 / (wsum * wsum);
  const double df = 1.0 / (static_cast<double>(M) * dt);
  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t k = (i + M / 2) % M;  // negative frequencies first
    const double kk = k < M / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(M);
    s.f[i] = kk * df;
    s.power[i] = (buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1]) * norm;
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return s;
}

CombSpectrum power_spectrum(const Trajectory& tr, const SpectrumOptions& opt) {
  if (tr.size() < 2) throw std::invalid_argument("trajectory too short for a spectrum");
  const double dt = tr.t[1] - tr.t[0];
  for (std::size_t i = 2; i < tr.size(); ++i)
    if (std::abs(tr.t[i] - tr.t[i - 1] - dt) > 1e-9 * std::max(1.0, dt))
      throw std::invalid_argument("spectrum needs uniformly sampled trajectories");
  return power_spectrum(lminus_series(tr), dt, opt);
}

void extract_comb(CombSpectrum& s, const PeakOptions& opt) {
  const auto& P = s.power;
  const std::size_t M = P.size();
  const double pmax = *std::max_element(P.begin(), P.end());
  if (!(pmax > 0)) throw std::runtime_error("no peaks above threshold");
  const double df = s.f[1] - s.f[0];

  std::vector<Peak> cand;
  for (std::size_t i = 1; i + 1 < M; ++i) {
    if (!(P[i] > P[i - 1] && P[i] >= P[i + 1] && P[i] >= opt.threshold * pmax)) continue;
    const double ym = std::log(std::max(P[i - 1], 1e-300)), y0 = std::log(P[i]),
                 yp = std::log(std::max(P[i + 1], 1e-300));
    const double den = ym - 2 * y0 + yp;
    // Gaussian interpolation only inside a main lobe; next to a window null the log blows up.
    const bool lobe = std::min(P[i - 1], P[i + 1]) > 1e-3 * P[i];
    const double off = lobe && den < 0 ? std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5) : 0.0;
    cand.push_back({s.f[i] + off * df, std::min(std::exp(y0 - 0.25 * (ym - yp) * off), 2 * P[i])});
  }
  std::sort(cand.begin(), cand.end(), [](const Peak& a, const Peak& b) { return a.height > b.height; });
  std::vector<Peak> acc;
  for (const auto& c : cand) {
    bool ok = true;
    for (const auto& a : acc)
      if (std::abs(a.f - c.f) < opt.min_sep_bins * s.bin) ok = false;
    if (ok) acc.push_back(c);
  }
  if (acc.empty()) throw std::runtime_error("no peaks above threshold");
  const double hmax = acc.front().height;
  std::sort(acc.begin(), acc.end(), [](const Peak& a, const Peak& b) { return a.f < b.f; });
  s.peaks = acc;

  std::vector<Peak> sig;
  for (const auto& p : acc)
    if (p.height >= opt.significant * hmax) sig.push_back(p);
  if (sig.size() < 2 && !opt.f0_hint) {
    s.parity = Parity::Single;
    s.f0 = 0;
    s.fq = sig.front().f;
    s.even_ratio = 0;
    return;
  }

  double d = 0;
  if (opt.f0_hint) {
    d = *opt.f0_hint;
  } else {
    d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sig.size(); ++i) d = std::min(d, sig[i].f - sig[i - 1].f);
  }
  auto circular_offset = [&](double spacing) {
    cplx z = 0;
    for (const auto& p : sig) z += p.height * std::polar(1.0, 2 * std::numbers::pi * p.f / spacing);
    return spacing * std::arg(z) / (2 * std::numbers::pi);
  };
  double f0 = d, fq = circular_offset(d);
  if (!opt.f0_hint && std::abs(fq) > 0.45 * d) {
    // Adjacent lines two orders apart: an odd comb around fq - d/2.
    f0 = 0.5 * d;
    fq -= std::copysign(0.5 * d, fq);
  }
  // Least-squares refinement of f = fq + p f0.
  {
    double sp = 0, sf = 0, spp = 0, spf = 0;
    int pmin = 0, pmax_ = 0;
    for (const auto& p : sig) {
      const double k = std::round((p.f - fq) / f0);
      sp += k;
      sf += p.f;
      spp += k * k;
      spf += k * p.f;
      pmin = std::min(pmin, static_cast<int>(k));
      pmax_ = std::max(pmax_, static_cast<int>(k));
    }
    const double n = static_cast<double>(sig.size());
    const double den = n * spp - sp * sp;
    if (pmax_ > pmin && den > 0) {
      f0 = (n * spf - sp * sf) / den;
      fq = (sf - f0 * sp) / n;
    }
  }
  s.f0 = f0;
  s.fq = fq;

  int kmin = 0, kmax = 0;
  for (const auto& p : sig) {
    const int k = static_cast<int>(std::round((p.f - fq) / f0));
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  double even = 0;
  for (int k = kmin - 1; k <= kmax + 1; ++k)
    if (k % 2 == 0) even = std::max(even, local_max(s, fq + k * f0, 2 * s.bin));
  s.even_ratio = even / hmax;
  s.parity = s.even_ratio < opt.even_floor ? Parity::OddOnly : Parity::EvenAndOdd;
}

double predicted_f0(const ModelParams& p, F0Regime regime) {
  const double d = p.delta(), W = p.W;
  constexpr double pi = std::numbers::pi;
  switch (regime) {
    case F0Regime::WtoOne:
      if (!(d > 1)) throw std::domain_error("W -> 1 comb needs delta > 1");
      return std::sqrt(d * d - 1) / (4 * pi);
    case F0Regime::WtoZero:
      return d / (4 * pi);
    case F0Regime::LargeDelta:
      if (!(d > W)) throw std::domain_error("large-delta comb needs delta > W");
      return std::sqrt(d * d - W * W) / (4 * pi);
    case F0Regime::Elliptic:
      return 1.0 / elliptic_params(p).period;
  }
  throw std::invalid_argument("unknown regime");
}

double mirror_asymmetry(const CombSpectrum& s, double significant) {
  if (s.peaks.empty()) throw std::runtime_error("extract peaks before testing reflection symmetry");
  double hmax = 0;
  for (const auto& p : s.peaks) hmax = std::max(hmax, p.height);
  double worst = 0;
  for (const auto& p : s.peaks) {
    if (p.height < significant * hmax) continue;
    double mirror = 0;
    for (const auto& q : s.peaks)
      if (std::abs(q.f + p.f) < 2 * s.bin) mirror = std::max(mirror, q.height);
    worst = std::max(worst, std::abs(p.height - mirror) / std::max(p.height, mirror));
  }
  return worst;
}

bool reflection_symmetry(const CombSpectrum& s, double tol) { return mirror_asymmetry(s) < tol; }

double to_si(double f, double N, double omega_rabi, double kappa) {
  if (!(N > 0 && omega_rabi > 0 && kappa > 0)) throw std::invalid_argument("SI conversion needs positive inputs");
  return f * N * omega_rabi * omega_rabi / kappa;
}

}  // namespace srcomb
