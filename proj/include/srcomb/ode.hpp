#pragma once

// Dormand-Prince 5(4) with cubic Hermite dense output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace srcomb {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-11;
  double h_init = 0.0;  // 0 picks a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 100'000'000;
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

class StepSizeUnderflow : public std::runtime_error {
 public:
  explicit StepSizeUnderflow(double t)
      : std::runtime_error("step size underflow at t = " + std::to_string(t)), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

// One accepted step, interpolated by the cubic Hermite polynomial through both ends.
template <class Vec>
struct Segment {
  double t0, t1;
  const Vec& x0;
  const Vec& f0;
  const Vec& x1;
  const Vec& f1;

  Vec operator()(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    Vec r = h00 * x0 + (h10 * h) * f0 + h01 * x1 + (h11 * h) * f1;
    return r;
  }
  Vec derivative(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
    Vec r = d00 * x0 + d10 * f0 + d01 * x1 + d11 * f1;
    return r;
  }
};

template <class Vec>
struct OdeResult {
  Vec x;
  double t;
  StepStats stats;
  bool stopped = false;  // observer requested an early stop
};

namespace detail {

template <class Vec>
double err_norm(const Vec& err, const Vec& x0, const Vec& x1, double rtol, double atol) {
  double acc = 0;
  const auto n = x0.size();
  for (decltype(x0.size()) i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(x0[i]), std::abs(x1[i]));
    const double e = err[i] / sc;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace detail

// Integrates x' = f(t, x, dx) from t0 to t1. The observer is called as obs(Segment) after each
// accepted step and may return false to stop.
template <class Vec, class Rhs, class Observer>
OdeResult<Vec> integrate_ode(Rhs&& f, Vec x, double t0, double t1, const OdeOptions& opt,
                             Observer&& obs) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeResult<Vec> res{x, t0, {}, false};
  if (t1 <= t0) return res;

  Vec k1 = x, k2 = x, k3 = x, k4 = x, k5 = x, k6 = x, k7 = x, xt = x, xn = x, err = x;
  f(t0, x, k1);
  res.stats.rhs_evals = 1;

  double h = opt.h_init;
  if (h <= 0) {
    const double d0 = detail::err_norm(x, x, x, opt.rtol, opt.atol);
    const double d1 = detail::err_norm(k1, x, x, opt.rtol, opt.atol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    xt = x + h0 * k1;
    f(t0 + h0, xt, k2);
    ++res.stats.rhs_evals;
    Vec dk = k2 - k1;
    const double d2 = detail::err_norm(dk, x, x, opt.rtol, opt.atol) / h0;
    const double m = std::max(d1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    h = std::min(100 * h0, h1);
  }
  h = std::min({h, opt.h_max, t1 - t0});

  double t = t0;
  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) throw std::runtime_error("maximum step count exceeded");
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    const double min_h = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_h) throw StepSizeUnderflow(t);

    xt = x + h * (a21 * k1);
    f(t + c2 * h, xt, k2);
    xt = x + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, xt, k3);
    xt = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, xt, k4);
    xt = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, xt, k5);
    xt = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, xt, k6);
    xn = x + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, xn, k7);
    res.stats.rhs_evals += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = detail::err_norm(err, x, xn, opt.rtol, opt.atol);

    if (!(en <= 1.0)) {
      ++res.stats.rejected;
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= fac;
      continue;
    }

    const double tn = last ? t1 : t + h;
    ++res.stats.accepted;
    const bool go = obs(Segment<Vec>{t, tn, x, k1, xn, k7});
    x = xn;
    k1 = k7;
    t = tn;
    if (!go) {
      res.stopped = true;
      break;
    }
    const double fac = en == 0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
    h = std::min(h * fac, opt.h_max);
  }
  res.x = x;
  res.t = t;
  return res;
}

template <class Vec, class Rhs>
OdeResult<Vec> integrate_ode(Rhs&& f, Vec x, double t0, double t1, const OdeOptions& opt) {
  return integrate_ode(std::forward<Rhs>(f), std::move(x), t0, t1, opt,
                       [](const Segment<Vec>&) { return true; });
}

}  // namespace srcomb
