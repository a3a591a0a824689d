#include "srcomb/limit_cycles.hpp"

#include "srcomb/elliptic.hpp"
#include "srcomb/stability.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace srcomb {

namespace {

constexpr double kPi = std::numbers::pi;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Var6 = Eigen::Matrix<double, 42, 1>;
using Var3 = Eigen::Matrix<double, 12, 1>;

Mat6 rot6_matrix(double a) {
  Mat6 R = Mat6::Zero();
  const double c = std::cos(a), s = std::sin(a);
  for (int i : {0, 3}) {
    R(i, i) = c;
    R(i, i + 1) = -s;
    R(i + 1, i) = s;
    R(i + 1, i + 1) = c;
    R(i + 2, i + 2) = 1;
  }
  return R;
}

Vec6 gen6(const Vec6& x) {
  Vec6 g;
  g << -x[1], x[0], 0, -x[4], x[3], 0;
  return g;
}

Vec6 rhs6(const Vec6& x, const ModelParams& p) {
  Vec6 d;
  kernel::two_rhs(x, d, p.omega[0], p.omega[1], p.W);
  return d;
}

cplx splus(const Vec6& x, int e) { return {x[3 * e], x[3 * e + 1]}; }

std::pair<Vec6, Mat6> flow_var6(const Vec6& x, double T, const ModelParams& p, const OdeOptions& opt) {
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Var6& y, Var6& dy) {
    const Vec6 s = y.head<6>();
    Vec6 ds;
    kernel::two_rhs(s, ds, wA, wB, W);
    dy.head<6>() = ds;
    const Mat6 J = kernel::two_jacobian(s, wA, wB, W);
    Eigen::Map<const Mat6> M(y.data() + 6);
    Eigen::Map<Mat6> dM(dy.data() + 6);
    dM = J * M;
  };
  Var6 y;
  y.head<6>() = x;
  Eigen::Map<Mat6>(y.data() + 6) = Mat6::Identity();
  const auto r = integrate_ode(rhs, y, 0.0, T, opt);
  return {r.x.head<6>(), Eigen::Map<const Mat6>(r.x.data() + 6)};
}

Vec3 rhs3(const Vec3& x, const ModelParams& p) {
  Vec3 d;
  kernel::reduced_rhs(x, d, p.delta(), p.W);
  return d;
}

std::pair<Vec3, Eigen::Matrix3d> flow_var3(const Vec3& x, double T, const ModelParams& p,
                                           const OdeOptions& opt) {
  const double d = p.delta(), W = p.W;
  auto rhs = [=](double, const Var3& y, Var3& dy) {
    const Vec3 s = y.head<3>();
    Vec3 ds;
    kernel::reduced_rhs(s, ds, d, W);
    dy.head<3>() = ds;
    Eigen::Matrix3d J;
    J << s[2] - 0.5 * W, -0.5 * d, s[0], 0.5 * d, -0.5 * W, 0, -2 * s[0], 0, -W;
    Eigen::Map<const Eigen::Matrix3d> M(y.data() + 3);
    Eigen::Map<Eigen::Matrix3d> dM(dy.data() + 3);
    dM = J * M;
  };
  Var3 y;
  y.head<3>() = x;
  Eigen::Map<Eigen::Matrix3d>(y.data() + 3) = Eigen::Matrix3d::Identity();
  const auto r = integrate_ode(rhs, y, 0.0, T, opt);
  return {r.x.head<3>(), Eigen::Map<const Eigen::Matrix3d>(r.x.data() + 3)};
}

struct Crossing {
  double t;
  Vec6 x;
};

// Downward zero of g along a Hermite segment, by bisection.
template <class Vec, class G>
double bisect(const Segment<Vec>& seg, G&& g) {
  double a = seg.t0, b = seg.t1;
  double ga = g(seg(a), seg.derivative(a));
  for (int i = 0; i < 60 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++i) {
    const double m = 0.5 * (a + b);
    const double gm = g(seg(m), seg.derivative(m));
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct Newton6 {
  bool ok = false;
  Vec6 x;
  double T = 0, theta = 0, residual = 0;
};

Newton6 newton6(Vec6 x, double T, double th, const ModelParams& p, const CycleOptions& opt) {
  const Vec6 xref = x;
  const Vec6 fref = rhs6(xref, p);
  const Vec6 gref = gen6(xref);
  Newton6 out;
  for (int it = 0; it <= opt.newton_iters; ++it) {
    if (!(T > 0)) return out;
    const auto [y, M] = flow_var6(x, T, p, opt.variational);
    const Mat6 R = rot6_matrix(-th);
    const Vec6 Ry = R * y;
    const Vec6 r = Ry - x;
    out.residual = r.norm();
    out.x = x;
    out.T = T;
    out.theta = th;
    if (out.residual < opt.newton_tol) {
      out.ok = true;
      return out;
    }
    Eigen::Matrix<double, 8, 8> J = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> F;
    J.topLeftCorner<6, 6>() = R * M - Mat6::Identity();
    J.block<6, 1>(0, 6) = R * rhs6(y, p);
    J.block<6, 1>(0, 7) = -gen6(Ry);
    J.block<1, 6>(6, 0) = fref.transpose();
    J.block<1, 6>(7, 0) = gref.transpose();
    F.head<6>() = r;
    F[6] = fref.dot(x - xref);
    F[7] = gref.dot(x - xref);
    Eigen::Matrix<double, 8, 1> d = J.fullPivLu().solve(-F);
    const double n = d.norm();
    if (!std::isfinite(n)) return out;
    if (n > 0.2) d *= 0.2 / n;
    x += d.head<6>();
    T += d[6];
    th += d[7];
  }
  return out;
}

// Attempt at one period after a given transient.
CycleSearch search_once(const ModelParams& p, const Vec6& start, const CycleOptions& opt) {
  CycleSearch res;
  const Vec6 x = advance(start, p, opt.transient, opt.ode);

  // Fixed point when the rotation-invariant coordinates stop moving.
  {
    const double wA = p.omega[0], wB = p.omega[1], W = p.W;
    auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
    const Vec6 inv0 = invariants(x);
    Vec6 lo = inv0, hi = inv0;
    auto obs = [&](const Segment<Vec6>& seg) {
      const Vec6 v = invariants(seg.x1);
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
      return true;
    };
    integrate_ode(rhs, x, 0.0, std::min(opt.search, 200.0), opt.ode, obs);
    if ((hi - lo).maxCoeff() < 1e-7) {
      res.status = CycleStatus::FixedPoint;
      res.message = "trajectory settles on a fixed point";
      return res;
    }
  }

  // Poincare section: maxima of s_perp^A.
  std::vector<Crossing> cr;
  auto g = [](const Vec6& y, const Vec6& dy) { return y[0] * dy[0] + y[1] * dy[1]; };
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  double gprev = g(x, rhs6(x, p));
  auto obs = [&](const Segment<Vec6>& seg) {
    const double g1 = g(seg.x1, seg.f1);
    if (gprev > 0 && g1 <= 0) {
      const double tc = bisect(seg, g);
      cr.push_back({tc, seg(tc)});
    }
    gprev = g1;
    return static_cast<int>(cr.size()) < opt.max_crossings;
  };
  integrate_ode(rhs, x, 0.0, opt.search, opt.ode, obs);
  if (cr.size() < 2) {
    res.status = CycleStatus::NoRecurrence;
    res.message = "no section crossings in the search window";
    return res;
  }
  const Crossing& c0 = cr.front();
  const Vec6 inv0 = invariants(c0.x);
  std::size_t hit = 0;
  for (std::size_t m = 1; m < cr.size(); ++m) {
    if ((invariants(cr[m].x) - inv0).norm() < opt.recur_tol) {
      hit = m;
      break;
    }
  }
  if (hit == 0) {
    res.status = CycleStatus::NoRecurrence;
    res.message = "no recurrence of the group variables within the search window";
    return res;
  }
  const double Tg = cr[hit].t - c0.t;
  const cplx rot = std::conj(splus(c0.x, 0)) * splus(cr[hit].x, 0) +
                   std::conj(splus(c0.x, 1)) * splus(cr[hit].x, 1);
  const Newton6 nw = newton6(c0.x, Tg, std::arg(rot), p, opt);
  if (!nw.ok || (nw.x - c0.x).norm() > 10 * opt.recur_tol + 1e-2) {
    res.status = CycleStatus::NotSettled;
    res.message = "Newton refinement of the approximate return did not converge";
    return res;
  }

  Newton6 best = nw;
  // The first accepted return may be a multiple of the minimal group period.
  for (int div : {2, 3}) {
    const double Th = best.T / div;
    const Vec6 y = advance(best.x, p, Th, opt.variational);
    const cplx rh = std::conj(splus(best.x, 0)) * splus(y, 0) + std::conj(splus(best.x, 1)) * splus(y, 1);
    if ((invariants(y) - invariants(best.x)).norm() > 1e-6) continue;
    const Newton6 nh = newton6(best.x, Th, std::arg(rh), p, opt);
    if (nh.ok && std::abs(nh.T - Th) < 1e-6 * Th) {
      best = nh;
      break;
    }
  }

  LimitCycle lc;
  lc.params = p;
  lc.x0 = best.x;
  lc.T_group = best.T;
  lc.theta = std::remainder(best.theta, 2 * kPi);
  lc.closure = best.residual;
  {
    // Two multipliers sit at one (time shift and rotation); the rest decide attraction.
    const auto [y, M] = flow_var6(lc.x0, lc.T_group, p, opt.variational);
    (void)y;
    Eigen::EigenSolver<Mat6> es(rot6_matrix(-lc.theta) * M, false);
    std::array<cplx, 6> m;
    for (int i = 0; i < 6; ++i) m[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    std::sort(m.begin(), m.end(), [](cplx a, cplx b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
    lc.max_transverse = 0;
    for (std::size_t i = 2; i < 6; ++i) lc.max_transverse = std::max(lc.max_transverse, std::abs(m[i]));
  }
  if (opt.require_stable && lc.max_transverse > 1 + opt.stability_slack) {
    res.status = CycleStatus::NoRecurrence;
    res.message = "approximate return refines to an unstable cycle";
    return res;
  }

  // Continuous global phase over one group period.
  IntegrateOptions io;
  io.ode = opt.ode;
  io.dt_out = lc.T_group / 4096;
  const Trajectory g_tr = integrate(SpinState::from_vec6(lc.x0), p, lc.T_group, io);
  double darg = 0;
  cplx prev = splus(lc.x0, 0) * splus(lc.x0, 1);
  for (const auto& s : g_tr.states) {
    const Vec6 v = s.vec6();
    const cplx z = splus(v, 0) * splus(v, 1);
    darg += std::arg(z / prev);
    prev = z;
  }
  const double dPhi = 0.5 * darg;
  lc.Theta = dPhi / lc.T_group;
  lc.omega_q = lc.Theta - 0.5 * p.omega_sum();
  const double kappa = std::remainder(lc.theta - dPhi, 2 * kPi);
  lc.T = std::abs(kappa) > 0.5 * kPi ? 2 * lc.T_group : lc.T_group;

  const int n = std::max(8, opt.samples + (opt.samples % 2));
  io.dt_out = lc.T / n;
  io.ode.h_max = lc.T / 64;
  lc.orbit = integrate(SpinState::from_vec6(lc.x0), p, lc.T, io);
  double asym = 0;
  for (const auto& s : lc.orbit.states) {
    asym = std::max(asym, std::abs(std::hypot(s[0], s[1]) - std::hypot(s[3], s[4])) + std::abs(s[2] - s[5]));
  }
  lc.z2_symmetric = asym < 1e-6;
  res.status = CycleStatus::Periodic;
  res.cycle = std::move(lc);
  return res;
}

std::array<cplx, 3> sort_multipliers(const Eigen::Vector3cd& ev) {
  std::array<cplx, 3> m{ev[0], ev[1], ev[2]};
  auto it = std::min_element(m.begin(), m.end(), [](cplx a, cplx b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  std::iter_swap(m.begin(), it);
  std::sort(m.begin() + 1, m.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  return m;
}

}  // namespace

CycleSearch find_limit_cycle(const ModelParams& p, const SpinState& initial, const CycleOptions& opt) {
  if (p.n() != 2) throw std::invalid_argument("limit-cycle search supports two ensembles");
  CycleOptions o = opt;
  Vec6 x = initial.vec6();
  CycleSearch res;
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    res = search_once(p, x, o);
    if (res.status != CycleStatus::NotSettled) return res;
    x = advance(x, p, o.transient, o.ode);
  }
  return res;
}

std::optional<ReducedCycle> refine_reduced_cycle(const ModelParams& p, const Vec3& x0, double T_guess,
                                                 const CycleOptions& opt) {
  Vec3 x = x0;
  double T = T_guess;
  const Vec3 xref = x0;
  const Vec3 fref = rhs3(xref, p);
  ReducedCycle c;
  bool ok = false;
  for (int it = 0; it <= opt.newton_iters + 10; ++it) {
    if (!(T > 0)) return std::nullopt;
    const auto [y, M] = flow_var3(x, T, p, opt.variational);
    const Vec3 r = y - x;
    c.closure = r.norm();
    if (c.closure < opt.newton_tol) {
      ok = true;
      break;
    }
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    J.topLeftCorner<3, 3>() = M - Eigen::Matrix3d::Identity();
    J.block<3, 1>(0, 3) = rhs3(y, p);
    J.block<1, 3>(3, 0) = fref.transpose();
    Eigen::Vector4d F;
    F.head<3>() = r;
    F[3] = fref.dot(x - xref);
    Eigen::Vector4d d = J.fullPivLu().solve(-F);
    const double n = d.norm();
    if (!std::isfinite(n)) return std::nullopt;
    const double cap = 0.1 * std::max(1.0, T);
    if (n > cap) d *= cap / n;
    x += d.head<3>();
    T += d[3];
  }
  if (!ok) return std::nullopt;
  c.T = T;
  c.x0 = x;
  IntegrateOptions io;
  io.ode = opt.ode;
  io.ode.h_max = T / 64;
  io.dt_out = T / std::max(8, opt.samples + (opt.samples % 2));
  c.orbit = integrate(ReducedState::from(x), p, T, io);
  return c;
}

std::optional<ReducedCycle> find_reduced_cycle(const ModelParams& p, const ReducedState& initial,
                                               const CycleOptions& opt) {
  const double d = p.delta(), W = p.W;
  auto rhs = [=](double, const Vec3& y, Vec3& dy) { kernel::reduced_rhs(y, dy, d, W); };
  const Vec3 x = integrate_ode(rhs, initial.vec(), 0.0, opt.transient, opt.ode).x;
  struct C {
    double t;
    Vec3 x;
  };
  std::vector<C> cr;
  double prev = x[1];
  auto obs = [&](const Segment<Vec3>& seg) {
    if (prev < 0 && seg.x1[1] >= 0) {
      auto g = [](const Vec3& y, const Vec3&) { return -y[1]; };
      const double tc = bisect(seg, g);
      cr.push_back({tc, seg(tc)});
    }
    prev = seg.x1[1];
    return static_cast<int>(cr.size()) < opt.max_crossings;
  };
  integrate_ode(rhs, x, 0.0, opt.search, opt.ode, obs);
  if (cr.size() < 2) return std::nullopt;
  for (std::size_t m = 1; m < cr.size(); ++m) {
    if ((cr[m].x - cr[0].x).norm() < opt.recur_tol) {
      auto c = refine_reduced_cycle(p, cr[0].x, cr[m].t - cr[0].t, opt);
      if (c && (c->x0 - cr[0].x).norm() < 10 * opt.recur_tol + 1e-2) return c;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double harmonic_frequency(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  if (!(d > W)) throw std::domain_error("harmonic cycle needs delta > W");
  return 0.5 * std::sqrt(d * d - W * W);
}

ReducedState harmonic_solution(const ModelParams& p, double t) {
  const double d = p.delta(), W = p.W;
  if (!(W > 0 && W < 1)) throw std::domain_error("harmonic cycle needs 0 < W < 1");
  const double w = harmonic_frequency(p);
  const double alpha = std::atan(W / (2 * w));
  const double A = std::sqrt(2 * W * (1 - W));
  return {A * std::cos(w * t - alpha), A * std::sin(w * t), W - (W / d) * (1 - W) * std::sin(2 * w * t - alpha)};
}

HarmonicValidity harmonic_validity(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  HarmonicValidity v;
  v.amplitude_ratio = W * (1 - W) / d;
  const double w2 = 0.25 * (d * d - W * W);
  v.frequency_ratio = w2 > 0 ? (W * W * (1 - W) / (2 * d)) / w2 : std::numeric_limits<double>::infinity();
  v.valid = v.amplitude_ratio < 0.1 && v.frequency_ratio < 0.1;
  return v;
}

std::optional<double> elliptic_k(double epsilon, double r) {
  if (!(epsilon > 0) || r == 0) return std::nullopt;
  const double target = epsilon / r;
  const double kc = std::sqrt(0.5);
  boost::math::tools::eps_tolerance<double> tol(50);
  auto f = [target](double k) { return elliptic::Z(k) - target; };
  if (r > 0) {
    double lo = 1e-8, hi = kc - 1e-12;
    if (f(lo) >= 0) return std::sqrt(target);
    boost::uintmax_t it = 200;
    const auto b = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
    return 0.5 * (b.first + b.second);
  }
  const auto m = boost::math::tools::brent_find_minima([](double k) { return -elliptic::Z(k); }, 0.75, 0.9999, 50);
  const double kmax = m.first, zmax = -m.second;
  if (target > zmax) return std::nullopt;
  if (target == zmax) return kmax;
  boost::uintmax_t it = 200;
  const auto b = boost::math::tools::toms748_solve(f, kc + 1e-12, kmax, tol, it);
  return 0.5 * (b.first + b.second);
}

EllipticParams elliptic_params(const ModelParams& p) {
  EllipticParams e;
  e.epsilon = 1 - p.W;
  e.r = p.delta() - 1;
  const auto k = elliptic_k(e.epsilon, e.r);
  if (!k) throw NoSolution("no elliptic cycle for these (epsilon, r)");
  e.k = *k;
  const double q = 1 - 2 * e.k * e.k;
  e.b = std::sqrt(e.r / (2 * q));
  e.a = std::sqrt(2 * e.k * e.k * e.r / q);
  e.period = 4 * elliptic::K(e.k) * std::sqrt(2 * std::abs(q)) / std::sqrt(std::abs(e.r));
  return e;
}

ReducedState elliptic_solution(const ModelParams& p, double t) {
  const EllipticParams e = elliptic_params(p);
  const double sy = e.a * elliptic::cn(e.b * t, e.k);
  const double sx = p.W / p.delta() * sy;
  return {sx, sy, 1 - sx * sx / p.W};
}

double profile_deviation(const ReducedCycle& c, const std::function<double(double)>& sy_model,
                         Alignment align) {
  const auto& S = c.orbit.states;
  const auto& t = c.orbit.t;
  const std::size_t n = S.size() - 1;  // last sample repeats the first
  double lo = S[0].sy, hi = S[0].sy;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, S[i].sy);
    hi = std::max(hi, S[i].sy);
  }
  const double amp = 0.5 * (hi - lo);
  double t0 = 0;
  if (align == Alignment::Maximum) {
    std::size_t im = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (S[i].sy > S[im].sy) im = i;
    const double ym = S[(im + n - 1) % n].sy, y0 = S[im].sy, yp = S[(im + 1) % n].sy;
    const double den = ym - 2 * y0 + yp;
    const double off = den != 0 ? 0.5 * (ym - yp) / den : 0.0;
    t0 = t[im] + off * (t[1] - t[0]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = S[i].sy, b = S[(i + 1) % n].sy;
      if (a < 0 && b >= 0) {
        t0 = t[i] + (t[1] - t[0]) * (-a / (b - a));
        break;
      }
    }
  }
  double dev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = std::fmod(t[i] - t0 + c.T, c.T);
    dev = std::max(dev, std::abs(S[i].sy - sy_model(tau)));
  }
  return dev / amp;
}

std::array<cplx, 3> floquet_multipliers(const ReducedCycle& c, const ModelParams& p, const OdeOptions& opt) {
  const double d = p.delta(), W = p.W;
  auto rhs = [=](double, const Var3& y, Var3& dy) {
    const Vec3 s = y.head<3>();
    Vec3 ds;
    kernel::reduced_rhs(s, ds, d, W);
    dy.head<3>() = ds;
    Eigen::Matrix3d A;
    A << -0.5 * W, -0.5 * d, s[0], 0.5 * d, s[2] - 0.5 * W, 0, -s[0], -s[1], -W;
    Eigen::Map<const Eigen::Matrix3d> Q(y.data() + 3);
    Eigen::Map<Eigen::Matrix3d> dQ(dy.data() + 3);
    dQ = A * Q;
  };
  Var3 y;
  y.head<3>() = c.x0;
  Eigen::Map<Eigen::Matrix3d>(y.data() + 3) = Eigen::Matrix3d::Identity();
  const auto r = integrate_ode(rhs, y, 0.0, c.T, opt);
  const Eigen::Matrix3d M = Eigen::Map<const Eigen::Matrix3d>(r.x.data() + 3);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(M);
  const double cond = svd.singularValues()[0] / std::max(1e-300, svd.singularValues()[2]);
  if (!std::isfinite(cond) || cond > 1e14) throw std::runtime_error("monodromy matrix is ill-conditioned");
  Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
  return sort_multipliers(es.eigenvalues());
}

std::array<cplx, 3> floquet_multipliers(const LimitCycle& c, const ModelParams& p) {
  if (!c.z2_symmetric) throw std::invalid_argument("transverse Floquet analysis needs a Z2-symmetric cycle");
  const ReducedState r = reduce(SpinState::from_vec6(c.x0));
  const auto rc = refine_reduced_cycle(p, r.vec(), c.T);
  if (!rc) throw std::runtime_error("reduced cycle refinement failed");
  return floquet_multipliers(*rc, p);
}

std::array<cplx, 6> floquet_multipliers_full(const LimitCycle& c, const ModelParams& p) {
  const auto [y, M] = flow_var6(c.x0, c.T_group, p, OdeOptions{1e-12, 1e-14});
  (void)y;
  Mat6 Mr = rot6_matrix(-c.theta) * M;
  if (c.T > 1.5 * c.T_group) Mr = Mr * Mr;
  Eigen::EigenSolver<Mat6> es(Mr, false);
  std::array<cplx, 6> out;
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
  return out;
}

double symmetry_asymmetry(const ModelParams& p, const SymmetryOptions& opt) {
  const Vec6 x0 = random_unit_state(2, opt.seed).vec6();
  const Vec6 x = advance(x0, p, opt.horizon);
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  double m = std::abs(x[2] - x[5]);
  auto obs = [&](const Segment<Vec6>& seg) {
    for (int k = 1; k <= 4; ++k) {
      const Vec6 v = seg(seg.t0 + 0.25 * k * (seg.t1 - seg.t0));
      m = std::max(m, std::abs(v[2] - v[5]));
    }
    return true;
  };
  integrate_ode(rhs, x, 0.0, opt.window, OdeOptions{}, obs);
  return m;
}

bool detect_symmetry_breaking(const ModelParams& p, const SymmetryOptions& opt) {
  return symmetry_asymmetry(p, opt) > opt.threshold;
}

bool check_weak_z2(const LimitCycle& c, double tol) {
  const auto& S = c.orbit.states;
  const std::size_t n = S.size() - 1;
  if (n % 2 != 0) throw std::invalid_argument("orbit needs an even number of samples");
  const std::size_t h = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = S[i];
    const auto& b = S[(i + h) % n];
    if (std::abs(std::hypot(a[0], a[1]) - std::hypot(b[3], b[4])) > tol) return false;
    if (std::abs(a[2] - b[5]) > tol) return false;
  }
  return true;
}

double omega_q(const LimitCycle& c) { return c.omega_q; }

double rho2_minus_one(double delta, double W, const CycleOptions& opt) {
  const ModelParams p = ModelParams::two(delta, W);
  const ReducedState ic = delta > W && W < 1 ? harmonic_solution(p, 0.0) : ReducedState{0.5, 0.2, 0.0};
  const auto c = find_reduced_cycle(p, ic, opt);
  if (!c) throw std::runtime_error("no Z2-symmetric cycle found in the reduced system");
  const auto m = floquet_multipliers(*c, p);
  return std::abs(m[1]) - 1;
}

double floquet_crossing_delta(double W, double lo, double hi, double tol) {
  auto f = [W](double d) { return rho2_minus_one(d, W); };
  boost::uintmax_t it = 60;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, [tol](double a, double b) { return std::abs(b - a) < tol; }, it);
  return 0.5 * (r.first + r.second);
}

double symmetry_breaking_wc(double lo, double hi, double offset) {
  auto f = [offset](double W) { return rho2_minus_one(delta_minus(W) + offset, W); };
  boost::uintmax_t it = 60;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, [](double a, double b) { return std::abs(b - a) < 2e-4; }, it);
  return 0.5 * (r.first + r.second);
}

}  // namespace srcomb
