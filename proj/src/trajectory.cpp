#include "srcomb/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace srcomb {

namespace {

// Records samples on the uniform grid t0 + k*dt (or every step when dt <= 0).
template <class Vec, class State, class Rhs, class Convert>
BasicTrajectory<State> run(Rhs&& rhs, const Vec& x0, double t0, double t_end,
                           const IntegrateOptions& opt, Convert&& conv) {
  if (!(t_end > t0)) throw std::invalid_argument("t_end must exceed the start time");
  BasicTrajectory<State> tr;
  tr.rtol = opt.ode.rtol;
  tr.atol = opt.ode.atol;
  tr.t.push_back(t0);
  tr.states.push_back(conv(x0));
  const double dt = opt.dt_out;
  std::size_t k = 1;
  auto obs = [&](const Segment<Vec>& seg) {
    if (dt <= 0) {
      tr.t.push_back(seg.t1);
      tr.states.push_back(conv(seg.x1));
      return true;
    }
    for (;;) {
      const double tk = t0 + static_cast<double>(k) * dt;
      if (tk > seg.t1 * (1 + 1e-14) || tk > t_end * (1 + 1e-14)) break;
      tr.t.push_back(tk);
      tr.states.push_back(conv(seg(std::min(tk, seg.t1))));
      ++k;
    }
    return true;
  };
  auto r = integrate_ode(rhs, x0, t0, t_end, opt.ode, obs);
  tr.stats = r.stats;
  if (tr.t.back() < t_end - 1e-12 * std::max(1.0, t_end)) {
    tr.t.push_back(t_end);
    tr.states.push_back(conv(r.x));
  }
  return tr;
}

}  // namespace

Trajectory integrate(const SpinState& initial, const ModelParams& p, double t_end,
                     const IntegrateOptions& opt) {
  if (initial.n() != p.n()) throw std::invalid_argument("state dimension does not match ensemble count");
  if (p.n() == 2) {
    const double wA = p.omega[0], wB = p.omega[1], W = p.W;
    auto rhs = [=](double, const Vec6& x, Vec6& dx) { kernel::two_rhs(x, dx, wA, wB, W); };
    return run<Vec6, SpinState>(rhs, initial.vec6(), opt.t0, t_end, opt,
                                [](const Vec6& v) { return SpinState::from_vec6(v); });
  }
  const std::size_t n = p.n();
  auto rhs = [&](double, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
    kernel::full_rhs(x.data(), dx.data(), p.omega.data(), n, p.W);
  };
  return run<Eigen::VectorXd, SpinState>(rhs, initial.flat(), opt.t0, t_end, opt,
                                         [](const Eigen::VectorXd& v) { return SpinState(v); });
}

ReducedTrajectory integrate(const ReducedState& initial, const ModelParams& p, double t_end,
                            const IntegrateOptions& opt) {
  const double d = p.delta(), W = p.W;
  auto rhs = [=](double, const Vec3& x, Vec3& dx) { kernel::reduced_rhs(x, dx, d, W); };
  return run<Vec3, ReducedState>(rhs, initial.vec(), opt.t0, t_end, opt,
                                 [](const Vec3& v) { return ReducedState::from(v); });
}

GroupTrajectory integrate(const GroupState& initial, const ModelParams& p, double t_end,
                          const IntegrateOptions& opt) {
  using Vec = Eigen::Matrix<double, 6, 1>;
  auto pack = [](const GroupState& g) {
    Vec v;
    v << g.s_perp_A, g.s_perp_B, g.s_z_A, g.s_z_B, g.varphi, g.Phi;
    return v;
  };
  auto unpack = [](const Vec& v) { return GroupState{v[0], v[1], v[2], v[3], v[4], v[5]}; };
  auto rhs = [&](double, const Vec& x, Vec& dx) {
    const GroupRate r = eom_group(unpack(x), p);
    dx << r.s_perp_A, r.s_perp_B, r.s_z_A, r.s_z_B, r.varphi, r.Phi;
  };
  return run<Vec, GroupState>(rhs, pack(initial), opt.t0, t_end, opt, unpack);
}

Vec6 advance(const Vec6& x, const ModelParams& p, double duration, const OdeOptions& opt) {
  const double wA = p.omega[0], wB = p.omega[1], W = p.W;
  auto rhs = [=](double, const Vec6& y, Vec6& dy) { kernel::two_rhs(y, dy, wA, wB, W); };
  return integrate_ode(rhs, x, 0.0, duration, opt).x;
}

void write_csv(std::ostream& os, const Trajectory& tr) {
  os << "t";
  if (!tr.states.empty() && tr.states.front().n() == 2) {
    os << ",sxA,syA,szA,sxB,syB,szB";
  } else if (!tr.states.empty()) {
    for (std::size_t t = 0; t < tr.states.front().n(); ++t)
      os << ",sx" << t << ",sy" << t << ",sz" << t;
  }
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    os << tr.t[i];
    const auto& f = tr.states[i].flat();
    for (Eigen::Index j = 0; j < f.size(); ++j) os << ',' << f[j];
    os << '\n';
  }
}

void write_csv(const std::string& path, const Trajectory& tr) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write_csv(f, tr);
}

}  // namespace srcomb
