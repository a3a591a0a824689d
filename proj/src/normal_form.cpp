#include "srcomb/normal_form.hpp"

#include "srcomb/fixed_points.hpp"
#include "srcomb/stability.hpp"
#include "srcomb/elliptic.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>

namespace srcomb {

namespace {

// Polynomial in (s+, s-) truncated at total degree 3; c[i][j] multiplies s+^i s-^j.
struct Poly {
  std::array<std::array<cplx, 4>, 4> c{};

  Poly operator+(const Poly& o) const {
    Poly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j + i < 4; ++j) r.c[i][j] = c[i][j] + o.c[i][j];
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o * cplx(-1.0); }
  Poly operator*(cplx a) const {
    Poly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j + i < 4; ++j) r.c[i][j] = a * c[i][j];
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j)
        for (int k = 0; i + j + k < 4; ++k)
          for (int l = 0; i + j + k + l < 4; ++l) r.c[i + k][j + l] += c[i][j] * o.c[k][l];
    return r;
  }
  Poly d_plus() const {
    Poly r;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; i + j < 4; ++j) r.c[i - 1][j] = double(i) * c[i][j];
    return r;
  }
  Poly d_minus() const {
    Poly r;
    for (int i = 0; i < 4; ++i)
      for (int j = 1; i + j < 4; ++j) r.c[i][j - 1] = double(j) * c[i][j];
    return r;
  }
  Poly degree(int d) const {
    Poly r;
    for (int i = 0; i <= d; ++i) r.c[i][d - i] = c[i][d - i];
    return r;
  }
};

using Field = std::array<Poly, 2>;

Field operator+(const Field& a, const Field& b) { return {a[0] + b[0], a[1] + b[1]}; }
Field operator-(const Field& a, const Field& b) { return {a[0] - b[0], a[1] - b[1]}; }

// (DA . B)_a = dA_a/ds+ B_+ + dA_a/ds- B_-
Field lie_apply(const Field& A, const Field& B) {
  Field r;
  for (int a = 0; a < 2; ++a) r[a] = A[a].d_plus() * B[0] + A[a].d_minus() * B[1];
  return r;
}

Field degree(const Field& f, int d) { return {f[0].degree(d), f[1].degree(d)}; }

struct Chain {
  Field V1, V2, V3, phi2, Vt3;
};

// Pre-normal form on the center manifold and the near-identity reduction up to third order.
Chain build_chain(const HopfData& h) {
  const double g = h.gamma, w = h.omega;
  const auto& R = h.R;
  const cplx I(0, 1);
  Poly x, y, one;
  x.c[1][0] = 0.5;
  x.c[0][1] = 0.5;
  y.c[1][0] = -0.5 * I;
  y.c[0][1] = 0.5 * I;
  const Poly xx = x * x, yy = y * y, xy = x * y;
  const Poly hz = xx * cplx(h.h1) + yy * cplx(h.h2) + xy * cplx(h.h3);
  auto comp = [&](int i) {
    return xx * cplx(R[i][0]) + yy * cplx(R[i][1]) + xy * cplx(R[i][2]) +
           hz * (x * cplx(R[i][3]) + y * cplx(R[i][4]));
  };
  const Poly xd = x * cplx(g) + y * cplx(w) + comp(0);
  const Poly yd = x * cplx(-w) + y * cplx(g) + comp(1);
  const Field V = {xd + yd * I, xd - yd * I};

  Chain c;
  c.V1 = degree(V, 1);
  c.V2 = degree(V, 2);
  c.V3 = degree(V, 3);
  const cplx lp(g, -w), lm(g, w);
  for (int i = 0; i <= 2; ++i) {
    const int j = 2 - i;
    const cplx Lp = lp - double(i) * lp - double(j) * lm;
    const cplx Lm = lm - double(i) * lp - double(j) * lm;
    if (std::abs(Lp) < 1e-14 || std::abs(Lm) < 1e-14) throw NearResonance("second-order resonance");
    c.phi2[0].c[i][j] = c.V2[0].c[i][j] / Lp;
    c.phi2[1].c[i][j] = c.V2[1].c[i][j] / Lm;
  }
  c.Vt3 = degree(c.V3 - lie_apply(c.V2, c.phi2) + lie_apply(c.phi2, c.V2) -
                     lie_apply(c.phi2, lie_apply(c.V1, c.phi2)) + lie_apply(c.phi2, lie_apply(c.phi2, c.V1)),
                 3);
  return c;
}

void check_denominators(double g, double lr, double w) {
  const double d = 2 * g - lr;
  if (std::abs(d) < 1e-12 || d * d + 4 * w * w < 1e-20)
    throw NearResonance("center-manifold denominators vanish (2 gamma - lambda_r ~ 0)");
}

HopfData finish(HopfData h) {
  Eigen::Matrix3d Q;
  Q.col(0) = h.vr;
  Q.col(1) = h.vi;
  Q.col(2) = h.v1;
  h.R = quadratic_table(Q);
  check_denominators(h.gamma, h.lambda_r, h.omega);
  const double D = 2 * h.gamma - h.lambda_r, w = h.omega;
  const auto& R = h.R;
  h.h3 = (2 * w * (R[2][1] - R[2][0]) + D * R[2][2]) / (D * D + 4 * w * w);
  h.h1 = (h.h3 * w + R[2][0]) / D;
  h.h2 = (-h.h3 * w + R[2][1]) / D;
  const Chain c = build_chain(h);
  h.alpha1 = c.Vt3[0].c[2][1];
  h.a1 = h.alpha1.real();
  return h;
}

}  // namespace

QuadTable quadratic_table(const Eigen::Matrix3d& Q) {
  // Quadratic part of the shifted reduced system: (x_z x_x, 0, -x_x^2).
  const Eigen::RowVector3d a = Q.row(0), c = Q.row(2);
  const Eigen::Matrix3d M0 = 0.5 * (c.transpose() * a + a.transpose() * c);
  const Eigen::Matrix3d M2 = -(a.transpose() * a);
  const Eigen::Matrix3d Qi = Q.inverse();
  QuadTable T{};
  for (int i = 0; i < 3; ++i) {
    const Eigen::Matrix3d S = Qi(i, 0) * M0 + Qi(i, 2) * M2;
    T[i] = {S(0, 0), S(1, 1), 2 * S(0, 1), 2 * S(0, 2), 2 * S(1, 2), S(2, 2)};
  }
  return T;
}

HopfData hopf_a1(const ModelParams& p, HopfBranch which) {
  const double d = p.delta(), W = p.W;
  HopfData h;
  if (which == HopfBranch::TSS) {
    if (!(d > 1)) throw std::domain_error("TSS Hopf pair needs delta > 1");
    h.lambda_r = -W;
    h.gamma = 0.5 * (1 - W);
    h.omega = 0.5 * std::sqrt(d * d - 1);
    h.fixed_point = Vec3(0, 0, 1);
    h.v1 = Vec3(0, 0, 1);
    h.vr = Vec3(1, d, 0);
    h.vi = Vec3(std::sqrt(d * d - 1), 0, 0);
    return finish(h);
  }
  const auto br = ntss_reduced(p);
  if (!br) throw std::domain_error("NTSS does not exist at these parameters");
  const ReducedState s0 = (*br)[0];
  h.fixed_point = s0.vec();
  const Eigen::Matrix3d J = jacobian_reduced(s0, p);
  Eigen::EigenSolver<Eigen::Matrix3d> es(J, false);
  int ir = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(es.eigenvalues()[i].imag()) < std::abs(es.eigenvalues()[ir].imag())) ir = i;
  cplx pair(0, 0);
  for (int i = 0; i < 3; ++i)
    if (i != ir && es.eigenvalues()[i].imag() > 0) pair = es.eigenvalues()[i];
  if (pair.imag() < 1e-12) throw std::domain_error("NTSS Jacobian has no complex pair");
  h.lambda_r = es.eigenvalues()[ir].real();
  h.gamma = pair.real();
  h.omega = pair.imag();
  const double g = h.gamma, w = h.omega, lr = h.lambda_r, sx0 = s0.sx;
  const double den = (2 * g + W) * (2 * g + W) + 4 * w * w;
  h.v1 = Vec3(lr + W, d * (lr + W) / (2 * lr + W), -2 * sx0);
  h.vr = Vec3(g + W, d * ((2 * g + W) * (g + W) + 2 * w * w) / den, -2 * sx0);
  h.vi = Vec3(w, -W * w * d / den, 0);
  return finish(h);
}

HopfType classify_hopf(const ModelParams& p, HopfBranch which, double tol) {
  const double a1 = hopf_a1(p, which).a1;
  if (a1 < -tol) return HopfType::Supercritical;
  if (a1 > tol) return HopfType::Subcritical;
  return HopfType::Indeterminate;
}

double pitchfork_coeff(double delta) {
  if (!(delta > 0 && delta < 1)) throw std::domain_error("pitchfork coefficient needs 0 < delta < 1");
  const double r = std::sqrt(1 - delta * delta);
  return -(1 + r) * (1 + r) / (2 * delta * delta * r);
}

double pitchfork_coeff_chain(const ModelParams& p) {
  const double d = p.delta(), W = p.W;
  if (!(d > 0 && d < 1)) throw std::domain_error("pitchfork coefficient needs 0 < delta < 1");
  const double r = std::sqrt(1 - d * d);
  const double lx = 0.5 * (1 - W + r), lz = -W;
  Eigen::Matrix3d Q;
  Q.col(0) = Vec3((1 + r) / d, 1, 0);
  Q.col(1) = Vec3((1 - r) / d, 1, 0);
  Q.col(2) = Vec3(0, 0, 1);
  const QuadTable R = quadratic_table(Q);
  const double g1 = R[2][0] / (2 * lx - lz);
  return R[0][3] * g1;
}

double delta_a1_zero(double W) {
  const double dH = delta_minus(W);
  auto f = [W](double d) { return hopf_a1(ModelParams::two(d, W), HopfBranch::NTSS).a1; };
  double hi = dH - 1e-4;
  double fhi = f(hi);
  if (!(fhi > 0)) throw std::runtime_error("a1 is not positive at the NTSS Hopf line");
  double lo = hi;
  double flo = fhi;
  while (flo > 0) {
    hi = lo;
    fhi = flo;
    lo -= 0.01;
    if (lo <= 0) throw std::runtime_error("no sign change of a1 below the Hopf line");
    flo = f(lo);
  }
  boost::uintmax_t it = 100;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(40), it);
  return 0.5 * (r.first + r.second);
}

TaperSlopes taper_slopes() {
  auto negZ = [](double k) { return -elliptic::Z(k); };
  const auto m = boost::math::tools::brent_find_minima(negZ, 0.75, 0.9999, 50);
  TaperSlopes t;
  t.tan_right = 2.0;
  t.tan_left = m.second;  // -max Z
  t.k_at_max = m.first;
  t.angle_deg = (std::atan(t.tan_right) - std::atan(t.tan_left)) * 180 / std::numbers::pi;
  return t;
}

namespace nf {

PlusTable plus_coefficients(const HopfData& h) {
  const Chain c = build_chain(h);
  PlusTable t;
  for (int l = 0; l <= 2; ++l) {
    t.r2[l] = c.V2[0].c[l][2 - l];
    t.r2_minus[l] = c.V2[1].c[l][2 - l];
  }
  for (int l = 0; l <= 3; ++l) t.r3[l] = c.V3[0].c[l][3 - l];
  return t;
}

cplx alpha1_closed_form(const HopfData& h) {
  const PlusTable t = plus_coefficients(h);
  const double g = h.gamma, w = h.omega;
  const cplx I(0, 1);
  auto lam = [&](int k, int l, int sign) { return g * (1 - k) - I * w * double(k - 2 * l + sign); };
  cplx pp[3], pm[3];
  for (int l = 0; l <= 2; ++l) {
    pp[l] = t.r2[l] / lam(2, l, +1);
    pm[l] = t.r2_minus[l] / lam(2, l, -1);
  }
  const cplx* Rp = t.r2.data();
  const cplx* Rm = t.r2_minus.data();
  return t.r3[2] + Rp[1] * (pp[2] - pm[1]) + pp[1] * (Rm[1] - Rp[2]) +
         2.0 * (Rm[2] * pp[0] - Rp[0] * pm[2]) + g * (2.0 * pm[2] * pp[0] + pp[1] * (pm[1] + 3.0 * pp[2])) +
         I * w * (pp[1] * (pp[2] - pm[1]) - 6.0 * pm[2] * pp[0]);
}

}  // namespace nf

}  // namespace srcomb
