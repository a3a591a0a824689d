#pragma once

#include "srcomb/model.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace srcomb {

enum class HopfBranch { TSS, NTSS };
enum class HopfType { Supercritical, Subcritical, Indeterminate };

// R[i][j]: coefficient j of component i over (x^2, y^2, xy, xz, yz, z^2).
using QuadTable = std::array<std::array<double, 6>, 3>;

struct HopfData {
  double lambda_r = 0, gamma = 0, omega = 0;
  Vec3 v1, vr, vi;
  Vec3 fixed_point;  // reduced coordinates
  QuadTable R{};
  double h1 = 0, h2 = 0, h3 = 0;
  cplx alpha1;
  double a1 = 0;
};

class NearResonance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

HopfData hopf_a1(const ModelParams& p, HopfBranch which);
HopfType classify_hopf(const ModelParams& p, HopfBranch which, double tol = 1e-6);

// Quadratic coefficient table of the reduced system in the coordinates x = Q s'.
QuadTable quadratic_table(const Eigen::Matrix3d& Q);

double pitchfork_coeff(double delta);
// Same coefficient from the center-manifold chain with numerically built tables.
double pitchfork_coeff_chain(const ModelParams& p);

// delta below the NTSS Hopf line where a1 changes sign.
double delta_a1_zero(double W);

struct CoexistenceOptions {
  double step = 1e-3;
  double horizon = 2e4;
  double proximity = 1e-4;
  int probes = 10;
  double transient = 5e3;
  double harvest_window = 2e3;
  double start_offset = 5e-4;  // first point is delta_H + start_offset
  double max_span = 0.2;       // give up this far below delta_H
  std::uint64_t seed = 20240601;
  int threads = 0;  // 0: environment default
  bool parallel = true;
};

struct CoexistenceResult {
  double W = 0;
  double delta_H = 0;
  double delta_End = 0;
  int steps = 0;
};

CoexistenceResult coexistence_left_boundary(double W, const CoexistenceOptions& opt = {});

struct TaperSlopes {
  double tan_right;
  double tan_left;
  double k_at_max;
  double angle_deg;
};
TaperSlopes taper_slopes();

// Normal-form chain internals, exposed for cross-checks.
namespace nf {
// Coefficients R_+^{(k,l)} for k = 2, 3 of the pre-normal form, index [k-2][l].
struct PlusTable {
  std::array<cplx, 3> r2;
  std::array<cplx, 4> r3;
  std::array<cplx, 3> r2_minus;
};
PlusTable plus_coefficients(const HopfData& h);
cplx alpha1_closed_form(const HopfData& h);
}  // namespace nf

}  // namespace srcomb
