#pragma once

#include "srcomb/model.hpp"
#include "srcomb/ode.hpp"
#include "srcomb/trajectory.hpp"

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace srcomb {

struct CycleOptions {
  double transient = 5e3;
  double search = 3e3;        // window scanned for a recurrence after the transient
  double recur_tol = 1e-3;    // invariant distance accepted as an approximate return
  int max_crossings = 2000;
  double newton_tol = 1e-10;
  int newton_iters = 15;
  int retries = 1;            // transient extensions before giving up
  int samples = 1024;         // orbit samples per full period
  bool require_stable = true; // reject returns that refine to a repelling cycle
  double stability_slack = 1e-2;
  OdeOptions ode{1e-10, 1e-12};
  OdeOptions variational{1e-12, 1e-14};
};

// A periodic orbit of the group variables. After T_group the 6D state returns up to the rotation
// theta about z; T is the period in the frame co-rotating at Theta.
struct LimitCycle {
  double T = 0;
  double T_group = 0;
  double theta = 0;
  double Theta = 0;
  double omega_q = 0;
  bool z2_symmetric = false;
  double closure = 0;  // |R(-theta) x(T_group) - x(0)|
  double max_transverse = 0;  // largest multiplier modulus besides the two unit ones
  Vec6 x0;
  Trajectory orbit;    // one full period T, uniform samples
  ModelParams params;
};

enum class CycleStatus { Periodic, FixedPoint, NoRecurrence, NotSettled };

struct CycleSearch {
  CycleStatus status = CycleStatus::NoRecurrence;
  std::optional<LimitCycle> cycle;
  std::string message;
  bool periodic() const { return status == CycleStatus::Periodic; }
};

CycleSearch find_limit_cycle(const ModelParams& p, const SpinState& initial, const CycleOptions& opt = {});

// Periodic orbit of the reduced three-variable system.
struct ReducedCycle {
  double T = 0;
  Vec3 x0;
  double closure = 0;
  ReducedTrajectory orbit;  // one period, uniform samples
};

std::optional<ReducedCycle> find_reduced_cycle(const ModelParams& p, const ReducedState& initial,
                                               const CycleOptions& opt = {});
// Newton refinement from a guess of a point on the orbit and its period.
std::optional<ReducedCycle> refine_reduced_cycle(const ModelParams& p, const Vec3& x0, double T_guess,
                                                 const CycleOptions& opt = {});

// Closed-form cycle valid when W(1-W) << delta.
ReducedState harmonic_solution(const ModelParams& p, double t);
double harmonic_frequency(const ModelParams& p);
struct HarmonicValidity {
  double amplitude_ratio;  // W(1-W)/delta
  double frequency_ratio;  // W^2(1-W)/(2 delta) / omega^2
  bool valid;              // both below 0.1
};
HarmonicValidity harmonic_validity(const ModelParams& p);

// Cycle near delta = W = 1: s_y = a cn(b t, k).
struct EllipticParams {
  double a, b, k;
  double epsilon, r;
  double period;
};
class NoSolution : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};
std::optional<double> elliptic_k(double epsilon, double r);
EllipticParams elliptic_params(const ModelParams& p);
ReducedState elliptic_solution(const ModelParams& p, double t);

// Max |s_y(model) - s_y(orbit)| over one period divided by the orbit's s_y amplitude, with the
// model time origin aligned to the orbit's s_y maximum (cos-like models) or upward zero (sin-like).
enum class Alignment { Maximum, UpwardZero };
double profile_deviation(const ReducedCycle& c, const std::function<double(double)>& sy_model,
                         Alignment align);

// Transverse multipliers of a Z2-symmetric cycle, sorted with rho1 closest to one.
std::array<cplx, 3> floquet_multipliers(const ReducedCycle& c, const ModelParams& p,
                                        const OdeOptions& opt = {1e-11, 1e-13});
std::array<cplx, 3> floquet_multipliers(const LimitCycle& c, const ModelParams& p);
// All six multipliers of the 6D linearization over the full period.
std::array<cplx, 6> floquet_multipliers_full(const LimitCycle& c, const ModelParams& p);

struct SymmetryOptions {
  double horizon = 2e4;
  double window = 2e3;
  double threshold = 0.01;
  std::uint64_t seed = 7;
};
bool detect_symmetry_breaking(const ModelParams& p, const SymmetryOptions& opt = {});
double symmetry_asymmetry(const ModelParams& p, const SymmetryOptions& opt = {});

bool check_weak_z2(const LimitCycle& c, double tol = 1e-4);
double omega_q(const LimitCycle& c);

// rho2 - 1 of the Z2 cycle at (delta, W), from the reduced system.
double rho2_minus_one(double delta, double W, const CycleOptions& opt = {});
// delta where rho2 crosses one at fixed W, bracketed by [lo, hi].
double floquet_crossing_delta(double W, double lo, double hi, double tol = 1e-4);
// W where the Floquet symmetry-breaking line meets the NTSS Hopf line.
double symmetry_breaking_wc(double lo = 0.5, double hi = 0.65, double offset = 1e-3);

}  // namespace srcomb
