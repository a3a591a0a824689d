#pragma once

#include "srcomb/model.hpp"

#include <array>
#include <optional>

namespace srcomb {

enum class FixedPointKind { TSS, NTSS, NoPump, Origin };

struct FixedPoint {
  FixedPointKind kind;
  SpinState state;
  double Phi = 0.0;
};

// Closed-form NTSS quantities for two ensembles.
struct NtssValues {
  double s_z;
  double l_perp;
  double varphi;
  double s_perp;  // per-ensemble transverse length
};

FixedPoint tss(const ModelParams& p);
bool ntss_exists(double delta, double W);
std::optional<NtssValues> ntss_values(const ModelParams& p);
std::optional<FixedPoint> ntss(const ModelParams& p, double Phi = 0.0);
std::optional<std::array<ReducedState, 2>> ntss_reduced(const ModelParams& p);

// Single ensemble, delta = 0 reference problem (n = 1 state).
FixedPoint single_clock_attractor(double W);

// Transverse length of the collective spin for delta = W = 0.
double toda_lperp(double t, double C1, double C2);
struct TodaConstants {
  double C1, C2;
};
// Constants matching l_perp(0) and l_z(0).
TodaConstants toda_fit(double l_perp0, double l_z0);

enum class NoPumpVerdict { Stable, Unstable };
NoPumpVerdict no_pump_classify(const SpinState& final_state, const ModelParams& p);

}  // namespace srcomb
