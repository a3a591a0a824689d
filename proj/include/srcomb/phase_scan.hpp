#pragma once

#include "srcomb/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srcomb {

enum class PhaseLabel { TSS, NTSS, Z2_LIMIT_CYCLE, ASYM_LIMIT_CYCLE, NONPERIODIC, COEXIST_NTSS };

std::string to_string(PhaseLabel l);
std::optional<PhaseLabel> parse_label(std::string_view s);

struct PointDiagnostics {
  bool periodic = false;
  double f0 = std::numeric_limits<double>::quiet_NaN();
  double omega_q = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> multipliers;
  double asymmetry = std::numeric_limits<double>::quiet_NaN();  // max |s_z^A - s_z^B| over the final window
  int fixed_probes = 0;
  int dynamic_probes = 0;
  bool analytic = false;  // label taken from the stability regions without integration
};

struct PhasePoint {
  double delta = 0;
  double W = 0;
  PhaseLabel label = PhaseLabel::NONPERIODIC;
  PointDiagnostics diag;
};

struct ClassifyOptions {
  int probes = 5;
  double transient = 5e3;
  double horizon = 2e4;
  double window = 2e3;          // tail of the horizon used for the symmetry test
  double fixed_tol = 1e-9;      // |rhs| accepted as stationary
  double tss_radius = 1e-3;     // collective l_perp below this means non-radiating (TSS)
  double z2_threshold = 0.01;
  std::uint64_t seed = 1;
  bool analytic_shortcut = true;
  bool cycle_diagnostics = true;  // periodicity test, period and multipliers
};

// TSS or NTSS when the corresponding fixed point is linearly stable, nothing otherwise.
std::optional<PhaseLabel> analytic_label(double delta, double W);

PhasePoint classify_point(double delta, double W, const ClassifyOptions& opt = {});

// Random unit-spin seed of probe k at a node.
std::uint64_t probe_seed(std::uint64_t base, std::uint64_t node, int k);

struct GridSpec {
  double dmin = 0, dmax = 2;
  double wmin = 0, wmax = 2;
  int nx = 40, ny = 40;
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  double delta(int i) const;
  double W(int j) const;
};

struct ScanOptions {
  ClassifyOptions classify;
  int threads = 0;  // 0: environment default
  bool parallel = true;
  std::string out;  // NDJSON path; empty keeps results in memory only
  bool resume = false;
};

inline constexpr int kScanSchemaVersion = 1;

struct ScanRecord {
  std::size_t index = 0;
  int i = 0, j = 0;
  PhasePoint point;
};

std::vector<ScanRecord> scan(const GridSpec& grid, const ScanOptions& opt = {});
// Both entry points of the same grid walk, exposed for benchmarks and tests.
std::vector<ScanRecord> scan_serial(const GridSpec& grid, const ClassifyOptions& opt);
std::vector<ScanRecord> scan_parallel(const GridSpec& grid, const ClassifyOptions& opt, int threads = 0);

std::string to_ndjson(const ScanRecord& r);
std::optional<ScanRecord> parse_ndjson(const std::string& line);
// Records of a phase-map file; malformed or truncated lines are skipped.
std::vector<ScanRecord> read_phase_map(const std::string& path);

}  // namespace srcomb
