#pragma once

#include "srcomb/model.hpp"
#include "srcomb/trajectory.hpp"

#include <optional>
#include <vector>

namespace srcomb {

enum class Window { Hann, Rectangular };

struct SpectrumOptions {
  Window window = Window::Hann;
  int zero_pad = 4;
  std::size_t min_samples = 64;
};

struct Peak {
  double f;
  double height;
};

enum class Parity { None, Single, OddOnly, EvenAndOdd };

struct CombSpectrum {
  std::vector<double> f;      // ascending
  std::vector<double> power;  // a unit tone peaks at 1
  double dt = 0;
  std::size_t samples = 0;
  int zero_pad = 1;
  double bin = 0;             // 1 / (samples dt)

  std::vector<Peak> peaks;    // ascending in f
  double f0 = 0;
  double fq = 0;
  Parity parity = Parity::None;
  double even_ratio = 0;      // strongest even-order line over the strongest line
};

// l_-(t) = sum over ensembles of s_x - i s_y.
std::vector<cplx> lminus_series(const Trajectory& tr);
// Record of n uniform samples starting at x0, without transient.
std::vector<cplx> lminus_record(const ModelParams& p, const SpinState& x0, double dt, std::size_t n);

CombSpectrum power_spectrum(const std::vector<cplx>& signal, double dt, const SpectrumOptions& opt = {});
CombSpectrum power_spectrum(const Trajectory& tr, const SpectrumOptions& opt = {});

struct PeakOptions {
  double threshold = 1e-6;    // relative to the strongest line
  double min_sep_bins = 8;    // in unpadded bins, against stronger accepted peaks
  double significant = 1e-5;  // lines used for the ladder fit
  double even_floor = 1e-4;
  std::optional<double> f0_hint;
};

// Fills peaks, f0, fq, parity and even_ratio. Throws if nothing exceeds the threshold.
void extract_comb(CombSpectrum& s, const PeakOptions& opt = {});

enum class F0Regime { WtoOne, WtoZero, LargeDelta, Elliptic };
double predicted_f0(const ModelParams& p, F0Regime regime);

// Largest relative height difference between a significant line and its mirror at -f.
double mirror_asymmetry(const CombSpectrum& s, double significant = 1e-4);
bool reflection_symmetry(const CombSpectrum& s, double tol = 0.01);

// Hz for a frequency in units of N Omega^2 / kappa.
double to_si(double f, double N, double omega_rabi, double kappa);

}  // namespace srcomb
