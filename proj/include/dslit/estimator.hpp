#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dslit/jaynes_cummings.hpp"
#include "dslit/least_squares.hpp"
#include "dslit/spectra.hpp"
#include "dslit/transmon.hpp"

namespace dslit::estimator {

// Parameter layouts:
//   Linear       [slope, intercept]
//   FluxCurve    [f_0, a, I_c, I_0]                       x = current (A)
//   T1Curve      [Q_i, Gamma_0, f_c, tau]                 x = qubit frequency (Hz)
//   Crossings    [f_1..f_M, g_1..g_M]                     x = current, group = branch
//   NumberSplit  [f_q, gamma, kappa, chi, (n_bar, C_0, C_1) per trace]
//                                                         x = probe frequency, group = trace
// T1Curve residuals are taken in log space (multiplicative noise); every other
// model uses additive residuals (y - model)/sigma.
enum class ModelId { FluxCurve, T1Curve, Crossings, NumberSplit, Linear };

std::string_view to_string(ModelId id);
ModelId model_from_string(std::string_view name);  // throws ConfigError

inline constexpr int kNumberSplitShared = 4;
inline constexpr int kNumberSplitPerTrace = 3;

// Fixed quantities a model needs besides its free parameters.
struct ModelContext {
  int idt_periods = 8;        // T1Curve
  jc::SystemModel skeleton;   // Crossings: flux curve and mode layout
  int n_max = 6;              // NumberSplit
  double pull_per_phonon = 0.0;
};

struct FitProblem {
  ModelId model = ModelId::Linear;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;   // empty means unit weights
  std::vector<int> group;      // branch or trace label; -1 = nearest branch
  std::vector<double> init;
  std::vector<fit::Bound> bounds;
  std::vector<bool> mask;      // true excludes the point; empty means none
  ModelContext context;

  void validate() const;
};

std::vector<double> evaluate_model(ModelId model, const std::vector<double>& params,
                                   const std::vector<double>& x, const std::vector<int>& group,
                                   const ModelContext& context);

fit::FitResult least_squares_fit(const FitProblem& problem, const fit::LmOptions& options = {});

struct SyntheticDataset {
  ModelId model = ModelId::Linear;
  std::vector<double> x;
  std::vector<int> group;
  std::vector<double> y_true;
  std::vector<double> y_noisy;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Independent stream for dataset `index` under a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Noise is additive Gaussian, except T1Curve where y_noisy = y_true exp(sigma xi).
// Crossings expands each current into one point per branch. NumberSplit uses
// `group` as the trace label (all zero when omitted).
SyntheticDataset synth_dataset(ModelId model, const std::vector<double>& params,
                               const std::vector<double>& x, double noise_sigma, std::uint64_t seed,
                               const ModelContext& context = {}, const std::vector<int>& group = {});

struct FluxFit {
  transmon::TransmonParams params;
  fit::FitResult result;
};

FluxFit fit_flux_curve(const std::vector<double>& currents, const std::vector<double>& freqs,
                       const transmon::TransmonParams& guess, const std::vector<bool>& mask = {});

struct T1Fit {
  double q_internal = 0.0;
  double max_emission = 0.0;
  double center_freq = 0.0;
  double delay = 0.0;
  double delay_scan = 0.0;            // tau picked by the correlation scan
  double q_internal_rel_error = 0.0;  // 1-sigma relative uncertainty
  bool q_internal_poorly_constrained = false;
  fit::FitResult result;
};

inline constexpr double kPoorlyConstrainedRelError = 0.05;

// tau maximising the correlation of the rate with sin^2(pi f tau') over a grid.
double scan_delay(const std::vector<double>& freqs, const std::vector<double>& rates,
                  double tau_min = 1e-9, double tau_max = 20e-9, double tau_step = 0.005e-9);

T1Fit fit_t1_curve(const std::vector<double>& freqs, const std::vector<double>& rates,
                   int idt_periods = 8, const std::vector<bool>& mask = {});
T1Fit fit_t1_curve(const SyntheticDataset& data, int idt_periods = 8);

struct CrossingPeaks {
  double current = 0.0;
  std::vector<double> freqs;  // all M+1 branches (sorted), or a subset
};

struct CrossingFit {
  bragg::ModeTable modes;  // skeleton with fitted freq and |coupling|
  fit::FitResult result;
};

// Starts from the skeleton's mode frequencies and couplings.
CrossingFit fit_crossings(const std::vector<CrossingPeaks>& peaks, const jc::SystemModel& skeleton,
                          double freq_window = 5e6);

struct TraceFit {
  double n_bar = 0.0;
  double offset = 0.0;
  double amplitude = 0.0;
};

struct NumberSplitFit {
  double qubit_freq = 0.0;
  double qubit_linewidth = 0.0;
  double mode_loss = 0.0;
  double half_shift = 0.0;
  std::vector<TraceFit> traces;
  bool half_shift_identifiable = true;
  fit::FitResult result;
};

// Joint fit: line-shape parameters shared, (n_bar, C_0, C_1) per trace.
NumberSplitFit fit_number_splitting(const std::vector<spectra::SpectrumTrace>& traces,
                                    const spectra::NumberSplitParams& guess,
                                    const std::vector<double>& n_bar_guess);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  fit::FitResult result;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dslit::estimator
