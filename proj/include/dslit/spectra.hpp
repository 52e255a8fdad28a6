#pragma once

#include <vector>

namespace dslit::spectra {

// Stark-driven qubit line shape. Peaks sit at
//   f_q - 2 chi n + pull_per_phonon * n_bar
// with full width gamma + kappa (n + n_bar).
struct NumberSplitParams {
  double qubit_freq = 4.318e9;
  double qubit_linewidth = 550e3;   // gamma, full width
  double mode_loss = 250e3;         // kappa_m
  double half_shift = 525e3;        // chi_m
  int n_max = 6;
  double offset = 0.0;              // C_0
  double amplitude = 1.0;           // C_1
  double pull_per_phonon = 0.0;     // Hz per mean phonon

  void validate() const;
};

struct SpectrumTrace {
  std::vector<double> freqs;
  std::vector<double> values;
};

struct DriveConfig {
  double power = 0.0;       // linear, arbitrary units
  double conversion = 1.0;  // eta, phonons per power unit
};

// Poisson weights e^-n n^k / k! for k = 0..n_max, evaluated in log space.
std::vector<double> poisson_weights(double n_bar, int n_max);

// Unit-area Lorentzian with full width `width` centred at `center`.
double lorentzian(double f, double center, double width);

double number_split_value(double f, const NumberSplitParams& p, double n_bar);
SpectrumTrace number_split_spectrum(const std::vector<double>& freqs, const NumberSplitParams& p,
                                    double n_bar);

double power_to_mean_phonon(const DriveConfig& d);

struct Resolvability {
  bool resolved = false;
  double qubit_margin = 0.0;  // 2 chi - gamma
  double mode_margin = 0.0;   // 2 chi - kappa
};

// Strong dispersive test: 2 chi must exceed both gamma and kappa.
Resolvability resolvability(double chi, double gamma, double kappa);

}  // namespace dslit::spectra
