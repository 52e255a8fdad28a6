#include "dslit/spectra.hpp"

#include <cmath>

#include "dslit/errors.hpp"
#include "dslit/units.hpp"

namespace dslit::spectra {

void NumberSplitParams::validate() const {
  if (!(qubit_linewidth > 0.0)) throw DomainError("NumberSplitParams: gamma must be > 0");
  if (mode_loss < 0.0) throw DomainError("NumberSplitParams: kappa must be >= 0");
  if (n_max < 1) throw DomainError("NumberSplitParams: n_max must be >= 1");
  if (!(amplitude > 0.0)) throw DomainError("NumberSplitParams: amplitude must be > 0");
}

std::vector<double> poisson_weights(double n_bar, int n_max) {
  if (n_bar < 0.0 || std::isnan(n_bar)) throw DomainError("poisson_weights: n_bar must be >= 0");
  if (n_max < 0) throw DomainError("poisson_weights: n_max must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (n_bar == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double log_n = std::log(n_bar);
  for (int k = 0; k <= n_max; ++k) {
    w[static_cast<std::size_t>(k)] = std::exp(-n_bar + k * log_n - std::lgamma(k + 1.0));
  }
  return w;
}

double lorentzian(double f, double center, double width) {
  const double d = f - center;
  return width / (2.0 * kPi) / (d * d + 0.25 * width * width);
}

namespace {

double weighted_comb(double f, const NumberSplitParams& p, double n_bar,
                     const std::vector<double>& weights) {
  double sum = 0.0;
  for (int n = 0; n <= p.n_max; ++n) {
    const double center = p.qubit_freq - 2.0 * p.half_shift * n + p.pull_per_phonon * n_bar;
    const double width = p.qubit_linewidth + p.mode_loss * (n + n_bar);
    sum += weights[static_cast<std::size_t>(n)] * lorentzian(f, center, width);
  }
  return p.offset + p.amplitude * sum;
}

}  // namespace

double number_split_value(double f, const NumberSplitParams& p, double n_bar) {
  return weighted_comb(f, p, n_bar, poisson_weights(n_bar, p.n_max));
}

SpectrumTrace number_split_spectrum(const std::vector<double>& freqs, const NumberSplitParams& p,
                                    double n_bar) {
  p.validate();
  if (n_bar < 0.0) throw DomainError("number_split_spectrum: n_bar must be >= 0");
  SpectrumTrace out;
  out.freqs = freqs;
  out.values.reserve(freqs.size());
  const std::vector<double> weights = poisson_weights(n_bar, p.n_max);
  for (double f : freqs) out.values.push_back(weighted_comb(f, p, n_bar, weights));
  return out;
}

double power_to_mean_phonon(const DriveConfig& d) {
  if (d.power < 0.0) throw DomainError("power_to_mean_phonon: power must be >= 0");
  if (!(d.conversion > 0.0)) throw DomainError("power_to_mean_phonon: conversion must be > 0");
  return d.conversion * d.power;
}

Resolvability resolvability(double chi, double gamma, double kappa) {
  if (chi < 0.0 || gamma < 0.0 || kappa < 0.0) {
    throw DomainError("resolvability: rates must be >= 0");
  }
  Resolvability r;
  r.qubit_margin = 2.0 * chi - gamma;
  r.mode_margin = 2.0 * chi - kappa;
  r.resolved = r.qubit_margin > 0.0 && r.mode_margin > 0.0;
  return r;
}

}  // namespace dslit::spectra
