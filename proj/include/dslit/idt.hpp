#pragma once

#include <optional>

namespace dslit::idt {

// Split interdigitated transducer: two halves of n_periods finger periods,
// centres separated by `separation`, giving an acoustic delay `delay`.
// All frequencies and rates in Hz, lengths in m, times in s.
struct IdtParams {
  int n_periods = 8;
  double center_freq = 4.24e9;
  double delay = 9.04e-9;
  double max_emission = 11e6;    // Gamma_0
  double max_coupling = 5.1e6;   // g_0
  double sound_speed = 2880.0;
  std::optional<double> pitch;         // lambda_c; defaults to v / f_c
  std::optional<double> half_length;   // D; defaults to n_periods * pitch
  std::optional<double> separation;    // S; when given, must match v * delay

  double effective_pitch() const { return pitch ? *pitch : sound_speed / center_freq; }
  double effective_half_length() const {
    return half_length ? *half_length : n_periods * effective_pitch();
  }

  // Throws DomainError when an invariant is violated.
  void validate() const;
};

enum class LambVariant {
  AsWritten,       // sin(pi f tau): period 2/tau
  KramersKronig,   // sin(2 pi f tau): reactive partner of the emission rate
};

struct QubitEnvironment {
  double q_internal = 1.2e4;
  LambVariant lamb_variant = LambVariant::KramersKronig;
};

// A(f) = sinc[pi (f - f_c) D / v] * sin(pi f tau).
double response_amplitude(double f, const IdtParams& p);

// g_m = g_0 A(f_m) * parity_factor, with the full sinc envelope.
double coupling_strength(double f_m, const IdtParams& p, double parity_factor);

// pi g_0 tau: slope of g_0 A(f) at a zero of the fast modulation.
double coupling_slope_at_zero(const IdtParams& p);

// Gamma_1(f) = f/Q_i + (Gamma_0/2) sinc^2[pi N (f - f_c)/f_c] (1 - cos 2 pi f tau).
double emission_rate(double f_q, const IdtParams& p, const QubitEnvironment& env);

// Phonon-only part of the emission rate, Gamma_0 sinc^2(...) sin^2(pi f tau).
double phonon_emission_rate(double f_q, const IdtParams& p);

// delta(f) = (Gamma_0/4) sinc^2[pi N (f - f_c)/f_c] sin(k pi f tau), k = 1 or 2
// depending on env.lamb_variant.
double lamb_shift(double f_q, const IdtParams& p, const QubitEnvironment& env);

// pi tau Gamma_0; the giant-atom regime starts when this reaches 1.
double giant_atom_parameter(const IdtParams& p);

}  // namespace dslit::idt
