#include "dslit/idt.hpp"

#include <cmath>
#include <string>

#include "dslit/errors.hpp"
#include "dslit/units.hpp"

namespace dslit::idt {

namespace {

constexpr double kConsistencyTol = 1e-6;

void require_positive_frequency(double f, const char* what) {
  if (!(f > 0.0)) {
    throw DomainError(std::string(what) + ": frequency must be positive, got " + std::to_string(f));
  }
}

bool relatively_close(double a, double b) {
  return std::abs(a - b) <= kConsistencyTol * std::abs(b);
}

// sin(pi x) with exact range reduction, so integer x gives exactly 0.
double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // [-1, 1], exact
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(kPi * r);
}

// sinc^2[pi N (f - f_c) / f_c], the envelope shared by Gamma_1 and delta.
double emission_envelope(double f, const IdtParams& p) {
  const double s = sinc(kPi * p.n_periods * (f - p.center_freq) / p.center_freq);
  return s * s;
}

}  // namespace

void IdtParams::validate() const {
  if (n_periods < 1) throw DomainError("IdtParams: n_periods must be >= 1");
  if (!(max_emission > 0.0)) throw DomainError("IdtParams: max_emission must be > 0");
  if (!(max_coupling > 0.0)) throw DomainError("IdtParams: max_coupling must be > 0");
  if (!(center_freq > 0.0)) throw DomainError("IdtParams: center_freq must be > 0");
  if (!(delay > 0.0)) throw DomainError("IdtParams: delay must be > 0");
  if (!(sound_speed > 0.0)) throw DomainError("IdtParams: sound_speed must be > 0");
  if (separation && !relatively_close(delay, *separation / sound_speed)) {
    throw DomainError("IdtParams: delay, separation and sound_speed are inconsistent");
  }
  if (pitch && !relatively_close(center_freq, sound_speed / *pitch)) {
    throw DomainError("IdtParams: center_freq != sound_speed / pitch");
  }
  if (pitch && half_length && !relatively_close(*half_length, n_periods * *pitch)) {
    throw DomainError("IdtParams: half_length != n_periods * pitch");
  }
}

double response_amplitude(double f, const IdtParams& p) {
  require_positive_frequency(f, "response_amplitude");
  const double envelope =
      sinc(kPi * (f - p.center_freq) * p.effective_half_length() / p.sound_speed);
  return envelope * sin_pi(f * p.delay);
}

double coupling_strength(double f_m, const IdtParams& p, double parity_factor) {
  if (parity_factor < 0.0 || parity_factor > 1.0) {
    throw DomainError("coupling_strength: parity_factor must lie in [0, 1]");
  }
  return p.max_coupling * response_amplitude(f_m, p) * parity_factor;
}

double coupling_slope_at_zero(const IdtParams& p) { return kPi * p.max_coupling * p.delay; }

double phonon_emission_rate(double f_q, const IdtParams& p) {
  require_positive_frequency(f_q, "emission_rate");
  // (1 - cos 2x)/2 = sin^2 x; the squared sine keeps the nulls exact.
  const double s = sin_pi(f_q * p.delay);
  return p.max_emission * emission_envelope(f_q, p) * s * s;
}

double emission_rate(double f_q, const IdtParams& p, const QubitEnvironment& env) {
  if (!(env.q_internal > 0.0)) throw DomainError("emission_rate: Q_i must be > 0");
  return f_q / env.q_internal + phonon_emission_rate(f_q, p);
}

double lamb_shift(double f_q, const IdtParams& p, const QubitEnvironment& env) {
  require_positive_frequency(f_q, "lamb_shift");
  const double harmonic = env.lamb_variant == LambVariant::KramersKronig ? 2.0 : 1.0;
  return 0.25 * p.max_emission * emission_envelope(f_q, p) *
         sin_pi(harmonic * f_q * p.delay);
}

double giant_atom_parameter(const IdtParams& p) { return kPi * p.delay * p.max_emission; }

}  // namespace dslit::idt
