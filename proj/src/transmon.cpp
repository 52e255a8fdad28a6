#include "dslit/transmon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dslit/errors.hpp"
#include "dslit/units.hpp"

namespace dslit::transmon {

void TransmonParams::validate() const {
  if (!(zero_field_freq > 0.0)) throw DomainError("TransmonParams: f_0 must be > 0");
  if (asymmetry < 0.0 || asymmetry > 1.0) throw DomainError("TransmonParams: a must lie in [0, 1]");
  if (!(half_quantum_current > 0.0)) throw DomainError("TransmonParams: I_c must be > 0");
  if (!(anharmonicity < 0.0)) throw DomainError("TransmonParams: alpha must be < 0");
}

double TransmonParams::min_freq() const { return zero_field_freq * std::sqrt(asymmetry); }

double freq_vs_current(double current, const TransmonParams& p) {
  const double a2 = p.asymmetry * p.asymmetry;
  const double c = std::cos(kPi * (current - p.offset_current) / p.half_quantum_current);
  return p.zero_field_freq * std::pow(a2 + (1.0 - a2) * c * c, 0.25);
}

double freq_slope(double current, const TransmonParams& p) {
  const double a2 = p.asymmetry * p.asymmetry;
  const double x = kPi * (current - p.offset_current) / p.half_quantum_current;
  const double inner = a2 + (1.0 - a2) * std::cos(x) * std::cos(x);
  // d/dI of f_0 inner^(1/4), with d(inner)/dI = -(1 - a^2) sin(2x) pi / I_c.
  const double dinner = -(1.0 - a2) * std::sin(2.0 * x) * kPi / p.half_quantum_current;
  return 0.25 * p.zero_field_freq * std::pow(inner, -0.75) * dinner;
}

double current_for_freq(double f_target, const TransmonParams& p) {
  p.validate();
  const double f_min = p.min_freq();
  const double f_max = p.zero_field_freq;
  if (!(f_target >= f_min && f_target <= f_max)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "current_for_freq: target " << f_target << " Hz outside tunable band [" << f_min
        << ", " << f_max << "] Hz";
    throw RangeError(msg.str(), f_min, f_max);
  }
  const double a2 = p.asymmetry * p.asymmetry;
  if (a2 >= 1.0) return p.offset_current;
  const double ratio = f_target / f_max;
  double cos2 = (ratio * ratio * ratio * ratio - a2) / (1.0 - a2);
  cos2 = std::clamp(cos2, 0.0, 1.0);
  const double x = std::acos(std::sqrt(cos2));
  return p.offset_current + p.half_quantum_current * x / kPi;
}

double dephasing_from_coherence(const CoherenceSet& c) {
  if (!(c.t1 > 0.0) || !(c.t2_star > 0.0)) {
    throw DomainError("dephasing_from_coherence: T1 and T2* must be > 0");
  }
  if (c.t2_star > 2.0 * c.t1) {
    throw PhysicalityError("dephasing_from_coherence: T2* exceeds 2 T1");
  }
  const double relax = std::isinf(c.t1) ? 0.0 : 1.0 / (2.0 * c.t1);
  return (1.0 / c.t2_star - relax) / (2.0 * kPi);
}

LinewidthBudget linewidth_budget(const std::vector<LinewidthComponent>& components) {
  LinewidthBudget out;
  for (const auto& c : components) {
    if (c.rate < 0.0 || std::isnan(c.rate)) {
      throw DomainError("linewidth_budget: component '" + c.name + "' is negative");
    }
    out.total += c.rate;
  }
  out.components = components;
  return out;
}

}  // namespace dslit::transmon
