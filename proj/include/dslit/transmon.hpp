#pragma once

#include <string>
#include <vector>

namespace dslit::transmon {

// Asymmetric-SQUID transmon tuned by coil current.
struct TransmonParams {
  double zero_field_freq = 5.718e9;      // f_0, Hz
  double asymmetry = 0.14;               // a = (I_c1 - I_c2)/(I_c1 + I_c2)
  double half_quantum_current = 1.168e-3;  // I_c, A
  double offset_current = 79.2e-6;       // I_0, A
  double anharmonicity = -190e6;         // alpha, Hz
  double q_internal = 1.2e4;
  double pure_dephasing = 30e3;          // Hz

  void validate() const;
  double min_freq() const;  // f_0 sqrt(a), at I_0 + I_c/2
};

// f_0 [a^2 + (1 - a^2) cos^2(pi (I - I_0)/I_c)]^(1/4)
double freq_vs_current(double current, const TransmonParams& p);

// df_q/dI, analytic.
double freq_slope(double current, const TransmonParams& p);

// Inverse on the principal branch I in [I_0, I_0 + I_c/2]. Throws RangeError
// (carrying the tunable band) when the target cannot be reached.
double current_for_freq(double f_target, const TransmonParams& p);

struct CoherenceSet {
  double t1 = 0.0;       // s; +inf allowed
  double t2_star = 0.0;  // s
};

// Intrinsic dephasing (1/T2* - 1/(2 T1)) / (2 pi), in Hz.
double dephasing_from_coherence(const CoherenceSet& c);

struct LinewidthComponent {
  std::string name;
  double rate = 0.0;  // Hz
};

struct LinewidthBudget {
  double total = 0.0;
  std::vector<LinewidthComponent> components;
};

LinewidthBudget linewidth_budget(const std::vector<LinewidthComponent>& components);

}  // namespace dslit::transmon
