#include "dslit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dslit/errors.hpp"
#include "dslit/idt.hpp"
#include "dslit/units.hpp"

namespace dslit::estimator {

namespace {

std::size_t expected_param_count(ModelId model, const ModelContext& ctx, const std::vector<int>& group) {
  switch (model) {
    case ModelId::Linear: return 2;
    case ModelId::FluxCurve: return 4;
    case ModelId::T1Curve: return 4;
    case ModelId::Crossings: return 2 * ctx.skeleton.modes.size();
    case ModelId::NumberSplit: {
      const int traces = group.empty() ? 1 : *std::max_element(group.begin(), group.end()) + 1;
      return static_cast<std::size_t>(kNumberSplitShared + kNumberSplitPerTrace * traces);
    }
  }
  return 0;
}

transmon::TransmonParams flux_params(const std::vector<double>& p,
                                     transmon::TransmonParams base = {}) {
  base.zero_field_freq = p[0];
  base.asymmetry = p[1];
  base.half_quantum_current = p[2];
  base.offset_current = p[3];
  return base;
}

// Model prediction; for Crossings points labelled -1 the eigenfrequency
// nearest the observed value is used, so `observed` must then be supplied.
std::vector<double> predict(ModelId model, const std::vector<double>& p, const std::vector<double>& x,
                            const std::vector<int>& group, const ModelContext& ctx,
                            const std::vector<double>* observed) {
  std::vector<double> out(x.size());
  switch (model) {
    case ModelId::Linear:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = p[0] * x[i] + p[1];
      break;
    case ModelId::FluxCurve: {
      const auto tp = flux_params(p);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = transmon::freq_vs_current(x[i], tp);
      break;
    }
    case ModelId::T1Curve: {
      idt::IdtParams ip;
      ip.n_periods = ctx.idt_periods;
      ip.max_emission = p[1];
      ip.center_freq = p[2];
      ip.delay = p[3];
      idt::QubitEnvironment env;
      env.q_internal = p[0];
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = idt::emission_rate(x[i], ip, env);
      break;
    }
    case ModelId::Crossings: {
      bragg::ModeTable modes = ctx.skeleton.modes;
      const std::size_t m = modes.size();
      for (std::size_t k = 0; k < m; ++k) {
        modes.modes[k].freq = p[k];
        modes.modes[k].coupling = p[m + k];
      }
      double last_x = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> eig;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] == last_x)) {
          const double f_q = transmon::freq_vs_current(x[i], ctx.skeleton.transmon);
          eig = jc::eigenfrequencies(jc::build_single_excitation_matrix(f_q, modes));
          last_x = x[i];
        }
        const int b = group.empty() ? -1 : group[i];
        if (b >= 0) {
          if (static_cast<std::size_t>(b) >= eig.size()) throw DomainError("Crossings: branch out of range");
          out[i] = eig[static_cast<std::size_t>(b)];
        } else {
          if (!observed) throw DomainError("Crossings: unlabelled point needs an observed value");
          const double y = (*observed)[i];
          out[i] = *std::min_element(eig.begin(), eig.end(), [y](double a, double c) {
            return std::abs(a - y) < std::abs(c - y);
          });
        }
      }
      break;
    }
    case ModelId::NumberSplit: {
      spectra::NumberSplitParams sp;
      sp.qubit_freq = p[0];
      sp.qubit_linewidth = p[1];
      sp.mode_loss = p[2];
      sp.half_shift = p[3];
      sp.n_max = ctx.n_max;
      sp.pull_per_phonon = ctx.pull_per_phonon;
      int cached = -1;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int t = group.empty() ? 0 : group[i];
        if (t != cached) {
          const std::size_t base = kNumberSplitShared + kNumberSplitPerTrace * static_cast<std::size_t>(t);
          sp.offset = p[base + 1];
          sp.amplitude = p[base + 2];
          cached = t;
        }
        const double n_bar = p[kNumberSplitShared + kNumberSplitPerTrace * static_cast<std::size_t>(t)];
        out[i] = spectra::number_split_value(x[i], sp, n_bar);
      }
      break;
    }
  }
  return out;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::FluxCurve: return "flux";
    case ModelId::T1Curve: return "t1";
    case ModelId::Crossings: return "crossings";
    case ModelId::NumberSplit: return "numbersplit";
    case ModelId::Linear: return "linear";
  }
  return "?";
}

ModelId model_from_string(std::string_view name) {
  for (ModelId id : {ModelId::FluxCurve, ModelId::T1Curve, ModelId::Crossings, ModelId::NumberSplit,
                     ModelId::Linear}) {
    if (name == to_string(id)) return id;
  }
  throw ConfigError("unknown model '" + std::string(name) + "'");
}

void FitProblem::validate() const {
  const std::size_t n = x.size();
  if (y.size() != n) throw DomainError("FitProblem: x and y lengths differ");
  if (!sigma.empty() && sigma.size() != n) throw DomainError("FitProblem: sigma length differs");
  if (!group.empty() && group.size() != n) throw DomainError("FitProblem: group length differs");
  if (!mask.empty() && mask.size() != n) throw DomainError("FitProblem: mask length differs");
  if (bounds.size() != init.size()) throw DomainError("FitProblem: bounds and init lengths differ");
  for (std::size_t i = 0; i < init.size(); ++i) {
    if (!bounds[i].contains(init[i])) throw DomainError("FitProblem: init outside bounds");
  }
  for (double s : sigma) {
    if (!(s > 0.0)) throw DomainError("FitProblem: sigma must be > 0");
  }
  if (init.size() != expected_param_count(model, context, group)) {
    throw DomainError("FitProblem: wrong number of parameters for model " + std::string(to_string(model)));
  }
  const auto used = static_cast<std::size_t>(
      mask.empty() ? n : static_cast<std::size_t>(std::count(mask.begin(), mask.end(), false)));
  if (used < init.size()) throw DomainError("FitProblem: fewer unmasked points than parameters");
}

std::vector<double> evaluate_model(ModelId model, const std::vector<double>& params,
                                   const std::vector<double>& x, const std::vector<int>& group,
                                   const ModelContext& context) {
  return predict(model, params, x, group, context, nullptr);
}

fit::FitResult least_squares_fit(const FitProblem& problem, const fit::LmOptions& options) {
  problem.validate();
  // Masked points are dropped up front so they cannot influence anything.
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  std::vector<int> group;
  for (std::size_t i = 0; i < problem.x.size(); ++i) {
    if (!problem.mask.empty() && problem.mask[i]) continue;
    x.push_back(problem.x[i]);
    y.push_back(problem.y[i]);
    w.push_back(problem.sigma.empty() ? 1.0 : 1.0 / problem.sigma[i]);
    if (!problem.group.empty()) group.push_back(problem.group[i]);
  }
  const bool log_space = problem.model == ModelId::T1Curve;
  if (log_space) {
    for (double v : y) {
      if (!(v > 0.0)) throw DomainError("T1Curve: rates must be positive");
    }
  }
  const ModelId model = problem.model;
  const ModelContext& ctx = problem.context;
  auto residual = [&](std::span<const double> p, std::span<double> r) {
    const std::vector<double> params(p.begin(), p.end());
    const std::vector<double> pred = predict(model, params, x, group, ctx, &y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      r[i] = log_space ? (std::log(y[i]) - std::log(pred[i])) * w[i] : (y[i] - pred[i]) * w[i];
    }
  };
  return fit::levenberg_marquardt(residual, y.size(), problem.init, problem.bounds, options);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(index));
}

SyntheticDataset synth_dataset(ModelId model, const std::vector<double>& params,
                               const std::vector<double>& x, double noise_sigma, std::uint64_t seed,
                               const ModelContext& context, const std::vector<int>& group) {
  if (noise_sigma < 0.0) throw DomainError("synth_dataset: noise_sigma must be >= 0");
  SyntheticDataset out;
  out.model = model;
  out.noise_sigma = noise_sigma;
  out.seed = seed;
  if (model == ModelId::Crossings) {
    const std::size_t branches = context.skeleton.modes.size() + 1;
    for (double xi : x) {
      for (std::size_t b = 0; b < branches; ++b) {
        out.x.push_back(xi);
        out.group.push_back(static_cast<int>(b));
      }
    }
  } else {
    out.x = x;
    if (!group.empty()) {
      if (group.size() != x.size()) throw DomainError("synth_dataset: group length differs");
      out.group = group;
    } else if (model == ModelId::NumberSplit) {
      out.group.assign(x.size(), 0);
    }
  }
  if (params.size() != expected_param_count(model, context, out.group)) {
    throw DomainError("synth_dataset: wrong number of parameters for model " + std::string(to_string(model)));
  }
  out.y_true = evaluate_model(model, params, out.x, out.group, context);
  out.y_noisy = out.y_true;
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out.y_noisy) {
      const double xi = normal(rng);
      v = model == ModelId::T1Curve ? v * std::exp(noise_sigma * xi) : v + noise_sigma * xi;
    }
  }
  return out;
}

FluxFit fit_flux_curve(const std::vector<double>& currents, const std::vector<double>& freqs,
                       const transmon::TransmonParams& guess, const std::vector<bool>& mask) {
  guess.validate();
  FitProblem prob;
  prob.model = ModelId::FluxCurve;
  prob.x = currents;
  prob.y = freqs;
  prob.mask = mask;
  prob.init = {guess.zero_field_freq, guess.asymmetry, guess.half_quantum_current, guess.offset_current};
  prob.bounds = {{0.8 * guess.zero_field_freq, 1.2 * guess.zero_field_freq},
                 {0.0, 1.0},
                 {0.5 * guess.half_quantum_current, 1.5 * guess.half_quantum_current},
                 {guess.offset_current - 0.25 * guess.half_quantum_current,
                  guess.offset_current + 0.25 * guess.half_quantum_current}};
  FluxFit out;
  out.result = least_squares_fit(prob);
  out.params = flux_params(out.result.params, guess);
  return out;
}

double scan_delay(const std::vector<double>& freqs, const std::vector<double>& rates, double tau_min,
                  double tau_max, double tau_step) {
  if (freqs.size() != rates.size() || freqs.size() < 3) {
    throw DomainError("scan_delay: need at least 3 matching samples");
  }
  std::vector<std::size_t> order(freqs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return freqs[a] < freqs[b]; });
  std::vector<double> f;
  std::vector<double> y;
  for (std::size_t i : order) {
    f.push_back(freqs[i]);
    y.push_back(rates[i]);
  }
  // High-pass: subtract a running mean a quarter of the span wide so the slow
  // envelope does not masquerade as a short delay.
  const double window = 0.25 * (f.back() - f.front());
  std::vector<double> prefix(y.size() + 1, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) prefix[i + 1] = prefix[i] + y[i];
  std::vector<double> osc(y.size());
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    while (f[lo] < f[i] - 0.5 * window) ++lo;
    while (hi < y.size() && f[hi] <= f[i] + 0.5 * window) ++hi;
    osc[i] = y[i] - (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  const double y_mean = mean(osc);
  double y_norm = 0.0;
  for (double v : osc) y_norm += (v - y_mean) * (v - y_mean);
  double best_tau = tau_min;
  double best_corr = -2.0;
  const int steps = static_cast<int>(std::floor((tau_max - tau_min) / tau_step + 0.5));
  std::vector<double> basis(f.size());
  for (int k = 0; k <= steps; ++k) {
    const double tau = tau_min + k * tau_step;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double s = std::sin(kPi * f[i] * tau);
      basis[i] = s * s;
    }
    const double b_mean = mean(basis);
    double cross = 0.0;
    double b_norm = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      cross += (basis[i] - b_mean) * (osc[i] - y_mean);
      b_norm += (basis[i] - b_mean) * (basis[i] - b_mean);
    }
    const double corr = b_norm > 0.0 && y_norm > 0.0 ? cross / std::sqrt(b_norm * y_norm) : 0.0;
    if (corr > best_corr) {
      best_corr = corr;
      best_tau = tau;
    }
  }
  return best_tau;
}

T1Fit fit_t1_curve(const std::vector<double>& freqs, const std::vector<double>& rates, int idt_periods,
                   const std::vector<bool>& mask) {
  if (freqs.size() != rates.size()) throw DomainError("fit_t1_curve: length mismatch");
  std::vector<double> f;
  std::vector<double> y;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!mask.empty() && mask[i]) continue;
    f.push_back(freqs[i]);
    y.push_back(rates[i]);
  }
  if (f.size() < 8) throw DomainError("fit_t1_curve: too few points");
  T1Fit out;
  out.delay_scan = scan_delay(f, y);
  const auto [f_lo, f_hi] = std::minmax_element(f.begin(), f.end());
  if ((*f_hi - *f_lo) * out.delay_scan < 3.0) {
    throw DomainError("fit_t1_curve: data must span at least 3 interference periods");
  }
  const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
  double weight = 0.0;
  double centroid = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    weight += y[i] - *y_lo;
    centroid += (y[i] - *y_lo) * f[i];
  }
  const double fc0 = weight > 0.0 ? centroid / weight : mean(f);
  const double gamma0 = std::max(*y_hi - *y_lo, 1e-12 * *y_hi);
  const double qi0 = mean(f) / *y_lo;

  FitProblem prob;
  prob.model = ModelId::T1Curve;
  prob.x = freqs;
  prob.y = rates;
  prob.mask = mask;
  prob.context.idt_periods = idt_periods;
  prob.init = {qi0, gamma0, fc0, out.delay_scan};
  prob.bounds = {{0.2 * qi0, 5.0 * qi0},
                 {0.2 * gamma0, 5.0 * gamma0},
                 {fc0 - 0.5e9, fc0 + 0.5e9},
                 {out.delay_scan - 0.1e-9, out.delay_scan + 0.1e-9}};
  out.result = least_squares_fit(prob);
  out.q_internal = out.result.params[0];
  out.max_emission = out.result.params[1];
  out.center_freq = out.result.params[2];
  out.delay = out.result.params[3];
  out.q_internal_rel_error = out.result.std_error(0) / out.q_internal;
  out.q_internal_poorly_constrained =
      !out.result.identifiable[0] || !(out.q_internal_rel_error <= kPoorlyConstrainedRelError);
  return out;
}

T1Fit fit_t1_curve(const SyntheticDataset& data, int idt_periods) {
  return fit_t1_curve(data.x, data.y_noisy, idt_periods);
}

CrossingFit fit_crossings(const std::vector<CrossingPeaks>& peaks, const jc::SystemModel& skeleton,
                          double freq_window) {
  skeleton.validate();
  const std::size_t m = skeleton.modes.size();
  FitProblem prob;
  prob.model = ModelId::Crossings;
  prob.context.skeleton = skeleton;
  for (const auto& pk : peaks) {
    const bool full = pk.freqs.size() == m + 1;
    std::vector<double> sorted = pk.freqs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t b = 0; b < sorted.size(); ++b) {
      prob.x.push_back(pk.current);
      prob.y.push_back(sorted[b]);
      prob.group.push_back(full ? static_cast<int>(b) : -1);
    }
  }
  double g_max = 0.0;
  for (const auto& mode : skeleton.modes.modes) g_max = std::max(g_max, std::abs(mode.coupling));
  const double g_hi = std::max(3.0 * g_max, 1e6);
  constexpr double kCouplingFloor = 10e3;
  for (const auto& mode : skeleton.modes.modes) {
    prob.init.push_back(mode.freq);
    prob.bounds.push_back({mode.freq - freq_window, mode.freq + freq_window});
  }
  for (const auto& mode : skeleton.modes.modes) {
    prob.init.push_back(std::max(std::abs(mode.coupling), kCouplingFloor));
    prob.bounds.push_back({0.0, g_hi});
  }
  CrossingFit out;
  out.result = least_squares_fit(prob);
  out.modes = skeleton.modes;
  for (std::size_t k = 0; k < m; ++k) {
    out.modes.modes[k].freq = out.result.params[k];
    out.modes.modes[k].coupling = out.result.params[m + k];
  }
  return out;
}

NumberSplitFit fit_number_splitting(const std::vector<spectra::SpectrumTrace>& traces,
                                    const spectra::NumberSplitParams& guess,
                                    const std::vector<double>& n_bar_guess) {
  if (traces.empty()) throw DomainError("fit_number_splitting: no traces");
  if (n_bar_guess.size() != traces.size()) throw DomainError("fit_number_splitting: one n_bar guess per trace");
  guess.validate();
  FitProblem prob;
  prob.model = ModelId::NumberSplit;
  prob.context.n_max = guess.n_max;
  prob.context.pull_per_phonon = guess.pull_per_phonon;
  const double chi0 = std::abs(guess.half_shift);
  prob.init = {guess.qubit_freq, guess.qubit_linewidth, guess.mode_loss, chi0};
  prob.bounds = {{guess.qubit_freq - 3e6, guess.qubit_freq + 3e6},
                 {0.2 * guess.qubit_linewidth, 5.0 * guess.qubit_linewidth},
                 {0.0, 10.0 * guess.mode_loss + 100e3},
                 {0.2 * chi0, 5.0 * chi0}};
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const auto& tr = traces[t];
    if (tr.freqs.size() != tr.values.size() || tr.freqs.size() < 2) {
      throw DomainError("fit_number_splitting: malformed trace");
    }
    const auto [lo, hi] = std::minmax_element(tr.values.begin(), tr.values.end());
    // Unit-area Lorentzians: the area above the floor estimates C_1.
    double area = 0.0;
    for (std::size_t i = 1; i < tr.freqs.size(); ++i) {
      area += 0.5 * (tr.values[i] + tr.values[i - 1] - 2.0 * *lo) * (tr.freqs[i] - tr.freqs[i - 1]);
    }
    const double height = std::max(*hi - *lo, 1e-300);
    const double c1 = std::max(area, 1e-300);
    prob.init.insert(prob.init.end(), {n_bar_guess[t], *lo, c1});
    prob.bounds.push_back({0.0, std::max(20.0, 2.0 * n_bar_guess[t])});
    prob.bounds.push_back({*lo - height, *lo + height});
    prob.bounds.push_back({0.2 * c1, 5.0 * c1});
    for (std::size_t i = 0; i < tr.freqs.size(); ++i) {
      prob.x.push_back(tr.freqs[i]);
      prob.y.push_back(tr.values[i]);
      prob.group.push_back(static_cast<int>(t));
    }
  }
  NumberSplitFit out;
  out.result = least_squares_fit(prob);
  const auto& p = out.result.params;
  out.qubit_freq = p[0];
  out.qubit_linewidth = p[1];
  out.mode_loss = p[2];
  out.half_shift = p[3];
  out.half_shift_identifiable = out.result.identifiable[3];
  for (std::size_t t = 0; t < traces.size(); ++t) {
    const std::size_t base = kNumberSplitShared + kNumberSplitPerTrace * t;
    out.traces.push_back({p[base], p[base + 1], p[base + 2]});
  }
  return out;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  FitProblem prob;
  prob.model = ModelId::Linear;
  prob.x = x;
  prob.y = y;
  prob.init = {0.0, 0.0};
  prob.bounds = {{}, {}};
  LineFit out;
  out.result = least_squares_fit(prob);
  out.slope = out.result.params[0];
  out.intercept = out.result.params[1];
  const double y_mean = mean(y);
  double ss_tot = 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (out.slope * x[i] + out.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - y_mean) * (y[i] - y_mean);
  }
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

}  // namespace dslit::estimator
