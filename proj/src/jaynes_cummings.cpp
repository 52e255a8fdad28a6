#include "dslit/jaynes_cummings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dslit/errors.hpp"

namespace dslit::jc {

void SystemModel::validate() const {
  transmon.validate();
  modes.validate();
  std::vector<double> f;
  for (const auto& m : modes.modes) {
    if (!std::isfinite(m.coupling)) throw DomainError("SystemModel: non-finite coupling");
    f.push_back(m.freq);
  }
  std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) {
    throw DomainError("SystemModel: mode frequencies must be distinct");
  }
}

Eigen::MatrixXd build_single_excitation_matrix(double f_q, const bragg::ModeTable& modes) {
  if (modes.empty()) throw DomainError("build_single_excitation_matrix: need at least one mode");
  const auto m = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& mode = modes.modes[static_cast<std::size_t>(i)];
    h(i, i) = mode.freq;
    h(i, m) = mode.coupling;
    h(m, i) = mode.coupling;
  }
  h(m, m) = f_q;
  return h;
}

std::vector<double> eigenfrequencies(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw ContractError("eigenfrequencies: matrix not square");
  const double scale = matrix.cwiseAbs().maxCoeff();
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractError("eigenfrequencies: matrix is not symmetric");
  }
  // Shifting by the mean diagonal keeps the GHz offset out of the iteration.
  const double shift = matrix.trace() / static_cast<double>(matrix.rows());
  const Eigen::MatrixXd centred =
      matrix - shift * Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centred);
  if (solver.info() != Eigen::Success) throw Error("eigenfrequencies: solver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double norm = std::max(centred.norm(), 1.0);
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double residual =
        (centred * solver.eigenvectors().col(k) - values(k) * solver.eigenvectors().col(k)).norm();
    if (residual > 1e-9 * norm) throw Error("eigenfrequencies: eigenpair residual too large");
  }
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) out[static_cast<std::size_t>(k)] = values(k) + shift;
  std::sort(out.begin(), out.end());
  return out;
}

CrossingSpectrum crossing_spectrum(const std::vector<double>& currents, const SystemModel& model) {
  if (currents.empty()) throw DomainError("crossing_spectrum: current list is empty");
  model.validate();
  CrossingSpectrum out;
  out.currents = currents;
  out.branches.reserve(currents.size());
  for (double current : currents) {
    const double f_q = transmon::freq_vs_current(current, model.transmon);
    out.branches.push_back(eigenfrequencies(build_single_excitation_matrix(f_q, model.modes)));
  }
  return out;
}

double dispersive_shift_perturbative(double g, double delta, double alpha) {
  if (delta == 0.0 || delta + alpha == 0.0) {
    throw PoleError("dispersive_shift_perturbative: detuning sits on a pole");
  }
  return g * g * (1.0 / delta - 1.0 / (delta + alpha));
}

double dispersive_shift_numeric(double g, double delta, double alpha, int transmon_levels,
                                int fock_cutoff) {
  if (transmon_levels < 3) throw DomainError("dispersive_shift_numeric: need >= 3 transmon levels");
  if (fock_cutoff < 10) throw DomainError("dispersive_shift_numeric: Fock cutoff must be >= 10");
  const int nf = fock_cutoff + 1;
  const int dim = transmon_levels * nf;
  auto index = [nf](int level, int n) { return level * nf + n; };

  // Rotating at the mode frequency: level j sits at j*Delta + j(j-1)alpha/2.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < transmon_levels; ++j) {
    for (int n = 0; n < nf; ++n) {
      h(index(j, n), index(j, n)) = j * delta + 0.5 * j * (j - 1) * alpha;
      if (j + 1 < transmon_levels && n >= 1) {
        const double c = g * std::sqrt(static_cast<double>(j + 1)) * std::sqrt(static_cast<double>(n));
        h(index(j + 1, n - 1), index(j, n)) = c;
        h(index(j, n), index(j + 1, n - 1)) = c;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw Error("dispersive_shift_numeric: solver failed");
  const Eigen::MatrixXd& vecs = solver.eigenvectors();

  // Bare labels in ascending bare energy; each claims the unclaimed dressed
  // state with the largest overlap.
  struct Label {
    int level;
    int n;
  };
  std::vector<Label> labels{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  std::stable_sort(labels.begin(), labels.end(), [&](const Label& a, const Label& b) {
    return h(index(a.level, a.n), index(a.level, a.n)) < h(index(b.level, b.n), index(b.level, b.n));
  });
  std::vector<bool> taken(static_cast<std::size_t>(dim), false);
  double energy[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (const Label& label : labels) {
    const int row = index(label.level, label.n);
    int best = -1;
    double best_overlap = -1.0;
    for (int k = 0; k < dim; ++k) {
      if (taken[static_cast<std::size_t>(k)]) continue;
      const double overlap = vecs(row, k) * vecs(row, k);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = k;
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    double tail = 0.0;
    for (int j = 0; j < transmon_levels; ++j) tail += vecs(index(j, nf - 1), best) * vecs(index(j, nf - 1), best);
    if (tail > 1e-6) throw CutoffError("dispersive_shift_numeric: Fock cutoff too small");
    energy[label.level][label.n] = solver.eigenvalues()(best);
  }
  return 0.5 * (energy[1][1] - energy[1][0] - energy[0][1] + energy[0][0]);
}

StarkShifts total_stark_hamiltonian_shifts(const SystemModel& model, double f_q) {
  model.validate();
  StarkShifts out;
  const double alpha = model.transmon.anharmonicity;
  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    const auto& mode = model.modes.modes[i];
    const double delta = f_q - mode.freq;
    const double g = std::abs(mode.coupling);
    if (std::abs(delta) <= kDispersiveErrorRatio * g) {
      std::ostringstream msg;
      msg << "mode " << i << " (index " << mode.longitudinal_index << ", " << mode.freq
          << " Hz) is not dispersive: |Delta|/g = " << std::abs(delta) / g;
      throw DispersiveRegimeError(msg.str(), static_cast<int>(i));
    }
    if (std::abs(delta) < kDispersiveWarnRatio * g) {
      std::ostringstream msg;
      msg << "mode " << i << " weakly dispersive: |Delta|/g = " << std::abs(delta) / g;
      out.warnings.push_back(msg.str());
    }
    out.shifts.push_back({dispersive_shift_perturbative(mode.coupling, delta, alpha), delta, mode.coupling});
  }
  return out;
}

}  // namespace dslit::jc
