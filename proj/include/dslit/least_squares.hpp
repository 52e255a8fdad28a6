#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dslit::fit {

struct Bound {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct LmOptions {
  int max_iterations = 500;
  double relative_cost_tol = 1e-10;
  double step_tol = 1e-12;
};

struct FitResult {
  std::vector<double> params;
  Eigen::MatrixXd covariance;      // +inf on the diagonal for unidentifiable parameters
  double residual_norm = 0.0;      // Euclidean norm of the weighted residual
  int iterations = 0;
  bool converged = false;
  std::vector<bool> identifiable;  // false where the normal matrix is singular

  double std_error(std::size_t i) const;
};

// Fills `residuals` (already sized) for the given physical parameters.
using ResidualFn = std::function<void(std::span<const double> params, std::span<double> residuals)>;

// Damped Gauss-Newton (Levenberg-Marquardt) in bound-normalised coordinates
// with a central-difference Jacobian. Throws RankDeficiencyError when the
// normal matrix is singular at the starting point; running out of
// iterations returns converged = false.
FitResult levenberg_marquardt(const ResidualFn& residual, std::size_t n_residuals,
                              const std::vector<double>& init, const std::vector<Bound>& bounds,
                              const LmOptions& options = {});

}  // namespace dslit::fit
