#include "dslit/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "dslit/errors.hpp"

namespace dslit::fit {

namespace {

// Affine map between physical parameters and O(1) working coordinates.
struct Scaling {
  std::vector<double> offset;
  std::vector<double> scale;
  std::vector<bool> boxed;

  Scaling(const std::vector<double>& init, const std::vector<Bound>& bounds) {
    for (std::size_t i = 0; i < init.size(); ++i) {
      const Bound& b = bounds[i];
      if (b.finite() && b.hi > b.lo) {
        offset.push_back(b.lo);
        scale.push_back(b.hi - b.lo);
        boxed.push_back(true);
      } else {
        offset.push_back(0.0);
        scale.push_back(init[i] != 0.0 ? std::abs(init[i]) : 1.0);
        boxed.push_back(false);
      }
    }
  }

  std::vector<double> to_physical(const Eigen::VectorXd& u) const {
    std::vector<double> p(scale.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = offset[i] + scale[i] * u(static_cast<Eigen::Index>(i));
    return p;
  }
  Eigen::VectorXd to_working(const std::vector<double>& p) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) u(static_cast<Eigen::Index>(i)) = (p[i] - offset[i]) / scale[i];
    return u;
  }
};

struct Problem {
  const ResidualFn& fn;
  const Scaling& scaling;
  const std::vector<Bound>& bounds;
  std::size_t m;

  Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    const std::vector<double> p = scaling.to_physical(u);
    fn(p, std::span<double>(r.data(), m));
    return r;
  }

  bool inside(std::size_t i, double ui) const {
    return !scaling.boxed[i] || (ui >= 0.0 && ui <= 1.0);
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u, const Eigen::VectorXd& r0) const {
    const auto n = u.size();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(m), n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      const double h = std::max(1e-6 * std::abs(u(j)), 1e-9);
      Eigen::VectorXd up = u;
      Eigen::VectorXd dn = u;
      up(j) += h;
      dn(j) -= h;
      if (!inside(ju, up(j))) {
        jac.col(j) = (r0 - residual(dn)) / h;
      } else if (!inside(ju, dn(j))) {
        jac.col(j) = (residual(up) - r0) / h;
      } else {
        jac.col(j) = (residual(up) - residual(dn)) / (2.0 * h);
      }
    }
    return jac;
  }

  Eigen::VectorXd project(Eigen::VectorXd u) const {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (scaling.boxed[static_cast<std::size_t>(i)]) u(i) = std::clamp(u(i), 0.0, 1.0);
    }
    return u;
  }
};

bool singular(const Eigen::MatrixXd& normal) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const double top = eig.eigenvalues().maxCoeff();
  return !(top > 0.0) || eig.eigenvalues().minCoeff() <= 1e-14 * top;
}

}  // namespace

double FitResult::std_error(std::size_t i) const {
  const auto k = static_cast<Eigen::Index>(i);
  return std::sqrt(covariance(k, k));
}

FitResult levenberg_marquardt(const ResidualFn& residual, std::size_t n_residuals,
                              const std::vector<double>& init, const std::vector<Bound>& bounds,
                              const LmOptions& options) {
  const std::size_t n = init.size();
  if (bounds.size() != n) throw ContractError("levenberg_marquardt: bounds/init size mismatch");
  if (n_residuals < n) throw DomainError("levenberg_marquardt: fewer residuals than parameters");
  for (std::size_t i = 0; i < n; ++i) {
    if (!bounds[i].contains(init[i])) throw DomainError("levenberg_marquardt: init outside bounds");
  }

  const Scaling scaling(init, bounds);
  const Problem prob{residual, scaling, bounds, n_residuals};

  Eigen::VectorXd u = scaling.to_working(init);
  Eigen::VectorXd r = prob.residual(u);
  double cost = 0.5 * r.squaredNorm();
  Eigen::MatrixXd jac = prob.jacobian(u, r);
  Eigen::MatrixXd normal = jac.transpose() * jac;
  if (singular(normal)) {
    throw RankDeficiencyError("least squares: normal equations are singular at the initial point");
  }

  double lambda = 1e-3;
  double nu = 2.0;
  FitResult out;
  int it = 0;
  while (it < options.max_iterations) {
    ++it;
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd grad = jac.transpose() * r;
    Eigen::VectorXd diag = normal.diagonal();
    const double floor = 1e-12 * diag.maxCoeff();
    for (Eigen::Index i = 0; i < diag.size(); ++i) diag(i) = std::max(diag(i), floor);
    Eigen::MatrixXd damped = normal;
    damped.diagonal() += lambda * diag;
    const Eigen::VectorXd delta = damped.ldlt().solve(-grad);
    const Eigen::VectorXd trial = prob.project(u + delta);
    const Eigen::VectorXd step = trial - u;
    if (step.norm() < options.step_tol * (u.norm() + options.step_tol)) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd r_trial = prob.residual(trial);
    const double cost_trial = 0.5 * r_trial.squaredNorm();
    if (std::isfinite(cost_trial) && cost_trial < cost) {
      const double predicted = -(step.dot(grad) + 0.5 * step.dot(normal * step));
      const double rho = predicted > 0.0 ? (cost - cost_trial) / predicted : 0.0;
      const double relative = (cost - cost_trial) / cost;
      u = trial;
      r = r_trial;
      cost = cost_trial;
      jac = prob.jacobian(u, r);
      normal = jac.transpose() * jac;
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (relative < options.relative_cost_tol) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (lambda > 1e30) {
        out.converged = true;
        break;
      }
    }
  }
  out.iterations = it;
  out.params = scaling.to_physical(u);
  out.residual_norm = r.norm();

  // Covariance from the pseudo-inverse of J^T J, scaled by the reduced chi^2.
  const double dof = static_cast<double>(n_residuals) - static_cast<double>(n);
  const double s2 = dof > 0.0 ? 2.0 * cost / dof : 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const double top = std::max(vals.maxCoeff(), 0.0);
  Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.identifiable.assign(n, true);
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (top > 0.0 && vals(k) > 1e-12 * top) {
      pinv += vecs.col(k) * vecs.col(k).transpose() / vals(k);
    } else {
      for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vecs(i, k) * vecs(i, k) > 1e-3) out.identifiable[static_cast<std::size_t>(i)] = false;
      }
    }
  }
  out.covariance.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      double c = s2 * pinv(a, b) * scaling.scale[i] * scaling.scale[j];
      if (!out.identifiable[i] || !out.identifiable[j]) {
        c = i == j ? std::numeric_limits<double>::infinity() : 0.0;
      }
      out.covariance(a, b) = c;
    }
  }
  return out;
}

}  // namespace dslit::fit
