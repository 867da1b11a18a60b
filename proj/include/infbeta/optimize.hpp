#ifndef INFBETA_OPTIMIZE_HPP
#define INFBETA_OPTIMIZE_HPP

// Dense BFGS maximizer for small smooth problems.
//
// The inverse-Hessian approximation is updated only when the curvature
// condition s'y > 0 holds; steps come from a backtracking Armijo search
// (c1 = 1e-4, halving), so accepted steps never decrease the objective
// beyond floating-point noise.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include "infbeta/errors.hpp"

namespace infbeta {

enum class OptimStatus { Converged, MaxIterations, Stalled };

std::string_view status_name(OptimStatus s);

struct OptimRecord {
  int iterations = 0;
  double grad_norm = std::numeric_limits<double>::infinity();
  OptimStatus status = OptimStatus::MaxIterations;
};

template <int Dim>
struct ObjectiveProblem {
  using Vector = Eigen::Matrix<double, Dim, 1>;
  // Returns the objective at x and writes its gradient into grad.
  std::function<double(const Vector& x, Vector& grad)> evaluate;
  Vector start;
};

template <int Dim>
struct OptimResult {
  Eigen::Matrix<double, Dim, 1> point;
  double value;
  OptimRecord record;
};

// Thrown by estimators when the optimizer does not converge. Carries the
// best iterate in the optimizer's working coordinates.
class OptimizationError : public EstimationError {
 public:
  OptimizationError(const std::string& what, Eigen::VectorXd best, OptimRecord record)
      : EstimationError(what), best_(std::move(best)), record_(record) {}

  const Eigen::VectorXd& best() const { return best_; }
  const OptimRecord& record() const { return record_; }

 private:
  Eigen::VectorXd best_;
  OptimRecord record_;
};

struct OptimOptions {
  double tol = 1e-8;
  int max_iter = 200;
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
};

template <int Dim>
OptimResult<Dim> maximize(const ObjectiveProblem<Dim>& problem, const OptimOptions& opts = {}) {
  using Vector = Eigen::Matrix<double, Dim, 1>;
  using Matrix = Eigen::Matrix<double, Dim, Dim>;

  const Eigen::Index n = problem.start.size();
  // Work with f = -objective and minimize.
  auto eval = [&](const Vector& x, Vector& g) {
    const double v = problem.evaluate(x, g);
    g = -g;
    return -v;
  };

  Vector x = problem.start;
  Vector g(n);
  double f = eval(x, g);
  if (!std::isfinite(f) || !g.allFinite())
    throw DomainError("maximize: objective or gradient is not finite at the start point");

  Matrix h = Matrix::Identity(n, n);
  bool scaled = false;
  OptimRecord rec;

  Vector x_new(n);
  Vector g_new(n);
  for (rec.iterations = 0;; ++rec.iterations) {
    rec.grad_norm = g.template lpNorm<Eigen::Infinity>();
    if (rec.grad_norm <= opts.tol) {
      rec.status = OptimStatus::Converged;
      break;
    }
    if (rec.iterations >= opts.max_iter) {
      rec.status = OptimStatus::MaxIterations;
      break;
    }

    Vector dir = -h * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double f_new = f;
    bool accepted = false;
    // Fallback for the last few iterations, where rounding noise in f defeats
    // the sufficient-decrease test: take the first step that reduces the
    // gradient norm without raising f above noise level.
    double fallback_step = 0.0;
    const double noise = 1e-12 * std::max(1.0, std::abs(f));
    for (int k = 0; k < opts.max_backtracks; ++k, step *= 0.5) {
      x_new = x + step * dir;
      if (x_new == x) break;
      // Below this the predicted decrease is lost in rounding.
      if (fallback_step > 0.0 && -step * slope < noise) break;
      const double f_try = eval(x_new, g_new);
      if (!std::isfinite(f_try) || !g_new.allFinite()) continue;
      if (f_try < f && f_try <= f + opts.armijo_c1 * step * slope) {
        f_new = f_try;
        accepted = true;
        break;
      }
      if (fallback_step == 0.0 && f_try <= f + noise &&
          g_new.template lpNorm<Eigen::Infinity>() < rec.grad_norm) {
        fallback_step = step;
      }
    }
    if (!accepted && fallback_step > 0.0) {
      step = fallback_step;
      x_new = x + step * dir;
      f_new = eval(x_new, g_new);
      accepted = true;
    }
    if (!accepted) {
      rec.status = OptimStatus::Stalled;
      break;
    }

    const Vector s = x_new - x;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h = Matrix::Identity(n, n) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Matrix left = Matrix::Identity(n, n) - rho * s * y.transpose();
      h = left * h * left.transpose() + rho * s * s.transpose();
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  return {x, -f, rec};
}

}  // namespace infbeta

#endif  // INFBETA_OPTIMIZE_HPP
