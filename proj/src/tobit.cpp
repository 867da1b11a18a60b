#include "infbeta/tobit.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "infbeta/special.hpp"

namespace infbeta {

namespace {

double log_norm_cdf(double z) { return std::log(std_normal_cdf(z)); }

// phi(z) / Phi(z), evaluated in log space.
double mills(double z) { return std::exp(std_normal_logpdf(z) - log_norm_cdf(z)); }

void check_support(std::span<const double> sample, Censoring censoring) {
  if (sample.empty()) throw DataError("empty sample");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double y = sample[i];
    if (!(y >= 0.0 && y <= 1.0))
      throw DataError("observation " + std::to_string(i) + " = " + std::to_string(y) +
                          " lies outside [0,1]",
                      i);
    if (y == 1.0 && censoring == Censoring::LeftAtZero)
      throw SupportError("observation " + std::to_string(i) +
                             " = 1 is not allowed by the left-censored Tobit model",
                         i);
  }
}

// Log-likelihood and gradient in (mu, sigma).
double evaluate(double mu, double sigma, Censoring censoring, std::span<const double> sample,
                Eigen::Vector2d* grad) {
  const double log_sigma = std::log(sigma);
  double ll = 0.0;
  double d_mu = 0.0;
  double d_sigma = 0.0;
  for (double y : sample) {
    if (y == 0.0) {
      const double z = -mu / sigma;
      ll += log_norm_cdf(z);
      if (grad) {
        const double lam = mills(z);
        d_mu += -lam / sigma;
        d_sigma += -lam * z / sigma;
      }
    } else if (y == 1.0 && censoring == Censoring::DoubleZeroOne) {
      const double z = (1.0 - mu) / sigma;
      ll += log_norm_cdf(-z);
      if (grad) {
        const double lam = mills(-z);
        d_mu += lam / sigma;
        d_sigma += lam * z / sigma;
      }
    } else {
      const double z = (y - mu) / sigma;
      ll += std_normal_logpdf(z) - log_sigma;
      if (grad) {
        d_mu += z / sigma;
        d_sigma += (z * z - 1.0) / sigma;
      }
    }
  }
  if (grad) *grad << d_mu, d_sigma;
  return ll;
}

}  // namespace

std::string_view censoring_name(Censoring c) {
  return c == Censoring::LeftAtZero ? "tobit-left" : "tobit-double";
}

TobitParams::TobitParams(double mu_, double sigma_, Censoring censoring_)
    : mu(mu_), sigma(sigma_), censoring(censoring_) {
  if (!std::isfinite(mu)) throw DomainError("Tobit mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("Tobit sigma must be positive, got " + std::to_string(sigma));
}

double TobitParams::prob_zero() const { return std_normal_cdf(-mu / sigma); }

double TobitParams::prob_one() const {
  return censoring == Censoring::DoubleZeroOne ? std_normal_cdf(-(1.0 - mu) / sigma) : 0.0;
}

double TobitParams::prob_interior() const {
  const double upper = censoring == Censoring::DoubleZeroOne ? std_normal_cdf((1.0 - mu) / sigma)
                                                             : 1.0;
  return upper - std_normal_cdf(-mu / sigma);
}

double tobit_loglik(const TobitParams& params, std::span<const double> sample) {
  check_support(sample, params.censoring);
  return evaluate(params.mu, params.sigma, params.censoring, sample, nullptr);
}

Eigen::Vector2d tobit_gradient(const TobitParams& params, std::span<const double> sample) {
  check_support(sample, params.censoring);
  Eigen::Vector2d g;
  evaluate(params.mu, params.sigma, params.censoring, sample, &g);
  return g;
}

double tobit_cdf(double t, const TobitParams& params) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("tobit_cdf: t must lie in [0,1], got " + std::to_string(t));
  if (t == 1.0 && params.censoring == Censoring::DoubleZeroOne) return 1.0;
  return std_normal_cdf((t - params.mu) / params.sigma);
}

TobitFit tobit_fit(std::span<const double> sample, Censoring censoring, const OptimOptions& opts) {
  check_support(sample, censoring);

  // Start at the interior mean and SD; fall back to the whole sample.
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t m = 0;
  std::size_t zeros = 0;
  std::size_t ones = 0;
  for (double y : sample) {
    if (y == 0.0) {
      ++zeros;
    } else if (y == 1.0) {
      ++ones;
    } else {
      sum += y;
      sum_sq += y * y;
      ++m;
    }
  }
  double mean0 = 0.0;
  double var0 = 0.0;
  if (m >= 2) {
    mean0 = sum / static_cast<double>(m);
    var0 = sum_sq / static_cast<double>(m) - mean0 * mean0;
  } else {
    double s = 0.0;
    double s2 = 0.0;
    for (double y : sample) {
      s += y;
      s2 += y * y;
    }
    mean0 = s / static_cast<double>(sample.size());
    var0 = s2 / static_cast<double>(sample.size()) - mean0 * mean0;
  }
  const double sd0 = var0 > 1e-12 ? std::sqrt(var0) : 0.1;

  ObjectiveProblem<2> problem;
  problem.start << mean0, std::log(sd0);
  problem.evaluate = [&](const Eigen::Vector2d& x, Eigen::Vector2d& grad) {
    const double sigma = std::exp(x(1));
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(x(0))) {
      grad.setConstant(std::numeric_limits<double>::quiet_NaN());
      return -std::numeric_limits<double>::infinity();
    }
    Eigen::Vector2d g;
    const double ll = evaluate(x(0), sigma, censoring, sample, &g);
    grad << g(0), g(1) * sigma;
    return ll;
  };

  const auto res = maximize(problem, opts);
  if (res.record.status != OptimStatus::Converged) {
    throw OptimizationError("Tobit ML estimation did not converge (" +
                                std::string(status_name(res.record.status)) + ")",
                            Eigen::VectorXd(res.point), res.record);
  }
  const TobitParams params(res.point(0), std::exp(res.point(1)), censoring);

  // Observed information by central differences of the analytic gradient.
  Eigen::Matrix2d hess;
  const Eigen::Vector2d theta(params.mu, params.sigma);
  for (int j = 0; j < 2; ++j) {
    const double h = 1e-5 * std::max(1.0, std::abs(theta(j)));
    Eigen::Vector2d up = theta;
    Eigen::Vector2d down = theta;
    up(j) += h;
    down(j) -= h;
    Eigen::Vector2d g_up;
    Eigen::Vector2d g_down;
    evaluate(up(0), up(1), censoring, sample, &g_up);
    evaluate(down(0), down(1), censoring, sample, &g_down);
    hess.col(j) = (g_up - g_down) / (2.0 * h);
  }
  const Eigen::Matrix2d info = -0.5 * (hess + hess.transpose());
  Eigen::FullPivLU<Eigen::Matrix2d> lu(info);
  if (!lu.isInvertible()) throw NumericalError("Tobit observed information is singular");
  const Eigen::Matrix2d cov = lu.inverse();

  FitReport rep;
  rep.model = std::string(censoring_name(censoring));
  rep.method = Method::Ml;
  rep.n = sample.size();
  rep.n_zero = zeros;
  rep.n_one = ones;
  rep.n_interior = m;
  rep.estimates = {{"mu", params.mu}, {"sigma", params.sigma}};
  rep.std_errors = {{"mu", std::sqrt(cov(0, 0))}, {"sigma", std::sqrt(cov(1, 1))}};
  rep.loglik = res.value;
  rep.convergence = res.record;
  return {params, rep};
}

}  // namespace infbeta
