#ifndef INFBETA_TOBIT_HPP
#define INFBETA_TOBIT_HPP

// Censored-normal (Tobit) comparator models for data on [0,1].
//
// The latent y* ~ N(mu, sigma^2) is observed as y = 0 when y* <= 0 and, for
// double censoring, as y = 1 when y* >= 1; otherwise y = y*.

#include <span>
#include <string_view>

#include "infbeta/estimation.hpp"

namespace infbeta {

enum class Censoring { LeftAtZero, DoubleZeroOne };

std::string_view censoring_name(Censoring c);

struct TobitParams {
  TobitParams(double mu_, double sigma_, Censoring censoring_);

  double mu;
  double sigma;
  Censoring censoring;

  double prob_zero() const;
  double prob_one() const;
  double prob_interior() const;
};

double tobit_loglik(const TobitParams& params, std::span<const double> sample);

/// Gradient of tobit_loglik with respect to (mu, sigma).
Eigen::Vector2d tobit_gradient(const TobitParams& params, std::span<const double> sample);

/// P(y <= t) of the censored observable.
double tobit_cdf(double t, const TobitParams& params);

struct TobitFit {
  TobitParams params;
  FitReport report;
};

/// ML fit in (mu, log sigma) started at the interior mean and SD. Standard
/// errors come from a central-difference observed information.
TobitFit tobit_fit(std::span<const double> sample, Censoring censoring,
                   const OptimOptions& opts = {});

}  // namespace infbeta

#endif  // INFBETA_TOBIT_HPP
