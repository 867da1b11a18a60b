#ifndef INFBETA_ESTIMATION_HPP
#define INFBETA_ESTIMATION_HPP

// Likelihood-based and conditional-moment estimation for BEZI, BEOI and BEINF.
//
// The likelihood factorizes into a term in alpha (and gamma for BEINF) and a
// beta term in (mu, phi), so everything here is driven by the sufficient
// statistics:
//
//   t1  number of observations at an inflation point
//   t2  sum of those boundary values (the number of ones)
//   t3  sum of log y over interior observations
//   t4  sum of log(1 - y) over interior observations

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infbeta/inflated.hpp"
#include "infbeta/optimize.hpp"

namespace infbeta {

struct SuffStats {
  Family family = Family::Bezi;
  std::size_t n = 0;
  std::size_t t1 = 0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  // Interior mean and sum of squared deviations (Welford), used by the
  // conditional-moment estimator.
  double interior_mean = 0.0;
  double interior_m2 = 0.0;

  std::size_t interior() const { return n - t1; }
  std::size_t zeros() const;
  std::size_t ones() const;
};

/// Single pass over a sample. Rejects values outside [0,1] and boundary values
/// the family does not support.
SuffStats sufficient_stats(std::span<const double> sample, Family family);

struct ProportionEstimate {
  double estimate;
  double variance;
};

/// alpha-hat = t1 / n with plug-in variance alpha-hat (1 - alpha-hat) / n.
/// Throws BoundaryEstimateError when t1 is 0 or n.
ProportionEstimate mle_alpha(const SuffStats& stats);

struct GammaEstimate {
  double estimate;
  // Set when the estimate sits on 0 or 1 (including the 0/0 = 0 convention).
  bool at_boundary;
};

/// gamma-hat = t2 / t1 with 0/0 taken as 0.
GammaEstimate mle_gamma(const SuffStats& stats);

// Log-likelihood pieces.
double loglik_alpha(double alpha, const SuffStats& stats);
double loglik_gamma(double gamma, const SuffStats& stats);
double loglik_mu_phi(double mu, double phi, const SuffStats& stats);

double loglik(const InflParams<double>& params, const SuffStats& stats);
double loglik(const BeinfParams<double>& params, const SuffStats& stats);

/// (U_mu, U_phi) for the beta part of the likelihood.
Eigen::Vector2d score_mu_phi(double mu, double phi, const SuffStats& stats);

struct MuPhi {
  double mu;
  double phi;
};

/// Conditional-moment estimates from the interior mean and the second central
/// moment with divisor n - t1.
MuPhi cm_mu_phi(const SuffStats& stats);
MuPhi cm_mu_phi(std::span<const double> interior);

struct MuPhiFit {
  double mu;
  double phi;
  double loglik;
  OptimRecord record;
};

/// ML estimates of (mu, phi) by BFGS in (logit mu, log phi). Default start is
/// the CM estimate, or (interior mean, 1) when CM is infeasible.
MuPhiFit mle_mu_phi(const SuffStats& stats, std::optional<MuPhi> start = std::nullopt,
                    const OptimOptions& opts = {});

struct FisherMatrix {
  Eigen::MatrixXd entries;
  std::vector<std::string> names;

  Eigen::Index order() const { return entries.rows(); }
  Eigen::MatrixXd inverse() const;
};

/// Per-observation expected information.
FisherMatrix fisher_info(const InflParams<double>& params);
FisherMatrix fisher_info(const BeinfParams<double>& params);
FisherMatrix fisher_info(const BeinfDeltaParams<double>& params);

enum class MomentTarget { Mean, Variance };

/// Gradient of E(y) or Var(y) with respect to (alpha, mu, phi) or
/// (alpha, gamma, mu, phi).
Eigen::VectorXd moment_gradient(const InflParams<double>& params, MomentTarget target);
Eigen::VectorXd moment_gradient(const BeinfParams<double>& params, MomentTarget target);

/// Asymptotic variance r'(theta)' K(theta)^{-1} r'(theta) of sqrt(n) (r-hat - r).
double delta_method_var(const InflParams<double>& params, MomentTarget target);
double delta_method_var(const BeinfParams<double>& params, MomentTarget target);

enum class Method { Ml, Cm };
enum class Parameterization { Standard, Delta };

std::string_view method_name(Method m);

struct FitReport {
  // "bezi", "beoi", "beinf", "tobit-left" or "tobit-double".
  std::string model;
  Method method = Method::Ml;
  Parameterization parameterization = Parameterization::Standard;
  std::size_t n = 0;
  std::size_t n_zero = 0;
  std::size_t n_one = 0;
  std::size_t n_interior = 0;
  // Ordered (name, value) pairs.
  std::vector<std::pair<std::string, double>> estimates;
  std::vector<std::pair<std::string, double>> std_errors;
  double loglik = 0.0;
  std::optional<OptimRecord> convergence;
  std::vector<std::string> warnings;

  std::optional<double> estimate(std::string_view name) const;
  std::optional<double> std_error(std::string_view name) const;
};

FitReport fit(std::span<const double> sample, Family family, Method method = Method::Ml,
              Parameterization parameterization = Parameterization::Standard);

}  // namespace infbeta

#endif  // INFBETA_ESTIMATION_HPP
