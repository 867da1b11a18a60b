#include "infbeta/estimation.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "infbeta/special.hpp"

namespace infbeta {

namespace {

void require_family(const SuffStats& stats, Family expected) {
  if (stats.family != expected)
    throw DomainError("sufficient statistics were computed for " +
                      std::string(family_name(stats.family)) + ", not " +
                      std::string(family_name(expected)));
}

bool is_boundary(double y, Family family) {
  switch (family) {
    case Family::Bezi:
      return y == 0.0;
    case Family::Beoi:
      return y == 1.0;
    case Family::Beinf:
      return y == 0.0 || y == 1.0;
  }
  return false;
}

Eigen::Matrix2d beta_block(double alpha, double mu, double phi) {
  const double a = mu * phi;
  const double b = (1.0 - mu) * phi;
  const double ta = trigamma(a);
  const double tb = trigamma(b);
  const double w = 1.0 - alpha;
  Eigen::Matrix2d k;
  k(0, 0) = w * phi * phi * (ta + tb);
  k(0, 1) = w * phi * (ta * mu - tb * (1.0 - mu));
  k(1, 0) = k(0, 1);
  k(1, 1) = w * (mu * mu * ta + (1.0 - mu) * (1.0 - mu) * tb - trigamma(phi));
  return k;
}

double quadratic_form_inverse(const FisherMatrix& k, const Eigen::VectorXd& grad) {
  Eigen::LLT<Eigen::MatrixXd> llt(k.entries);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Fisher information matrix is not positive definite");
  return grad.dot(llt.solve(grad));
}

}  // namespace

std::size_t SuffStats::zeros() const {
  switch (family) {
    case Family::Bezi:
      return t1;
    case Family::Beoi:
      return 0;
    case Family::Beinf:
      return t1 - static_cast<std::size_t>(std::llround(t2));
  }
  return 0;
}

std::size_t SuffStats::ones() const {
  switch (family) {
    case Family::Bezi:
      return 0;
    case Family::Beoi:
      return t1;
    case Family::Beinf:
      return static_cast<std::size_t>(std::llround(t2));
  }
  return 0;
}

SuffStats sufficient_stats(std::span<const double> sample, Family family) {
  if (sample.empty()) throw DataError("empty sample");
  SuffStats s;
  s.family = family;
  s.n = sample.size();
  std::size_t m = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double y = sample[i];
    if (!(y >= 0.0 && y <= 1.0))
      throw DataError("observation " + std::to_string(i) + " = " + std::to_string(y) +
                          " lies outside [0,1]",
                      i);
    if (is_boundary(y, family)) {
      ++s.t1;
      s.t2 += y;
      continue;
    }
    if (y == 0.0 || y == 1.0)
      throw SupportError("observation " + std::to_string(i) + " = " + std::to_string(y) +
                             " is outside the " + std::string(family_name(family)) + " support",
                         i);
    s.t3 += std::log(y);
    s.t4 += std::log1p(-y);
    ++m;
    const double delta = y - s.interior_mean;
    s.interior_mean += delta / static_cast<double>(m);
    s.interior_m2 += delta * (y - s.interior_mean);
  }
  return s;
}

ProportionEstimate mle_alpha(const SuffStats& stats) {
  if (stats.n == 0) throw DataError("empty sample");
  if (stats.t1 == 0)
    throw BoundaryEstimateError(
        "alpha-hat = 0: no observations at the inflation point(s); fit a plain beta "
        "distribution instead");
  if (stats.t1 == stats.n)
    throw BoundaryEstimateError(
        "alpha-hat = 1: every observation sits at the inflation point(s); an inflated beta "
        "model is not recommended for these data");
  const double n = static_cast<double>(stats.n);
  const double a = static_cast<double>(stats.t1) / n;
  return {a, a * (1.0 - a) / n};
}

GammaEstimate mle_gamma(const SuffStats& stats) {
  if (stats.t1 == 0) return {0.0, true};
  const double g = stats.t2 / static_cast<double>(stats.t1);
  return {g, g == 0.0 || g == 1.0};
}

double loglik_alpha(double alpha, const SuffStats& stats) {
  detail::require_open_unit(alpha, "alpha");
  const double t1 = static_cast<double>(stats.t1);
  const double rest = static_cast<double>(stats.n - stats.t1);
  return t1 * std::log(alpha) + rest * std::log1p(-alpha);
}

double loglik_gamma(double gamma, const SuffStats& stats) {
  detail::require_open_unit(gamma, "gamma");
  return stats.t2 * std::log(gamma) + (static_cast<double>(stats.t1) - stats.t2) * std::log1p(-gamma);
}

double loglik_mu_phi(double mu, double phi, const SuffStats& stats) {
  const BetaParams<double> bp(mu, phi);
  const double m = static_cast<double>(stats.interior());
  const double a = bp.shape_a();
  const double b = bp.shape_b();
  return m * (log_gamma(phi) - log_gamma(a) - log_gamma(b)) + stats.t3 * (a - 1.0) +
         stats.t4 * (b - 1.0);
}

double loglik(const InflParams<double>& params, const SuffStats& stats) {
  require_family(stats, params.family());
  return loglik_alpha(params.alpha, stats) +
         loglik_mu_phi(params.beta.mu(), params.beta.phi(), stats);
}

double loglik(const BeinfParams<double>& params, const SuffStats& stats) {
  require_family(stats, Family::Beinf);
  return loglik_alpha(params.alpha, stats) + loglik_gamma(params.gamma, stats) +
         loglik_mu_phi(params.beta.mu(), params.beta.phi(), stats);
}

Eigen::Vector2d score_mu_phi(double mu, double phi, const SuffStats& stats) {
  const BetaParams<double> bp(mu, phi);
  const double m = static_cast<double>(stats.interior());
  const double da = digamma(bp.shape_a());
  const double db = digamma(bp.shape_b());
  Eigen::Vector2d u;
  u(0) = phi * (m * (db - da) + stats.t3 - stats.t4);
  u(1) = m * (digamma(phi) - mu * da - (1.0 - mu) * db) + mu * stats.t3 + (1.0 - mu) * stats.t4;
  return u;
}

MuPhi cm_mu_phi(const SuffStats& stats) {
  const std::size_t m = stats.interior();
  if (m < 2)
    throw InsufficientDataError("conditional moments need at least 2 interior observations, got " +
                                std::to_string(m));
  const double mean = stats.interior_mean;
  const double s2 = stats.interior_m2 / static_cast<double>(m);
  const double v = mean * (1.0 - mean);
  if (!(s2 > 0.0))
    throw MomentError("interior observations have zero variance; phi-tilde is undefined");
  if (!(s2 < v))
    throw MomentError("interior variance exceeds mu-tilde (1 - mu-tilde); phi-tilde would be <= 0");
  return {mean, v / s2 - 1.0};
}

MuPhi cm_mu_phi(std::span<const double> interior) {
  SuffStats s;
  s.family = Family::Beinf;
  s.n = interior.size();
  std::size_t m = 0;
  for (double y : interior) {
    if (!(y > 0.0 && y < 1.0))
      throw DataError("interior observation outside (0,1): " + std::to_string(y));
    ++m;
    const double delta = y - s.interior_mean;
    s.interior_mean += delta / static_cast<double>(m);
    s.interior_m2 += delta * (y - s.interior_mean);
  }
  return cm_mu_phi(s);
}

MuPhiFit mle_mu_phi(const SuffStats& stats, std::optional<MuPhi> start, const OptimOptions& opts) {
  if (stats.interior() < 2)
    throw InsufficientDataError("ML for (mu, phi) needs at least 2 interior observations, got " +
                                std::to_string(stats.interior()));
  if (!start) {
    try {
      start = cm_mu_phi(stats);
    } catch (const MomentError&) {
      start = MuPhi{stats.interior_mean, 1.0};
    }
  }
  const BetaParams<double> check(start->mu, start->phi);

  ObjectiveProblem<2> problem;
  problem.start << std::log(start->mu / (1.0 - start->mu)), std::log(start->phi);
  problem.evaluate = [&stats](const Eigen::Vector2d& x, Eigen::Vector2d& grad) {
    const double mu = 1.0 / (1.0 + std::exp(-x(0)));
    const double phi = std::exp(x(1));
    if (!(mu > 0.0 && mu < 1.0) || !(phi > 0.0) || !std::isfinite(phi) || !(mu * phi > 0.0) ||
        !((1.0 - mu) * phi > 0.0)) {
      grad.setConstant(std::numeric_limits<double>::quiet_NaN());
      return -std::numeric_limits<double>::infinity();
    }
    const Eigen::Vector2d u = score_mu_phi(mu, phi, stats);
    grad(0) = u(0) * mu * (1.0 - mu);
    grad(1) = u(1) * phi;
    return loglik_mu_phi(mu, phi, stats);
  };

  const auto res = maximize(problem, opts);
  const double mu = 1.0 / (1.0 + std::exp(-res.point(0)));
  const double phi = std::exp(res.point(1));
  if (res.record.status != OptimStatus::Converged) {
    throw OptimizationError("ML estimation of (mu, phi) did not converge (" +
                                std::string(status_name(res.record.status)) + " after " +
                                std::to_string(res.record.iterations) + " iterations, gradient " +
                                std::to_string(res.record.grad_norm) + ")",
                            Eigen::VectorXd(res.point), res.record);
  }
  return {mu, phi, res.value, res.record};
}

Eigen::MatrixXd FisherMatrix::inverse() const {
  Eigen::LLT<Eigen::MatrixXd> llt(entries);
  if (llt.info() != Eigen::Success)
    throw NumericalError("Fisher information matrix is not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(entries.rows(), entries.cols()));
}

FisherMatrix fisher_info(const InflParams<double>& p) {
  FisherMatrix k;
  k.names = {"alpha", "mu", "phi"};
  k.entries = Eigen::MatrixXd::Zero(3, 3);
  k.entries(0, 0) = 1.0 / (p.alpha * (1.0 - p.alpha));
  k.entries.bottomRightCorner<2, 2>() = beta_block(p.alpha, p.beta.mu(), p.beta.phi());
  return k;
}

FisherMatrix fisher_info(const BeinfParams<double>& p) {
  FisherMatrix k;
  k.names = {"alpha", "gamma", "mu", "phi"};
  k.entries = Eigen::MatrixXd::Zero(4, 4);
  k.entries(0, 0) = 1.0 / (p.alpha * (1.0 - p.alpha));
  k.entries(1, 1) = p.alpha / (p.gamma * (1.0 - p.gamma));
  k.entries.bottomRightCorner<2, 2>() = beta_block(p.alpha, p.beta.mu(), p.beta.phi());
  return k;
}

FisherMatrix fisher_info(const BeinfDeltaParams<double>& p) {
  const double d0 = p.delta0;
  const double d1 = p.delta1;
  const double rest = 1.0 - d0 - d1;
  FisherMatrix k;
  k.names = {"delta0", "delta1", "mu", "phi"};
  k.entries = Eigen::MatrixXd::Zero(4, 4);
  k.entries(0, 0) = (1.0 - d1) / (d0 * rest);
  k.entries(0, 1) = 1.0 / rest;
  k.entries(1, 0) = k.entries(0, 1);
  k.entries(1, 1) = (1.0 - d0) / (d1 * rest);
  k.entries.bottomRightCorner<2, 2>() = beta_block(d0 + d1, p.beta.mu(), p.beta.phi());
  return k;
}

Eigen::VectorXd moment_gradient(const InflParams<double>& p, MomentTarget target) {
  const double a = p.alpha;
  const double c = p.c();
  const double mu = p.beta.mu();
  const double phi = p.beta.phi();
  Eigen::VectorXd g(3);
  if (target == MomentTarget::Mean) {
    g << c - mu, 1.0 - a, 0.0;
    return g;
  }
  const double v2 = mu * (1.0 - mu) / (phi + 1.0);
  g << -v2 + (1.0 - 2.0 * a) * (c - mu) * (c - mu),
      (1.0 - a) * (1.0 - 2.0 * mu) / (phi + 1.0) - 2.0 * a * (1.0 - a) * (c - mu),
      -(1.0 - a) * mu * (1.0 - mu) / ((phi + 1.0) * (phi + 1.0));
  return g;
}

Eigen::VectorXd moment_gradient(const BeinfParams<double>& p, MomentTarget target) {
  const double a = p.alpha;
  const double gm = p.gamma;
  const double mu = p.beta.mu();
  const double phi = p.beta.phi();
  Eigen::VectorXd g(4);
  if (target == MomentTarget::Mean) {
    g << gm - mu, a, 1.0 - a, 0.0;
    return g;
  }
  const double v1 = gm * (1.0 - gm);
  const double v2 = mu * (1.0 - mu) / (phi + 1.0);
  const double d = gm - mu;
  g << v1 - v2 + (1.0 - 2.0 * a) * d * d, a * (1.0 - 2.0 * gm) + 2.0 * a * (1.0 - a) * d,
      (1.0 - a) * (1.0 - 2.0 * mu) / (phi + 1.0) - 2.0 * a * (1.0 - a) * d,
      -(1.0 - a) * mu * (1.0 - mu) / ((phi + 1.0) * (phi + 1.0));
  return g;
}

double delta_method_var(const InflParams<double>& params, MomentTarget target) {
  return quadratic_form_inverse(fisher_info(params), moment_gradient(params, target));
}

double delta_method_var(const BeinfParams<double>& params, MomentTarget target) {
  return quadratic_form_inverse(fisher_info(params), moment_gradient(params, target));
}

std::string_view method_name(Method m) { return m == Method::Ml ? "ml" : "cm"; }

std::optional<double> FitReport::estimate(std::string_view name) const {
  for (const auto& [k, v] : estimates)
    if (k == name) return v;
  return std::nullopt;
}

std::optional<double> FitReport::std_error(std::string_view name) const {
  for (const auto& [k, v] : std_errors)
    if (k == name) return v;
  return std::nullopt;
}

FitReport fit(std::span<const double> sample, Family family, Method method,
              Parameterization parameterization) {
  if (parameterization == Parameterization::Delta && family != Family::Beinf)
    throw DomainError("the delta parameterization applies to BEINF only");

  const SuffStats stats = sufficient_stats(sample, family);
  FitReport rep;
  rep.model = std::string(family_name(family));
  rep.method = method;
  rep.parameterization = parameterization;
  rep.n = stats.n;
  rep.n_zero = stats.zeros();
  rep.n_one = stats.ones();
  rep.n_interior = stats.interior();

  const ProportionEstimate alpha = mle_alpha(stats);

  MuPhi mp{};
  if (method == Method::Ml) {
    const MuPhiFit f = mle_mu_phi(stats);
    mp = {f.mu, f.phi};
    rep.convergence = f.record;
  } else {
    mp = cm_mu_phi(stats);
  }
  const BetaParams<double> beta(mp.mu, mp.phi);
  const double n = static_cast<double>(stats.n);

  auto add = [&rep](const std::string& name, double value) {
    rep.estimates.emplace_back(name, value);
  };
  auto add_se = [&rep, n](const std::string& name, double per_obs_var) {
    rep.std_errors.emplace_back(name, std::sqrt(per_obs_var / n));
  };

  if (family != Family::Beinf) {
    const InflParams<double> params(alpha.estimate, family == Family::Bezi ? InflationPoint::Zero
                                                                           : InflationPoint::One,
                                    beta);
    const auto moments = infl_moments(1, params);
    add("alpha", params.alpha);
    add("mu", mp.mu);
    add("phi", mp.phi);
    add("mean", moments.moment);
    add("variance", moments.variance);
    rep.loglik = loglik(params, stats);
    if (method == Method::Ml) {
      const FisherMatrix k = fisher_info(params);
      const Eigen::MatrixXd inv = k.inverse();
      for (Eigen::Index i = 0; i < k.order(); ++i) add_se(k.names[i], inv(i, i));
      add_se("mean", delta_method_var(params, MomentTarget::Mean));
      add_se("variance", delta_method_var(params, MomentTarget::Variance));
    }
    return rep;
  }

  const GammaEstimate gamma = mle_gamma(stats);
  if (gamma.at_boundary) {
    throw BoundaryEstimateError(
        gamma.estimate == 0.0
            ? "gamma-hat = 0: the data contain zeros but no ones; fit BEZI instead"
            : "gamma-hat = 1: the data contain ones but no zeros; fit BEOI instead");
  }
  const BeinfParams<double> params(alpha.estimate, gamma.estimate, beta);
  const auto moments = beinf_moments(1, params);
  rep.loglik = loglik(params, stats);

  if (parameterization == Parameterization::Delta) {
    const BeinfDeltaParams<double> dp(static_cast<double>(stats.zeros()) / n,
                                      static_cast<double>(stats.ones()) / n, beta);
    add("delta0", dp.delta0);
    add("delta1", dp.delta1);
    add("mu", mp.mu);
    add("phi", mp.phi);
    add("mean", moments.moment);
    add("variance", moments.variance);
    if (method == Method::Ml) {
      const FisherMatrix k = fisher_info(dp);
      const Eigen::MatrixXd inv = k.inverse();
      for (Eigen::Index i = 0; i < k.order(); ++i) add_se(k.names[i], inv(i, i));
      add_se("mean", delta_method_var(params, MomentTarget::Mean));
      add_se("variance", delta_method_var(params, MomentTarget::Variance));
    }
    return rep;
  }

  add("alpha", params.alpha);
  add("gamma", params.gamma);
  add("mu", mp.mu);
  add("phi", mp.phi);
  add("mean", moments.moment);
  add("variance", moments.variance);
  if (method == Method::Ml) {
    const FisherMatrix k = fisher_info(params);
    const Eigen::MatrixXd inv = k.inverse();
    for (Eigen::Index i = 0; i < k.order(); ++i) add_se(k.names[i], inv(i, i));
    add_se("mean", delta_method_var(params, MomentTarget::Mean));
    add_se("variance", delta_method_var(params, MomentTarget::Variance));
  }
  return rep;
}

}  // namespace infbeta
