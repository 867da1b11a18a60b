#ifndef INFBETA_INFLATED_HPP
#define INFBETA_INFLATED_HPP

// Inflated beta distributions.
//
// BEZI / BEOI: mixture of a point mass alpha at c (0 or 1) and a beta
// distribution with weight 1 - alpha. BEINF: mixture of a Bernoulli(gamma)
// with weight alpha and a beta distribution with weight 1 - alpha.
//
// Densities are taken with respect to Lebesgue measure plus the point
// mass(es) at the inflation point(s): the value at an inflation point is a
// probability, interior values are densities. Boundary membership is exact
// equality with 0.0 or 1.0.

#include <Eigen/Core>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include "infbeta/beta.hpp"
#include "infbeta/errors.hpp"
#include "infbeta/random.hpp"
#include "infbeta/special.hpp"

namespace infbeta {

enum class InflationPoint { Zero, One };

template <std::floating_point Scalar = double>
constexpr Scalar point_value(InflationPoint c) {
  return c == InflationPoint::Zero ? Scalar(0) : Scalar(1);
}

enum class Family { Bezi, Beoi, Beinf };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

namespace detail {
template <std::floating_point Scalar>
void require_open_unit(Scalar v, const char* what) {
  if (!(v > Scalar(0) && v < Scalar(1)))
    throw DomainError(std::string(what) + " must lie in (0,1), got " + std::to_string(double(v)));
}
}  // namespace detail

template <std::floating_point Scalar = double>
struct InflParams {
  InflParams(Scalar alpha_, InflationPoint point_, BetaParams<Scalar> beta_)
      : alpha(alpha_), point(point_), beta(beta_) {
    detail::require_open_unit(alpha, "alpha");
  }

  Scalar alpha;
  InflationPoint point;
  BetaParams<Scalar> beta;

  Scalar c() const { return point_value<Scalar>(point); }
  Family family() const { return point == InflationPoint::Zero ? Family::Bezi : Family::Beoi; }
};

template <std::floating_point Scalar = double>
struct BeinfParams {
  BeinfParams(Scalar alpha_, Scalar gamma_, BetaParams<Scalar> beta_)
      : alpha(alpha_), gamma(gamma_), beta(beta_) {
    detail::require_open_unit(alpha, "alpha");
    detail::require_open_unit(gamma, "gamma");
  }

  Scalar alpha;
  Scalar gamma;
  BetaParams<Scalar> beta;

  Scalar prob_zero() const { return alpha * (Scalar(1) - gamma); }
  Scalar prob_one() const { return alpha * gamma; }
};

// BEINF with delta0 = P(y = 0), delta1 = P(y = 1).
template <std::floating_point Scalar = double>
struct BeinfDeltaParams {
  BeinfDeltaParams(Scalar delta0_, Scalar delta1_, BetaParams<Scalar> beta_)
      : delta0(delta0_), delta1(delta1_), beta(beta_) {
    detail::require_open_unit(delta0, "delta0");
    detail::require_open_unit(delta1, "delta1");
    if (!(delta0 + delta1 < Scalar(1)))
      throw DomainError("delta0 + delta1 must be below 1, got " +
                        std::to_string(double(delta0 + delta1)));
  }

  Scalar delta0;
  Scalar delta1;
  BetaParams<Scalar> beta;
};

template <std::floating_point Scalar>
struct Moments {
  Scalar moment;
  Scalar variance;
};

// ---------------------------------------------------------------------------
// BEZI / BEOI

template <std::floating_point Scalar>
Scalar infl_pdf(Scalar y, const InflParams<Scalar>& p) {
  if (y == p.c()) return p.alpha;
  if (y > Scalar(0) && y < Scalar(1)) return (Scalar(1) - p.alpha) * beta_pdf(y, p.beta);
  throw SupportError("value outside distribution support: " + std::to_string(double(y)));
}

template <std::floating_point Scalar>
Scalar infl_logpdf(Scalar y, const InflParams<Scalar>& p) {
  if (y == p.c()) return std::log(p.alpha);
  if (y > Scalar(0) && y < Scalar(1)) return std::log1p(-p.alpha) + beta_logpdf(y, p.beta);
  throw SupportError("value outside distribution support: " + std::to_string(double(y)));
}

/// alpha 1{y >= c} + (1 - alpha) F(y; mu, phi).
template <std::floating_point Scalar>
Scalar infl_cdf(Scalar y, const InflParams<Scalar>& p) {
  if (!(y >= Scalar(0) && y <= Scalar(1)))
    throw DomainError("infl_cdf: y must lie in [0,1], got " + std::to_string(double(y)));
  const Scalar step = y >= p.c() ? Scalar(1) : Scalar(0);
  return p.alpha * step + (Scalar(1) - p.alpha) * beta_cdf(y, p.beta);
}

template <std::floating_point Scalar>
Moments<Scalar> infl_moments(unsigned r, const InflParams<Scalar>& p) {
  const Scalar a = p.alpha;
  const Scalar c = p.c();
  const Scalar mu = p.beta.mu();
  const Scalar moment = a * c + (Scalar(1) - a) * beta_moment(r, p.beta);
  const Scalar var = (Scalar(1) - a) * p.beta.variance() + a * (Scalar(1) - a) * (c - mu) * (c - mu);
  return {moment, var};
}

inline double infl_sample(const InflParams<double>& p, RandomSource& rng) {
  if (rng.uniform_open() < p.alpha) return p.c();
  return beta_sample(p.beta, rng);
}

// ---------------------------------------------------------------------------
// BEINF

template <std::floating_point Scalar>
Scalar beinf_pdf(Scalar y, const BeinfParams<Scalar>& p) {
  if (y == Scalar(0)) return p.prob_zero();
  if (y == Scalar(1)) return p.prob_one();
  if (y > Scalar(0) && y < Scalar(1)) return (Scalar(1) - p.alpha) * beta_pdf(y, p.beta);
  throw SupportError("value outside distribution support: " + std::to_string(double(y)));
}

template <std::floating_point Scalar>
Scalar beinf_logpdf(Scalar y, const BeinfParams<Scalar>& p) {
  if (y == Scalar(0)) return std::log(p.alpha) + std::log1p(-p.gamma);
  if (y == Scalar(1)) return std::log(p.alpha) + std::log(p.gamma);
  if (y > Scalar(0) && y < Scalar(1)) return std::log1p(-p.alpha) + beta_logpdf(y, p.beta);
  throw SupportError("value outside distribution support: " + std::to_string(double(y)));
}

/// alpha Ber(y; gamma) + (1 - alpha) F(y; mu, phi).
template <std::floating_point Scalar>
Scalar beinf_cdf(Scalar y, const BeinfParams<Scalar>& p) {
  if (!(y >= Scalar(0) && y <= Scalar(1)))
    throw DomainError("beinf_cdf: y must lie in [0,1], got " + std::to_string(double(y)));
  const Scalar bernoulli = y >= Scalar(1) ? Scalar(1) : Scalar(1) - p.gamma;
  return p.alpha * bernoulli + (Scalar(1) - p.alpha) * beta_cdf(y, p.beta);
}

template <std::floating_point Scalar>
Moments<Scalar> beinf_moments(unsigned r, const BeinfParams<Scalar>& p) {
  const Scalar a = p.alpha;
  const Scalar g = p.gamma;
  const Scalar mu = p.beta.mu();
  const Scalar moment = a * g + (Scalar(1) - a) * beta_moment(r, p.beta);
  const Scalar v1 = g * (Scalar(1) - g);
  const Scalar v2 = p.beta.variance();
  const Scalar var = a * v1 + (Scalar(1) - a) * v2 + a * (Scalar(1) - a) * (g - mu) * (g - mu);
  return {moment, var};
}

inline double beinf_sample(const BeinfParams<double>& p, RandomSource& rng) {
  if (rng.uniform_open() < p.alpha) return rng.uniform_open() < p.gamma ? 1.0 : 0.0;
  return beta_sample(p.beta, rng);
}

// ---------------------------------------------------------------------------
// (alpha, gamma) <-> (delta0, delta1)

template <std::floating_point Scalar>
BeinfDeltaParams<Scalar> to_delta(const BeinfParams<Scalar>& p) {
  return {p.prob_zero(), p.prob_one(), p.beta};
}

template <std::floating_point Scalar>
BeinfParams<Scalar> from_delta(const BeinfDeltaParams<Scalar>& d) {
  const Scalar alpha = d.delta0 + d.delta1;
  return {alpha, d.delta1 / alpha, d.beta};
}

template <std::floating_point Scalar>
Scalar beinf_delta_pdf(Scalar y, const BeinfDeltaParams<Scalar>& d) {
  if (y == Scalar(0)) return d.delta0;
  if (y == Scalar(1)) return d.delta1;
  if (y > Scalar(0) && y < Scalar(1))
    return (Scalar(1) - d.delta0 - d.delta1) * beta_pdf(y, d.beta);
  throw SupportError("value outside distribution support: " + std::to_string(double(y)));
}

// ---------------------------------------------------------------------------
// Canonical exponential-family form exp{eta' T(y) - B*(eta)} h(y).

template <std::floating_point Scalar = double>
class CanonicalEta {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static CanonicalEta from(const InflParams<Scalar>& p) {
    Vector eta(3);
    const Scalar a = p.beta.shape_a();
    const Scalar b = p.beta.shape_b();
    eta << std::log(p.alpha / (Scalar(1) - p.alpha)) + log_beta_fn(a, b), a, b;
    return CanonicalEta(std::move(eta), p.family());
  }

  static CanonicalEta from(const BeinfParams<Scalar>& p) {
    Vector eta(4);
    const Scalar a = p.beta.shape_a();
    const Scalar b = p.beta.shape_b();
    const Scalar eta2 = std::log(p.gamma / (Scalar(1) - p.gamma));
    eta << std::log(p.alpha / (Scalar(1) - p.alpha)) - log1p_exp(eta2) + log_beta_fn(a, b), eta2,
        a, b;
    return CanonicalEta(std::move(eta), Family::Beinf);
  }

  const Vector& eta() const { return eta_; }
  Family family() const { return family_; }

  /// Sufficient statistic T(y) of one observation.
  Vector statistic(Scalar y) const {
    const bool boundary = is_boundary(y);
    if (family_ == Family::Beinf) {
      Vector t(4);
      if (boundary) {
        t << Scalar(1), y, Scalar(0), Scalar(0);
      } else {
        t << Scalar(0), Scalar(0), std::log(y), std::log1p(-y);
      }
      return t;
    }
    Vector t(3);
    if (boundary) {
      t << Scalar(1), Scalar(0), Scalar(0);
    } else {
      t << Scalar(0), std::log(y), std::log1p(-y);
    }
    return t;
  }

  /// Log-partition B*(eta).
  Scalar log_partition() const {
    if (family_ == Family::Beinf) {
      const Scalar lb = log_beta_fn(eta_(2), eta_(3));
      return log1p_exp(eta_(0) + log1p_exp(eta_(1)) - lb) + lb;
    }
    const Scalar lb = log_beta_fn(eta_(1), eta_(2));
    return log1p_exp(eta_(0) - lb) + lb;
  }

  /// Base measure h(y): 1 / (y (1 - y)) on the interior, 1 at inflation points.
  Scalar base_measure(Scalar y) const {
    return is_boundary(y) ? Scalar(1) : Scalar(1) / (y * (Scalar(1) - y));
  }

  Scalar density(Scalar y) const {
    check_support(y);
    return std::exp(eta_.dot(statistic(y)) - log_partition()) * base_measure(y);
  }

 private:
  CanonicalEta(Vector eta, Family family) : eta_(std::move(eta)), family_(family) {}

  static Scalar log1p_exp(Scalar x) {
    return x > Scalar(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  }

  bool is_boundary(Scalar y) const {
    switch (family_) {
      case Family::Bezi:
        return y == Scalar(0);
      case Family::Beoi:
        return y == Scalar(1);
      case Family::Beinf:
        return y == Scalar(0) || y == Scalar(1);
    }
    return false;
  }

  void check_support(Scalar y) const {
    if (is_boundary(y) || (y > Scalar(0) && y < Scalar(1))) return;
    throw SupportError("value outside distribution support: " + std::to_string(double(y)));
  }

  Vector eta_;
  Family family_;
};

template <std::floating_point Scalar>
CanonicalEta<Scalar> canonical_form(const InflParams<Scalar>& p) {
  return CanonicalEta<Scalar>::from(p);
}

template <std::floating_point Scalar>
CanonicalEta<Scalar> canonical_form(const BeinfParams<Scalar>& p) {
  return CanonicalEta<Scalar>::from(p);
}

}  // namespace infbeta

#endif  // INFBETA_INFLATED_HPP
