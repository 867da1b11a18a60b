#ifndef INFBETA_BETA_HPP
#define INFBETA_BETA_HPP

// Beta distribution in the mean-precision parameterization
//
//   f(y; mu, phi) = Gamma(phi) / (Gamma(mu phi) Gamma((1 - mu) phi))
//                   * y^{mu phi - 1} (1 - y)^{(1 - mu) phi - 1},   0 < y < 1,
//
// with E(y) = mu and Var(y) = mu (1 - mu) / (phi + 1).

#include <cmath>
#include <concepts>
#include <limits>
#include <string>

#include "infbeta/errors.hpp"
#include "infbeta/random.hpp"
#include "infbeta/special.hpp"

namespace infbeta {

template <std::floating_point Scalar = double>
class BetaParams {
 public:
  BetaParams(Scalar mu, Scalar phi) : mu_(mu), phi_(phi) {
    if (!(mu > Scalar(0) && mu < Scalar(1)))
      throw DomainError("BetaParams: mu must lie in (0,1), got " + std::to_string(double(mu)));
    if (!(phi > Scalar(0)) || !std::isfinite(phi))
      throw DomainError("BetaParams: phi must be positive, got " + std::to_string(double(phi)));
  }

  Scalar mu() const { return mu_; }
  Scalar phi() const { return phi_; }
  Scalar shape_a() const { return mu_ * phi_; }
  Scalar shape_b() const { return (Scalar(1) - mu_) * phi_; }
  // Variance function V(mu) = mu (1 - mu).
  Scalar variance_function() const { return mu_ * (Scalar(1) - mu_); }
  Scalar variance() const { return variance_function() / (phi_ + Scalar(1)); }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;

 private:
  Scalar mu_;
  Scalar phi_;
};

template <std::floating_point Scalar>
Scalar beta_logpdf(Scalar y, const BetaParams<Scalar>& p) {
  if (!(y > Scalar(0) && y < Scalar(1)))
    throw DomainError("beta density: y must lie in (0,1), got " + std::to_string(double(y)));
  const Scalar a = p.shape_a();
  const Scalar b = p.shape_b();
  return (a - Scalar(1)) * std::log(y) + (b - Scalar(1)) * std::log1p(-y) - log_beta_fn(a, b);
}

template <std::floating_point Scalar>
Scalar beta_pdf(Scalar y, const BetaParams<Scalar>& p) {
  return std::exp(beta_logpdf(y, p));
}

template <std::floating_point Scalar>
Scalar beta_cdf(Scalar y, const BetaParams<Scalar>& p) {
  if (!(y >= Scalar(0) && y <= Scalar(1)))
    throw DomainError("beta_cdf: y must lie in [0,1], got " + std::to_string(double(y)));
  return reg_inc_beta(y, p.shape_a(), p.shape_b());
}

template <std::floating_point Scalar>
Scalar beta_quantile(Scalar prob, const BetaParams<Scalar>& p) {
  return inv_reg_inc_beta(prob, p.shape_a(), p.shape_b());
}

/// r-th raw moment (mu phi)_(r) / (phi)_(r) with rising factorials.
/// r = 0 gives 1.
template <std::floating_point Scalar>
Scalar beta_moment(unsigned r, const BetaParams<Scalar>& p) {
  const Scalar a = p.shape_a();
  const Scalar phi = p.phi();
  Scalar m = Scalar(1);
  for (unsigned k = 0; k < r; ++k) m *= (a + Scalar(k)) / (phi + Scalar(k));
  return m;
}

/// Draw as G1 / (G1 + G2) with G1 ~ Gamma(mu phi), G2 ~ Gamma((1 - mu) phi).
/// The result is kept strictly inside (0, 1) so it never collides with an
/// inflation point.
inline double beta_sample(const BetaParams<double>& p, RandomSource& rng) {
  const double g1 = rng.gamma(p.shape_a());
  const double g2 = rng.gamma(p.shape_b());
  double y = g1 / (g1 + g2);
  if (!(y > 0.0)) y = std::numeric_limits<double>::denorm_min();
  if (!(y < 1.0)) y = std::nextafter(1.0, 0.0);
  return y;
}

}  // namespace infbeta

#endif  // INFBETA_BETA_HPP
