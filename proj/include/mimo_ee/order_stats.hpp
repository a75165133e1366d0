#pragma once

#include "errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimo_ee {

//! M i.i.d. Gamma(shape, scale) antenna scores of which the top F are kept.
struct GammaOrderSpec
{
  double shape = 1.0;        // K
  double scale = 1.0;        // 2 sigma^2
  std::size_t population = 1; // M
  std::size_t top = 1;        // F

  void validate() const
  {
    if (!(shape >= 1.0) || !(scale > 0.0))
      throw std::invalid_argument("GammaOrderSpec: need shape >= 1 and scale > 0");
    if (top < 1 || top > population)
      throw std::invalid_argument("GammaOrderSpec: need 1 <= F <= M");
  }

  [[nodiscard]] double mean() const { return shape * scale; }
  [[nodiscard]] double stddev() const { return std::sqrt(shape) * scale; }
};

struct QuadratureOptions
{
  double relative_tolerance = 1e-8;
  double tail_mass = 1e-12; // upper integration limit leaves this much Gamma tail out
  unsigned pieces = 64;
  unsigned max_depth = 15;
};

//! Mean of the r-th greatest of M i.i.d. Gamma draws (r = 1 is the maximum):
//!
//!   mu_{r:M} = M! / ((r-1)! (M-r)!) * int z P(z) C(z)^{M-r} (1 - C(z))^{r-1} dz
//!
//! evaluated by adaptive Gauss-Kronrod on [0, z_max], z_max the (1 - tail_mass)
//! quantile. The integrand is assembled in log space so large M does not overflow.
inline double order_stat_mean_exact(const GammaOrderSpec& spec, std::size_t rank, const QuadratureOptions& opt = {})
{
  spec.validate();
  if (rank < 1 || rank > spec.population)
    throw std::invalid_argument("order_stat_mean_exact: rank must lie in [1, M]");

  const double k = spec.shape;
  const double theta = spec.scale;
  const double m = static_cast<double>(spec.population);
  const double r = static_cast<double>(rank);
  const double log_coeff = std::lgamma(m + 1.0) - std::lgamma(r) - std::lgamma(m - r + 1.0);
  const double log_norm = std::lgamma(k) + std::log(theta);

  auto integrand = [&](double z) {
    if (!(z > 0.0))
      return 0.0;
    const double t = z / theta;
    double log_val = log_coeff + std::log(z) + (k - 1.0) * std::log(t) - t - log_norm;
    if (m - r > 0.0)
      log_val += (m - r) * std::log(boost::math::gamma_p(k, t));
    if (r - 1.0 > 0.0)
      log_val += (r - 1.0) * std::log(boost::math::gamma_q(k, t));
    return std::isfinite(log_val) ? std::exp(log_val) : 0.0;
  };

  const double upper = theta * boost::math::gamma_q_inv(k, opt.tail_mass);
  const double width = upper / opt.pieces;
  double total = 0.0;
  double error = 0.0;
  using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (unsigned i = 0; i < opt.pieces; ++i) {
    double piece_err = 0.0;
    total += Gk::integrate(integrand, i * width, (i + 1) * width, opt.max_depth,
                           opt.relative_tolerance * 1e-2, &piece_err);
    error += piece_err;
  }
  if (!std::isfinite(total) || !(total > 0.0) || error > opt.relative_tolerance * total)
    throw QuadratureFailure("order_stat_mean_exact: estimated error " + std::to_string(error) +
                            " exceeds tolerance for mean " + std::to_string(total));
  return total;
}

//! (1/F) sum_{f <= F} mu_{f:M} by quadrature.
inline double top_mean_exact(const GammaOrderSpec& spec, const QuadratureOptions& opt = {})
{
  double sum = 0.0;
  for (std::size_t r = 1; r <= spec.top; ++r)
    sum += order_stat_mean_exact(spec, r, opt);
  return sum / static_cast<double>(spec.top);
}

//! Upper bound on the mean of the F largest scores, per antenna:
//! mean + stddev * sqrt((M - F) / F) = 2K sigma^2 + 2 sigma^2 sqrt(K (M - F) / F).
inline double top_mean_bound(const GammaOrderSpec& spec)
{
  spec.validate();
  const double m = static_cast<double>(spec.population);
  const double f = static_cast<double>(spec.top);
  return spec.mean() + spec.stddev() * std::sqrt((m - f) / f);
}

//! Sum form of the bound: 2FK sigma^2 + 2 sigma^2 sqrt(K F (M - F)).
inline double top_sum_bound(const GammaOrderSpec& spec)
{
  spec.validate();
  const double m = static_cast<double>(spec.population);
  const double f = static_cast<double>(spec.top);
  return f * spec.mean() + spec.stddev() * std::sqrt(f * (m - f));
}

} // namespace mimo_ee
