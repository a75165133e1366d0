#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace mimo_ee {

//! Marcenko-Pastur law for the F x K Gaussian surrogate with per-component
//! variance sigma_hat^2, on support [alpha, beta] with
//! alpha = sigma_hat^2 (1 - sqrt(F/K))^2 and beta = sigma_hat^2 (1 + sqrt(F/K))^2.
//!
//! Matching support: eigenvalues of H~^H H~ / (2K).
struct MarcenkoPastur
{
  double alpha = 0.0;
  double beta = 0.0;
  double variance = 0.0; // sigma_hat^2
  double ratio = 0.0;    // F / K
  double point_mass = 0.0;
  double continuous_mass = 0.0;

  //! Continuous part K sqrt((x - alpha)^+ (beta - x)^+) / (2 pi F x sigma_hat^2); zero at x <= 0.
  [[nodiscard]] double density(double x) const
  {
    if (!(x > 0.0))
      return 0.0;
    const double span = std::max(x - alpha, 0.0) * std::max(beta - x, 0.0);
    return std::sqrt(span) / (2.0 * std::numbers::pi * ratio * x * variance);
  }

  //! Continuous part rescaled to unit mass.
  [[nodiscard]] double normalized_density(double x) const { return density(x) / continuous_mass; }
};

inline MarcenkoPastur marcenko_pastur(double active, double users, double sigma_hat2)
{
  if (!(active >= 1.0) || !(users >= 1.0) || !(sigma_hat2 > 0.0))
    throw std::invalid_argument("marcenko_pastur: need F, K >= 1 and sigma_hat^2 > 0");
  MarcenkoPastur mp;
  mp.variance = sigma_hat2;
  mp.ratio = active / users;
  const double root = std::sqrt(mp.ratio);
  mp.alpha = sigma_hat2 * (1.0 - root) * (1.0 - root);
  mp.beta = sigma_hat2 * (1.0 + root) * (1.0 + root);
  mp.continuous_mass = std::min(1.0, users / active);
  mp.point_mass = 1.0 - mp.continuous_mass;
  return mp;
}

//! Value of the continuous density at x.
inline double marcenko_pastur_pdf(double x, double active, double users, double sigma_hat2)
{
  if (x < 0.0)
    throw std::invalid_argument("marcenko_pastur_pdf: x must be non-negative");
  return marcenko_pastur(active, users, sigma_hat2).density(x);
}

//! Silverman's rule of thumb, 0.9 min(sd, IQR / 1.34) n^{-1/5}.
inline double silverman_bandwidth(std::span<const double> samples)
{
  const auto n = samples.size();
  if (n < 2)
    throw std::invalid_argument("silverman_bandwidth: need at least two samples");
  double mean = 0.0;
  for (double s : samples)
    mean += s;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples)
    ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double spread = sd;
  if (iqr > 0.0)
    spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

//! Gaussian kernel density estimate evaluated on `grid`.
//! Kernels are truncated at 8 bandwidths; the truncated mass is below 1e-15.
inline std::vector<double> gaussian_kde(std::span<const double> samples, std::span<const double> grid, double bandwidth)
{
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("gaussian_kde: bandwidth must be positive");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  const double reach = 8.0 * bandwidth;
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
    auto last = std::upper_bound(first, sorted.end(), x + reach);
    double acc = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / bandwidth;
      acc += std::exp(-0.5 * u * u);
    }
    out[i] = acc * norm;
  }
  return out;
}

//! Trapezoidal integral of |a - b| over `grid`.
inline double l1_distance(std::span<const double> grid, std::span<const double> a, std::span<const double> b)
{
  if (grid.size() != a.size() || grid.size() != b.size())
    throw std::invalid_argument("l1_distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (grid[i] - grid[i - 1]) * (std::abs(a[i] - b[i]) + std::abs(a[i - 1] - b[i - 1]));
  return acc;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

} // namespace mimo_ee
