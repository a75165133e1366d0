#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

//! Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

//! E{1/r} for users uniform over the annulus, by a 2-D tensor Gauss-Legendre rule
//! in Cartesian-polar coordinates: (1/area) int int d^kappa / d_bar  dA.
inline double annulus_inverse_pathloss(double d_min, double d_max, double kappa, double d_bar)
{
  std::vector<double> x, w;
  gauss_legendre(64, x, w);
  const double pi = std::acos(-1.0);
  const double area = pi * (d_max * d_max - d_min * d_min);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rho = 0.5 * (d_max - d_min) * x[i] + 0.5 * (d_max + d_min);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double phi = pi * x[j] + pi;
      const double px = rho * std::cos(phi);
      const double py = rho * std::sin(phi);
      const double d = std::hypot(px, py);
      acc += w[i] * w[j] * std::pow(d, kappa) / d_bar * rho;
    }
  }
  return acc * 0.5 * (d_max - d_min) * pi / area;
}

//! Sort-based Monte Carlo estimate of E{a_{r:M}} (r-th greatest) for Gamma(shape, scale).
inline std::vector<double> sorted_gamma_means(std::size_t m, double shape, double scale, std::size_t trials,
                                              std::uint64_t seed)
{
  std::mt19937_64 eng(seed);
  std::gamma_distribution<double> g(shape, scale);
  std::vector<double> acc(m, 0.0), buf(m);
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& v : buf)
      v = g(eng);
    std::sort(buf.begin(), buf.end(), std::greater<>());
    for (std::size_t i = 0; i < m; ++i)
      acc[i] += buf[i];
  }
  for (auto& v : acc)
    v /= static_cast<double>(trials);
  return acc;
}

//! Mean of the top-F sorted Gamma draws, with its standard error.
inline std::pair<double, double> top_mean_mc(std::size_t m, std::size_t f, double shape, double scale,
                                             std::size_t trials, std::uint64_t seed)
{
  std::mt19937_64 eng(seed);
  std::gamma_distribution<double> g(shape, scale);
  std::vector<double> buf(m);
  double s = 0.0, ss = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& v : buf)
      v = g(eng);
    std::nth_element(buf.begin(), buf.begin() + static_cast<long>(f) - 1, buf.end(), std::greater<>());
    const double top = std::accumulate(buf.begin(), buf.begin() + static_cast<long>(f), 0.0) / static_cast<double>(f);
    s += top;
    ss += top * top;
  }
  const double n = static_cast<double>(trials);
  const double mean = s / n;
  return { mean, std::sqrt(std::max(0.0, ss / n - mean * mean) / n) };
}

//! Explicit (G^H G)^{-1} G^H through a full inverse; reference only.
inline Eigen::MatrixXcd pinv_explicit(const Eigen::MatrixXcd& g)
{
  return (g.adjoint() * g).inverse() * g.adjoint();
}

} // namespace oracle
