#pragma once

// Internal consistency checks run by `mimo-ee selftest`.

#include "approximation.hpp"
#include "channel.hpp"
#include "monte_carlo.hpp"
#include "power_model.hpp"
#include "precoding.hpp"
#include "selection.hpp"
#include "spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace mimo_ee {

struct PropertyResult
{
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0)
{
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline PropertyResult zf_left_inverse(const SystemConfig& base)
{
  double worst = 0.0;
  for (std::size_t t = 0; t < 20; ++t) {
    SystemConfig cfg = base;
    cfg.total_antennas = 40;
    cfg.users = 8;
    const auto real = draw_channel(cfg, 7, t);
    const std::size_t f = 9 + t;
    std::vector<int> rows(f);
    for (std::size_t i = 0; i < f; ++i)
      rows[i] = static_cast<int>(i);
    const auto sub = make_subchannel(real, rows);
    const CMatrix v = zf_combiner(sub);
    const CMatrix eye = CMatrix::Identity(v.rows(), v.rows());
    worst = std::max(worst, (v * sub.composite - eye).cwiseAbs().maxCoeff());
  }
  return { "zf_left_inverse", worst < 1e-9, fmt("max |V G - I| = %.3g", worst) };
}

inline PropertyResult allocation_linearity(const SystemConfig& base)
{
  SystemConfig cfg = base;
  cfg.total_antennas = 30;
  cfg.users = 5;
  const auto real = draw_channel(cfg, 11, 0);
  const CMatrix v = zf_combiner(real.composite);
  const auto p1 = equal_rate_power_allocation(v, cfg);
  SystemConfig scaled = cfg;
  scaled.noise_energy *= 3.0;
  const auto p3 = equal_rate_power_allocation(v, scaled);
  SystemConfig doubled = cfg;
  doubled.user_rate *= 2.0;
  const auto p2 = equal_rate_power_allocation(v, doubled);
  const double x = cfg.rate_factor();
  const double want_ratio = doubled.rate_factor() / x; // (b^{2x}-1)/(b^x-1) = b^x + 1
  double worst = 0.0;
  for (Eigen::Index k = 0; k < p1.power.size(); ++k) {
    worst = std::max(worst, rel(p3.power(k), 3.0 * p1.power(k)));
    worst = std::max(worst, rel(p2.power(k), want_ratio * p1.power(k)));
    worst = std::max(worst, rel(p1.power(k), cfg.noise_energy * p1.combiner_norm(k) * x));
  }
  return { "allocation_linearity", worst < 1e-12, fmt("max relative error %.3g", worst) };
}

inline PropertyResult polynomial_identity(const SystemConfig& base)
{
  SystemConfig cfg = base;
  const auto re = ProcessCoefficients::regrouped(cfg);
  const auto pr = ProcessCoefficients::printed(cfg);
  const double lu = cfg.ops_per_joule * cfg.coherence_block();
  double worst_re = 0.0;
  double worst_pr = 0.0;
  for (std::size_t k = 1; k <= 200; k += 13) {
    for (std::size_t f = k; f <= cfg.total_antennas; f += 17) {
      const double kk = static_cast<double>(k);
      const double ff = static_cast<double>(f);
      const double sum = processing_power(cfg, k, f).processing();
      worst_re = std::max(worst_re, rel(re.evaluate(kk, ff), sum));
      const double residual = 0.5 * (cfg.tx_chain_power - cfg.rx_chain_power) * (ff - kk) + kk * ff / lu;
      worst_pr = std::max(worst_pr, std::abs(pr.evaluate(kk, ff) - sum - residual) / sum);
    }
  }
  return { "process_polynomial",
           worst_re < 1e-12 && worst_pr < 1e-12,
           fmt("regrouped rel err %.3g, printed residual err %.3g", worst_re, worst_pr) };
}

inline PropertyResult full_array_reduction(const SystemConfig& cfg)
{
  const std::size_t m = cfg.total_antennas;
  const double k = static_cast<double>(cfg.users);
  const double s = rel(sigma_hat_sq(cfg, m), cfg.fading_variance);
  const double t = rel(trace_approx(cfg, m), k / ((static_cast<double>(m) - k) * cfg.fading_power()));
  return { "full_array_reduction", s < 1e-15 && t < 1e-14, fmt("sigma_hat rel %.3g, trace rel %.3g", s, t) };
}

inline PropertyResult unservable_is_zero(const SystemConfig& cfg)
{
  bool ok = true;
  for (std::size_t f = 1; f <= cfg.users; ++f)
    ok = ok && ee_hat(cfg, f) == 0.0;
  ok = ok && energy_efficiency(cfg.users, cfg.users, cfg.user_rate, 1.0) == 0.0;
  return { "unservable_is_zero", ok, ok ? "EE = 0 for F <= K" : "nonzero EE with F <= K" };
}

inline PropertyResult mp_mass(const SystemConfig& cfg)
{
  double worst = 0.0;
  for (double f : { 15.0, 20.0, 60.0, 220.0 }) {
    const double k = 20.0;
    const auto mp = marcenko_pastur(f, k, 0.7);
    // x = alpha + (beta - alpha)(1 - cos t)/2 removes the square-root edges
    const double half = 0.5 * (mp.beta - mp.alpha);
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return mp.density(mp.alpha + half * (1.0 - std::cos(t))) * half * std::sin(t); }, 0.0,
      std::acos(-1.0), 15, 1e-12);
    worst = std::max(worst, std::abs(mass - std::min(1.0, k / f)));
    worst = std::max(worst, std::abs(mp.point_mass + mp.continuous_mass - 1.0));
  }
  (void)cfg;
  return { "mp_mass", worst < 1e-9, fmt("max mass error %.3g", worst) };
}

inline PropertyResult determinism(const SystemConfig& base)
{
  SystemConfig cfg = base;
  cfg.total_antennas = 40;
  cfg.users = 6;
  const std::size_t grid[] = { 7, 12, 25, 40 };
  const auto a = run_trace_sweep(cfg, grid, 64, 123, { 1 });
  const auto b = run_trace_sweep(cfg, grid, 64, 123, { 3 });
  const auto c = run_trace_sweep(cfg, grid, 64, 124, { 1 });
  bool same = true;
  bool differs = false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    same = same && a.points[i].weighted == b.points[i].weighted && a.points[i].trace == b.points[i].trace;
    differs = differs || a.points[i].weighted != c.points[i].weighted;
  }
  const auto e1 = draw_channel(cfg, 5, 3);
  const auto e2 = draw_channel(cfg, 5, 3);
  same = same && e1.composite == e2.composite;
  return { "determinism", same && differs,
           same ? (differs ? "seed-stable, thread-count independent" : "different seeds gave equal results")
                : "repeat run differed" };
}

inline PropertyResult greedy_stops_at_peak()
{
  const std::vector<double> curve = { 0, 0, 0, 1, 3, 5, 6, 6.5, 6.4, 9, 2 };
  const auto res = greedy_prefix_search(curve.size() - 1, 2, [&](std::size_t n) { return curve[n]; });
  return { "greedy_stops_at_peak", res.active == 7, "stopped at F = " + std::to_string(res.active) };
}

} // namespace detail

inline std::vector<PropertyResult> run_properties(const SystemConfig& cfg = {})
{
  std::vector<std::function<PropertyResult()>> checks = {
    [&] { return detail::zf_left_inverse(cfg); },      [&] { return detail::allocation_linearity(cfg); },
    [&] { return detail::polynomial_identity(cfg); },  [&] { return detail::full_array_reduction(cfg); },
    [&] { return detail::unservable_is_zero(cfg); },   [&] { return detail::mp_mass(cfg); },
    [&] { return detail::determinism(cfg); },          [] { return detail::greedy_stops_at_peak(); },
  };
  std::vector<PropertyResult> out;
  for (auto& check : checks) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({ "?", false, std::string("threw: ") + e.what() });
    }
  }
  return out;
}

} // namespace mimo_ee
