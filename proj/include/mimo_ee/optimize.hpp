#pragma once

#include "approximation.hpp"
#include "config.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mimo_ee {

//! n log-spaced points in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
  if (!(lo > 0.0) || !(hi >= lo) || n < 1)
    throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = lo * std::pow(hi / lo, t);
  }
  return out;
}

//! 60 log-spaced rates in [1, 200] Mbit/s.
inline std::vector<double> default_rate_grid() { return log_grid(1e6, 200e6, 60); }

struct AntennaOptimum
{
  std::size_t active = 0; // F*
  double ee = 0.0;
};

struct RateOptimum
{
  double rate = 0.0; // R*
  double ee = 0.0;
};

//! Exhaustive scan of `eval(F)` over F in [lo, hi]; first maximizer wins ties.
template <class Eval>
AntennaOptimum optimize_F(std::size_t lo, std::size_t hi, Eval&& eval)
{
  if (lo > hi)
    throw std::invalid_argument("optimize_F: empty range");
  AntennaOptimum best{ lo, eval(lo) };
  for (std::size_t f = lo + 1; f <= hi; ++f) {
    const double v = eval(f);
    if (v > best.ee)
      best = { f, v };
  }
  return best;
}

//! Closed-form scan over F in [K + 1, M] at the configured rate.
inline AntennaOptimum optimize_F(const SystemConfig& cfg)
{
  if (cfg.users >= cfg.total_antennas)
    return { cfg.total_antennas, 0.0 };
  return optimize_F(cfg.users + 1, cfg.total_antennas, [&](std::size_t f) { return ee_hat(cfg, f); });
}

//! Exhaustive scan of `eval(R)` over a rate grid; first maximizer wins ties.
template <class Eval>
RateOptimum optimize_R(std::span<const double> rates, Eval&& eval)
{
  if (rates.empty())
    throw std::invalid_argument("optimize_R: empty rate grid");
  RateOptimum best{ rates.front(), eval(rates.front()) };
  for (std::size_t i = 1; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0))
      throw std::invalid_argument("optimize_R: rates must be positive");
    const double v = eval(rates[i]);
    if (v > best.ee)
      best = { rates[i], v };
  }
  return best;
}

//! Closed-form EE at fixed F maximized over the rate grid.
inline RateOptimum optimize_R(const SystemConfig& cfg, std::size_t active, std::span<const double> rates)
{
  SystemConfig c = cfg;
  return optimize_R(rates, [&](double r) {
    c.user_rate = r;
    return ee_hat(c, active);
  });
}

struct JointOptimum
{
  std::size_t active = 0;
  double rate = 0.0;
  double ee = 0.0;
};

//! Joint scan over F in [lo, hi] and the rate grid of `eval(F, R)`.
template <class Eval>
JointOptimum optimize_joint(std::size_t lo, std::size_t hi, std::span<const double> rates, Eval&& eval)
{
  JointOptimum best{ lo, rates.empty() ? 0.0 : rates.front(), -1.0 };
  for (std::size_t f = lo; f <= hi; ++f) {
    const auto r = optimize_R(rates, [&](double rate) { return eval(f, rate); });
    if (r.ee > best.ee)
      best = { f, r.rate, r.ee };
  }
  return best;
}

inline JointOptimum optimize_joint(const SystemConfig& cfg, std::span<const double> rates)
{
  SystemConfig c = cfg;
  if (cfg.users >= cfg.total_antennas)
    return { cfg.total_antennas, rates.front(), 0.0 };
  return optimize_joint(cfg.users + 1, cfg.total_antennas, rates, [&](std::size_t f, double r) {
    c.user_rate = r;
    return ee_hat(c, f);
  });
}

} // namespace mimo_ee
