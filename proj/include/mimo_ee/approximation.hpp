#pragma once

#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "power_model.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace mimo_ee {

// Closed-form model of the selected sub-channel: the F x K matrix of selected
// rows is replaced by an i.i.d. Gaussian matrix whose variance matches the
// energy bound on the F strongest antennas.

struct ApproxParams
{
  double sigma_hat2 = 0.0; // per-component variance of the Gaussian surrogate
  double trace_hat = 0.0;  // approximate E{tr((H~^H H~)^{-1})}
  double pe_hat = 0.0;     // approximate emitted power [W]
};

namespace detail {

inline double selection_gain(const SystemConfig& cfg, std::size_t active)
{
  const double m = static_cast<double>(cfg.total_antennas);
  const double f = static_cast<double>(active);
  const double k = static_cast<double>(cfg.users);
  return 1.0 + std::sqrt((m - f) / (f * k));
}

inline void require_active(const SystemConfig& cfg, std::size_t active, const char* who)
{
  if (active < 1 || active > cfg.total_antennas)
    throw std::invalid_argument(std::string(who) + ": F must lie in [1, M]");
}

inline void require_servable(const SystemConfig& cfg, std::size_t active, const char* who)
{
  require_active(cfg, active, who);
  if (active <= cfg.users)
    throw DegenerateF(std::string(who) + ": F = " + std::to_string(active) +
                      " does not exceed K = " + std::to_string(cfg.users));
}

} // namespace detail

//! sigma_hat^2 = sigma^2 (1 + sqrt((M - F) / (F K))).
inline double sigma_hat_sq(const SystemConfig& cfg, std::size_t active)
{
  detail::require_active(cfg, active, "sigma_hat_sq");
  return cfg.fading_variance * detail::selection_gain(cfg, active);
}

//! K / ((F - K) 2 sigma^2 (1 + sqrt((M - F) / (F K)))).
inline double trace_approx(const SystemConfig& cfg, std::size_t active)
{
  detail::require_servable(cfg, active, "trace_approx");
  const double k = static_cast<double>(cfg.users);
  const double f = static_cast<double>(active);
  return k / ((f - k) * cfg.fading_power() * detail::selection_gain(cfg, active));
}

//! BW sigma_n^2 K E{1/r} (b^{R/BW} - 1) / ((F - K) 2 sigma^2 (1 + sqrt((M - F)/(F K)))) [W].
inline double pe_hat(const SystemConfig& cfg, std::size_t active)
{
  const double trace = trace_approx(cfg, active);
  if (cfg.user_rate == 0.0)
    return 0.0;
  const double scale = cfg.bandwidth * cfg.noise_energy * expected_inverse_pathloss(cfg);
  const double factor = cfg.rate_factor();
  if (std::isinf(factor))
    return scale > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return scale * factor * trace;
}

//! Closed-form EE, zero for F <= K.
inline double ee_hat(const SystemConfig& cfg, std::size_t active)
{
  detail::require_active(cfg, active, "ee_hat");
  if (active <= cfg.users)
    return 0.0;
  const double total = pe_hat(cfg, active) + process_power(cfg, cfg.users, active) + cfg.fixed_power;
  return energy_efficiency(cfg.users, active, cfg.user_rate, total);
}

inline ApproxParams approx_params(const SystemConfig& cfg, std::size_t active)
{
  return { sigma_hat_sq(cfg, active), trace_approx(cfg, active), pe_hat(cfg, active) };
}

} // namespace mimo_ee
