#pragma once

#include "config.hpp"
#include "errors.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace mimo_ee {

//! Transceiver power budget for one operating point [W].
struct PowerBreakdown
{
  double emitted = 0.0;
  double baseband = 0.0;
  double rf = 0.0;
  double csi = 0.0;
  double linear_processing = 0.0;
  double fixed = 0.0;
  double total = 0.0;

  [[nodiscard]] double processing() const { return baseband + rf + csi + linear_processing; }
};

//! Coefficients of P_process = sum_i C_{i,0} K^i + sum_i C_{i,1} K^i F.
struct ProcessCoefficients
{
  double c10 = 0.0;
  double c20 = 0.0;
  double c30 = 0.0;
  double c01 = 0.0;
  double c11 = 0.0;
  double c21 = 0.0;

  //! Coefficients exactly as published.
  static ProcessCoefficients printed(const SystemConfig& cfg)
  {
    const double lu = cfg.ops_per_joule * cfg.coherence_block();
    const double m = static_cast<double>(cfg.total_antennas);
    return { cfg.coding_power + cfg.decoding_power + cfg.rx_chain_power + m / lu,
             0.0,
             2.0 / (3.0 * lu),
             cfg.tx_chain_power,
             3.0 / lu + 1.0 / cfg.ops_per_joule,
             2.0 / lu };
  }

  //! Exact regrouping of the component model: the RF term is (F + K)(P_tx + P_rx)/2 and
  //! the precoding term expands to 2K^3/(3LU) + 2KF/(LU) + 2K^2F/(LU) + KF/L.
  static ProcessCoefficients regrouped(const SystemConfig& cfg)
  {
    const double lu = cfg.ops_per_joule * cfg.coherence_block();
    const double m = static_cast<double>(cfg.total_antennas);
    const double rf = 0.5 * (cfg.tx_chain_power + cfg.rx_chain_power);
    return { cfg.coding_power + cfg.decoding_power + rf + m / lu,
             0.0,
             2.0 / (3.0 * lu),
             rf,
             2.0 / lu + 1.0 / cfg.ops_per_joule,
             2.0 / lu };
  }

  static ProcessCoefficients from_config(const SystemConfig& cfg)
  {
    return cfg.coefficient_set == CoefficientSet::printed ? printed(cfg) : regrouped(cfg);
  }

  [[nodiscard]] double evaluate(double k, double f) const
  {
    return c10 * k + c20 * k * k + c30 * k * k * k + (c01 + c11 * k + c21 * k * k) * f;
  }
};

//! P_BB, P_RF, P_CSI and P_LP for K users on F active antennas.
//! CSI is acquired on all M antennas, independent of selection.
inline PowerBreakdown processing_power(const SystemConfig& cfg, std::size_t users, std::size_t active)
{
  const double u = cfg.coherence_block();
  const double k = static_cast<double>(users);
  const double f = static_cast<double>(active);
  if (!(k < u))
    throw std::invalid_argument("processing_power: K = " + std::to_string(users) +
                                " must be below the coherence block U = " + std::to_string(u));
  const double l = cfg.ops_per_joule;
  const double m = static_cast<double>(cfg.total_antennas);
  PowerBreakdown out;
  out.baseband = (cfg.coding_power + cfg.decoding_power) * k;
  out.rf = 0.5 * (f * cfg.tx_chain_power + k * cfg.rx_chain_power) +
           0.5 * (k * cfg.tx_chain_power + f * cfg.rx_chain_power);
  out.csi = m * k / (l * u);
  out.linear_processing = (9.0 * k * k * f + 6.0 * k * f + 2.0 * k * k * k) / (3.0 * l * u) +
                          (1.0 - k / u) * f * k / l;
  return out;
}

//! P_process as used in the EE denominator, per the configured coefficient set.
inline double process_power(const SystemConfig& cfg, std::size_t users, std::size_t active)
{
  if (cfg.coefficient_set == CoefficientSet::regrouped)
    return processing_power(cfg, users, active).processing();
  return ProcessCoefficients::printed(cfg).evaluate(static_cast<double>(users), static_cast<double>(active));
}

//! P_tot = P_e + P_process + P_fix with the component breakdown filled in.
//! Under CoefficientSet::printed the total uses the published polynomial and
//! therefore differs from the component sum.
inline PowerBreakdown total_power(double emitted, std::size_t users, std::size_t active, const SystemConfig& cfg)
{
  if (!(emitted >= 0.0))
    throw std::invalid_argument("total_power: emitted power must be non-negative");
  PowerBreakdown out = processing_power(cfg, users, active);
  out.emitted = emitted;
  out.fixed = cfg.fixed_power;
  out.total = emitted + process_power(cfg, users, active) + cfg.fixed_power;
  return out;
}

//! K R / P_tot [bit/J]; zero when F <= K since the users cannot be served.
inline double energy_efficiency(std::size_t users, std::size_t active, double rate, double total)
{
  if (!(total > 0.0))
    throw NonPositivePower("energy_efficiency: total power must be positive, got " + std::to_string(total));
  if (users == 0 || rate == 0.0 || active <= users)
    return 0.0;
  return static_cast<double>(users) * rate / total;
}

} // namespace mimo_ee
