#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mimo_ee {

//! Base of the rate-to-SNR map, b in p_k = sigma_n^2 ||v_k||^2 (b^{R/BW} - 1).
enum class RateBase
{
  two,
  e
};

//! Which polynomial coefficients feed P_process.
//!
//! `regrouped` is the exact regrouping of the per-component model, so the
//! polynomial and the component sum agree to rounding. `printed` keeps the
//! coefficient list as published, which differs from the component sum by
//! (P_tx - P_rx)(F - K)/2 + K F/(L U).
enum class CoefficientSet
{
  regrouped,
  printed
};

//! Scalar parameters of the system and the transceiver power model.
//!
//! Defaults reproduce the reference parameter table (M = 220 antennas,
//! BW = 180 kHz, T = 32 ms, ...). The coherence block length used wherever a
//! block length appears is U = round(BW * T_coh) channel uses.
struct SystemConfig
{
  std::size_t total_antennas = 220;  // M
  std::size_t users = 10;            // K
  double bandwidth = 180e3;          // BW [Hz]
  double coherence_time = 0.032;     // T_coh [s]
  double ops_per_joule = 1e9;        // L
  double noise_energy = 1e-20;       // sigma_n^2 [J / channel use]
  double fading_variance = 0.5;      // sigma^2 per real component
  double coding_power = 4.0;         // P_cod [W]
  double decoding_power = 0.5;       // P_dec [W]
  double tx_chain_power = 1.0;       // P_tx [W]
  double rx_chain_power = 0.3;       // P_rx [W]
  double fixed_power = 18.0;         // P_fix [W]
  double min_distance = 35.0;        // d_min [m]
  double max_distance = 250.0;       // d_max [m]
  double pathloss_exponent = 3.76;   // kappa
  double pathloss_reference = std::pow(10.0, -3.53); // d_bar
  RateBase rate_base = RateBase::e;
  double user_rate = 5.0 * 180e3;    // R_bar [bit/s]
  CoefficientSet coefficient_set = CoefficientSet::regrouped;

  //! U = BW * T_coh, rounded to whole channel uses.
  [[nodiscard]] double coherence_block() const
  {
    return std::round(bandwidth * coherence_time);
  }

  //! Total per-coefficient fading variance 2 sigma^2.
  [[nodiscard]] double fading_power() const { return 2.0 * fading_variance; }

  [[nodiscard]] double log_rate_base() const
  {
    return rate_base == RateBase::e ? 1.0 : std::log(2.0);
  }

  //! b^{R/BW} - 1. Returns +inf when the exponent overflows.
  [[nodiscard]] double rate_factor() const
  {
    return std::expm1(user_rate / bandwidth * log_rate_base());
  }

  //! Throws std::invalid_argument naming the first violated constraint.
  void validate() const
  {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
    if (total_antennas < 1)
      fail("M must be >= 1");
    if (users < 1 || users > total_antennas)
      fail("K must satisfy 1 <= K <= M");
    if (!(bandwidth > 0.0))
      fail("BW must be positive");
    if (!(coherence_time > 0.0) || coherence_block() < 1.0)
      fail("BW * T_coh must round to a positive block length");
    if (!(static_cast<double>(users) < coherence_block()))
      fail("K must be smaller than the coherence block U");
    if (!(ops_per_joule > 0.0))
      fail("L must be positive");
    if (!(noise_energy >= 0.0) || !(fading_variance >= 0.0))
      fail("noise and fading variances must be non-negative");
    for (double p : { coding_power, decoding_power, tx_chain_power, rx_chain_power, fixed_power })
      if (!(p >= 0.0))
        fail("circuit powers must be non-negative");
    if (!(min_distance > 0.0) || !(min_distance < max_distance))
      fail("cell radii must satisfy 0 < d_min < d_max");
    if (!(pathloss_reference > 0.0))
      fail("path-loss reference constant must be positive");
    if (!(pathloss_exponent > -2.0))
      fail("path-loss exponent must exceed -2");
    if (!(user_rate >= 0.0))
      fail("R_bar must be non-negative");
  }
};

} // namespace mimo_ee
