#pragma once

#include "config.hpp"
#include "random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <stdexcept>

namespace mimo_ee {

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

//! One draw of the multi-user channel.
//!
//! `small_scale` is the M x K fading matrix H, `pathloss` holds the per-user
//! large-scale coefficients r_k (identical across BS antennas) and
//! `composite` is G = H diag(r)^{1/2}.
struct ChannelRealization
{
  CMatrix small_scale;
  RVector pathloss;
  CMatrix composite;
};

//! i.i.d. CN(0, 2 sigma^2) fading, variance sigma^2 per real component.
inline CMatrix sample_small_scale(const SystemConfig& cfg, RandomStream& stream)
{
  const auto m = static_cast<Eigen::Index>(cfg.total_antennas);
  const auto k = static_cast<Eigen::Index>(cfg.users);
  CMatrix h(m, k);
  // Column-major fill; the draw order is part of the reproducibility contract.
  for (Eigen::Index col = 0; col < k; ++col)
    for (Eigen::Index row = 0; row < m; ++row)
      h(row, col) = stream.complex_normal(cfg.fading_variance);
  return h;
}

//! r(d) = d_bar / d^kappa.
inline double pathloss_at(const SystemConfig& cfg, double distance)
{
  return cfg.pathloss_reference / std::pow(distance, cfg.pathloss_exponent);
}

//! Distance drawn uniformly over the annulus area, pdf proportional to d on [d_min, d_max].
inline double sample_user_distance(const SystemConfig& cfg, RandomStream& stream)
{
  const double lo2 = cfg.min_distance * cfg.min_distance;
  const double hi2 = cfg.max_distance * cfg.max_distance;
  const double d = std::sqrt(lo2 + stream.uniform() * (hi2 - lo2));
  return std::clamp(d, cfg.min_distance, cfg.max_distance);
}

inline RVector sample_user_pathloss(const SystemConfig& cfg, RandomStream& stream)
{
  RVector r(static_cast<Eigen::Index>(cfg.users));
  for (Eigen::Index k = 0; k < r.size(); ++k)
    r(k) = pathloss_at(cfg, sample_user_distance(cfg, stream));
  return r;
}

//! E{1/r} for area-uniform users on the annulus:
//! (d_max^{kappa+2} - d_min^{kappa+2}) / (d_bar (1 + kappa/2) (d_max^2 - d_min^2)).
inline double expected_inverse_pathloss(const SystemConfig& cfg)
{
  const double kappa = cfg.pathloss_exponent;
  if (!(kappa > -2.0))
    throw std::invalid_argument("expected_inverse_pathloss: kappa must exceed -2");
  if (!(cfg.min_distance > 0.0) || !(cfg.max_distance > cfg.min_distance))
    throw std::invalid_argument("expected_inverse_pathloss: need d_max > d_min > 0");
  const double lo = cfg.min_distance;
  const double hi = cfg.max_distance;
  return (std::pow(hi, kappa + 2.0) - std::pow(lo, kappa + 2.0)) /
         (cfg.pathloss_reference * (1.0 + kappa / 2.0) * (hi * hi - lo * lo));
}

inline ChannelRealization assemble_channel(CMatrix small_scale, RVector pathloss)
{
  if (small_scale.cols() != pathloss.size())
    throw std::invalid_argument("assemble_channel: H has " + std::to_string(small_scale.cols()) +
                                " columns but r has " + std::to_string(pathloss.size()) + " entries");
  CMatrix g = small_scale * pathloss.cwiseSqrt().asDiagonal();
  return { std::move(small_scale), std::move(pathloss), std::move(g) };
}

//! Draws H and r for `trial` from their own substreams.
inline ChannelRealization draw_channel(const SystemConfig& cfg, std::uint64_t seed, std::uint64_t trial)
{
  RandomStream fading(seed, trial, Substream::small_scale);
  RandomStream placement(seed, trial, Substream::pathloss);
  CMatrix h = sample_small_scale(cfg, fading);
  RVector r = sample_user_pathloss(cfg, placement);
  return assemble_channel(std::move(h), std::move(r));
}

} // namespace mimo_ee
