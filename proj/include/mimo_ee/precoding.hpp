#pragma once

#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <set>
#include <span>
#include <string>
#include <vector>

namespace mimo_ee {

//! Rows of a realization kept after antenna selection.
struct SubChannel
{
  std::vector<int> indices; // selected antenna rows, in selection order
  CMatrix composite;        // G~, F x K
  CMatrix small_scale;      // H~, F x K

  [[nodiscard]] std::size_t selected() const { return indices.size(); }
};

inline SubChannel make_subchannel(const ChannelRealization& real, std::span<const int> rows)
{
  const auto m = real.composite.rows();
  std::set<int> seen;
  SubChannel sub;
  sub.indices.assign(rows.begin(), rows.end());
  sub.composite.resize(static_cast<Eigen::Index>(rows.size()), real.composite.cols());
  sub.small_scale.resize(static_cast<Eigen::Index>(rows.size()), real.small_scale.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int row = rows[i];
    if (row < 0 || row >= m)
      throw std::out_of_range("make_subchannel: antenna index " + std::to_string(row) + " out of range");
    if (!seen.insert(row).second)
      throw std::invalid_argument("make_subchannel: duplicate antenna index " + std::to_string(row));
    sub.composite.row(static_cast<Eigen::Index>(i)) = real.composite.row(row);
    sub.small_scale.row(static_cast<Eigen::Index>(i)) = real.small_scale.row(row);
  }
  return sub;
}

inline constexpr double default_max_condition = 1e12;

//! ZF combiner V = (G~^H G~)^{-1} G~^H, K x F.
//!
//! Solved through a Cholesky factorization of the Gram matrix. Throws
//! SingularChannel when the Gram condition number exceeds `max_condition`
//! or F < K.
inline CMatrix zf_combiner(const CMatrix& channel, double max_condition = default_max_condition)
{
  if (channel.rows() < channel.cols())
    throw SingularChannel("zf_combiner: F = " + std::to_string(channel.rows()) +
                          " < K = " + std::to_string(channel.cols()));
  const CMatrix gram = channel.adjoint() * channel;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition)
    throw SingularChannel("zf_combiner: Gram matrix condition " + std::to_string(hi / lo) +
                          " exceeds " + std::to_string(max_condition));
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw SingularChannel("zf_combiner: Cholesky factorization failed");
  return llt.solve(channel.adjoint());
}

inline CMatrix zf_combiner(const SubChannel& sub, double max_condition = default_max_condition)
{
  return zf_combiner(sub.composite, max_condition);
}

//! Equal-rate allocation; uplink and downlink share it under ZF.
struct PowerAllocation
{
  RVector power;         // p_k
  RVector combiner_norm; // ||v_k||^2
};

//! p_k = sigma_n^2 ||v_k||^2 (b^{R/BW} - 1), with v_k the k-th row of V.
inline PowerAllocation equal_rate_power_allocation(const CMatrix& combiner, const SystemConfig& cfg)
{
  PowerAllocation alloc;
  alloc.combiner_norm = combiner.rowwise().squaredNorm();
  const double factor = cfg.user_rate == 0.0 ? 0.0 : cfg.rate_factor();
  alloc.power = alloc.combiner_norm * (cfg.noise_energy * factor);
  return alloc;
}

//! BW * sum_k p_k, i.e. BW sigma_n^2 (b^{R/BW} - 1) tr((G~^H G~)^{-1}) for this draw [W].
inline double instantaneous_emitted_energy(const PowerAllocation& alloc, const SystemConfig& cfg)
{
  return cfg.bandwidth * alloc.power.sum();
}

} // namespace mimo_ee
