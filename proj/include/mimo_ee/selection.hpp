#pragma once

#include "approximation.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "power_model.hpp"
#include "precoding.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace mimo_ee {

struct SelectionResult
{
  std::vector<int> order;     // all antennas, descending score (ties: lower index first)
  std::vector<int> selected;  // prefix of `order` with F entries
  std::size_t active = 0;     // F
  std::vector<double> ee_trace; // ee_trace[n - 1] = EE with the first n antennas
  double ee_final = 0.0;
  std::size_t skipped_steps = 0; // steps whose evaluation raised SingularChannel
};

//! a_m = sum_k |H(m,k)|^2 from the small-scale matrix only.
inline RVector antenna_scores(const CMatrix& small_scale)
{
  return small_scale.rowwise().squaredNorm();
}

//! Antenna indices sorted by descending score, lower index first on ties.
inline std::vector<int> rank_antennas(const RVector& scores)
{
  std::vector<int> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
  return order;
}

//! Core of the greedy loop over prefix sizes n = 1..M.
//!
//! EE(n) is 0 for n <= K; otherwise `eval(n)` is called. The loop stops at the
//! first n with EE(n) < EE(n - 1) and keeps F = n - 1. `eval` may throw
//! SingularChannel, which records a skipped step carrying EE(n - 1) forward.
template <class PrefixEval>
SelectionResult greedy_prefix_search(std::size_t antennas, std::size_t users, PrefixEval&& eval)
{
  SelectionResult res;
  double previous = 0.0;
  res.active = antennas;
  for (std::size_t n = 1; n <= antennas; ++n) {
    double current = 0.0;
    if (n > users) {
      try {
        current = eval(n);
      } catch (const SingularChannel&) {
        ++res.skipped_steps;
        current = previous;
      }
    }
    res.ee_trace.push_back(current);
    if (current < previous) {
      res.active = n - 1;
      break;
    }
    previous = current;
  }
  res.ee_final = res.ee_trace[res.active - 1];
  return res;
}

//! Norm-based greedy antenna selection on one realization.
//!
//! `ee_eval(sub)` returns the EE of a sub-channel holding the top-n antennas.
template <class Evaluator>
SelectionResult greedy_select(const ChannelRealization& real, const SystemConfig& cfg, Evaluator&& ee_eval)
{
  const auto order = rank_antennas(antenna_scores(real.small_scale));
  auto res = greedy_prefix_search(order.size(), cfg.users, [&](std::size_t n) {
    const SubChannel sub = make_subchannel(real, std::span<const int>(order.data(), n));
    return ee_eval(sub);
  });
  res.order = order;
  res.selected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(res.active));
  return res;
}

//! Evaluator using the emitted power of the given draw (no averaging).
inline auto instantaneous_ee(const SystemConfig& cfg, double max_condition = default_max_condition)
{
  return [cfg, max_condition](const SubChannel& sub) {
    const CMatrix v = zf_combiner(sub, max_condition);
    const double emitted = instantaneous_emitted_energy(equal_rate_power_allocation(v, cfg), cfg);
    const auto f = sub.selected();
    return energy_efficiency(cfg.users, f, cfg.user_rate, total_power(emitted, cfg.users, f, cfg).total);
  };
}

//! Greedy loop driven by the closed-form EE; needs no channel draw.
//! The ranking is the identity since every antenna is statistically equivalent.
inline SelectionResult approx_greedy_select(const SystemConfig& cfg)
{
  cfg.validate();
  auto res = greedy_prefix_search(cfg.total_antennas, cfg.users, [&](std::size_t n) { return ee_hat(cfg, n); });
  res.order.resize(cfg.total_antennas);
  std::iota(res.order.begin(), res.order.end(), 0);
  res.selected.assign(res.order.begin(), res.order.begin() + static_cast<std::ptrdiff_t>(res.active));
  return res;
}

} // namespace mimo_ee
