#pragma once

#include "approximation.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "power_model.hpp"
#include "precoding.hpp"
#include "selection.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <thread>
#include <vector>

namespace mimo_ee {

struct MonteCarloOptions
{
  unsigned threads = 0; // 0: hardware concurrency
  double max_condition = default_max_condition;
};

//! Runs fn(i) for i in [0, n) on contiguous blocks, one block per worker.
//! Callers write results into slot i so the outcome is independent of scheduling.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i)
        fn(i);
    });
  }
}

//! Sample mean and standard error of the successful trials at one F.
struct TracePoint
{
  std::size_t active = 0;
  double trace = 0.0;          // E{tr((H~^H H~)^{-1})}
  double trace_stderr = 0.0;
  double weighted = 0.0;       // E{tr((G~^H G~)^{-1})} = E{sum_k [(H~^H H~)^{-1}]_kk / r_k}
  double weighted_stderr = 0.0;
  std::size_t successes = 0;
  std::size_t failures = 0;
};

struct TraceSweep
{
  std::vector<TracePoint> points; // ascending F
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] const TracePoint& at(std::size_t active) const
  {
    for (const auto& p : points)
      if (p.active == active)
        return p;
    throw std::out_of_range("TraceSweep: F = " + std::to_string(active) + " not in sweep");
  }

  [[nodiscard]] std::size_t total_failures() const
  {
    std::size_t n = 0;
    for (const auto& p : points)
      n += p.failures;
    return n;
  }
};

//! Monte Carlo estimate of the selected-channel inverse Gram traces for every F in `grid`.
//!
//! Each trial draws one realization, ranks antennas by score and grows the
//! Gram matrix of the top-n rows block by block, so all F values share the
//! same draws. Draws whose Gram condition estimate exceeds the threshold are
//! counted as failures for that F and excluded.
inline TraceSweep run_trace_sweep(const SystemConfig& cfg,
                                  std::span<const std::size_t> grid,
                                  std::size_t trials,
                                  std::uint64_t seed,
                                  const MonteCarloOptions& opt = {})
{
  cfg.validate();
  if (trials < 1)
    throw std::invalid_argument("run_trace_sweep: trials must be >= 1");
  std::vector<std::size_t> fs(grid.begin(), grid.end());
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  if (fs.empty())
    throw std::invalid_argument("run_trace_sweep: empty F grid");
  if (fs.front() < cfg.users || fs.back() > cfg.total_antennas)
    throw std::invalid_argument("run_trace_sweep: F must lie in [K, M]");

  const auto k = static_cast<Eigen::Index>(cfg.users);
  const std::size_t nf = fs.size();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> plain(trials * nf, nan);
  std::vector<double> weighted(trials * nf, nan);

  parallel_for(trials, opt.threads, [&](std::size_t t) {
    const ChannelRealization ch = draw_channel(cfg, seed, t);
    const auto order = rank_antennas(antenna_scores(ch.small_scale));
    const RVector inv_r = ch.pathloss.cwiseInverse();
    CMatrix ranked(static_cast<Eigen::Index>(fs.back()), k);
    for (std::size_t n = 0; n < fs.back(); ++n)
      ranked.row(static_cast<Eigen::Index>(n)) = ch.small_scale.row(order[n]);
    CMatrix gram = CMatrix::Zero(k, k);
    std::size_t done = 0;
    for (std::size_t j = 0; j < nf;) {
      const auto rows = static_cast<Eigen::Index>(fs[j] - done);
      if (rows > 0)
        gram.selfadjointView<Eigen::Lower>().rankUpdate(
          ranked.middleRows(static_cast<Eigen::Index>(done), rows).adjoint());
      done = fs[j];
      Eigen::LLT<CMatrix, Eigen::Lower> llt(gram);
      if (llt.info() == Eigen::Success) {
        const RVector diag = CMatrix(llt.matrixL()).diagonal().real();
        const double ratio = diag.maxCoeff() / diag.minCoeff();
        if (diag.minCoeff() > 0.0 && ratio * ratio <= opt.max_condition) {
          CMatrix inv_l = CMatrix::Identity(k, k);
          llt.matrixL().solveInPlace(inv_l);
          const RVector col = inv_l.colwise().squaredNorm().transpose();
          plain[t * nf + j] = col.sum();
          weighted[t * nf + j] = col.dot(inv_r);
        }
      }
      ++j;
    }
  });

  TraceSweep out;
  out.trials = trials;
  out.seed = seed;
  for (std::size_t j = 0; j < nf; ++j) {
    TracePoint p;
    p.active = fs[j];
    double s1 = 0.0, s2 = 0.0, w1 = 0.0, w2 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double a = plain[t * nf + j];
      if (std::isnan(a)) {
        ++p.failures;
        continue;
      }
      const double b = weighted[t * nf + j];
      ++p.successes;
      s1 += a;
      s2 += a * a;
      w1 += b;
      w2 += b * b;
    }
    if (p.successes > 0) {
      const double n = static_cast<double>(p.successes);
      p.trace = s1 / n;
      p.weighted = w1 / n;
      if (p.successes > 1) {
        p.trace_stderr = std::sqrt(std::max(0.0, (s2 - n * p.trace * p.trace) / (n - 1.0)) / n);
        p.weighted_stderr = std::sqrt(std::max(0.0, (w2 - n * p.weighted * p.weighted) / (n - 1.0)) / n);
      }
    }
    out.points.push_back(p);
  }
  return out;
}

//! BW sigma_n^2 (b^{R/BW} - 1) * E{tr((G~^H G~)^{-1})} [W].
inline double emitted_from_trace(const SystemConfig& cfg, double weighted_trace)
{
  if (cfg.user_rate == 0.0 || weighted_trace == 0.0)
    return 0.0;
  const double scale = cfg.bandwidth * cfg.noise_energy;
  const double factor = cfg.rate_factor();
  if (std::isinf(factor))
    return scale > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return scale * factor * weighted_trace;
}

struct MonteCarloEE
{
  double ee = 0.0;
  double ee_stderr = 0.0;
  double emitted = 0.0;
  double emitted_stderr = 0.0;
  std::size_t failures = 0;
};

//! EE at one F from a sweep point: emitted power averaged over trials, then
//! K R / (mean P_e + P_process + P_fix); stderr by the delta method on P_e.
inline MonteCarloEE monte_carlo_ee_at(const SystemConfig& cfg, const TracePoint& point)
{
  if (point.successes == 0)
    throw AllTrialsFailed("monte carlo: every draw was singular at F = " + std::to_string(point.active));
  MonteCarloEE out;
  out.failures = point.failures;
  out.emitted = emitted_from_trace(cfg, point.weighted);
  out.emitted_stderr = emitted_from_trace(cfg, point.weighted_stderr);
  const double total = out.emitted + process_power(cfg, cfg.users, point.active) + cfg.fixed_power;
  out.ee = energy_efficiency(cfg.users, point.active, cfg.user_rate, total);
  if (out.ee > 0.0 && std::isfinite(total))
    out.ee_stderr = out.ee / total * out.emitted_stderr;
  return out;
}

inline MonteCarloEE run_monte_carlo_ee(const SystemConfig& cfg,
                                       std::size_t active,
                                       std::size_t trials,
                                       std::uint64_t seed,
                                       const MonteCarloOptions& opt = {})
{
  const std::size_t grid[] = { active };
  return monte_carlo_ee_at(cfg, run_trace_sweep(cfg, grid, trials, seed, opt).points.front());
}

//! Eigenvalues of H~^H H~ / (2K) for the top-F antennas, trial after trial.
inline std::vector<double> selected_eigenvalues(const SystemConfig& cfg,
                                                std::size_t active,
                                                std::size_t trials,
                                                std::uint64_t seed,
                                                const MonteCarloOptions& opt = {})
{
  cfg.validate();
  const std::size_t k = cfg.users;
  std::vector<double> out(trials * k);
  parallel_for(trials, opt.threads, [&](std::size_t t) {
    RandomStream fading(seed, t, Substream::small_scale);
    const CMatrix h = sample_small_scale(cfg, fading);
    const auto order = rank_antennas(antenna_scores(h));
    CMatrix top(static_cast<Eigen::Index>(active), h.cols());
    for (std::size_t i = 0; i < active; ++i)
      top.row(static_cast<Eigen::Index>(i)) = h.row(order[i]);
    const CMatrix gram = top.adjoint() * top;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    const double scale = 1.0 / (2.0 * static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i)
      out[t * k + i] = eig.eigenvalues()(static_cast<Eigen::Index>(i)) * scale;
  });
  return out;
}

//! Greedy-selection evaluator in averaged mode: EE of a prefix of size n uses
//! the trial-averaged emitted power at F = n. The sweep must cover (K, M].
inline auto averaged_ee(const SystemConfig& cfg, const TraceSweep& sweep)
{
  return [cfg, &sweep](const SubChannel& sub) { return monte_carlo_ee_at(cfg, sweep.at(sub.selected())).ee; };
}

} // namespace mimo_ee
