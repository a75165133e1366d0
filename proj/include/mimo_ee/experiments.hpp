#pragma once

#include "approximation.hpp"
#include "config.hpp"
#include "config_io.hpp"
#include "monte_carlo.hpp"
#include "optimize.hpp"
#include "power_model.hpp"
#include "spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace mimo_ee {

enum class Scenario
{
  ee_surface,
  pe_compare,
  eig_density,
  ee_vs_K,
  ee_fixed_rate,
  fstar_vs_K,
  ee_vs_spectral_eff
};

inline const std::vector<std::pair<Scenario, const char*>>& scenario_names()
{
  static const std::vector<std::pair<Scenario, const char*>> names = {
    { Scenario::ee_surface, "ee_surface" },       { Scenario::pe_compare, "pe_compare" },
    { Scenario::eig_density, "eig_density" },     { Scenario::ee_vs_K, "ee_vs_K" },
    { Scenario::ee_fixed_rate, "ee_fixed_rate" }, { Scenario::fstar_vs_K, "fstar_vs_K" },
    { Scenario::ee_vs_spectral_eff, "ee_vs_spectral_eff" },
  };
  return names;
}

inline const char* to_string(Scenario s)
{
  for (const auto& [id, name] : scenario_names())
    if (id == s)
      return name;
  return "unknown";
}

inline Scenario parse_scenario(const std::string& text)
{
  for (const auto& [id, name] : scenario_names())
    if (text == name)
      return id;
  throw std::invalid_argument("unknown scenario '" + text + "'");
}

//! Everything a scenario run needs besides the system configuration.
struct ExperimentPlan
{
  Scenario scenario = Scenario::ee_surface;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  std::vector<std::size_t> users;        // K sweep
  std::vector<std::size_t> antennas;     // F sweep; empty means every F in (K, M]
  std::vector<double> rates;             // fixed rates [bit/s]
  std::vector<double> rate_grid = default_rate_grid();
  std::vector<double> spectral_efficiency; // R / BW [bit/s/Hz]
  std::size_t density_points = 400;
  unsigned threads = 0;
  std::string output_dir = "out";

  void validate() const
  {
    auto fail = [](const std::string& m) { throw std::invalid_argument("ExperimentPlan: " + m); };
    if (trials < 1)
      fail("trials must be >= 1");
    if (rate_grid.empty())
      fail("rate_grid must be non-empty");
    for (double r : rate_grid)
      if (!(r > 0.0))
        fail("rate_grid entries must be positive");
    if (users.empty())
      fail("K list must be non-empty");
    for (auto k : users)
      if (k < 1)
        fail("K entries must be >= 1");
    switch (scenario) {
      case Scenario::pe_compare:
      case Scenario::ee_vs_spectral_eff:
        if (spectral_efficiency.empty() && rates.empty())
          fail(std::string(to_string(scenario)) + " needs 'spectral_efficiency' or 'rates'");
        break;
      case Scenario::eig_density:
        if (antennas.size() != 1 || users.size() != 1)
          fail("eig_density needs exactly one F and one K");
        if (density_points < 2)
          fail("density_points must be >= 2");
        break;
      case Scenario::ee_fixed_rate:
      case Scenario::fstar_vs_K:
        if (rates.empty())
          fail(std::string(to_string(scenario)) + " needs 'rates'");
        break;
      default:
        break;
    }
  }
};

namespace detail {

template <class T>
std::vector<T> to_counts(const std::vector<double>& v)
{
  std::vector<T> out;
  for (double x : v) {
    if (!(x >= 0.0) || x != std::floor(x))
      throw std::invalid_argument("expected integers, got " + std::to_string(x));
    out.push_back(static_cast<T>(x));
  }
  return out;
}

} // namespace detail

//! Splits plan keys from SystemConfig keys; anything else is an error.
inline ExperimentPlan parse_plan(KeyValues kv, SystemConfig& cfg)
{
  ExperimentPlan plan;
  auto take = [&](const char* key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end())
      return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto scenario = take("scenario");
  if (!scenario)
    throw std::invalid_argument("plan: missing 'scenario'");
  plan.scenario = parse_scenario(*scenario);
  if (auto v = take("trials"))
    plan.trials = parse_count(*v);
  if (auto v = take("seed"))
    plan.seed = parse_count(*v);
  if (auto v = take("K"))
    plan.users = detail::to_counts<std::size_t>(parse_list(*v));
  if (auto v = take("F"))
    plan.antennas = detail::to_counts<std::size_t>(parse_list(*v));
  if (auto v = take("rates"))
    plan.rates = parse_list(*v);
  if (auto v = take("rate_grid"))
    plan.rate_grid = parse_list(*v);
  if (auto v = take("spectral_efficiency"))
    plan.spectral_efficiency = parse_list(*v);
  if (auto v = take("density_points"))
    plan.density_points = parse_count(*v);
  if (auto v = take("threads"))
    plan.threads = static_cast<unsigned>(parse_count(*v));
  if (auto v = take("output"))
    plan.output_dir = *v;
  apply_config(kv, cfg);
  if (!kv.empty())
    throw std::invalid_argument("plan: unknown key '" + kv.begin()->first + "'");
  if (plan.users.empty()) {
    if (plan.scenario == Scenario::ee_vs_spectral_eff)
      plan.users = { 90 };
    else
      for (std::size_t k = 10; k <= std::min<std::size_t>(200, cfg.total_antennas - 1); ++k)
        plan.users.push_back(k);
  }
  return plan;
}

//! EE over a 2-D parameter grid, row-major.
struct EEGrid
{
  std::string row_axis;
  std::string col_axis;
  std::vector<double> rows;
  std::vector<double> cols;
  std::vector<double> values;
  std::optional<std::vector<double>> stderr_values; // absent for closed-form grids

  struct Argmax
  {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
  } argmax;

  [[nodiscard]] double at(std::size_t r, std::size_t c) const { return values[r * cols.size() + c]; }

  void update_argmax()
  {
    argmax = {};
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > argmax.value)
        argmax = { i / cols.size(), i % cols.size(), values[i] };
  }
};

//! Tabular scenario output plus the summary fields.
struct ScenarioResult
{
  Scenario scenario = Scenario::ee_surface;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json argmax = nlohmann::ordered_json::object();
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::size_t failures = 0;
  std::optional<EEGrid> grid;
};

namespace detail {

inline std::vector<std::size_t> antenna_sweep(const ExperimentPlan& plan, const SystemConfig& cfg, std::size_t k)
{
  std::vector<std::size_t> out;
  if (plan.antennas.empty()) {
    for (std::size_t f = k + 1; f <= cfg.total_antennas; ++f)
      out.push_back(f);
    return out;
  }
  for (auto f : plan.antennas)
    if (f > k && f <= cfg.total_antennas)
      out.push_back(f);
  if (out.empty() || out.back() != cfg.total_antennas)
    out.push_back(cfg.total_antennas);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline SystemConfig with_users(SystemConfig cfg, std::size_t k)
{
  cfg.users = k;
  cfg.validate();
  return cfg;
}

inline SystemConfig with_rate(SystemConfig cfg, double r)
{
  cfg.user_rate = r;
  return cfg;
}

struct CurveOptimum
{
  std::size_t active = 0;
  double rate = 0.0;
  double ee = 0.0;
  double ee_stderr = 0.0;
};

//! Best Monte Carlo EE over the swept F values and the given rates.
inline CurveOptimum best_monte_carlo(const SystemConfig& cfg, const TraceSweep& sweep, std::span<const double> rates,
                                     std::optional<std::size_t> only_active = std::nullopt)
{
  CurveOptimum best{ 0, rates.front(), -1.0, 0.0 };
  for (const auto& p : sweep.points) {
    if (p.active <= cfg.users || p.successes == 0)
      continue;
    if (only_active && p.active != *only_active)
      continue;
    for (double r : rates) {
      const auto mc = monte_carlo_ee_at(with_rate(cfg, r), p);
      if (mc.ee > best.ee)
        best = { p.active, r, mc.ee, mc.ee_stderr };
    }
  }
  return best;
}

inline CurveOptimum best_closed_form(const SystemConfig& cfg, std::span<const std::size_t> fs, std::span<const double> rates)
{
  CurveOptimum best{ 0, rates.front(), -1.0, 0.0 };
  for (auto f : fs) {
    if (f <= cfg.users)
      continue;
    for (double r : rates) {
      const double v = ee_hat(with_rate(cfg, r), f);
      if (v > best.ee)
        best = { f, r, v, 0.0 };
    }
  }
  return best;
}

} // namespace detail

//! Closed-form EE over (K, F) with R optimized per grid point.
inline ScenarioResult scenario_ee_surface(const ExperimentPlan& plan, const SystemConfig& base)
{
  ScenarioResult res;
  res.scenario = Scenario::ee_surface;
  res.columns = { "K", "F", "R_opt", "ee_hat", "pe_hat", "P_BB", "P_RF", "P_CSI", "P_LP", "P_fix", "P_tot" };
  EEGrid grid;
  grid.row_axis = "K";
  grid.col_axis = "F";
  std::vector<std::size_t> fs = plan.antennas;
  if (fs.empty())
    for (std::size_t f = 1; f <= base.total_antennas; ++f)
      fs.push_back(f);
  for (auto k : plan.users)
    grid.rows.push_back(static_cast<double>(k));
  for (auto f : fs)
    grid.cols.push_back(static_cast<double>(f));
  grid.values.assign(grid.rows.size() * grid.cols.size(), 0.0);
  std::vector<double> best_rate(grid.values.size(), 0.0);

  for (std::size_t i = 0; i < plan.users.size(); ++i) {
    const SystemConfig cfg = detail::with_users(base, plan.users[i]);
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const std::size_t f = fs[j];
      if (f > cfg.total_antennas)
        throw std::invalid_argument("ee_surface: F exceeds M");
      double pe = 0.0;
      double rate = 0.0;
      double ee = 0.0;
      if (f > cfg.users) {
        const auto opt = optimize_R(cfg, f, plan.rate_grid);
        rate = opt.rate;
        ee = opt.ee;
        pe = pe_hat(detail::with_rate(cfg, rate), f);
      }
      grid.values[i * fs.size() + j] = ee;
      best_rate[i * fs.size() + j] = rate;
      const auto pw = total_power(pe, cfg.users, f, cfg);
      res.rows.push_back({ static_cast<double>(cfg.users), static_cast<double>(f), rate, ee, pe, pw.baseband, pw.rf,
                           pw.csi, pw.linear_processing, pw.fixed, pw.total });
    }
  }
  grid.update_argmax();
  const std::size_t idx = grid.argmax.row * fs.size() + grid.argmax.col;
  res.argmax = { { "K", static_cast<std::size_t>(grid.rows[grid.argmax.row]) },
                 { "F", static_cast<std::size_t>(grid.cols[grid.argmax.col]) },
                 { "R", best_rate[idx] },
                 { "ee", grid.argmax.value } };
  res.grid = std::move(grid);
  return res;
}

//! Monte Carlo emitted power and inverse-Gram trace against the closed forms over F.
inline ScenarioResult scenario_pe_compare(const ExperimentPlan& plan, const SystemConfig& base)
{
  ScenarioResult res;
  res.scenario = Scenario::pe_compare;
  res.columns = { "K",        "F",        "R",         "pe_mc",           "pe_mc_stderr", "pe_hat",
                  "rel_gap",  "trace_mc", "trace_mc_stderr", "trace_hat", "failures" };
  std::vector<double> rates = plan.rates;
  for (double se : plan.spectral_efficiency)
    rates.push_back(se * base.bandwidth);
  double worst = -1.0;
  for (auto k : plan.users) {
    const SystemConfig cfg = detail::with_users(base, k);
    const auto fs = detail::antenna_sweep(plan, cfg, k);
    if (fs.empty())
      continue;
    const auto sweep = run_trace_sweep(cfg, fs, plan.trials, plan.seed, { plan.threads });
    res.failures += sweep.total_failures();
    for (double r : rates) {
      const SystemConfig c = detail::with_rate(cfg, r);
      for (const auto& p : sweep.points) {
        const auto mc = monte_carlo_ee_at(c, p);
        const double approx = pe_hat(c, p.active);
        const double gap = std::abs(approx - mc.emitted) / mc.emitted;
        if (gap > worst) {
          worst = gap;
          res.argmax = { { "K", k }, { "F", p.active }, { "R", r }, { "rel_gap", gap } };
        }
        res.rows.push_back({ static_cast<double>(k), static_cast<double>(p.active), r, mc.emitted, mc.emitted_stderr,
                             approx, gap, p.trace, p.trace_stderr, trace_approx(c, p.active),
                             static_cast<double>(p.failures) });
      }
    }
  }
  return res;
}

//! L1 distance between the eigenvalue KDE and a unit-mass MP density on `grid`.
inline double density_l1(std::span<const double> grid, std::span<const double> kde, const MarcenkoPastur& mp)
{
  std::vector<double> ref(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    ref[i] = mp.normalized_density(grid[i]);
  return l1_distance(grid, kde, ref);
}

//! Kernel density of the selected-matrix eigenvalues next to the two MP densities.
inline ScenarioResult scenario_eig_density(const ExperimentPlan& plan, const SystemConfig& base)
{
  ScenarioResult res;
  res.scenario = Scenario::eig_density;
  res.columns = { "x", "kde", "mp_hat", "mp_unadjusted" };
  const SystemConfig cfg = detail::with_users(base, plan.users.front());
  const std::size_t f = plan.antennas.front();
  if (f < cfg.users || f > cfg.total_antennas)
    throw std::invalid_argument("eig_density: need K <= F <= M");
  const auto eigs = selected_eigenvalues(cfg, f, plan.trials, plan.seed, { plan.threads });
  const double bw = silverman_bandwidth(eigs);
  const auto mp_hat = marcenko_pastur(static_cast<double>(f), static_cast<double>(cfg.users), sigma_hat_sq(cfg, f));
  const auto mp_raw = marcenko_pastur(static_cast<double>(f), static_cast<double>(cfg.users), cfg.fading_variance);
  const double top = std::max(*std::max_element(eigs.begin(), eigs.end()), mp_hat.beta) + 6.0 * bw;
  const auto grid = linspace(0.0, top, plan.density_points);
  const auto kde = gaussian_kde(eigs, grid, bw);
  double peak = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    res.rows.push_back({ grid[i], kde[i], mp_hat.normalized_density(grid[i]), mp_raw.normalized_density(grid[i]) });
    if (kde[i] > peak) {
      peak = kde[i];
      res.argmax = { { "x", grid[i] }, { "kde", kde[i] } };
    }
  }
  res.metrics = { { "l1_sigma_hat", density_l1(grid, kde, mp_hat) },
                  { "l1_sigma", density_l1(grid, kde, mp_raw) },
                  { "bandwidth", bw },
                  { "eigenvalues", eigs.size() },
                  { "alpha", mp_hat.alpha },
                  { "beta", mp_hat.beta } };
  return res;
}

//! Per K: best EE with selection (Monte Carlo and closed form) and with F = M, R optimized.
inline ScenarioResult scenario_ee_vs_K(const ExperimentPlan& plan, const SystemConfig& base)
{
  ScenarioResult res;
  res.scenario = Scenario::ee_vs_K;
  res.columns = { "K",     "F_mc",        "R_mc",     "ee_mc",   "ee_mc_stderr",     "F_hat",
                  "R_hat", "ee_hat",      "R_full_mc", "ee_full_mc", "ee_full_mc_stderr", "R_full_hat",
                  "ee_full_hat", "gain_mc" };
  double best = -1.0;
  for (auto k : plan.users) {
    const SystemConfig cfg = detail::with_users(base, k);
    const auto fs = detail::antenna_sweep(plan, cfg, k);
    if (fs.empty())
      continue;
    const auto sweep = run_trace_sweep(cfg, fs, plan.trials, plan.seed, { plan.threads });
    res.failures += sweep.total_failures();
    const auto mc = detail::best_monte_carlo(cfg, sweep, plan.rate_grid);
    const auto mc_full = detail::best_monte_carlo(cfg, sweep, plan.rate_grid, cfg.total_antennas);
    const auto hat = detail::best_closed_form(cfg, fs, plan.rate_grid);
    const std::size_t m_only[] = { cfg.total_antennas };
    const auto hat_full = detail::best_closed_form(cfg, m_only, plan.rate_grid);
    const double gain = mc_full.ee > 0.0 ? mc.ee / mc_full.ee : 0.0;
    res.rows.push_back({ static_cast<double>(k), static_cast<double>(mc.active), mc.rate, mc.ee, mc.ee_stderr,
                         static_cast<double>(hat.active), hat.rate, hat.ee, mc_full.rate, mc_full.ee,
                         mc_full.ee_stderr, hat_full.rate, hat_full.ee, gain });
    if (mc.ee > best) {
      best = mc.ee;
      res.argmax = { { "K", k }, { "F", mc.active }, { "R", mc.rate }, { "ee", mc.ee } };
    }
  }
  return res;
}

//! Fixed-rate sweep over K: best F with and without selection (Monte Carlo and closed form).
inline ScenarioResult scenario_fixed_rate(const ExperimentPlan& plan, const SystemConfig& base, Scenario which)
{
  ScenarioResult res;
  res.scenario = which;
  res.columns = { "R", "K", "F_mc", "ee_mc", "ee_mc_stderr", "F_hat", "ee_hat", "ee_full_mc", "ee_full_hat" };
  double best = -1.0;
  for (auto k : plan.users) {
    const SystemConfig cfg = detail::with_users(base, k);
    const auto fs = detail::antenna_sweep(plan, cfg, k);
    if (fs.empty())
      continue;
    const auto sweep = run_trace_sweep(cfg, fs, plan.trials, plan.seed, { plan.threads });
    res.failures += sweep.total_failures();
    for (double r : plan.rates) {
      const double one[] = { r };
      const auto mc = detail::best_monte_carlo(cfg, sweep, one);
      const auto mc_full = detail::best_monte_carlo(cfg, sweep, one, cfg.total_antennas);
      const auto hat = detail::best_closed_form(cfg, fs, one);
      const double full_hat = ee_hat(detail::with_rate(cfg, r), cfg.total_antennas);
      res.rows.push_back({ r, static_cast<double>(k), static_cast<double>(mc.active), mc.ee, mc.ee_stderr,
                           static_cast<double>(hat.active), hat.ee, mc_full.ee, full_hat });
      if (mc.ee > best) {
        best = mc.ee;
        res.argmax = { { "R", r }, { "K", k }, { "F", mc.active }, { "ee", mc.ee } };
      }
    }
  }
  return res;
}

//! EE versus R / BW at fixed K, F optimized for each point.
inline ScenarioResult scenario_ee_vs_spectral_eff(const ExperimentPlan& plan, const SystemConfig& base)
{
  ScenarioResult res;
  res.scenario = Scenario::ee_vs_spectral_eff;
  res.columns = { "K", "SE", "R", "F_mc", "ee_mc", "ee_mc_stderr", "F_hat", "ee_hat", "ee_full_mc", "ee_full_hat",
                  "gain_mc" };
  std::vector<double> ses = plan.spectral_efficiency;
  for (double r : plan.rates)
    ses.push_back(r / base.bandwidth);
  double best = -1.0;
  for (auto k : plan.users) {
    const SystemConfig cfg = detail::with_users(base, k);
    const auto fs = detail::antenna_sweep(plan, cfg, k);
    if (fs.empty())
      continue;
    const auto sweep = run_trace_sweep(cfg, fs, plan.trials, plan.seed, { plan.threads });
    res.failures += sweep.total_failures();
    for (double se : ses) {
      const double one[] = { se * cfg.bandwidth };
      const auto mc = detail::best_monte_carlo(cfg, sweep, one);
      const auto mc_full = detail::best_monte_carlo(cfg, sweep, one, cfg.total_antennas);
      const auto hat = detail::best_closed_form(cfg, fs, one);
      const double full_hat = ee_hat(detail::with_rate(cfg, one[0]), cfg.total_antennas);
      const double gain = mc_full.ee > 0.0 ? mc.ee / mc_full.ee : 0.0;
      res.rows.push_back({ static_cast<double>(k), se, one[0], static_cast<double>(mc.active), mc.ee, mc.ee_stderr,
                           static_cast<double>(hat.active), hat.ee, mc_full.ee, full_hat, gain });
      if (mc.ee > best) {
        best = mc.ee;
        res.argmax = { { "K", k }, { "SE", se }, { "F", mc.active }, { "ee", mc.ee } };
      }
    }
  }
  return res;
}

inline ScenarioResult run_scenario(const ExperimentPlan& plan, const SystemConfig& cfg)
{
  plan.validate();
  cfg.validate();
  switch (plan.scenario) {
    case Scenario::ee_surface:
      return scenario_ee_surface(plan, cfg);
    case Scenario::pe_compare:
      return scenario_pe_compare(plan, cfg);
    case Scenario::eig_density:
      return scenario_eig_density(plan, cfg);
    case Scenario::ee_vs_K:
      return scenario_ee_vs_K(plan, cfg);
    case Scenario::ee_fixed_rate:
    case Scenario::fstar_vs_K:
      return scenario_fixed_rate(plan, cfg, plan.scenario);
    case Scenario::ee_vs_spectral_eff:
      return scenario_ee_vs_spectral_eff(plan, cfg);
  }
  throw std::logic_error("run_scenario: unhandled scenario");
}

//! Shortest round-trippable text for a double ("%.17g" trimmed to "%.12g" when exact).
inline std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  if (std::strtod(buf, nullptr) != v)
    std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const ScenarioResult& res)
{
  for (std::size_t i = 0; i < res.columns.size(); ++i)
    out << (i ? "," : "") << res.columns[i];
  out << '\n';
  for (const auto& row : res.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

inline nlohmann::ordered_json summary_json(const ScenarioResult& res, const ExperimentPlan& plan, const SystemConfig& cfg)
{
  nlohmann::ordered_json j;
  j["scenario"] = to_string(res.scenario);
  j["config"] = config_to_json(cfg);
  j["argmax"] = res.argmax;
  j["seed"] = plan.seed;
  j["trials"] = plan.trials;
  j["failures"] = res.failures;
  if (!res.metrics.empty())
    j["metrics"] = res.metrics;
  return j;
}

//! Writes <dir>/<scenario>.csv and <dir>/<scenario>.json; returns the CSV path.
inline std::filesystem::path write_outputs(const ScenarioResult& res, const ExperimentPlan& plan, const SystemConfig& cfg)
{
  namespace fs = std::filesystem;
  const fs::path dir(plan.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());
  const fs::path csv = dir / (std::string(to_string(res.scenario)) + ".csv");
  const fs::path json = dir / (std::string(to_string(res.scenario)) + ".json");
  std::ofstream c(csv, std::ios::binary);
  if (!c)
    throw std::runtime_error("cannot write '" + csv.string() + "'");
  write_csv(c, res);
  std::ofstream js(json, std::ios::binary);
  if (!js)
    throw std::runtime_error("cannot write '" + json.string() + "'");
  js << summary_json(res, plan, cfg).dump(2) << '\n';
  if (!c || !js)
    throw std::runtime_error("write failed in '" + dir.string() + "'");
  return csv;
}

} // namespace mimo_ee
