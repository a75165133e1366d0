// mimo-ee: run figure scenarios, optimize operating points, self-check.

#include <mimo_ee.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Common
{
  std::string config_path;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> rate_base;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c)
{
  cmd->add_option("--config", c.config_path, "key = value file overriding the default system parameters")
    ->check(CLI::ExistingFile);
  cmd->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "base seed for the counter-based RNG");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--rate-base", c.rate_base, "logarithm base of the rate formula")->check(CLI::IsMember({ "2", "e" }));
  cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

mimo_ee::SystemConfig base_config(const Common& c)
{
  mimo_ee::SystemConfig cfg;
  if (!c.config_path.empty())
    cfg = mimo_ee::load_config(c.config_path);
  return cfg;
}

void apply_overrides(const Common& c, mimo_ee::SystemConfig& cfg)
{
  if (c.rate_base)
    cfg.rate_base = mimo_ee::parse_rate_base(*c.rate_base);
  cfg.validate();
}

int cmd_run(const std::string& plan_path, const Common& c)
{
  mimo_ee::SystemConfig cfg = base_config(c);
  auto plan = mimo_ee::parse_plan(mimo_ee::load_key_values(plan_path), cfg);
  apply_overrides(c, cfg);
  if (c.trials)
    plan.trials = *c.trials;
  if (c.seed)
    plan.seed = *c.seed;
  if (c.out)
    plan.output_dir = *c.out;
  if (c.threads)
    plan.threads = c.threads;
  const auto res = mimo_ee::run_scenario(plan, cfg);
  const auto csv = mimo_ee::write_outputs(res, plan, cfg);
  std::cout << "wrote " << csv.string() << " (" << res.rows.size() << " rows)\n";
  std::cout << "argmax " << res.argmax.dump() << '\n';
  if (!res.metrics.empty())
    std::cout << "metrics " << res.metrics.dump() << '\n';
  if (res.failures)
    std::cout << "ill-conditioned draws skipped: " << res.failures << '\n';
  return 0;
}

int cmd_optimize(std::size_t users, std::optional<double> rate, bool monte_carlo, const Common& c)
{
  mimo_ee::SystemConfig cfg = base_config(c);
  cfg.users = users;
  if (rate)
    cfg.user_rate = *rate;
  apply_overrides(c, cfg);
  const auto rates = mimo_ee::default_rate_grid();
  nlohmann::ordered_json j;
  j["K"] = users;
  if (rate) {
    const auto opt = mimo_ee::optimize_F(cfg);
    j["closed_form"] = { { "F", opt.active }, { "R", cfg.user_rate }, { "ee", opt.ee } };
  } else {
    const auto opt = mimo_ee::optimize_joint(cfg, rates);
    j["closed_form"] = { { "F", opt.active }, { "R", opt.rate }, { "ee", opt.ee } };
  }
  if (monte_carlo) {
    std::vector<std::size_t> grid;
    for (std::size_t f = users + 1; f <= cfg.total_antennas; ++f)
      grid.push_back(f);
    const auto sweep = mimo_ee::run_trace_sweep(cfg, grid, c.trials.value_or(500), c.seed.value_or(1), { c.threads });
    const auto eval = [&](std::size_t f, double r) {
      mimo_ee::SystemConfig rc = cfg;
      rc.user_rate = r;
      return mimo_ee::monte_carlo_ee_at(rc, sweep.at(f)).ee;
    };
    if (rate) {
      const auto opt = mimo_ee::optimize_F(users + 1, cfg.total_antennas, [&](std::size_t f) { return eval(f, *rate); });
      j["monte_carlo"] = { { "F", opt.active }, { "R", *rate }, { "ee", opt.ee } };
    } else {
      const auto opt = mimo_ee::optimize_joint(users + 1, cfg.total_antennas, rates, eval);
      j["monte_carlo"] = { { "F", opt.active }, { "R", opt.rate }, { "ee", opt.ee } };
    }
    j["monte_carlo"]["trials"] = sweep.trials;
    j["monte_carlo"]["failures"] = sweep.total_failures();
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_selftest(const Common& c)
{
  mimo_ee::SystemConfig cfg = base_config(c);
  apply_overrides(c, cfg);
  int failed = 0;
  for (const auto& r : mimo_ee::run_properties(cfg)) {
    std::printf("%s %-24s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Energy efficiency of massive MIMO uplink with antenna selection" };
  app.require_subcommand(1);

  Common run_opts;
  std::string plan_path;
  auto* run = app.add_subcommand("run", "run an experiment plan and write CSV + JSON");
  run->add_option("plan", plan_path, "plan file")->required()->check(CLI::ExistingFile);
  add_common(run, run_opts);

  Common opt_opts;
  std::size_t users = 0;
  std::optional<double> rate;
  bool opt_rate = false;
  bool monte_carlo = false;
  auto* optimize = app.add_subcommand("optimize", "find the EE-optimal antenna count (and rate)");
  optimize->add_option("--K", users, "number of users")->required()->check(CLI::PositiveNumber);
  auto* rate_opt = optimize->add_option("--rate", rate, "per-user rate [bit/s]")->check(CLI::PositiveNumber);
  auto* opt_flag = optimize->add_flag("--opt-rate", opt_rate, "optimize the rate as well (default)");
  rate_opt->excludes(opt_flag);
  optimize->add_flag("--monte-carlo", monte_carlo, "also optimize the Monte Carlo EE");
  add_common(optimize, opt_opts);

  Common self_opts;
  auto* selftest = app.add_subcommand("selftest", "run internal consistency checks");
  add_common(selftest, self_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed())
      return cmd_run(plan_path, run_opts);
    if (optimize->parsed())
      return cmd_optimize(users, rate, monte_carlo, opt_opts);
    return cmd_selftest(self_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
