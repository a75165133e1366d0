#include <mimo_ee.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mimo_ee;

namespace {

ExperimentPlan plan_from(const std::string& text, SystemConfig& cfg)
{
  std::istringstream in(text);
  return parse_plan(parse_key_values(in), cfg);
}

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / ("mimo_ee_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST(Plan, ParsesPlanAndConfigKeys)
{
  SystemConfig cfg;
  const auto plan = plan_from("scenario = pe_compare\nK = 30, 90\nspectral_efficiency = 5\ntrials = 64\n"
                              "seed = 9\nM = 200\nrate_base = 2\n",
                              cfg);
  EXPECT_EQ(plan.scenario, Scenario::pe_compare);
  EXPECT_EQ(plan.users, (std::vector<std::size_t>{ 30, 90 }));
  EXPECT_EQ(plan.trials, 64u);
  EXPECT_EQ(plan.seed, 9u);
  EXPECT_EQ(cfg.total_antennas, 200u);
  EXPECT_EQ(cfg.rate_base, RateBase::two);
  EXPECT_NO_THROW(plan.validate());
}

TEST(Plan, Rejections)
{
  SystemConfig cfg;
  EXPECT_THROW(plan_from("K = 10\n", cfg), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = fig9\n", cfg), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = ee_surface\nwhatever = 1\n", cfg), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = ee_surface\nK = 1.5\n", cfg), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = eig_density\nK = 70\n", cfg).validate(), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = ee_fixed_rate\nK = 70\n", cfg).validate(), std::invalid_argument);
  EXPECT_THROW(plan_from("scenario = pe_compare\nK = 70\n", cfg).validate(), std::invalid_argument);
}

TEST(EEGridTest, ArgmaxIsMaximum)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = ee_surface\nK = 10:40:10\nF = 1:220\n", cfg);
  const auto res = run_scenario(plan, cfg);
  ASSERT_TRUE(res.grid.has_value());
  const auto& g = *res.grid;
  EXPECT_EQ(g.values.size(), 4u * 220u);
  EXPECT_EQ(res.rows.size(), g.values.size());
  EXPECT_DOUBLE_EQ(g.argmax.value, *std::max_element(g.values.begin(), g.values.end()));
  EXPECT_EQ(g.at(0, 5), 0.0); // F = 6 <= K = 10
  EXPECT_EQ(res.argmax.at("ee").get<double>(), g.argmax.value);
}

TEST(Scenario, SurfaceRowsCarryComponents)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = ee_surface\nK = 20\nF = 30\n", cfg);
  const auto res = run_scenario(plan, cfg);
  ASSERT_EQ(res.rows.size(), 1u);
  const auto& row = res.rows[0];
  const double sum = row[4] + row[5] + row[6] + row[7] + row[8] + row[9];
  EXPECT_NEAR(row[10], sum, 1e-9 * sum);
  EXPECT_NEAR(row[3], 20.0 * row[2] / row[10], 1e-6);
}

TEST(Scenario, ByteIdenticalReruns)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = ee_vs_K\nK = 10, 20\nF = 12:220:16\ntrials = 30\nseed = 4\n", cfg);
  plan.output_dir = scratch("a").string();
  const auto a = write_outputs(run_scenario(plan, cfg), plan, cfg);
  plan.output_dir = scratch("b").string();
  const auto b = write_outputs(run_scenario(plan, cfg), plan, cfg);
  EXPECT_EQ(slurp(a), slurp(b));
  const auto text = slurp(a);
  EXPECT_EQ(text.rfind("K,F_mc,R_mc,ee_mc,", 0), 0u);
  const auto json = nlohmann::json::parse(slurp(std::filesystem::path(plan.output_dir) / "ee_vs_K.json"));
  for (const char* key : { "scenario", "config", "argmax", "seed", "trials", "failures" })
    EXPECT_TRUE(json.contains(key)) << key;
  EXPECT_EQ(json.at("seed").get<int>(), 4);
}

TEST(Scenario, PeCompareColumns)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = pe_compare\nK = 10\nF = 15, 60, 220\nspectral_efficiency = 5\ntrials = 50\n", cfg);
  const auto res = run_scenario(plan, cfg);
  ASSERT_EQ(res.rows.size(), 3u);
  for (const auto& row : res.rows) {
    EXPECT_GT(row[3], 0.0);
    EXPECT_NEAR(row[6], std::abs(row[5] - row[3]) / row[3], 1e-12);
  }
}

TEST(Scenario, EigDensityProducesUnitMassKde)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = eig_density\nK = 10\nF = 20\ntrials = 100\n", cfg);
  const auto res = run_scenario(plan, cfg);
  double mass = 0.0;
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    mass += 0.5 * (res.rows[i][0] - res.rows[i - 1][0]) * (res.rows[i][1] + res.rows[i - 1][1]);
  EXPECT_NEAR(mass, 1.0, 0.02);
  EXPECT_TRUE(res.metrics.contains("l1_sigma_hat"));
}

TEST(Scenario, FixedRateRowsPerRateAndK)
{
  SystemConfig cfg;
  auto plan = plan_from("scenario = fstar_vs_K\nK = 10, 30\nrates = 40e6, 100e6\nF = 12:220:10\ntrials = 20\n", cfg);
  const auto res = run_scenario(plan, cfg);
  EXPECT_EQ(res.rows.size(), 4u);
  for (const auto& row : res.rows)
    EXPECT_GE(row[2], row[1] + 1.0);
}

TEST(Output, NumberFormatting)
{
  EXPECT_EQ(format_number(137.0), "137");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
