#include <mimo_ee.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace mimo_ee;

TEST(SystemConfig, TableDefaults)
{
  SystemConfig cfg;
  EXPECT_EQ(cfg.total_antennas, 220u);
  EXPECT_DOUBLE_EQ(cfg.coherence_block(), 5760.0);
  EXPECT_DOUBLE_EQ(cfg.fading_power(), 1.0);
  EXPECT_DOUBLE_EQ(cfg.pathloss_reference, std::pow(10.0, -3.53));
  EXPECT_NO_THROW(cfg.validate());
}

TEST(SystemConfig, RateFactorBases)
{
  SystemConfig cfg;
  cfg.user_rate = cfg.bandwidth;
  cfg.rate_base = RateBase::two;
  EXPECT_DOUBLE_EQ(cfg.rate_factor(), 1.0);
  cfg.rate_base = RateBase::e;
  EXPECT_NEAR(cfg.rate_factor(), std::exp(1.0) - 1.0, 1e-15);
  cfg.user_rate = 0.0;
  EXPECT_EQ(cfg.rate_factor(), 0.0);
}

TEST(SystemConfig, RejectsInvalid)
{
  auto bad = [](auto mutate) {
    SystemConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
  };
  bad([](SystemConfig& c) { c.users = 0; });
  bad([](SystemConfig& c) { c.users = 221; });
  bad([](SystemConfig& c) { c.bandwidth = 0.0; });
  bad([](SystemConfig& c) { c.coherence_time = 1e-9; });
  bad([](SystemConfig& c) { c.min_distance = 300.0; });
  bad([](SystemConfig& c) { c.fixed_power = -1.0; });
  bad([](SystemConfig& c) { c.pathloss_exponent = -2.0; });
  bad([](SystemConfig& c) {
    c.bandwidth = 100.0;
    c.coherence_time = 0.1;
    c.users = 10;
  });
}

TEST(ConfigIo, ParsesNumbersListsAndRanges)
{
  EXPECT_DOUBLE_EQ(parse_number("10^-3.53"), std::pow(10.0, -3.53));
  EXPECT_DOUBLE_EQ(parse_number("1.8e5"), 180000.0);
  EXPECT_THROW(parse_number("12abc"), std::invalid_argument);
  EXPECT_EQ(parse_list("1, 2,3"), (std::vector<double>{ 1, 2, 3 }));
  EXPECT_EQ(parse_list("10:20:5"), (std::vector<double>{ 10, 15, 20 }));
  EXPECT_EQ(parse_list("3:5"), (std::vector<double>{ 3, 4, 5 }));
  EXPECT_EQ(parse_count("2000"), 2000u);
  EXPECT_THROW(parse_count("2.5"), std::invalid_argument);
}

TEST(ConfigIo, KeyValueFile)
{
  std::istringstream in("# comment\nM = 64\nK=8  # trailing\n\nrate_base = 2\nd_bar = 10^-3\n");
  auto kv = parse_key_values(in);
  SystemConfig cfg;
  apply_config(kv, cfg);
  EXPECT_TRUE(kv.empty());
  EXPECT_EQ(cfg.total_antennas, 64u);
  EXPECT_EQ(cfg.users, 8u);
  EXPECT_EQ(cfg.rate_base, RateBase::two);
  EXPECT_DOUBLE_EQ(cfg.pathloss_reference, 1e-3);
}

TEST(ConfigIo, RejectsDuplicatesAndGarbage)
{
  std::istringstream dup("M = 1\nM = 2\n");
  EXPECT_THROW(parse_key_values(dup), std::invalid_argument);
  std::istringstream nokey("just words\n");
  EXPECT_THROW(parse_key_values(nokey), std::invalid_argument);
  EXPECT_THROW(parse_rate_base("10"), std::invalid_argument);
}

TEST(ConfigIo, JsonEcho)
{
  SystemConfig cfg;
  const auto j = config_to_json(cfg);
  EXPECT_EQ(j.at("M").get<int>(), 220);
  EXPECT_EQ(j.at("rate_base").get<std::string>(), "e");
}
