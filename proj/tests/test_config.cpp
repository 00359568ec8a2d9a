#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sks/config.hpp"

using namespace sks;

TEST(Config, BuiltinTestsMatchPaperSettings) {
  const auto t1 = builtin_config(1);
  EXPECT_DOUBLE_EQ(t1.params.nu, 1.0);
  EXPECT_DOUBLE_EQ(t1.params.chi, 1.0);
  EXPECT_DOUBLE_EQ(t1.params.delta, 1.0);
  ASSERT_EQ(t1.levels.size(), 4u);
  for (const auto& l : t1.levels) EXPECT_DOUBLE_EQ(l.k, std::pow(1.0 / static_cast<double>(l.N), 2));

  const auto t2 = builtin_config(2);
  EXPECT_DOUBLE_EQ(t2.params.delta, 10.0);
  for (const auto& l : t2.levels) EXPECT_EQ(l.N, 10);
  EXPECT_DOUBLE_EQ(t2.levels.back().k, 1.0 / 1024.0);

  const auto t3 = builtin_config(3);
  EXPECT_DOUBLE_EQ(t3.params.delta, 0.1);
  for (const auto& l : t3.levels) EXPECT_DOUBLE_EQ(l.k, 1.0 / 2048.0);

  const auto t4 = builtin_config(4);
  EXPECT_DOUBLE_EQ(t4.params.chi, 4 * std::numbers::pi);
  EXPECT_EQ(t4.levels.front().N, 60);
  EXPECT_DOUBLE_EQ(t4.levels.front().k, 1e-6);
  EXPECT_EQ(t4.final_times, (std::vector<double>{3e-5, 5e-5, 9e-5, 2e-4}));
  EXPECT_EQ(t4.initial_data, "gaussian_blowup");
  EXPECT_THROW(builtin_config(5), ConfigError);
}

TEST(Config, ParsesAndOverridesBuiltin) {
  const auto c = config_from_json(R"({"test_id": 1, "J": 50, "base_seed": 7, "k0": "2^-12",
      "levels": [{"N": 4, "k": "1/16"}], "b": [0.5, -1], "u_solver": "lu", "spd_solver": "cg"})");
  EXPECT_EQ(c.samples, 50);
  EXPECT_EQ(c.base_seed, 7u);
  EXPECT_DOUBLE_EQ(c.k0, 1.0 / 4096.0);
  ASSERT_EQ(c.levels.size(), 1u);
  EXPECT_DOUBLE_EQ(c.levels[0].k, 1.0 / 16.0);
  EXPECT_EQ(c.params.b, Point(0.5, -1.0));
  EXPECT_DOUBLE_EQ(c.params.delta, 1.0);
  EXPECT_EQ(c.u_method, GeneralMethod::SparseLU);
  EXPECT_EQ(c.spd_method, SpdMethod::ConjugateGradient);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json("{"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"J": "many"})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"u_solver": "gmres"})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"nu": -1})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, StepSyntax) {
  EXPECT_DOUBLE_EQ(parse_step("1/2048"), 1.0 / 2048.0);
  EXPECT_DOUBLE_EQ(parse_step("2^-11"), 1.0 / 2048.0);
  EXPECT_DOUBLE_EQ(parse_step("0.25"), 0.25);
  EXPECT_THROW(parse_step("one"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  for (int id = 0; id <= 4; ++id) {
    const auto c = builtin_config(id);
    const auto back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(back.params.chi, c.params.chi);
    EXPECT_EQ(back.levels.size(), c.levels.size());
  }
}

TEST(Config, ShippedConfigsMatchBuiltins) {
  for (int id = 1; id <= 4; ++id) {
    const auto path = std::string(SKS_CONFIG_DIR) + "/test" + std::to_string(id) + ".json";
    const auto shipped = load_config(path);
    auto builtin = builtin_config(id);
    builtin.samples = shipped.samples;
    builtin.output_dir = shipped.output_dir;
    if (id == 3) builtin.levels.resize(3);  // 1/32 is optional at desk scale
    EXPECT_EQ(config_to_json(shipped), config_to_json(builtin)) << path;
  }
}
