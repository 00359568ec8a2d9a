#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sks/stochastic.hpp"

using namespace sks;

namespace {
constexpr double k0 = 1.0 / 2048.0;
}

TEST(WienerPath, Deterministic) {
  const auto a = WienerPath::generate(17, 1.0, k0);
  const auto b = WienerPath::generate(17, 1.0, k0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 2048);
  EXPECT_NE(a.increments(), WienerPath::generate(18, 1.0, k0).increments());
  EXPECT_FALSE(a.generator_id().empty());
}

TEST(WienerPath, MomentsOverMillionDraws) {
  // 10^6 draws: 10^6 k0 is an exact dyadic horizon.
  const auto path = WienerPath::generate(2024, 1e6 * k0, k0);
  ASSERT_EQ(path.size(), 1000000);
  double sum = 0.0, sq = 0.0;
  for (double dw : path.increments()) {
    sum += dw;
    sq += dw * dw;
  }
  const double n = static_cast<double>(path.size());
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(k0 / n));
  // standard error of the variance is k0 sqrt(2/n) ~ 0.14%
  EXPECT_LT(std::abs(var / k0 - 1.0), 0.01);
}

TEST(WienerPath, TerminalSecondMoment) {
  double sq = 0.0;
  const int paths = 10000;
  for (int j = 0; j < paths; ++j) {
    const double w = WienerPath::generate(sample_seed(1000, j), 1.0, k0).terminal_value();
    sq += w * w;
  }
  EXPECT_NEAR(sq / paths, 1.0, 0.05);
}

TEST(WienerPath, IncrementsTelescope) {
  const auto path = WienerPath::generate(5, 1.0, k0);
  const auto& inc = path.increments();
  EXPECT_EQ(path.increment(3 * k0, 4 * k0), inc[3]);
  EXPECT_EQ(path.increment(0.0, 2 * k0), inc[0] + inc[1]);
  EXPECT_EQ(path.increment(0.0, 4 * k0), inc[0] + inc[1] + inc[2] + inc[3]);
  EXPECT_EQ(path.steps_per(4 * k0), 4);
}

TEST(WienerPath, CoarseSumsReproduceTerminalValueExactly) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto path = WienerPath::generate(seed, 1.0, k0);
    for (Index stride : {1, 4, 16, 64, 256, 2048}) {
      double w = 0.0;
      for (Index m = 0; m < path.size(); m += stride) w += path.increment_steps(m, m + stride);
      EXPECT_EQ(w, path.terminal_value()) << "stride " << stride;
    }
  }
}

TEST(WienerPath, MisalignedTimesThrow) {
  const auto path = WienerPath::generate(1, 1.0, k0);
  EXPECT_THROW(path.increment(0.0, 1.5 * k0), std::invalid_argument);
  EXPECT_THROW(path.increment(0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(path.increment(2 * k0, k0), std::invalid_argument);
  EXPECT_THROW(path.steps_per(k0 / 2), std::invalid_argument);
  EXPECT_THROW(path.steps_per(1.5 * k0), std::invalid_argument);
  EXPECT_THROW(WienerPath::generate(1, 1.0, 0.3), std::invalid_argument);
}

TEST(WienerPath, SaveLoadRoundTrip) {
  const auto path = WienerPath::generate(99, 0.25, k0);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  path.save(buf);
  const auto back = WienerPath::load(buf);
  EXPECT_EQ(back, path);

  std::stringstream bad(std::string("NOTAPATH"));
  EXPECT_THROW(WienerPath::load(bad), std::runtime_error);

  std::stringstream truncated(buf.str().substr(0, 40));
  EXPECT_THROW(WienerPath::load(truncated), std::runtime_error);
}

TEST(SampleSeed, Offsets) {
  EXPECT_EQ(sample_seed(7, 0), 7u);
  EXPECT_EQ(sample_seed(7, 3), 10u);
}
