/*
 * Copyright 2026 The proxycert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>

#include <gtest/gtest.h>

#include "oracles/random_cases.h"
#include "oracles/reference.h"
#include "proxycert/error.h"
#include "proxycert/mc_boosting.h"
#include "proxycert/metrics.h"

namespace proxycert {
namespace {

std::vector<std::uint8_t> Labels(std::vector<int> v) {
  return std::vector<std::uint8_t>(v.begin(), v.end());
}

BoostConfig Config(double alpha) {
  BoostConfig c;
  c.alpha = alpha;
  return c;
}

TEST(BoostConfigTest, GridAndCap) {
  EXPECT_EQ(Config(0.1).grid_m(), 10);
  EXPECT_EQ(Config(0.1).round_cap(), 400);
  EXPECT_EQ(Config(0.25).grid_m(), 4);
  EXPECT_EQ(Config(0.25).round_cap(), 64);
  EXPECT_EQ(Config(0.04).grid_m(), 25);
  EXPECT_EQ(Config(0.04).round_cap(), 2500);
  EXPECT_EQ(Config(0.3).grid_m(), 4);
  EXPECT_EQ(Config(1.0).grid_m(), 1);
  BoostConfig c = Config(0.1);
  c.grid_m_override = 7;
  c.max_rounds_override = 3;
  EXPECT_EQ(c.grid_m(), 7);
  EXPECT_EQ(c.round_cap(), 3);
}

TEST(BoostConfigTest, RejectsBadAlpha) {
  EXPECT_THROW(Config(0.0).Validate(), DomainError);
  EXPECT_THROW(Config(-0.5).Validate(), DomainError);
  EXPECT_THROW(Config(1.5).Validate(), DomainError);
  EXPECT_THROW(Config(std::nan("")).Validate(), DomainError);
  const std::vector<double> f{0.5};
  EXPECT_THROW(Boost(f, Labels({1}), {{"a", {1}}}, Config(0.0)), DomainError);
}

TEST(SnapTest, Examples) {
  EXPECT_EQ(SnapToGrid(std::vector<double>{0.5}, 2)[0], 0.5);
  EXPECT_EQ(SnapToGrid(std::vector<double>{0.24}, 10)[0], 0.2);
  EXPECT_EQ(SnapToGrid(std::vector<double>{0.25}, 10)[0], 0.3);
  EXPECT_EQ(SnapIndex(0.0, 10), 0);
  EXPECT_EQ(SnapIndex(1.0, 10), 10);
  EXPECT_EQ(SnapIndex(0.125, 4), 1);
  EXPECT_EQ(SnapIndex(-0.2, 4), 0);
  EXPECT_EQ(SnapIndex(1.3, 4), 4);
}

TEST(SnapTest, IdempotentAndNearest) {
  testing::Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = testing::UniformInt(rng, 1, 30);
    const double v = testing::Uniform(rng);
    const double s = SnapToGrid(std::vector<double>{v}, m)[0];
    EXPECT_EQ(SnapToGrid(std::vector<double>{s}, m)[0], s);
    EXPECT_LE(std::abs(s - v), 0.5 / m + 1e-15);
  }
}

TEST(GroupAvgSqCalErrorTest, Examples) {
  // Calibrated cells.
  EXPECT_EQ(GroupAvgSqCalError(std::vector<double>{0.5, 0.5, 1.0}, Labels({0, 1, 1}),
                               Mask{1, 1, 1}, 2),
            0.0);
  EXPECT_EQ(GroupAvgSqCalError(std::vector<double>{0.5, 0.5}, Labels({1, 1}), Mask{1, 1}, 2),
            0.25);
  EXPECT_EQ(GroupAvgSqCalError(std::vector<double>{0.0, 0.0, 1.0, 1.0}, Labels({0, 1, 1, 1}),
                               Mask{1, 1, 1, 1}, 4),
            0.125);
  EXPECT_EQ(GroupAvgSqCalError(std::vector<double>{0.3}, Labels({1}), Mask{0}, 4), 0.0);
}

TEST(BoostTest, CalibratedInputNeedsNoRounds) {
  const std::vector<double> f{0.5, 0.5, 0.0, 1.0};
  const BoostResult r = Boost(f, Labels({0, 1, 0, 1}), {{"all", {1, 1, 1, 1}}}, Config(0.25));
  EXPECT_EQ(r.rounds, 0);
  EXPECT_TRUE(r.patch_log.empty());
  EXPECT_EQ(r.adjusted_predictions, f);
  EXPECT_EQ(r.final_guard, 0.0);
}

TEST(BoostTest, SingleCellHandSimulation) {
  const std::vector<double> f(5, 0.0);
  const BoostResult r = Boost(f, Labels({1, 1, 1, 1, 1}), {{"all", Mask(5, 1)}}, Config(0.25));
  EXPECT_EQ(r.grid_m, 4);
  ASSERT_EQ(r.rounds, 1);
  const PatchLogEntry& e = r.patch_log[0];
  EXPECT_EQ(e.round, 1);
  EXPECT_EQ(e.group, "all");
  EXPECT_EQ(e.level, 0.0);
  EXPECT_EQ(e.cell_mass, 1.0);
  EXPECT_EQ(e.cell_mean, 1.0);
  EXPECT_EQ(e.score, 1.0);
  EXPECT_EQ(e.target, 1.0);
  EXPECT_EQ(e.rows_touched, 5u);
  EXPECT_EQ(r.initial_guard, 1.0);
  EXPECT_EQ(r.final_guard, 0.0);
  EXPECT_EQ(r.adjusted_predictions, std::vector<double>(5, 1.0));
}

TEST(BoostTest, TiesPreferSmallerGroupName) {
  const std::vector<double> f(4, 0.0);
  const Mask all(4, 1);
  const BoostResult r =
      Boost(f, Labels({1, 1, 1, 1}), {{"beta", all}, {"alpha", all}}, Config(0.25));
  ASSERT_FALSE(r.patch_log.empty());
  EXPECT_EQ(r.patch_log[0].group, "alpha");
}

TEST(BoostTest, TwelveRowsMatchReferenceLoop) {
  // Three levels, two overlapping groups.
  const std::vector<double> f{0.2, 0.2, 0.2, 0.2, 0.5, 0.5, 0.5, 0.5, 0.8, 0.8, 0.8, 0.8};
  const auto y = Labels({1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0});
  const Mask a{1, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0};
  const Mask b{0, 1, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1};
  for (double alpha : {0.25, 0.1, 0.04, 0.01}) {
    const BoostConfig cfg = Config(alpha);
    const BoostResult r = Boost(f, y, {{"a", a}, {"b", b}}, cfg);
    const oracle::RefBoostResult ref =
        oracle::Boost(f, y, {"a", "b"}, {a, b}, alpha, cfg.grid_m(), cfg.round_cap());
    ASSERT_FALSE(ref.hit_cap);
    EXPECT_EQ(r.adjusted_predictions, ref.predictions);
    ASSERT_EQ(r.patch_log.size(), ref.patches.size());
    for (std::size_t t = 0; t < ref.patches.size(); ++t) {
      EXPECT_EQ(r.patch_log[t].group, ref.patches[t].group);
      EXPECT_EQ(r.patch_log[t].level_index, ref.patches[t].level_index);
      EXPECT_EQ(r.patch_log[t].target_index, ref.patches[t].target_index);
      EXPECT_EQ(r.patch_log[t].score, ref.patches[t].score);
      EXPECT_EQ(r.patch_log[t].rows_touched, ref.patches[t].rows_touched);
    }
    EXPECT_LE(r.final_guard, alpha);
    EXPECT_LE(r.rounds, cfg.round_cap());
    EXPECT_EQ(r.final_guard, ref.final_guard);
    if (alpha <= 0.04) EXPECT_GT(r.rounds, 0);
  }
}

TEST(BoostTest, RoundCapCarriesPatchLog) {
  const std::vector<double> f{0.0, 0.0, 1.0, 1.0};
  BoostConfig cfg = Config(0.01);
  cfg.max_rounds_override = 1;
  try {
    Boost(f, Labels({1, 1, 0, 0}), {{"a", {1, 1, 0, 0}}, {"b", {0, 0, 1, 1}}}, cfg);
    FAIL() << "expected RoundCapExceeded";
  } catch (const RoundCapExceeded& e) {
    EXPECT_EQ(e.patch_log().size(), 1u);
  }
}

TEST(BoostTest, RejectsBadMasks) {
  const std::vector<double> f{0.5, 0.5};
  EXPECT_THROW(Boost(f, Labels({1, 0}), {{"a", {1}}}, Config(0.1)), DomainError);
  EXPECT_THROW(Boost(f, Labels({1, 0}), {{"a", {1, 0}}, {"a", {0, 1}}}, Config(0.1)),
               DomainError);
  EXPECT_THROW(Boost(std::vector<double>{}, {}, {}, Config(0.1)), DomainError);
}

TEST(PatchLogTest, LinesRoundTrip) {
  testing::Rng rng(42);
  std::vector<double> f(60);
  std::vector<std::uint8_t> y(60);
  Mask a(60);
  Mask b(60);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = testing::Uniform(rng);
    y[i] = testing::Bernoulli(rng, 0.9);
    a[i] = testing::Bernoulli(rng, 0.5);
    b[i] = testing::Bernoulli(rng, 0.5);
  }
  const BoostResult r = Boost(f, y, {{"a", a}, {"b", b}}, Config(0.04));
  ASSERT_FALSE(r.patch_log.empty());
  const std::string text = PatchLogToLines(r.patch_log);
  EXPECT_EQ(ParsePatchLog(text), r.patch_log);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            r.patch_log.size());
  EXPECT_NE(text.find("\"v_prime\""), std::string::npos);
  EXPECT_THROW(ParsePatchLog("{\"round\": 1}\n"), DomainError);
  EXPECT_THROW(ParsePatchLog("not json\n"), DomainError);
}

TEST(ReplayTest, UnknownGroupThrows) {
  PatchLogEntry e;
  e.group = "missing";
  const std::vector<PatchLogEntry> log{e};
  EXPECT_THROW(ReplayPatches(std::vector<double>{0.5}, {{"a", {1}}}, log, 4), DomainError);
}

TEST(BoostPropertyTest, GuaranteesOnRandomMiscalibratedData) {
  testing::Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const testing::MiscalibratedCase c = testing::RandomMiscalibrated(rng);
    for (double alpha : {0.25, 0.1, 0.04}) {
      const BoostConfig cfg = Config(alpha);
      const BoostResult r = Boost(c.f, c.y, c.masks, cfg);
      EXPECT_LE(r.rounds, cfg.round_cap());
      EXPECT_LE(r.final_guard, alpha);
      EXPECT_FALSE(r.stopped_without_progress);
      EXPECT_EQ(r.final_guard, BoostGuard(r.adjusted_predictions, c.y, c.masks, r.grid_m));
      for (const NamedMask& g : c.masks) {
        EXPECT_LE(GroupEce(r.adjusted_predictions, c.y, g.mask), std::sqrt(alpha) + 1e-9);
      }
      const double t = r.rounds;
      EXPECT_LE(Mse(r.adjusted_predictions, c.y),
                Mse(c.f, c.y) + (1.0 - t) * alpha * alpha / 4.0 + alpha + 1e-9);
      for (const PatchLogEntry& e : r.patch_log) {
        EXPECT_NE(e.target_index, e.level_index);
        EXPECT_GT(e.rows_touched, 0u);
      }
      EXPECT_EQ(ReplayPatches(c.f, c.masks, r.patch_log, r.grid_m), r.adjusted_predictions);

      std::vector<oracle::Bits> bits;
      std::vector<std::string> names;
      for (const NamedMask& g : c.masks) {
        bits.push_back(g.mask);
        names.push_back(g.name);
      }
      const oracle::RefBoostResult ref =
          oracle::Boost(c.f, c.y, names, bits, alpha, cfg.grid_m(), cfg.round_cap());
      EXPECT_EQ(ref.predictions, r.adjusted_predictions);
      EXPECT_EQ(ref.patches.size(), r.patch_log.size());
    }
  }
}

}  // namespace
}  // namespace proxycert
