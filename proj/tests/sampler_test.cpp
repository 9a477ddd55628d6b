// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "lastde/sampler.hpp"
#include "synthetic.hpp"

namespace lastde {
namespace {

template <typename Fn>
Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::kInvalidInput;
}

PositionDistribution point_mass(std::int64_t token) {
  return PositionDistribution::renormalize({token}, Eigen::VectorXd::Constant(1, -0.3));
}

TEST(RenormalizeTest, SortsAndPreservesRatios) {
  Eigen::VectorXd raw(4);
  raw << std::log(0.1), std::log(0.4), std::log(0.05), std::log(0.2);
  const auto d = PositionDistribution::renormalize({10, 11, 12, 13}, raw);
  EXPECT_TRUE(d.renormalized);
  EXPECT_EQ(d.token_ids, (std::vector<std::int64_t>{11, 13, 10, 12}));
  EXPECT_NEAR(d.total_mass(), 1.0, 1e-12);
  EXPECT_NO_THROW(d.validate());
  const double mass = 0.75;
  EXPECT_NEAR(std::exp(d.logprobs[0]), 0.4 / mass, 1e-12);
  EXPECT_NEAR(std::exp(d.logprobs[3]), 0.05 / mass, 1e-12);
}

TEST(RenormalizeTest, RatioPropertyOnRandomTruncations) {
  synthetic::Rng rng(31);
  std::normal_distribution<double> g(0.0, 3.0);
  std::uniform_int_distribution<int> keep(1, 64);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = keep(rng);
    Eigen::VectorXd raw(k);
    for (auto& v : raw) v = g(rng) - 10.0;  // a truncated tail of a larger vocabulary
    std::vector<std::int64_t> ids(static_cast<std::size_t>(k));
    std::iota(ids.begin(), ids.end(), 0);
    const auto d = PositionDistribution::renormalize(ids, raw);
    ASSERT_NO_THROW(d.validate());
    for (Eigen::Index i = 0; i + 1 < d.size(); ++i) {
      const double before = raw[d.token_ids[i]] - raw[d.token_ids[i + 1]];
      const double after = d.logprobs[i] - d.logprobs[i + 1];
      EXPECT_NEAR(after, before, 1e-12);
    }
  }
}

TEST(PositionDistributionTest, RejectsUnnormalizedOrUnsorted) {
  PositionDistribution d;
  d.token_ids = {1, 2};
  d.logprobs = Eigen::Vector2d(std::log(0.5), std::log(0.4));
  d.renormalized = true;
  EXPECT_EQ(error_code([&] { d.validate(); }), Errc::kFormat);

  d.logprobs = Eigen::Vector2d(std::log(0.4), std::log(0.6));
  EXPECT_EQ(error_code([&] { d.validate(); }), Errc::kFormat);
}

TEST(SampleBatchTest, PointMassesReproduceTheArgmaxPath) {
  std::vector<PositionDistribution> dists;
  for (int i = 0; i < 20; ++i) dists.push_back(point_mass(i));
  const auto batch = sample_tps_batch(dists, 50, 1);
  ASSERT_EQ(batch.count(), 50);
  EXPECT_TRUE((batch.tps.array() == 0.0).all());
  EXPECT_TRUE((batch.choices.array() == 0).all());
}

TEST(SampleBatchTest, FairCoinFrequency) {
  const auto coin = PositionDistribution::renormalize({7, 8}, Eigen::Vector2d(-1.0, -1.0));
  const std::vector<PositionDistribution> dists{coin};
  const auto batch = sample_tps_batch(dists, 10000, 2024);
  const double ones = static_cast<double>((batch.choices.array() == 0).count()) / 10000.0;
  EXPECT_NEAR(ones, 0.5, 0.02);
}

TEST(SampleBatchTest, EmpiricalDistributionConverges) {
  synthetic::Rng rng(8);
  const auto dists = synthetic::random_distributions(rng, 5, 8, 1.5);
  const int n_samples = 10000;
  const auto batch = sample_tps_batch(dists, n_samples, 77);
  for (Eigen::Index pos = 0; pos < 5; ++pos) {
    const auto& d = dists[static_cast<std::size_t>(pos)];
    Eigen::VectorXd freq = Eigen::VectorXd::Zero(d.size());
    for (Eigen::Index j = 0; j < n_samples; ++j) freq[batch.choices(j, pos)] += 1.0;
    freq /= n_samples;
    const double tv = 0.5 * (freq.array() - d.logprobs.array().exp()).abs().sum();
    EXPECT_LE(tv, 0.05) << "position " << pos;
  }
}

TEST(SampleBatchTest, SampledValuesComeFromTheirPosition) {
  synthetic::Rng rng(9);
  const auto dists = synthetic::random_distributions(rng, 30, 16, 2.0);
  const auto batch = sample_tps_batch(dists, 40, 5);
  for (Eigen::Index pos = 0; pos < 30; ++pos) {
    const auto& d = dists[static_cast<std::size_t>(pos)];
    for (Eigen::Index j = 0; j < 40; ++j) {
      EXPECT_EQ(batch.tps(j, pos), d.logprobs[batch.choices(j, pos)]);
    }
  }
}

TEST(SampleBatchTest, SeededDeterminism) {
  synthetic::Rng rng(10);
  const auto dists = synthetic::random_distributions(rng, 50, 8, 2.0);
  const auto a = sample_tps_batch(dists, 100, 123);
  const auto b = sample_tps_batch(dists, 100, 123);
  const auto c = sample_tps_batch(dists, 100, 124);
  EXPECT_EQ(a.choices, b.choices);
  EXPECT_NE(a.choices, c.choices);
}

TEST(SampleBatchTest, PositionOrderDoesNotMatter) {
  synthetic::Rng rng(12);
  const auto dists = synthetic::random_distributions(rng, 40, 8, 2.0);
  const auto batch = sample_tps_batch(dists, 25, 99);

  std::vector<std::size_t> order(dists.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t pos : order) {
    for (int j = 24; j >= 0; --j) {
      EXPECT_EQ(draw_index(dists[pos], 99, pos, static_cast<std::uint64_t>(j)),
                batch.choices(j, static_cast<Eigen::Index>(pos)));
    }
  }
}

TEST(SampleBatchTest, Errors) {
  std::vector<PositionDistribution> dists{point_mass(1)};
  EXPECT_EQ(error_code([&] { sample_tps_batch(dists, 1, 0); }), Errc::kInvalidInput);
  EXPECT_EQ(error_code([&] { sample_tps_batch({}, 10, 0); }), Errc::kInvalidInput);
  dists[0].renormalized = false;
  EXPECT_EQ(error_code([&] { sample_tps_batch(dists, 10, 0); }), Errc::kFormat);
  dists[0].renormalized = true;
  dists[0].logprobs[0] = -1.0;
  EXPECT_EQ(error_code([&] { sample_tps_batch(dists, 10, 0); }), Errc::kFormat);
}

TEST(SubstreamTest, UniformRange) {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = substream_uniform(i * 7919, i % 13, i / 13);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(LastdePPPipelineTest, PointMassesAreDegenerate) {
  std::vector<PositionDistribution> dists;
  for (int i = 0; i < 30; ++i) dists.push_back(point_mass(i));
  const auto record =
      synthetic::record_from_picks("argmax", Label::kMachine, dists, std::vector<int>(30, 0));
  EXPECT_EQ(error_code([&] { lastde_pp_pipeline(record, LastdePPConfig{}); }),
            Errc::kDegenerateSampleDistribution);
}

TEST(LastdePPPipelineTest, MissingTopK) {
  synthetic::Rng rng(1);
  auto record = synthetic::record_from_tps("x", Label::kHuman,
                                           synthetic::ar_path(rng, 50, -3.0, 0.0, 1.0));
  EXPECT_EQ(error_code([&] { lastde_pp_pipeline(record, LastdePPConfig{}); }),
            Errc::kMissingTopK);
}

TEST(LastdePPPipelineTest, ReproducibleForFixedSeed) {
  synthetic::Rng rng(2);
  const auto record =
      synthetic::exchangeable_record(rng, "r", Label::kHuman, synthetic::SamplingSplitParams{});
  LastdePPConfig cfg;
  cfg.seed = 5;
  const double a = lastde_pp_pipeline(record, cfg);
  const double b = lastde_pp_pipeline(record, cfg);
  EXPECT_EQ(std::bit_cast<std::uint64_t>(a), std::bit_cast<std::uint64_t>(b));
  cfg.seed = 6;
  EXPECT_NE(lastde_pp_pipeline(record, cfg), a);
}

TEST(LastdePPPipelineTest, MatchesManualComposition) {
  synthetic::Rng rng(3);
  const auto record =
      synthetic::exchangeable_record(rng, "r", Label::kHuman, synthetic::SamplingSplitParams{});
  LastdePPConfig cfg;
  cfg.sample_count = 20;
  cfg.seed = 44;
  const auto batch = sample_tps_batch(*record.topk, cfg.sample_count, cfg.seed);
  std::vector<double> scores;
  for (Eigen::Index j = 0; j < batch.count(); ++j) {
    scores.push_back(lastde(Tps(batch.tps.row(j).transpose()), cfg.mde));
  }
  const double expected = lastde_pp(lastde(record.tps(), cfg.mde), scores);
  EXPECT_EQ(lastde_pp_pipeline(record, cfg), expected);
}

TEST(LastdePPPipelineTest, ExchangeableCandidatesCenterNearZero) {
  synthetic::Rng rng(4);
  synthetic::SamplingSplitParams p;
  p.n_tokens = 120;
  LastdePPConfig cfg;
  cfg.seed = 1;
  double sum = 0.0;
  const int count = 40;
  for (int i = 0; i < count; ++i) {
    const auto r = synthetic::exchangeable_record(rng, "c", Label::kHuman, p);
    sum += lastde_pp_pipeline(r, cfg);
  }
  EXPECT_LT(std::abs(sum / count), 0.5);
}

}  // namespace
}  // namespace lastde
