// Copyright 2026 The verimoa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "verimoa/cache.hpp"
#include "verimoa/error.hpp"

namespace verimoa {
namespace {

HdlCacheEntry hdl(int layer, int slot, double score, int round = 0, AgentPath path = AgentPath::Base) {
  HdlCacheEntry e;
  e.id = {layer, slot, path, round};
  e.source = "// " + to_string(e.id);
  e.score.value = score;
  return e;
}

IntermediateCacheEntry inter(IntermediateLanguage lang, int layer, int slot, double score) {
  return {{layer, slot, path_of(lang), 0}, lang, "code", score};
}

std::vector<double> scores(const std::vector<HdlCacheEntry>& v) {
  std::vector<double> out;
  for (const auto& e : v) out.push_back(e.score.value);
  return out;
}

// Brute-force reference: sort everything eligible by the documented key.
std::vector<CandidateId> oracle_top(const std::vector<HdlCacheEntry>& all, int before, std::size_t n) {
  std::vector<HdlCacheEntry> eligible;
  for (const auto& e : all)
    if (e.id.layer < before) eligible.push_back(e);
  auto key = [](const HdlCacheEntry& e) {
    return std::make_tuple(-e.score.value, -e.id.layer, e.id.slot, -e.id.refine_round, static_cast<int>(e.id.path));
  };
  std::sort(eligible.begin(), eligible.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  std::vector<CandidateId> out;
  for (std::size_t i = 0; i < std::min(n, eligible.size()); ++i) out.push_back(eligible[i].id);
  return out;
}

std::vector<CandidateId> ids(const std::vector<HdlCacheEntry>& v) {
  std::vector<CandidateId> out;
  for (const auto& e : v) out.push_back(e.id);
  return out;
}

TEST(Cache, InsertAndDuplicate) {
  GlobalCache c;
  c.insert_hdl(hdl(1, 1, 0.5));
  EXPECT_EQ(c.size(), 1u);
  try {
    c.insert_hdl(hdl(1, 1, 0.9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateId);
  }
  EXPECT_EQ(c.size(), 1u);
  // another refinement round of the same slot is a different id
  c.insert_hdl(hdl(1, 1, 0.9, 1));
  EXPECT_EQ(c.size(), 2u);
}

TEST(Cache, TwentyFourInserts) {
  GlobalCache c;
  for (int l = 1; l <= 4; ++l)
    for (int s = 1; s <= 6; ++s) c.insert_hdl(hdl(l, s, 0.1 * s));
  EXPECT_EQ(c.size(), 24u);
  EXPECT_EQ(c.top_n_hdl(5, 100).size(), 24u);
}

TEST(Cache, TopNExamples) {
  GlobalCache c;
  c.insert_hdl(hdl(1, 1, 0.9));
  c.insert_hdl(hdl(1, 2, 0.5));
  c.insert_hdl(hdl(2, 1, 0.7));
  EXPECT_EQ(scores(c.top_n_hdl(3, 2)), (std::vector<double>{0.9, 0.7}));
  EXPECT_TRUE(c.top_n_hdl(1, 3).empty());
  // layer 2 entries are invisible to layer 2
  EXPECT_EQ(scores(c.top_n_hdl(2, 5)), (std::vector<double>{0.9, 0.5}));
}

TEST(Cache, TieGoesToLaterLayer) {
  GlobalCache c;
  c.insert_hdl(hdl(1, 1, 0.7));
  c.insert_hdl(hdl(2, 4, 0.7));
  const auto top = c.top_n_hdl(3, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].id.layer, 2);
}

TEST(Cache, TieBreakChain) {
  GlobalCache c;
  c.insert_hdl(hdl(2, 3, 0.5, 0));
  c.insert_hdl(hdl(2, 3, 0.5, 1));
  c.insert_hdl(hdl(2, 1, 0.5, 0));
  c.insert_hdl(hdl(1, 1, 0.5, 0));
  const auto top = c.top_n_hdl(3, 4);
  EXPECT_EQ(to_string(top[0].id), "L2.S1.Base.r0");
  EXPECT_EQ(to_string(top[1].id), "L2.S3.Base.r1");
  EXPECT_EQ(to_string(top[2].id), "L2.S3.Base.r0");
  EXPECT_EQ(to_string(top[3].id), "L1.S1.Base.r0");
}

TEST(Cache, IntermediateQueries) {
  GlobalCache c;
  c.insert_intermediate(inter(IntermediateLanguage::Cpp, 1, 3, 0.6));
  c.insert_intermediate(inter(IntermediateLanguage::Cpp, 1, 4, 0.8));
  const auto cpp = c.top_k_intermediate(IntermediateLanguage::Cpp, 2, 2);
  ASSERT_EQ(cpp.size(), 2u);
  EXPECT_DOUBLE_EQ(cpp[0].score, 0.8);
  EXPECT_DOUBLE_EQ(cpp[1].score, 0.6);
  EXPECT_TRUE(c.top_k_intermediate(IntermediateLanguage::Python, 2, 2).empty());
  EXPECT_EQ(c.top_k_intermediate(IntermediateLanguage::Cpp, 2, 10).size(), 2u);
  // language must match the path
  EXPECT_THROW(c.insert_intermediate({{1, 5, AgentPath::Py, 0}, IntermediateLanguage::Cpp, "x", 0.1}), Error);
}

TEST(Cache, BatchIsAllOrNothing) {
  GlobalCache c;
  c.insert_hdl(hdl(1, 1, 0.5));
  EXPECT_THROW(c.insert_batch({hdl(2, 1, 0.9), hdl(1, 1, 0.2)}, {}), Error);
  EXPECT_EQ(c.size(), 1u);
  c.insert_batch({hdl(2, 1, 0.9), hdl(2, 2, 0.2)}, {inter(IntermediateLanguage::Python, 2, 2, 0.2)});
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.intermediate_entries(IntermediateLanguage::Python).size(), 1u);
}

TEST(Cache, LayerStatsExamples) {
  GlobalCache one;
  one.insert_hdl(hdl(1, 1, 0.5));
  auto s = one.layer_quality_stats(1, 1);
  EXPECT_DOUBLE_EQ(s.min, 0.5);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);

  GlobalCache two;
  two.insert_hdl(hdl(1, 1, 1.0));
  two.insert_hdl(hdl(1, 2, 0.0));
  s = two.layer_quality_stats(1, 2);
  EXPECT_DOUBLE_EQ(s.min, 0.0);
  EXPECT_DOUBLE_EQ(s.mean, 0.5);
  EXPECT_EQ(s.ranked_scores, (std::vector<double>{1.0, 0.0}));

  GlobalCache empty;
  try {
    empty.layer_quality_stats(1, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWindow);
  }
}

TEST(Cache, PartialWindowCountsMissingSlotsAsZero) {
  GlobalCache c;
  c.insert_hdl(hdl(1, 1, 0.9));
  const auto s = c.layer_quality_stats(1, 3);
  EXPECT_DOUBLE_EQ(s.min, 0.0);
  EXPECT_NEAR(s.mean, 0.3, 1e-15);
}

TEST(CacheProperty, OracleEquivalenceAndPermutationInvariance) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 300; ++round) {
    std::uniform_int_distribution<int> count(0, 50), layer(1, 5), slot(1, 6), rr(0, 2), level(0, 4);
    std::vector<HdlCacheEntry> entries;
    std::set<std::tuple<int, int, int>> used;
    for (int i = count(rng); i > 0; --i) {
      const int l = layer(rng), s = slot(rng), r = rr(rng);
      if (!used.insert({l, s, r}).second) continue;
      entries.push_back(hdl(l, s, 0.25 * level(rng), r));  // coarse scores force ties
    }
    GlobalCache a, b;
    for (const auto& e : entries) a.insert_hdl(e);
    auto shuffled = entries;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& e : shuffled) b.insert_hdl(e);
    for (int before = 1; before <= 6; ++before)
      for (std::size_t n : {1u, 3u, 6u, 60u}) {
        const auto expect = oracle_top(entries, before, n);
        ASSERT_EQ(ids(a.top_n_hdl(before, n)), expect);
        ASSERT_EQ(ids(b.top_n_hdl(before, n)), expect);
      }
  }
}

TEST(CacheProperty, LayerStatsNeverDecrease) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> q(0.0, 1.0);
  for (int run = 0; run < 200; ++run) {
    std::uniform_int_distribution<int> layers(2, 5), width(1, 8), n_dist(1, 8);
    const int L = layers(rng), M = width(rng);
    const auto n = static_cast<std::size_t>(n_dist(rng));
    GlobalCache c;
    double prev_min = -1, prev_mean = -1;
    for (int l = 1; l <= L; ++l) {
      std::vector<HdlCacheEntry> batch;
      for (int s = 1; s <= M; ++s) batch.push_back(hdl(l, s, q(rng)));
      c.insert_batch(std::move(batch), {});
      const auto st = c.layer_quality_stats(l, n);
      ASSERT_GE(st.min, prev_min);
      ASSERT_GE(st.mean, prev_mean);
      prev_min = st.min;
      prev_mean = st.mean;
    }
  }
}

}  // namespace
}  // namespace verimoa
