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

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "verimoa/config.hpp"
#include "verimoa/quality.hpp"

namespace verimoa {

// Provenance of one generated artifact within a trial.
struct CandidateId {
  int layer = 1;
  int slot = 1;
  AgentPath path = AgentPath::Base;
  int refine_round = 0;

  bool operator==(const CandidateId&) const = default;
};

// Compact marker embedded in prompts, e.g. "L2.S3.Cpp.r0".
std::string to_string(const CandidateId& id);

enum class IntermediateLanguage { Cpp, Python };

std::string_view to_string(IntermediateLanguage lang);
AgentPath path_of(IntermediateLanguage lang);

struct HdlCacheEntry {
  CandidateId id;
  std::string source;
  QualityScore score;
};

struct IntermediateCacheEntry {
  CandidateId id;
  IntermediateLanguage language = IntermediateLanguage::Cpp;
  std::string source;
  double score = 0.0;  // score of the HDL translated from this code
};

inline double entry_score(const HdlCacheEntry& e) { return e.score.value; }
inline double entry_score(const IntermediateCacheEntry& e) { return e.score; }

// Ranking used by every TopN query: score desc, then later layer, lower
// slot, higher refine round. The path only breaks ties between entries a
// well-formed trial never produces.
template <typename Entry>
bool ranks_before(const Entry& a, const Entry& b) {
  const double sa = entry_score(a);
  const double sb = entry_score(b);
  if (sa != sb) return sa > sb;
  if (a.id.layer != b.id.layer) return a.id.layer > b.id.layer;
  if (a.id.slot != b.id.slot) return a.id.slot < b.id.slot;
  if (a.id.refine_round != b.id.refine_round) return a.id.refine_round > b.id.refine_round;
  return static_cast<int>(a.id.path) < static_cast<int>(b.id.path);
}

// Top `n` entries from layers strictly before `before_layer`.
template <typename Entry>
std::vector<Entry> top_ranked(std::span<const Entry> entries, int before_layer, std::size_t n) {
  std::vector<const Entry*> eligible;
  for (const auto& e : entries)
    if (e.id.layer < before_layer) eligible.push_back(&e);
  const auto take = std::min(n, eligible.size());
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(take), eligible.end(),
                    [](const Entry* a, const Entry* b) { return ranks_before(*a, *b); });
  std::vector<Entry> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(*eligible[i]);
  return out;
}

struct WindowStats {
  double min = 0.0;
  double mean = 0.0;
  std::vector<double> ranked_scores;  // the window, best first
};

// Append-only store of every scored candidate of one trial: the HDL cache
// plus one intermediate cache per language.
class GlobalCache {
 public:
  // Throws DuplicateId.
  void insert_hdl(HdlCacheEntry entry);
  void insert_intermediate(IntermediateCacheEntry entry);

  // All-or-nothing batch insert used at layer barriers.
  void insert_batch(std::vector<HdlCacheEntry> hdl, std::vector<IntermediateCacheEntry> intermediate);

  std::vector<HdlCacheEntry> top_n_hdl(int before_layer, std::size_t n) const;
  std::vector<IntermediateCacheEntry> top_k_intermediate(IntermediateLanguage lang, int before_layer,
                                                         std::size_t k) const;

  // Statistics of the window layer `through_layer + 1` would receive. The
  // mean divides by n and unfilled slots count as quality 0, so both
  // statistics are non-decreasing as layers are added. Throws EmptyWindow
  // when no entry exists at or before `through_layer`.
  WindowStats layer_quality_stats(int through_layer, std::size_t n) const;

  std::span<const HdlCacheEntry> hdl_entries() const { return hdl_; }
  std::span<const IntermediateCacheEntry> intermediate_entries(IntermediateLanguage lang) const {
    return lang == IntermediateLanguage::Cpp ? cpp_ : py_;
  }
  std::size_t size() const { return hdl_.size(); }
  bool empty() const { return hdl_.empty(); }

 private:
  bool contains_hdl(const CandidateId& id) const;
  bool contains_intermediate(IntermediateLanguage lang, const CandidateId& id) const;

  std::vector<HdlCacheEntry> hdl_;
  std::vector<IntermediateCacheEntry> cpp_;
  std::vector<IntermediateCacheEntry> py_;
};

}  // namespace verimoa
