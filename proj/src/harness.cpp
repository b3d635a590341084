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

#include "verimoa/harness.hpp"

#include <cmath>
#include <map>

#include "verimoa/error.hpp"
#include "verimoa/util.hpp"

namespace verimoa {

double pass_at_k(int n, int c, int k) {
  if (n < 1 || c < 0 || c > n || k < 1 || k > n)
    fail(ErrorCode::DomainError, "pass@k needs 0<=c<=n and 1<=k<=n (n=" + std::to_string(n) +
                                     " c=" + std::to_string(c) + " k=" + std::to_string(k) + ")");
  if (n - c < k) return 1.0;
  // 1 - C(n-c,k)/C(n,k) as a product, which stays exact-ish for large n
  double miss = 1.0;
  for (int i = n - c + 1; i <= n; ++i) miss *= 1.0 - static_cast<double>(k) / i;
  return 1.0 - miss;
}

namespace {

using Profile = std::map<std::string, double>;

Profile trigrams(std::string_view text) {
  const auto norm = normalize_whitespace(text);
  Profile p;
  if (norm.empty()) return p;
  if (norm.size() < 3) {
    p[norm] = 1;
    return p;
  }
  for (std::size_t i = 0; i + 3 <= norm.size(); ++i) p[norm.substr(i, 3)] += 1;
  return p;
}

double cosine(const Profile& a, const Profile& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 1.0 : 0.0;
  double dot = 0, na = 0, nb = 0;
  for (const auto& [g, v] : a) {
    na += v * v;
    if (auto it = b.find(g); it != b.end()) dot += v * it->second;
  }
  for (const auto& [g, v] : b) nb += v * v;
  return dot / std::sqrt(na * nb);
}

}  // namespace

double trigram_similarity(std::string_view a, std::string_view b) { return cosine(trigrams(a), trigrams(b)); }

Eigen::MatrixXd trigram_similarity_matrix(std::span<const std::string> sources) {
  const auto m = static_cast<Eigen::Index>(sources.size());
  std::vector<Profile> profiles;
  profiles.reserve(sources.size());
  for (const auto& s : sources) profiles.push_back(trigrams(s));
  Eigen::MatrixXd k(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) k(i, j) = k(j, i) = std::min(1.0, cosine(profiles[i], profiles[j]));
  }
  return k;
}

double vendi_from_similarity(const Eigen::MatrixXd& k) {
  const auto m = k.rows();
  if (m == 0) return 0.0;
  if (k.cols() != m) fail(ErrorCode::DomainError, "similarity matrix is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k / static_cast<double>(m), Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double l = solver.eigenvalues()(i);
    if (l > 1e-12) h -= l * std::log(l);
  }
  return std::exp(h);
}

double vendi_score(std::span<const std::string> sources) {
  return vendi_from_similarity(trigram_similarity_matrix(sources));
}

}  // namespace verimoa
