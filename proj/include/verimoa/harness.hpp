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

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace verimoa {

// Unbiased pass@k from n samples of which c passed. Throws DomainError
// unless 0 <= c <= n and 1 <= k <= n.
double pass_at_k(int n, int c, int k);

// Tag recorded with every diversity figure.
inline constexpr std::string_view kSimilarityKind = "cosine-char3-tf";

// Cosine similarity of character-trigram count vectors over
// whitespace-normalized source. Strings shorter than three characters
// count as one gram. Two empty strings are identical; an empty string is
// orthogonal to anything else.
double trigram_similarity(std::string_view a, std::string_view b);
Eigen::MatrixXd trigram_similarity_matrix(std::span<const std::string> sources);

// exp of the Shannon entropy of the eigenvalues of K/m. K must be
// symmetric PSD with unit diagonal.
double vendi_from_similarity(const Eigen::MatrixXd& k);

// Vendi score of a candidate set; 0 for an empty set.
double vendi_score(std::span<const std::string> sources);

}  // namespace verimoa
