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

// Brute-force references shared by the unit tests and the acceptance
// binary. Deliberately naive: no code in common with the library.
#pragma once

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace verimoa::oracle {

// Fraction of the k-subsets of n samples (the first c correct) that hold at
// least one correct sample, by enumerating bitmasks.
inline double pass_at_k_enumerated(int n, int c, int k) {
  long hit = 0, total = 0;
  const unsigned correct = (1u << c) - 1u;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    ++total;
    if (mask & correct) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
inline std::vector<double> jacobi_eigenvalues(Matrix a) {
  const std::size_t m = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t r = 0; r < m; ++r) {
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < m; ++r) {
          const double apr = a[p][r], aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
      }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(a[i][i]);
  return out;
}

inline double vendi_jacobi(const Matrix& k) {
  const double m = static_cast<double>(k.size());
  Matrix scaled = k;
  for (auto& row : scaled)
    for (auto& v : row) v /= m;
  double h = 0;
  for (double l : jacobi_eigenvalues(scaled))
    if (l > 1e-12) h -= l * std::log(l);
  return std::exp(h);
}

// Random similarity matrix: Gram matrix of unit vectors with non-negative
// coordinates, so it is PSD with unit diagonal and entries in [0, 1].
inline Matrix random_similarity(std::mt19937_64& rng, int m) {
  std::uniform_int_distribution<int> dims(1, 8);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  const int d = dims(rng);
  std::vector<std::vector<double>> vecs(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& v : vecs) {
    double norm = 0;
    for (auto& x : v) {
      x = coord(rng) < 0.3 ? 0.0 : coord(rng);
      norm += x * x;
    }
    if (norm == 0) {
      v[0] = 1;
      norm = 1;
    }
    for (auto& x : v) x /= std::sqrt(norm);
  }
  Matrix k(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double dot = 0;
      for (int t = 0; t < d; ++t) dot += vecs[i][t] * vecs[j][t];
      k[i][j] = i == j ? 1.0 : std::min(1.0, dot);
    }
  return k;
}

}  // namespace verimoa::oracle
