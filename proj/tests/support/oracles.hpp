// Copyright 2026 The Scriptorium Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Reference implementations used to check the library. They are written
// from the definitions, favour obviousness over speed, and share no code
// with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace scriptorium::testing {

// Levenshtein distance straight from the recurrence, memoized on (i, j).
template <class T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  auto d = [&](auto&& self, std::size_t i, std::size_t j) -> std::size_t {
    if (i == 0) return j;
    if (j == 0) return i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t v = std::min({self(self, i - 1, j) + 1, self(self, i, j - 1) + 1,
                                    self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1)});
    memo[key] = v;
    return v;
  };
  return d(d, a.size(), b.size());
}

// 1 - distance / max length over bytes; tokens in the alignment tests are
// ASCII so bytes are graphemes.
inline double ascii_similarity(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 1.0;
  const std::vector<char> va(a.begin(), a.end()), vb(b.begin(), b.end());
  return 1.0 - static_cast<double>(levenshtein(va, vb)) / static_cast<double>(std::max(a.size(), b.size()));
}

// Best global alignment score by enumerating every alignment path.
// Pairs with similarity below `threshold` may not be aligned.
inline double best_alignment_exhaustive(const std::vector<std::string>& h, const std::vector<std::string>& r,
                                        double gap, double threshold) {
  double best = -std::numeric_limits<double>::infinity();
  auto walk = [&](auto&& self, std::size_t i, std::size_t j, double score) -> void {
    if (i == h.size() && j == r.size()) {
      best = std::max(best, score);
      return;
    }
    if (i < h.size()) self(self, i + 1, j, score + gap);
    if (j < r.size()) self(self, i, j + 1, score + gap);
    if (i < h.size() && j < r.size()) {
      const double s = ascii_similarity(h[i], r[j]);
      if (s >= threshold) self(self, i + 1, j + 1, score + s);
    }
  };
  walk(walk, 0, 0, 0.0);
  return best;
}

// Cyclic Jacobi eigenvalue iteration for a small symmetric matrix stored
// row-major. Returns (eigenvalues, eigenvectors as columns), sorted by
// descending eigenvalue.
inline std::pair<std::vector<double>, std::vector<std::vector<double>>> jacobi_eigen(
    std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  std::vector<double> values;
  std::vector<std::vector<double>> vectors(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    values.push_back(a[order[c]][order[c]]);
    for (std::size_t r = 0; r < n; ++r) vectors[r][c] = v[r][order[c]];
  }
  return {values, vectors};
}

// Burrows' Delta from the definition: relative frequencies, z-scores
// against the reference set's mean and population deviation over the
// `mfw` most frequent words (ties broken alphabetically), mean absolute
// z difference. Zero-deviation words are left out.
inline double burrows_delta(const std::map<std::string, double>& a_counts, const std::map<std::string, double>& b_counts,
                            const std::vector<std::map<std::string, double>>& reference, std::size_t mfw) {
  auto rel = [](const std::map<std::string, double>& counts) {
    double total = 0;
    for (const auto& [_, c] : counts) total += c;
    std::map<std::string, double> r;
    for (const auto& [w, c] : counts) r[w] = total > 0 ? c / total : 0.0;
    return r;
  };
  std::map<std::string, double> pooled;
  for (const auto& doc : reference)
    for (const auto& [w, c] : doc) pooled[w] += c;
  std::vector<std::pair<std::string, double>> ranked(pooled.begin(), pooled.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  if (ranked.size() > mfw) ranked.resize(mfw);

  std::vector<std::map<std::string, double>> rels;
  for (const auto& doc : reference) rels.push_back(rel(doc));
  const auto ra = rel(a_counts), rb = rel(b_counts);
  auto get = [](const std::map<std::string, double>& m, const std::string& w) {
    auto it = m.find(w);
    return it == m.end() ? 0.0 : it->second;
  };

  double sum = 0;
  std::size_t used = 0;
  for (const auto& [w, _] : ranked) {
    double mean = 0;
    for (const auto& r : rels) mean += get(r, w);
    mean /= static_cast<double>(rels.size());
    double var = 0;
    for (const auto& r : rels) var += (get(r, w) - mean) * (get(r, w) - mean);
    const double sd = std::sqrt(var / static_cast<double>(rels.size()));
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) continue;
    sum += std::abs((get(ra, w) - mean) / sd - (get(rb, w) - mean) / sd);
    ++used;
  }
  return used ? sum / static_cast<double>(used) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace scriptorium::testing
