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

// Shared helpers for the test binaries: fixture access and small seeded
// generators for property tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace scriptorium::testing {

inline std::filesystem::path fixture(std::string_view relative) {
  return std::filesystem::path(SCRIPTORIUM_FIXTURES) / std::string(relative);
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::filesystem::path scratch_dir(std::string_view name) {
  auto dir = std::filesystem::temp_directory_path() / ("scriptorium-test-" + std::string(name));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void spit(const std::filesystem::path& path, std::string_view content) {
  std::ofstream(path, std::ios::binary) << content;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool chance(double p) { return uniform() < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  // Index drawn with probability proportional to weights.
  std::size_t weighted(const std::vector<double>& weights) {
    return std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Clusters that are each exactly one user-perceived character:
// plain letters, precomposed letters, letters with marks that have no
// precomposed form, stacked marks, and abbreviation signs.
inline const std::vector<std::string>& cluster_alphabet() {
  static const std::vector<std::string> a = {
      "a", "b", "c", "d", "e", "i", "m", "n", "o", "q", "s", "u",
      "\u017F",        // long s
      "\u00F0",        // eth, used for uncial d
      "7",             // Tironian et
      "\uA76F",        // con
      "\uA751",        // p with stroke
      "\u0113",        // precomposed e + macron
      "\u00F1",        // precomposed n + tilde
      "q\u0304",       // q + macron, no precomposed form
      "p\u0303",       // p + tilde
      "o\u0304\u0301", // stacked marks (NFC composes to U+1E53)
      "\uA757\u0304",  // q with stroke + macron
  };
  return a;
}

inline std::vector<std::string> random_clusters(Rng& rng, std::size_t max_len) {
  std::vector<std::string> out(rng.between(0, max_len));
  for (auto& c : out) c = rng.pick(cluster_alphabet());
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep = "") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

// Minimal UTF-8 decoder, independent of the library's.
inline std::vector<char32_t> codepoints(std::string_view s) {
  std::vector<char32_t> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    const int len = b < 0x80 ? 1 : b < 0xE0 ? 2 : b < 0xF0 ? 3 : 4;
    char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace scriptorium::testing
