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

// IIIF manifest harvesting and provenance normalization for assembling a
// handlist. Only manifest JSON is fetched; images are referenced by URL.

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scriptorium {

struct Canvas {
  std::string id;
  std::string label;
  std::string image_service;  // base URL of the image service, if any
  bool operator==(const Canvas&) const = default;
};

struct MetadataPair {
  std::string label;  // flattened text
  std::string value;
  std::string raw;    // the pair as it appeared in the manifest (JSON)
  bool operator==(const MetadataPair&) const = default;
};

struct IiifManifestRecord {
  std::string url;
  int version = 0;  // 2 or 3
  std::string label;
  std::vector<Canvas> canvases;
  std::string attribution;
  std::string license;
  std::vector<MetadataPair> metadata;
  bool operator==(const IiifManifestRecord&) const = default;

  // First metadata value whose label matches one of `labels`
  // (case-insensitive), in manifest order.
  std::optional<std::string> metadata_value(const std::vector<std::string_view>& labels) const;
};

// Accepts Presentation 2.x (sequences[0].canvases) and 3.x (items).
// Throws JsonError, UnsupportedVersion, NoCanvases.
IiifManifestRecord parse_manifest(std::string_view json, std::string url = "");

std::string record_to_json(const IiifManifestRecord& record);
IiifManifestRecord record_from_json(std::string_view json);

// One request in flight per host, and the next one starts no sooner than
// `min_interval` after the previous one finished, whichever threads issue
// them. Pair every acquire() with a release(); Lease does that for you.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds min_interval = std::chrono::milliseconds(500));
  void acquire(const std::string& host);
  void release(const std::string& host);
  std::chrono::milliseconds min_interval() const { return min_interval_; }

  static RateLimiter& shared();

  class Lease {
   public:
    Lease(RateLimiter& limiter, std::string host) : limiter_(limiter), host_(std::move(host)) {
      limiter_.acquire(host_);
    }
    ~Lease() { limiter_.release(host_); }
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;

   private:
    RateLimiter& limiter_;
    std::string host_;
  };

 private:
  std::chrono::milliseconds min_interval_;
  std::mutex mutex_;
  std::condition_variable changed_;
  std::set<std::string> busy_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

struct FetchOptions {
  std::chrono::milliseconds timeout{10000};
  int retries = 2;  // extra attempts after the first
  std::chrono::milliseconds backoff{250};  // doubled after each failure
  std::optional<std::filesystem::path> cache_dir;
  RateLimiter* limiter = nullptr;  // nullptr: RateLimiter::shared()

  // cache_dir from SCRIPTORIUM_CACHE when set.
  static FetchOptions from_environment();
};

// GET with retries. 4xx responses are final; 5xx and transport failures are
// retried. Throws NetworkError, HttpStatus, and parse errors.
std::string fetch_bytes(const std::string& url, const FetchOptions& options = FetchOptions::from_environment());
IiifManifestRecord fetch_manifest(const std::string& url,
                                  const FetchOptions& options = FetchOptions::from_environment());

// "host:port" key used by the limiter; throws std::invalid_argument for
// anything that is not an http(s) URL.
std::string url_host(std::string_view url);

enum class Confidence { Stated, Inferred };
std::string_view to_string(Confidence c);

struct NormalizedProvenance {
  std::set<std::string> origins;  // never empty; "UNKNOWN" when nothing matched
  int year_from = 0;
  int year_to = 0;
  Confidence confidence = Confidence::Stated;
  std::vector<std::string> warnings;

  // Equality ignores warnings.
  bool operator==(const NormalizedProvenance& o) const {
    return origins == o.origins && year_from == o.year_from && year_to == o.year_to && confidence == o.confidence;
  }
};

// Variant spellings of places mapped to origin codes. Matching is
// case-insensitive; every code also matches itself.
class OriginSynonyms {
 public:
  OriginSynonyms() = default;
  void add(std::string_view variant, std::string code);
  std::optional<std::string> lookup(std::string_view variant) const;
  std::size_t size() const { return table_.size(); }

  // The table shipped with the library (data/origin_synonyms.tsv).
  static const OriginSynonyms& builtin();

 private:
  std::map<std::string, std::string> table_;
};

// TAB-separated `variant<TAB>code`; '#' comments. Throws ParseError.
OriginSynonyms parse_synonyms(std::string_view source);

NormalizedProvenance normalize_provenance(std::string_view origin_text, std::string_view date_text,
                                          const OriginSynonyms& synonyms = OriginSynonyms::builtin());

// Inverse of normalize_provenance: (origin text, date text).
std::pair<std::string, std::string> render_provenance(const NormalizedProvenance& provenance);

struct HandlistEntry {
  std::string shelfmark;
  std::string institution;
  IiifManifestRecord record;
  NormalizedProvenance provenance;
};

// One row per entry, sorted by shelfmark (then manifest URL). Origin codes
// are '|'-joined. A leading '#' line documents the date conventions.
std::string build_handlist(std::vector<HandlistEntry> entries);

}  // namespace scriptorium
