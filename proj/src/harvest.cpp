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

#include "scriptorium/harvest.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "scriptorium/csv.hpp"
#include "scriptorium/errors.hpp"
#include "scriptorium/unicode.hpp"
#include "util.hpp"

namespace scriptorium {
namespace detail {
std::string_view builtin_synonyms_tsv();  // generated from data/origin_synonyms.tsv
}

namespace {

using json = nlohmann::ordered_json;

// Language maps, {"@value": ...} objects and arrays all collapse to text.
std::string flatten(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    // 2.x language alternatives: like a 3.x language map, keep the first
    if (!v.empty() && v.front().is_object() && v.front().contains("@language")) {
      for (const auto& e : v)
        if (auto s = flatten(e); !s.empty()) return s;
      return {};
    }
    std::string out;
    for (const auto& e : v) {
      auto s = flatten(e);
      if (s.empty()) continue;
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  if (v.is_object()) {
    if (v.contains("@value")) return flatten(v["@value"]);
    if (v.contains("value")) return flatten(v["value"]);
    for (const auto& [_, e] : v.items()) {
      auto s = flatten(e);
      if (!s.empty()) return s;  // first language in the map
    }
  }
  return {};
}

std::string id_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (!v.is_object()) return {};
  if (v.contains("id") && v["id"].is_string()) return v["id"].get<std::string>();
  if (v.contains("@id") && v["@id"].is_string()) return v["@id"].get<std::string>();
  return {};
}

const json* first_of(const json& v) {
  if (v.is_array()) return v.empty() ? nullptr : &v.front();
  if (v.is_object()) return &v;
  return nullptr;
}

std::string service_of(const json& resource) {
  if (!resource.is_object() || !resource.contains("service")) return {};
  const json* s = first_of(resource["service"]);
  return s ? id_of(*s) : std::string{};
}

int detect_version(const json& m) {
  auto mentions = [](const json& ctx, std::string_view needle) {
    auto has = [&](const json& c) { return c.is_string() && c.get<std::string>().find(needle) != std::string::npos; };
    if (has(ctx)) return true;
    if (ctx.is_array())
      for (const auto& c : ctx)
        if (has(c)) return true;
    return false;
  };
  if (m.contains("@context")) {
    const auto& ctx = m["@context"];
    if (mentions(ctx, "iiif.io/api/presentation/3")) return 3;
    if (mentions(ctx, "iiif.io/api/presentation/2")) return 2;
    if (mentions(ctx, "iiif.io/api/presentation/")) throw UnsupportedVersion("unsupported IIIF Presentation version");
  }
  if (m.contains("sequences")) return 2;
  if (m.contains("items")) return 3;
  throw UnsupportedVersion("not a IIIF Presentation 2.x or 3.x manifest");
}

Canvas canvas_v2(const json& c, std::size_t index) {
  Canvas out;
  out.id = id_of(c);
  if (out.id.empty()) throw JsonError("canvas " + std::to_string(index) + " has no id");
  if (c.contains("label")) out.label = flatten(c["label"]);
  if (c.contains("images"))
    if (const json* img = first_of(c["images"]); img && img->contains("resource"))
      out.image_service = service_of((*img)["resource"]);
  return out;
}

Canvas canvas_v3(const json& c, std::size_t index) {
  Canvas out;
  out.id = id_of(c);
  if (out.id.empty()) throw JsonError("canvas " + std::to_string(index) + " has no id");
  if (c.contains("label")) out.label = flatten(c["label"]);
  // Canvas -> AnnotationPage -> Annotation -> body
  if (c.contains("items"))
    if (const json* page = first_of(c["items"]); page && page->contains("items"))
      if (const json* anno = first_of((*page)["items"]); anno && anno->contains("body"))
        if (const json* body = first_of((*anno)["body"])) out.image_service = service_of(*body);
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& url) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(fnv1a(url)));
  return dir / name;
}

struct ParsedUrl {
  std::string scheme, host;
  int port = 0;
  std::string path;
};

ParsedUrl parse_url(std::string_view url) {
  static const std::regex re(R"(^(https?)://([^/:?#]+)(?::(\d+))?([/?#].*)?$)", std::regex::icase);
  std::string s(url);
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("not an http(s) URL: " + s);
  ParsedUrl p;
  p.scheme = m[1].str();
  std::transform(p.scheme.begin(), p.scheme.end(), p.scheme.begin(), [](unsigned char c) { return std::tolower(c); });
  p.host = m[2].str();
  p.port = m[3].matched ? std::stoi(m[3].str()) : (p.scheme == "https" ? 443 : 80);
  p.path = m[4].matched ? m[4].str() : "/";
  if (p.path.front() != '/') p.path.insert(p.path.begin(), '/');
  return p;
}

std::string fold(std::string_view s) { return unicode::case_fold(unicode::nfc(detail::trim(s))); }

std::string collapse_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

int roman_value(std::string_view r) {
  auto v = [](char c) {
    switch (c) {
      case 'i': return 1;
      case 'v': return 5;
      case 'x': return 10;
      case 'l': return 50;
      case 'c': return 100;
      default: return 0;
    }
  };
  int total = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const int cur = v(r[i]);
    if (cur == 0) return 0;
    const int next = i + 1 < r.size() ? v(r[i + 1]) : 0;
    total += cur < next ? -cur : cur;
  }
  return total;
}

int century_number(const std::string& token) {
  if (!token.empty() && std::isdigit(static_cast<unsigned char>(token[0]))) return std::stoi(token);
  return roman_value(token);
}

struct DateRange {
  int from, to;
};

std::optional<DateRange> parse_date(std::string_view text) {
  std::string s = fold(text);
  s = replace_all(s, "–", "-");
  s = replace_all(s, "—", "-");
  s.erase(std::remove(s.begin(), s.end(), '?'), s.end());
  s = collapse_spaces(s);
  if (s.empty()) return std::nullopt;

  static const std::string C = R"((\d{1,2}|[ivxlc]+)(?:st|nd|rd|th|e|er|eme|ème|\.)?)";
  static const std::string W = R"((?:century|cent\.|c\.|siècle|siecle|jahrhundert|jh\.|secolo|siglo))";
  static const std::string P = R"((?:saec\.|saec|s\.|sec\.|saeculum|siglo|secolo))";
  static const std::regex literal(R"(^(\d{1,4}) ?- ?(\d{1,4})$)");
  static const std::regex circa(R"(^(?:ca\.?|c\.|circa|um|vers|around|about) ?(\d{1,4})$)");
  static const std::regex year(R"(^(\d{1,4})$)");
  static const std::regex half("^(first|1st|second|2nd|latter) half of (?:the )?" + C + " " + W + "$");
  static const std::regex century_range("^" + C + " ?- ?" + C + " " + W + "$");
  static const std::regex century("^" + C + " " + W + "$");
  static const std::regex prefixed("^" + P + " ?([ivxlc]+)$");

  std::smatch m;
  auto ok = [](int a, int b) { return a <= b ? std::optional<DateRange>(DateRange{a, b}) : std::nullopt; };
  auto valid_century = [](int n) { return n >= 1 && n <= 21; };

  if (std::regex_match(s, m, literal)) return ok(std::stoi(m[1]), std::stoi(m[2]));
  if (std::regex_match(s, m, circa)) return DateRange{std::stoi(m[1]) - 10, std::stoi(m[1]) + 10};
  if (std::regex_match(s, m, year)) return DateRange{std::stoi(m[1]), std::stoi(m[1])};
  if (std::regex_match(s, m, half)) {
    const int n = century_number(m[2]);
    if (!valid_century(n)) return std::nullopt;
    const bool second = m[1] != "first" && m[1] != "1st";
    return second ? DateRange{(n - 1) * 100 + 50, n * 100} : DateRange{(n - 1) * 100, (n - 1) * 100 + 50};
  }
  if (std::regex_match(s, m, century_range)) {
    const int a = century_number(m[1]), b = century_number(m[2]);
    if (!valid_century(a) || !valid_century(b)) return std::nullopt;
    return ok((a - 1) * 100, b * 100);
  }
  if (std::regex_match(s, m, century) || std::regex_match(s, m, prefixed)) {
    const int n = century_number(m[1]);
    if (!valid_century(n)) return std::nullopt;
    return DateRange{(n - 1) * 100, n * 100};
  }
  return std::nullopt;
}

std::vector<std::string> split_codes(std::string_view code) {
  std::vector<std::string> out;
  for (auto c : detail::split(code, '|')) {
    auto t = detail::trim(c);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<std::string> split_alternatives(const std::string& folded) {
  static const std::regex sep(R"(\s+(?:or|and|ou|et|oder|und|o|e|y)\s+|[|/,;&])");
  std::vector<std::string> parts;
  for (std::sregex_token_iterator it(folded.begin(), folded.end(), sep, -1), end; it != end; ++it) {
    auto t = std::string(detail::trim(it->str()));
    if (!t.empty()) parts.push_back(std::move(t));
  }
  return parts;
}

}  // namespace

std::optional<std::string> IiifManifestRecord::metadata_value(const std::vector<std::string_view>& labels) const {
  for (const auto& pair : metadata) {
    const auto l = fold(pair.label);
    for (auto want : labels)
      if (l == fold(want)) return pair.value;
  }
  return std::nullopt;
}

IiifManifestRecord parse_manifest(std::string_view text, std::string url) {
  json m;
  try {
    m = json::parse(text);
  } catch (const json::parse_error& e) {
    throw JsonError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.is_object()) throw JsonError("manifest is not a JSON object");

  IiifManifestRecord r;
  try {
    r.version = detect_version(m);
    r.url = url.empty() ? id_of(m) : std::move(url);
    if (m.contains("label")) r.label = flatten(m["label"]);
    if (m.contains("metadata") && m["metadata"].is_array()) {
      for (const auto& pair : m["metadata"]) {
        if (!pair.is_object()) continue;
        r.metadata.push_back({pair.contains("label") ? flatten(pair["label"]) : "",
                              pair.contains("value") ? flatten(pair["value"]) : "", pair.dump()});
      }
    }

    if (r.version == 2) {
      if (m.contains("attribution")) r.attribution = flatten(m["attribution"]);
      if (m.contains("license")) r.license = flatten(m["license"]);
      if (m.contains("sequences") && m["sequences"].is_array() && !m["sequences"].empty()) {
        const auto& seq = m["sequences"][0];
        if (seq.contains("canvases") && seq["canvases"].is_array()) {
          std::size_t i = 0;
          for (const auto& c : seq["canvases"]) r.canvases.push_back(canvas_v2(c, i++));
        }
      }
    } else {
      if (m.contains("requiredStatement")) r.attribution = flatten(m["requiredStatement"]);
      if (m.contains("rights")) r.license = flatten(m["rights"]);
      if (m.contains("items") && m["items"].is_array()) {
        std::size_t i = 0;
        for (const auto& c : m["items"]) r.canvases.push_back(canvas_v3(c, i++));
      }
    }
  } catch (const json::exception& e) {
    throw JsonError(std::string("malformed manifest: ") + e.what());
  }
  if (r.canvases.empty()) throw NoCanvases();
  return r;
}

std::string record_to_json(const IiifManifestRecord& r) {
  json j;
  j["url"] = r.url;
  j["version"] = r.version;
  j["label"] = r.label;
  j["attribution"] = r.attribution;
  j["license"] = r.license;
  j["canvases"] = json::array();
  for (const auto& c : r.canvases) j["canvases"].push_back({{"id", c.id}, {"label", c.label}, {"service", c.image_service}});
  j["metadata"] = json::array();
  for (const auto& p : r.metadata) j["metadata"].push_back({{"label", p.label}, {"value", p.value}, {"raw", p.raw}});
  return j.dump();
}

IiifManifestRecord record_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    IiifManifestRecord r;
    r.url = j.at("url").get<std::string>();
    r.version = j.at("version").get<int>();
    r.label = j.at("label").get<std::string>();
    r.attribution = j.at("attribution").get<std::string>();
    r.license = j.at("license").get<std::string>();
    for (const auto& c : j.at("canvases"))
      r.canvases.push_back({c.at("id").get<std::string>(), c.at("label").get<std::string>(),
                            c.at("service").get<std::string>()});
    for (const auto& p : j.at("metadata"))
      r.metadata.push_back(
          {p.at("label").get<std::string>(), p.at("value").get<std::string>(), p.at("raw").get<std::string>()});
    return r;
  } catch (const json::exception& e) {
    throw JsonError(std::string("bad manifest record: ") + e.what());
  }
}

RateLimiter::RateLimiter(std::chrono::milliseconds min_interval) : min_interval_(min_interval) {}

void RateLimiter::acquire(const std::string& host) {
  std::unique_lock lock(mutex_);
  for (;;) {
    if (busy_.count(host)) {
      changed_.wait(lock);
      continue;
    }
    const auto slot = next_slot_[host];
    if (std::chrono::steady_clock::now() >= slot) break;
    changed_.wait_until(lock, slot);
  }
  busy_.insert(host);
}

void RateLimiter::release(const std::string& host) {
  {
    std::lock_guard lock(mutex_);
    busy_.erase(host);
    next_slot_[host] = std::chrono::steady_clock::now() + min_interval_;
  }
  changed_.notify_all();
}

RateLimiter& RateLimiter::shared() {
  static RateLimiter limiter;
  return limiter;
}

FetchOptions FetchOptions::from_environment() {
  FetchOptions o;
  if (const char* dir = std::getenv("SCRIPTORIUM_CACHE"); dir && *dir) o.cache_dir = std::filesystem::path(dir);
  return o;
}

std::string url_host(std::string_view url) {
  const auto p = parse_url(url);
  return p.host + ":" + std::to_string(p.port);
}

std::string fetch_bytes(const std::string& url, const FetchOptions& options) {
  const auto target = parse_url(url);
  if (options.cache_dir) {
    std::ifstream in(cache_path(*options.cache_dir, url), std::ios::binary);
    if (in) return std::string(std::istreambuf_iterator<char>(in), {});
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (target.scheme == "https") throw NetworkError("https is not supported in this build: " + url, 0);
#endif

  RateLimiter& limiter = options.limiter ? *options.limiter : RateLimiter::shared();
  const std::string host_key = target.host + ":" + std::to_string(target.port);
  const int attempts = std::max(0, options.retries) + 1;
  auto delay = options.backoff;
  std::string last_error;

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    RateLimiter::Lease lease(limiter, host_key);
    httplib::Client client(target.scheme + "://" + target.host + ":" + std::to_string(target.port));
    const auto seconds = options.timeout.count() / 1000;
    const auto micros = (options.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_follow_location(true);

    auto res = client.Get(target.path);
    if (!res) {
      last_error = "request to " + url + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      if (options.cache_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*options.cache_dir, ec);
        const auto final_path = cache_path(*options.cache_dir, url);
        auto tmp = final_path;
        tmp += ".tmp";
        std::ofstream(tmp, std::ios::binary) << res->body;
        std::filesystem::rename(tmp, final_path, ec);
      }
      return res->body;
    }
    if (res->status >= 400 && res->status < 500) throw HttpStatus(res->status, attempt);
    if (attempt == attempts) throw HttpStatus(res->status, attempt);
    last_error = "HTTP status " + std::to_string(res->status);
  }
  throw NetworkError(last_error, attempts);
}

IiifManifestRecord fetch_manifest(const std::string& url, const FetchOptions& options) {
  return parse_manifest(fetch_bytes(url, options), url);
}

std::string_view to_string(Confidence c) { return c == Confidence::Stated ? "stated" : "inferred"; }

void OriginSynonyms::add(std::string_view variant, std::string code) {
  for (const auto& c : split_codes(code)) table_[fold(c)] = c;
  table_[fold(variant)] = std::move(code);
}

std::optional<std::string> OriginSynonyms::lookup(std::string_view variant) const {
  auto it = table_.find(fold(variant));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

const OriginSynonyms& OriginSynonyms::builtin() {
  static const OriginSynonyms table = parse_synonyms(detail::builtin_synonyms_tsv());
  return table;
}

OriginSynonyms parse_synonyms(std::string_view source) {
  unicode::check_utf8(source);
  OriginSynonyms table;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(source)) {
    ++line_no;
    if (detail::is_blank_or_comment(line)) continue;
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2 || detail::trim(fields[0]).empty() || detail::trim(fields[1]).empty())
      throw ParseError({line_no, 1}, "expected variant<TAB>code");
    table.add(detail::trim(fields[0]), std::string(detail::trim(fields[1])));
  }
  return table;
}

NormalizedProvenance normalize_provenance(std::string_view origin_text, std::string_view date_text,
                                          const OriginSynonyms& synonyms) {
  NormalizedProvenance out;

  std::string origin = fold(origin_text);
  origin.erase(std::remove(origin.begin(), origin.end(), '?'), origin.end());
  origin = collapse_spaces(origin);
  auto take = [&](const std::string& codes) {
    for (auto& c : split_codes(codes)) out.origins.insert(std::move(c));
  };
  if (!origin.empty()) {
    if (auto whole = synonyms.lookup(origin)) {
      take(*whole);
    } else {
      for (const auto& part : split_alternatives(origin)) {
        if (auto hit = synonyms.lookup(part)) {
          take(*hit);
          continue;
        }
        // "northern France", "Paris, Sorbonne": longest word run that matches.
        const auto words = detail::split(part, ' ');
        bool found = false;
        for (std::size_t len = words.size(); len > 0 && !found; --len) {
          for (std::size_t b = 0; b + len <= words.size() && !found; ++b) {
            std::string phrase;
            for (std::size_t k = b; k < b + len; ++k) phrase += (k > b ? " " : "") + std::string(words[k]);
            if (auto hit = synonyms.lookup(phrase)) {
              take(*hit);
              found = true;
            }
          }
        }
        if (!found) out.warnings.push_back("unrecognised origin \"" + part + "\"");
      }
    }
  }
  out.origins.erase("UNKNOWN");
  if (out.origins.empty()) out.origins.insert("UNKNOWN");

  if (auto range = parse_date(date_text)) {
    out.year_from = range->from;
    out.year_to = range->to;
  } else {
    out.confidence = Confidence::Inferred;
    out.warnings.push_back(detail::trim(date_text).empty()
                               ? std::string("no date given")
                               : "unparseable date \"" + std::string(detail::trim(date_text)) + "\"");
  }
  return out;
}

std::pair<std::string, std::string> render_provenance(const NormalizedProvenance& p) {
  std::string origin;
  for (const auto& code : p.origins) {
    if (code == "UNKNOWN") continue;
    if (!origin.empty()) origin += " or ";
    origin += code;
  }
  std::string date;
  if (p.confidence == Confidence::Stated)
    date = p.year_from == p.year_to ? std::to_string(p.year_from)
                                    : std::to_string(p.year_from) + "-" + std::to_string(p.year_to);
  return {origin, date};
}

std::string build_handlist(std::vector<HandlistEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const HandlistEntry& a, const HandlistEntry& b) {
    return std::tie(a.shelfmark, a.record.url) < std::tie(b.shelfmark, b.record.url);
  });
  std::string out =
      "# dates: Nth century = (N-1)*100..N*100; first/second half = 50-year halves of that span; "
      "ca. YYYY = YYYY-10..YYYY+10; 0..0 = no parseable date\n";
  out += csv::format_row(
      {"shelfmark", "institution", "origin", "year_from", "year_to", "canvas_count", "manifest_url", "license"});
  for (const auto& e : entries) {
    std::string origins;
    for (const auto& c : e.provenance.origins) origins += (origins.empty() ? "" : "|") + c;
    out += csv::format_row({e.shelfmark, e.institution, origins, std::to_string(e.provenance.year_from),
                            std::to_string(e.provenance.year_to), std::to_string(e.record.canvases.size()), e.record.url,
                            e.record.license});
  }
  return out;
}

}  // namespace scriptorium
