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

#include "scriptorium/unicode.hpp"

#include <cstdio>
#include <memory>

#include <unicode/brkiter.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utext.h>

#include "scriptorium/errors.hpp"

namespace scriptorium::unicode {
namespace {

// Decodes one codepoint starting at text[i]; advances i. Throws on malformed input.
char32_t next_codepoint(std::string_view text, std::size_t& i) {
  const auto start = i;
  const auto b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    throw EncodingError(start, "invalid lead byte");
  }
  if (start + len > text.size()) throw EncodingError(start, "truncated sequence");
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[start + k]);
    if ((b & 0xC0) != 0x80) throw EncodingError(start, "invalid continuation byte");
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t min_for_len[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < min_for_len[len]) throw EncodingError(start, "overlong encoding");
  if (cp >= 0xD800 && cp <= 0xDFFF) throw EncodingError(start, "surrogate codepoint");
  if (cp > 0x10FFFF) throw EncodingError(start, "codepoint above U+10FFFF");
  i = start + len;
  return cp;
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const auto* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  return *n;
}

const icu::Normalizer2& nfd_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const auto* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFD unavailable: ") + u_errorName(status));
  return *n;
}

std::string normalize_with(const icu::Normalizer2& norm, std::string_view text) {
  check_utf8(text);
  UErrorCode status = U_ZERO_ERROR;
  auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  auto dst = norm.normalize(src, status);
  if (U_FAILURE(status)) throw Error(std::string("normalization failed: ") + u_errorName(status));
  std::string out;
  dst.toUTF8String(out);
  return out;
}

// BreakIterator instances are not thread-safe; each thread keeps its own.
icu::BreakIterator& grapheme_iterator() {
  thread_local std::unique_ptr<icu::BreakIterator> it = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::BreakIterator> bi(icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(), status));
    if (U_FAILURE(status)) throw Error(std::string("ICU grapheme iterator unavailable: ") + u_errorName(status));
    return bi;
  }();
  return *it;
}

template <typename Map>
std::string map_codepoints(std::string_view text, Map map) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) append(out, map(next_codepoint(text, i)));
  return out;
}

bool is_hex(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

}  // namespace

void check_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) next_codepoint(text, i);
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) out.push_back(next_codepoint(text, i));
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size());
  for (char32_t cp : codepoints) append(out, cp);
  return out;
}

std::string nfc(std::string_view text) { return normalize_with(nfc_instance(), text); }
std::string nfd(std::string_view text) { return normalize_with(nfd_instance(), text); }

bool is_nfc(std::string_view text) { return nfc(text) == text; }

std::vector<std::string> segment_graphemes(std::string_view text) {
  const std::string composed = nfc(text);
  std::vector<std::string> clusters;
  if (composed.empty()) return clusters;

  UErrorCode status = U_ZERO_ERROR;
  UText* ut = utext_openUTF8(nullptr, composed.data(), static_cast<int64_t>(composed.size()), &status);
  if (U_FAILURE(status)) throw Error(std::string("utext_openUTF8 failed: ") + u_errorName(status));
  auto& it = grapheme_iterator();
  it.setText(ut, status);
  if (U_FAILURE(status)) {
    utext_close(ut);
    throw Error(std::string("grapheme segmentation failed: ") + u_errorName(status));
  }
  // With a UTF-8 UText, boundaries are byte offsets into `composed`.
  int32_t begin = it.first();
  for (int32_t end = it.next(); end != icu::BreakIterator::DONE; begin = end, end = it.next())
    clusters.emplace_back(composed.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin)));
  utext_close(ut);
  return clusters;
}

std::string case_fold(std::string_view text) {
  return map_codepoints(text, [](char32_t cp) { return static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT)); });
}

std::string to_lower(std::string_view text) {
  return map_codepoints(text, [](char32_t cp) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))); });
}

bool is_combining(char32_t cp) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(cp));
  return (mask & (U_GC_MN_MASK | U_GC_MC_MASK | U_GC_ME_MASK)) != 0;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

bool is_punctuation(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)) != 0; }

bool is_private_use(char32_t cp) {
  return (cp >= 0xE000 && cp <= 0xF8FF) || (cp >= 0xF0000 && cp <= 0xFFFFD) || (cp >= 0x100000 && cp <= 0x10FFFD);
}

bool is_space_cluster(std::string_view cluster) {
  if (cluster.empty()) return false;
  for (char32_t cp : decode(cluster))
    if (!is_whitespace(cp)) return false;
  return true;
}

bool is_punctuation_cluster(std::string_view cluster) {
  if (cluster.empty()) return false;
  std::size_t i = 0;
  return is_punctuation(next_codepoint(cluster, i));
}

std::string codepoint_label(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char32_t cp : decode(text)) {
    if (!out.empty()) out.push_back('+');
    out += codepoint_label(cp);
  }
  return out;
}

bool unescape(std::string_view field, std::string& out, std::size_t& error_column, std::string& error) {
  out.clear();
  const bool escaped = field.substr(0, 2) == "U+" || field.find("+U+") != std::string_view::npos;
  if (!escaped) {
    try {
      check_utf8(field);
    } catch (const EncodingError& e) {
      error_column = 0;
      error = e.what();
      return false;
    }
    out.assign(field);
    return true;
  }

  std::size_t i = 0;
  std::size_t column = 1;
  while (i < field.size()) {
    if (field.substr(i, 2) == "U+") {
      std::size_t j = i + 2;
      while (j < field.size() && is_hex(field[j]) && j - i - 2 < 6) ++j;
      const auto digits = j - i - 2;
      if (digits < 4 || (j < field.size() && field[j] != '+')) {
        error_column = column;
        error = "malformed hex escape \"" + std::string(field.substr(i, std::min<std::size_t>(field.size() - i, 8))) + "\"";
        return false;
      }
      const auto cp = static_cast<char32_t>(std::stoul(std::string(field.substr(i + 2, digits)), nullptr, 16));
      if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        error_column = column;
        error = "escape is not a Unicode scalar value";
        return false;
      }
      append(out, cp);
      column += 2 + digits;
      i = j;
    } else {
      try {
        append(out, next_codepoint(field, i));
      } catch (const EncodingError& e) {
        error_column = column;
        error = e.what();
        return false;
      }
      ++column;
      if (i < field.size() && field[i] != '+') {
        error_column = column;
        error = "expected '+' between escape items";
        return false;
      }
    }
    if (i < field.size()) {
      // consume the '+' separator; a trailing '+' is malformed
      ++i;
      ++column;
      if (i == field.size()) {
        error_column = column;
        error = "dangling '+' in escape sequence";
        return false;
      }
    }
  }
  return true;
}

}  // namespace scriptorium::unicode
