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

// UTF-8 plumbing, canonical composition and extended grapheme clusters.
// Everything here is a thin, strict layer over ICU: invalid UTF-8 is always
// rejected with EncodingError, never replaced.

#include <string>
#include <string_view>
#include <vector>

namespace scriptorium::unicode {

// Throws EncodingError on the first malformed sequence (overlong forms,
// surrogates and values above U+10FFFF are malformed).
void check_utf8(std::string_view text);

std::u32string decode(std::string_view text);
std::string encode(std::u32string_view codepoints);
void append(std::string& out, char32_t cp);

// Canonical composition (NFC) / decomposition (NFD).
std::string nfc(std::string_view text);
std::string nfd(std::string_view text);
bool is_nfc(std::string_view text);

// Extended grapheme clusters of nfc(text). Joining the result yields nfc(text).
std::vector<std::string> segment_graphemes(std::string_view text);

// Simple (codepoint-to-codepoint) default case folding.
std::string case_fold(std::string_view text);
// Simple default lowercase mapping.
std::string to_lower(std::string_view text);

bool is_combining(char32_t cp);      // general category Mn, Mc or Me
bool is_whitespace(char32_t cp);     // White_Space property
bool is_punctuation(char32_t cp);    // general category P*
bool is_private_use(char32_t cp);    // all three private-use ranges

// True when the cluster consists only of White_Space codepoints.
bool is_space_cluster(std::string_view cluster);
// True when the cluster starts with a punctuation codepoint.
bool is_punctuation_cluster(std::string_view cluster);

// "U+00F0"; clusters become "U+0065+U+0304".
std::string codepoint_label(char32_t cp);
std::string escape(std::string_view text);

// Parses a field that is either literal text or a '+'-joined sequence mixing
// U+XXXX escapes and single literal codepoints ("e+U+0304"). A field is read
// as an escape sequence only when it contains a "U+" followed by a hex digit.
// On failure returns false and sets error_column (1-based codepoint column).
bool unescape(std::string_view field, std::string& out, std::size_t& error_column, std::string& error);

}  // namespace scriptorium::unicode
