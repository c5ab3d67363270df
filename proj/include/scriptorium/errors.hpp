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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scriptorium {

// Root of every error raised by the library. Callers that only need a
// message can catch this; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EncodingError : public Error {
 public:
  EncodingError(std::size_t byte_offset, const std::string& what)
      : Error("invalid UTF-8 at byte " + std::to_string(byte_offset) + ": " + what),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Line/column are 1-based; column counts codepoints. Zero means unknown.
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

class ParseError : public Error {
 public:
  ParseError(SourceLocation where, const std::string& what)
      : Error("parse error at line " + std::to_string(where.line) +
              (where.column ? ", column " + std::to_string(where.column) : std::string()) + ": " + what),
        where_(where) {}
  SourceLocation where() const noexcept { return where_; }

 private:
  SourceLocation where_;
};

class DuplicateEntry : public Error {
 public:
  DuplicateEntry(std::string cluster, std::vector<std::size_t> lines)
      : Error(describe(cluster, lines)), cluster_(std::move(cluster)), lines_(std::move(lines)) {}
  const std::string& cluster() const noexcept { return cluster_; }
  const std::vector<std::size_t>& lines() const noexcept { return lines_; }

 private:
  static std::string describe(const std::string& cluster, const std::vector<std::size_t>& lines) {
    std::string s = "duplicate policy entry \"" + cluster + "\" on lines";
    for (auto l : lines) s += " " + std::to_string(l);
    return s;
  }
  std::string cluster_;
  std::vector<std::size_t> lines_;
};

class EmptyPolicy : public Error {
 public:
  EmptyPolicy() : Error("policy declares no entries") {}
};

class XmlError : public Error {
 public:
  XmlError(SourceLocation where, const std::string& what)
      : Error("XML error at line " + std::to_string(where.line) + ", column " +
              std::to_string(where.column) + ": " + what),
        where_(where) {}
  SourceLocation where() const noexcept { return where_; }

 private:
  SourceLocation where_;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class DuplicateRule : public Error {
 public:
  DuplicateRule(std::size_t line, const std::string& what)
      : Error("duplicate rule on line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyReference : public Error {
 public:
  explicit EmptyReference(std::string id)
      : Error("reference document has no graphemes: " + id), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class DuplicateVerse : public Error {
 public:
  DuplicateVerse(std::size_t line, const std::string& key)
      : Error("duplicate verse " + key + " on line " + std::to_string(line)) {}
};

class BadPattern : public Error {
 public:
  explicit BadPattern(const std::string& pattern)
      : Error("bad pattern \"" + pattern + "\": '*' is only allowed as the final character") {}
};

class DegenerateReference : public Error {
 public:
  DegenerateReference() : Error("every candidate word has zero standard deviation in the reference set") {}
};

class WindowTooLarge : public Error {
 public:
  WindowTooLarge(std::size_t window, std::size_t tokens)
      : Error("window of " + std::to_string(window) + " tokens exceeds document length " +
              std::to_string(tokens)) {}
};

class NoCandidates : public Error {
 public:
  NoCandidates() : Error("rolling classification needs at least one candidate") {}
};

class TooFewDocuments : public Error {
 public:
  explicit TooFewDocuments(std::size_t n)
      : Error("TF-IDF/PCA needs at least 3 documents, got " + std::to_string(n)) {}
};

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary() : Error("vocabulary is empty after filtering") {}
};

class JsonError : public Error {
 public:
  using Error::Error;
};

class UnsupportedVersion : public Error {
 public:
  using Error::Error;
};

class NoCanvases : public Error {
 public:
  NoCanvases() : Error("manifest has no canvases") {}
};

class NetworkError : public Error {
 public:
  NetworkError(const std::string& what, int attempts)
      : Error(what + " (after " + std::to_string(attempts) + " attempt" + (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

class HttpStatus : public Error {
 public:
  HttpStatus(int code, int attempts)
      : Error("HTTP status " + std::to_string(code)), code_(code), attempts_(attempts) {}
  int code() const noexcept { return code_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int code_;
  int attempts_;
};

class EmptyData : public Error {
 public:
  EmptyData() : Error("nothing to plot") {}
};

}  // namespace scriptorium
