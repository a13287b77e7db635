// Copyright 2026 The Newstrend Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEWSTREND_ERRORS_HPP_
#define NEWSTREND_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newstrend {

// Base class for every error raised by the engine. The code is a stable,
// machine-readable identifier (e.g. "UNKNOWN_WORD") that the HTTP service
// forwards to clients verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string &reason)
      : Error("MALFORMED_RECORD",
              "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("EMPTY_CORPUS", "corpus contains no documents") {}
};

class UnknownSlice : public Error {
 public:
  explicit UnknownSlice(const std::string &label)
      : Error("UNKNOWN_MONTH", "no time slice labeled '" + label + "'") {}
};

class MissingLexicon : public Error {
 public:
  MissingLexicon()
      : Error("MISSING_LEXICON", "center policy requires a lexicon") {}
};

class InvalidThreshold : public Error {
 public:
  explicit InvalidThreshold(double value)
      : Error("INVALID_THRESHOLD",
              "similarity threshold out of range: " + std::to_string(value)) {}
};

class EmptyVocabulary : public Error {
 public:
  EmptyVocabulary()
      : Error("EMPTY_VOCABULARY", "no word survives min_count pruning") {}
};

class OutOfVocabulary : public Error {
 public:
  explicit OutOfVocabulary(const std::string &word)
      : Error("UNKNOWN_WORD", "word not in vocabulary: '" + word + "'") {}
};

class InsufficientOverlap : public Error {
 public:
  InsufficientOverlap(const std::string &from, const std::string &to,
                      std::size_t shared, std::size_t dim)
      : Error("INSUFFICIENT_OVERLAP",
              "slices " + from + " and " + to + " share " +
                  std::to_string(shared) + " words, need at least " +
                  std::to_string(dim)) {}
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(const std::string &word)
      : Error("UNKNOWN_WORD", "word absent from every slice: '" + word + "'") {}
};

class TooFewSlices : public Error {
 public:
  TooFewSlices() : Error("TOO_FEW_SLICES", "drift needs at least two slices") {}
};

class TooFewPoints : public Error {
 public:
  explicit TooFewPoints(std::size_t n)
      : Error("TOO_FEW_POINTS",
              "t-SNE needs at least 3 points, got " + std::to_string(n)) {}
};

class PerplexityTooHigh : public Error {
 public:
  PerplexityTooHigh(double perplexity, std::size_t n)
      : Error("PERPLEXITY_TOO_HIGH",
              "perplexity " + std::to_string(perplexity) +
                  " must be below (N-1)/3 for N=" + std::to_string(n)) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string &message)
      : Error("BAD_PARAMETER", message) {}
};

class StoreError : public Error {
 public:
  explicit StoreError(const std::string &message)
      : Error("STORE_INVALID", message) {}
};

}  // namespace newstrend

#endif  // NEWSTREND_ERRORS_HPP_
