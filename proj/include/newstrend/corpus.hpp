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
#ifndef NEWSTREND_CORPUS_HPP_
#define NEWSTREND_CORPUS_HPP_

#include <compare>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "newstrend/types.hpp"

namespace newstrend {

// Calendar date (UTC). Only the year-month part selects the time slice.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  // "YYYY-MM"
  std::string month_label() const;
  // "YYYY-MM-DD"
  std::string iso() const;

  auto operator<=>(const Date &) const = default;
};

// Parses an ISO-8601 date, optionally followed by a time part
// ("2019-01-05" or "2019-01-05T10:00:00Z"). Returns nullopt if invalid.
std::optional<Date> parse_date(std::string_view s);

// Half-open token range [start, end) with its surface text cached.
struct TokenSpan {
  int start = 0;
  int end = 0;
  std::string text;

  bool operator==(const TokenSpan &) const = default;
};

struct Frame {
  TokenSpan subject;
  TokenSpan verb;
  std::optional<TokenSpan> object;
  std::vector<TokenSpan> modifiers;
  bool negated = false;
  std::optional<std::string> verb_lemma;

  bool operator==(const Frame &) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<Frame> frames;
  // Document-local coreference clusters, each a list of mention spans.
  std::vector<std::vector<TokenSpan>> clusters;

  bool operator==(const Sentence &) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  Date published_at;
  std::optional<std::string> topic;
  std::vector<Sentence> sentences;

  std::string month() const { return published_at.month_label(); }

  bool operator==(const AnnotatedDocument &) const = default;
};

struct TimeSlice {
  std::string label;  // "YYYY-MM"
  int index = 0;      // 1-based chronological position

  bool operator==(const TimeSlice &) const = default;
};

// Immutable, validated collection of documents. Slices are derived from the
// documents and cover exactly the months present.
class Corpus {
 public:
  Corpus() = default;
  // Throws MalformedRecord (line 0) on duplicate doc ids.
  explicit Corpus(std::vector<AnnotatedDocument> documents);

  const std::vector<AnnotatedDocument> &documents() const { return documents_; }
  const std::vector<TimeSlice> &slices() const { return slices_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  bool has_slice(std::string_view label) const;

  bool operator==(const Corpus &other) const {
    return documents_ == other.documents_;
  }

 private:
  std::vector<AnnotatedDocument> documents_;
  std::vector<TimeSlice> slices_;
};

// Builds a document from one JSON record, filling span texts from the
// tokens. Throws std::invalid_argument describing the first violated
// invariant.
AnnotatedDocument document_from_json(const nlohmann::json &record);
nlohmann::json document_to_json(const AnnotatedDocument &doc);

// Reads line-delimited records. Blank lines are skipped. Lines are parsed
// in parallel when exec is kParallel; the reported error is always the
// first malformed line.
Corpus parse_corpus(std::istream &in, Exec exec = Exec::kParallel);
Corpus load_corpus(const std::filesystem::path &path,
                   Exec exec = Exec::kParallel);
void write_corpus(const Corpus &corpus, std::ostream &out);

// Documents published in the given month. Throws UnknownSlice.
Corpus slice(const Corpus &corpus, std::string_view label);

// Documents whose topic starts with prefix; an empty prefix keeps all.
Corpus filter_by_topic(const Corpus &corpus, std::string_view prefix);

}  // namespace newstrend

#endif  // NEWSTREND_CORPUS_HPP_
