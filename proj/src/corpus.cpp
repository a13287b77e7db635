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
#include "newstrend/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "newstrend/errors.hpp"
#include "newstrend/text.hpp"

namespace newstrend {

using nlohmann::json;

std::string Date::month_label() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year(*y),
                                  std::chrono::month(static_cast<unsigned>(*m)),
                                  std::chrono::day(static_cast<unsigned>(*d))};
  if (!ymd.ok()) return std::nullopt;
  return Date{*y, *m, *d};
}

Corpus::Corpus(std::vector<AnnotatedDocument> documents)
    : documents_(std::move(documents)) {
  std::set<std::string> ids;
  std::set<std::string> months;
  for (const auto &doc : documents_) {
    if (!ids.insert(doc.doc_id).second) {
      throw MalformedRecord(0, "duplicate doc_id '" + doc.doc_id + "'");
    }
    months.insert(doc.month());
  }
  int t = 1;
  for (const auto &label : months) slices_.push_back({label, t++});
}

bool Corpus::has_slice(std::string_view label) const {
  return std::any_of(slices_.begin(), slices_.end(),
                     [&](const TimeSlice &s) { return s.label == label; });
}

namespace {

TokenSpan span_from_json(const json &j, const std::vector<std::string> &tokens,
                         const char *what) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end")) {
    throw std::invalid_argument(std::string(what) + " span needs start/end");
  }
  const long start = j.at("start").get<long>();
  const long end = j.at("end").get<long>();
  if (start < 0 || start >= end) {
    throw std::invalid_argument(std::string(what) + " span [" +
                                std::to_string(start) + "," +
                                std::to_string(end) + ") is empty or negative");
  }
  if (end > static_cast<long>(tokens.size())) {
    throw std::invalid_argument(std::string(what) + " span end " +
                                std::to_string(end) + " exceeds token count " +
                                std::to_string(tokens.size()));
  }
  TokenSpan span{static_cast<int>(start), static_cast<int>(end), {}};
  span.text = text::join(
      std::span<const std::string>(tokens.data() + start, end - start), " ");
  return span;
}

json span_to_json(const TokenSpan &span) {
  return json{{"start", span.start}, {"end", span.end}};
}

bool overlaps(const TokenSpan &a, const TokenSpan &b) {
  return a.start < b.end && b.start < a.end;
}

}  // namespace

AnnotatedDocument document_from_json(const json &record) {
  if (!record.is_object()) throw std::invalid_argument("record is not an object");
  for (const char *key : {"doc_id", "published_at", "topic", "sentences"}) {
    if (!record.contains(key)) {
      throw std::invalid_argument(std::string("missing field '") + key + "'");
    }
  }
  AnnotatedDocument doc;
  doc.doc_id = record.at("doc_id").get<std::string>();
  if (doc.doc_id.empty()) throw std::invalid_argument("empty doc_id");
  const auto date_text = record.at("published_at").get<std::string>();
  auto date = parse_date(date_text);
  if (!date) throw std::invalid_argument("invalid published_at '" + date_text + "'");
  doc.published_at = *date;
  if (!record.at("topic").is_null()) {
    doc.topic = record.at("topic").get<std::string>();
  }
  for (const auto &js : record.at("sentences")) {
    Sentence sentence;
    sentence.tokens = js.at("tokens").get<std::vector<std::string>>();
    for (const auto &jf : js.value("frames", json::array())) {
      Frame frame;
      frame.subject = span_from_json(jf.at("subject"), sentence.tokens, "subject");
      frame.verb = span_from_json(jf.at("verb"), sentence.tokens, "verb");
      if (overlaps(frame.subject, frame.verb)) {
        throw std::invalid_argument("subject and verb spans overlap");
      }
      if (jf.contains("object") && !jf.at("object").is_null()) {
        frame.object = span_from_json(jf.at("object"), sentence.tokens, "object");
      }
      for (const auto &jm : jf.value("modifiers", json::array())) {
        frame.modifiers.push_back(span_from_json(jm, sentence.tokens, "modifier"));
      }
      frame.negated = jf.value("negated", false);
      if (jf.contains("verb_lemma") && !jf.at("verb_lemma").is_null()) {
        auto lemma = jf.at("verb_lemma").get<std::string>();
        if (lemma.empty() || lemma != text::lowercase(lemma)) {
          throw std::invalid_argument("verb_lemma must be non-empty lowercase");
        }
        frame.verb_lemma = std::move(lemma);
      }
      sentence.frames.push_back(std::move(frame));
    }
    for (const auto &jc : js.value("clusters", json::array())) {
      std::vector<TokenSpan> cluster;
      for (const auto &jm : jc) {
        cluster.push_back(span_from_json(jm, sentence.tokens, "cluster mention"));
      }
      if (cluster.empty()) throw std::invalid_argument("empty coreference cluster");
      sentence.clusters.push_back(std::move(cluster));
    }
    doc.sentences.push_back(std::move(sentence));
  }
  return doc;
}

json document_to_json(const AnnotatedDocument &doc) {
  json sentences = json::array();
  for (const auto &s : doc.sentences) {
    json frames = json::array();
    for (const auto &f : s.frames) {
      json modifiers = json::array();
      for (const auto &m : f.modifiers) modifiers.push_back(span_to_json(m));
      frames.push_back(json{
          {"subject", span_to_json(f.subject)},
          {"verb", span_to_json(f.verb)},
          {"object", f.object ? span_to_json(*f.object) : json(nullptr)},
          {"modifiers", modifiers},
          {"negated", f.negated},
          {"verb_lemma", f.verb_lemma ? json(*f.verb_lemma) : json(nullptr)}});
    }
    json clusters = json::array();
    for (const auto &c : s.clusters) {
      json members = json::array();
      for (const auto &m : c) members.push_back(span_to_json(m));
      clusters.push_back(members);
    }
    sentences.push_back(
        json{{"tokens", s.tokens}, {"frames", frames}, {"clusters", clusters}});
  }
  return json{{"doc_id", doc.doc_id},
              {"published_at", doc.published_at.iso()},
              {"topic", doc.topic ? json(*doc.topic) : json(nullptr)},
              {"sentences", sentences}};
}

Corpus parse_corpus(std::istream &in, Exec exec) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));

  const long n = static_cast<long>(lines.size());
  std::vector<std::optional<AnnotatedDocument>> docs(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic, 64) if (exec == Exec::kParallel)
  for (long i = 0; i < n; ++i) {
    const auto &line = lines[i];
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      docs[i] = document_from_json(json::parse(line));
    } catch (const std::exception &e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "invalid record";
    }
  }

  std::vector<AnnotatedDocument> out;
  std::set<std::string> ids;
  for (long i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw MalformedRecord(i + 1, errors[i]);
    if (!docs[i]) continue;
    if (!ids.insert(docs[i]->doc_id).second) {
      throw MalformedRecord(i + 1, "duplicate doc_id '" + docs[i]->doc_id + "'");
    }
    out.push_back(std::move(*docs[i]));
  }
  if (out.empty()) throw EmptyCorpus();
  return Corpus(std::move(out));
}

Corpus load_corpus(const std::filesystem::path &path, Exec exec) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open corpus file " + path.string());
  return parse_corpus(in, exec);
}

void write_corpus(const Corpus &corpus, std::ostream &out) {
  for (const auto &doc : corpus.documents()) {
    out << document_to_json(doc).dump() << '\n';
  }
}

Corpus slice(const Corpus &corpus, std::string_view label) {
  if (!corpus.has_slice(label)) throw UnknownSlice(std::string(label));
  std::vector<AnnotatedDocument> kept;
  for (const auto &doc : corpus.documents()) {
    if (doc.month() == label) kept.push_back(doc);
  }
  return Corpus(std::move(kept));
}

Corpus filter_by_topic(const Corpus &corpus, std::string_view prefix) {
  if (prefix.empty()) return corpus;
  std::vector<AnnotatedDocument> kept;
  for (const auto &doc : corpus.documents()) {
    if (doc.topic && doc.topic->starts_with(prefix)) kept.push_back(doc);
  }
  return Corpus(std::move(kept));
}

}  // namespace newstrend
