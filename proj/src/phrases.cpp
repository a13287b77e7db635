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
#include <map>
#include <sstream>
#include <unordered_map>

#include "newstrend/embeddings.hpp"
#include "newstrend/errors.hpp"

namespace newstrend {

namespace {

struct Unit {
  std::string text;
  int length = 1;
};

using UnitStream = std::vector<std::vector<Unit>>;

// One greedy left-to-right join pass using every phrase formed at or
// before this pass.
std::vector<Unit> join_pass(const std::vector<Unit> &units,
                            const std::map<std::string, PhraseModel::Entry> &phrases,
                            int pass, int max_len) {
  std::vector<Unit> out;
  out.reserve(units.size());
  std::size_t i = 0;
  while (i < units.size()) {
    if (i + 1 < units.size() &&
        units[i].length + units[i + 1].length <= max_len) {
      auto joined = units[i].text + "_" + units[i + 1].text;
      auto it = phrases.find(joined);
      if (it != phrases.end() && it->second.pass <= pass) {
        out.push_back({std::move(joined), units[i].length + units[i + 1].length});
        i += 2;
        continue;
      }
    }
    out.push_back(units[i]);
    ++i;
  }
  return out;
}

}  // namespace

double phrase_score(long count_ab, long count_a, long count_b, long total,
                    long min_count) {
  if (count_a < min_count || count_b < min_count) return 0.0;
  return static_cast<double>(count_ab - min_count) * static_cast<double>(total) /
         (static_cast<double>(count_a) * static_cast<double>(count_b));
}

std::optional<double> PhraseModel::score(std::string_view phrase) const {
  auto it = phrases_.find(std::string(phrase));
  if (it == phrases_.end()) return std::nullopt;
  return it->second.score;
}

int PhraseModel::max_length() const {
  int longest = 0;
  for (const auto &[text, entry] : phrases_) longest = std::max(longest, entry.length);
  return longest;
}

void PhraseModel::add(std::string phrase, Entry entry) {
  if (entry.length > params_.max_len) {
    throw InvalidArgument("phrase '" + phrase + "' exceeds max length");
  }
  phrases_.emplace(std::move(phrase), entry);
}

std::vector<std::string> PhraseModel::apply(
    const std::vector<std::string> &tokens) const {
  std::vector<Unit> units;
  units.reserve(tokens.size());
  for (const auto &t : tokens) units.push_back({t, 1});
  for (int pass = 0; pass < params_.passes && !phrases_.empty(); ++pass) {
    units = join_pass(units, phrases_, pass, params_.max_len);
  }
  std::vector<std::string> out;
  out.reserve(units.size());
  for (auto &u : units) out.push_back(std::move(u.text));
  return out;
}

TokenStream PhraseModel::apply(const TokenStream &sentences) const {
  TokenStream out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) out.push_back(apply(s));
  return out;
}

void PhraseModel::write(std::ostream &out) const {
  out << "# min_count=" << params_.min_count << " threshold="
      << format_double(params_.threshold) << " max_len=" << params_.max_len
      << " passes=" << params_.passes << '\n';
  for (const auto &[text, e] : phrases_) {
    out << text << '\t' << format_double(e.score) << '\t' << e.length << '\t'
        << e.pass << '\n';
  }
}

PhraseModel PhraseModel::read(std::istream &in) {
  PhraseParams params;
  std::string header;
  if (!std::getline(in, header) || !header.starts_with("# ")) {
    throw InvalidArgument("phrase file lacks its parameter header");
  }
  std::istringstream hs(header.substr(2));
  for (std::string kv; hs >> kv;) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    auto key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "min_count") params.min_count = std::stol(value);
    if (key == "threshold") params.threshold = std::stod(value);
    if (key == "max_len") params.max_len = std::stoi(value);
    if (key == "passes") params.passes = std::stoi(value);
  }
  PhraseModel model(params);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string text;
    Entry e;
    std::string score;
    if (!std::getline(ls, text, '\t') || !(ls >> score >> e.length >> e.pass)) {
      throw InvalidArgument("malformed phrase line: " + line);
    }
    e.score = std::stod(score);
    model.add(std::move(text), e);
  }
  return model;
}

PhraseModel learn_phrases(const TokenStream &sentences,
                          const PhraseParams &params) {
  if (params.max_len < 1 || params.passes < 0 || params.min_count < 0) {
    throw InvalidArgument("invalid phrase parameters");
  }
  PhraseModel model(params);
  UnitStream units;
  units.reserve(sentences.size());
  for (const auto &s : sentences) {
    std::vector<Unit> u;
    u.reserve(s.size());
    for (const auto &t : s) u.push_back({t, 1});
    units.push_back(std::move(u));
  }

  std::map<std::string, PhraseModel::Entry> phrases;
  for (int pass = 0; pass < params.passes; ++pass) {
    std::unordered_map<std::string, long> unigram;
    std::unordered_map<std::string, int> lengths;
    std::map<std::pair<std::string, std::string>, long> bigram;
    long total = 0;
    for (const auto &s : units) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        ++unigram[s[i].text];
        lengths[s[i].text] = s[i].length;
        ++total;
        if (i + 1 < s.size() && s[i].length + s[i + 1].length <= params.max_len) {
          ++bigram[{s[i].text, s[i + 1].text}];
        }
      }
    }

    bool formed = false;
    for (const auto &[pair, count_ab] : bigram) {
      const auto &[a, b] = pair;
      const double score = phrase_score(count_ab, unigram[a], unigram[b], total,
                                        params.min_count);
      if (score <= params.threshold) continue;
      auto joined = a + "_" + b;
      if (phrases.contains(joined)) continue;
      const int length = lengths[a] + lengths[b];
      phrases.emplace(std::move(joined), PhraseModel::Entry{score, length, pass});
      formed = true;
    }
    if (!formed) break;
    for (auto &s : units) s = join_pass(s, phrases, pass, params.max_len);
  }
  for (auto &[text, entry] : phrases) model.add(text, entry);
  return model;
}

}  // namespace newstrend
