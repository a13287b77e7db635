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
#include "newstrend/coref.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "newstrend/errors.hpp"
#include "newstrend/text.hpp"

namespace newstrend {

namespace {

// Length in code points, so accented names are not favoured by byte count.
std::size_t char_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Longer first, then lexicographically smaller.
bool longer_then_lex(const std::string &a, const std::string &b) {
  const auto la = char_length(a), lb = char_length(b);
  if (la != lb) return la > lb;
  return a < b;
}

}  // namespace

bool MentionCluster::contains(std::string_view mention) const {
  return std::binary_search(mentions.begin(), mentions.end(), mention);
}

MentionCluster make_cluster(std::span<const std::string> raw,
                            std::string source_doc) {
  MentionCluster cluster;
  cluster.source_doc = std::move(source_doc);
  for (const auto &m : raw) {
    auto n = text::normalize(m);
    if (!n.empty()) cluster.mentions.push_back(std::move(n));
  }
  std::sort(cluster.mentions.begin(), cluster.mentions.end());
  cluster.mentions.erase(
      std::unique(cluster.mentions.begin(), cluster.mentions.end()),
      cluster.mentions.end());
  return cluster;
}

const std::unordered_set<std::string> &default_pronouns() {
  static const std::unordered_set<std::string> pronouns = {
      "he",    "him",  "his",   "himself", "she",  "her",   "hers",
      "herself", "it", "its",   "itself",  "they", "them",  "their",
      "theirs", "themselves", "i", "me",   "my",   "mine",  "we",
      "us",    "our",  "ours",  "you",     "your", "yours", "this",
      "that",  "these", "those", "who",    "whom", "which"};
  return pronouns;
}

CenterKind CenterPolicy::parse_kind(std::string_view name) {
  if (name == "longest") return CenterKind::kLongestSpan;
  if (name == "wordnet") return CenterKind::kWordNet;
  if (name == "entity") return CenterKind::kNameEntity;
  throw InvalidArgument("unknown center policy '" + std::string(name) +
                        "' (expected longest|wordnet|entity)");
}

GlobalClusterSet::GlobalClusterSet(
    std::vector<MentionCluster> clusters,
    const std::unordered_set<std::string> &pronouns)
    : clusters_(std::move(clusters)), pronouns_(pronouns) {
  for (std::size_t id = 0; id < clusters_.size(); ++id) {
    for (const auto &m : clusters_[id].mentions) {
      if (pronouns_.contains(m)) continue;
      auto [it, inserted] = mention_index_.emplace(m, id);
      if (!inserted && it->second != id) {
        throw InvalidArgument("mention '" + m + "' appears in clusters " +
                              std::to_string(it->second) + " and " +
                              std::to_string(id));
      }
    }
  }
}

std::optional<std::size_t> GlobalClusterSet::find(std::string_view mention) const {
  auto it = mention_index_.find(std::string(mention));
  if (it == mention_index_.end()) return std::nullopt;
  return it->second;
}

void GlobalClusterSet::assign_centers(const CenterPolicy &policy,
                                      const MentionFrequency &frequency) {
  std::vector<std::string> centers;
  centers.reserve(clusters_.size());
  for (const auto &c : clusters_) {
    centers.push_back(select_center(c, policy, frequency, pronouns_));
  }
  centers_ = std::move(centers);
}

void GlobalClusterSet::set_centers(std::vector<std::string> centers) {
  if (centers.size() != clusters_.size()) {
    throw InvalidArgument("center count does not match cluster count");
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!clusters_[i].contains(centers[i])) {
      throw InvalidArgument("center '" + centers[i] + "' not in cluster " +
                            std::to_string(i));
    }
  }
  centers_ = std::move(centers);
}

GlobalClusterSet merge_global(std::span<const MentionCluster> local,
                              const std::unordered_set<std::string> &pronouns) {
  DisjointSets sets(local.size());
  std::unordered_map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < local.size(); ++i) {
    for (const auto &m : local[i].mentions) {
      if (pronouns.contains(m)) continue;
      auto [it, inserted] = first_seen.emplace(m, i);
      if (!inserted) sets.unite(it->second, i);
    }
  }

  std::map<std::size_t, std::vector<std::string>> components;
  for (std::size_t i = 0; i < local.size(); ++i) {
    auto &bucket = components[sets.find(i)];
    bucket.insert(bucket.end(), local[i].mentions.begin(),
                  local[i].mentions.end());
  }

  std::vector<std::pair<std::string, MentionCluster>> keyed;
  for (auto &[root, mentions] : components) {
    std::sort(mentions.begin(), mentions.end());
    mentions.erase(std::unique(mentions.begin(), mentions.end()), mentions.end());
    auto key = std::find_if(mentions.begin(), mentions.end(), [&](const auto &m) {
      return !pronouns.contains(m);
    });
    if (key == mentions.end()) continue;  // pronouns only
    std::string k = *key;
    keyed.emplace_back(std::move(k), MentionCluster{std::move(mentions), "global"});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });

  std::vector<MentionCluster> clusters;
  clusters.reserve(keyed.size());
  for (auto &kv : keyed) clusters.push_back(std::move(kv.second));
  return GlobalClusterSet(std::move(clusters), pronouns);
}

std::string select_center(const MentionCluster &cluster,
                          const CenterPolicy &policy,
                          const MentionFrequency &frequency,
                          const std::unordered_set<std::string> &pronouns) {
  if (cluster.mentions.empty()) throw InvalidArgument("empty cluster");
  if (policy.kind != CenterKind::kLongestSpan && !policy.lexicon) {
    throw MissingLexicon();
  }

  std::vector<std::string> pool;
  for (const auto &m : cluster.mentions) {
    if (!pronouns.contains(m)) pool.push_back(m);
  }
  if (pool.empty()) pool = cluster.mentions;

  auto longest = [](const std::vector<std::string> &cands) {
    return *std::min_element(cands.begin(), cands.end(), longer_then_lex);
  };
  if (policy.kind == CenterKind::kLongestSpan) return longest(pool);

  std::vector<std::string> candidates;
  for (const auto &m : pool) {
    const bool in_lexicon = policy.lexicon->contains(m);
    // WordNet: spans outside the general lexicon are the specific roles.
    // NameEntity: spans inside the entity list are.
    if ((policy.kind == CenterKind::kWordNet) != in_lexicon) {
      candidates.push_back(m);
    }
  }
  if (candidates.empty()) return longest(pool);

  auto freq = [&](const std::string &m) {
    auto it = frequency.find(m);
    return it == frequency.end() ? 0L : it->second;
  };
  return *std::min_element(candidates.begin(), candidates.end(),
                           [&](const std::string &a, const std::string &b) {
                             const long fa = freq(a), fb = freq(b);
                             if (fa != fb) return fa > fb;
                             return longer_then_lex(a, b);
                           });
}

std::string canonicalize(std::string_view subject,
                         const GlobalClusterSet &globals) {
  auto normalized = text::normalize(subject);
  if (auto id = globals.find(normalized)) return globals.center(*id);
  return normalized;
}

std::vector<MentionCluster> local_clusters(const Corpus &corpus) {
  std::vector<MentionCluster> out;
  for (const auto &doc : corpus.documents()) {
    for (const auto &sentence : doc.sentences) {
      for (const auto &spans : sentence.clusters) {
        std::vector<std::string> raw;
        raw.reserve(spans.size());
        for (const auto &s : spans) raw.push_back(s.text);
        auto cluster = make_cluster(raw, doc.doc_id);
        if (!cluster.mentions.empty()) out.push_back(std::move(cluster));
      }
    }
  }
  return out;
}

MentionFrequency mention_frequency(const Corpus &corpus) {
  MentionFrequency freq;
  for (const auto &doc : corpus.documents()) {
    for (const auto &sentence : doc.sentences) {
      for (const auto &frame : sentence.frames) {
        auto subject = text::normalize(frame.subject.text);
        ++freq[subject];
        if (frame.object) {
          auto object = text::normalize(frame.object->text);
          if (object != subject) ++freq[object];
        }
      }
    }
  }
  return freq;
}

Lexicon load_lexicon(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open lexicon " + path.string());
  Lexicon lexicon;
  for (std::string line; std::getline(in, line);) {
    auto phrase = text::normalize(line);
    if (!phrase.empty()) lexicon.insert(std::move(phrase));
  }
  return lexicon;
}

GlobalClusterSet resolve_corpus(const Corpus &corpus,
                                const CenterPolicy &policy) {
  auto locals = local_clusters(corpus);
  auto globals = merge_global(locals);
  globals.assign_centers(policy, mention_frequency(corpus));
  return globals;
}

void write_cluster_report(const GlobalClusterSet &globals, std::ostream &out) {
  for (std::size_t id = 0; id < globals.size(); ++id) {
    out << id << '\t' << globals.center(id) << '\t'
        << text::join(globals.cluster(id).mentions, " | ") << '\n';
  }
}

GlobalClusterSet read_cluster_report(std::istream &in) {
  std::vector<MentionCluster> clusters;
  std::vector<std::string> centers;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string id, center, members;
    if (!std::getline(fields, id, '\t') || !std::getline(fields, center, '\t') ||
        !std::getline(fields, members)) {
      throw MalformedRecord(line_no, "cluster report needs 3 tab-separated fields");
    }
    MentionCluster cluster{{}, "global"};
    std::size_t pos = 0;
    while (pos <= members.size()) {
      auto next = members.find(" | ", pos);
      if (next == std::string::npos) next = members.size();
      cluster.mentions.push_back(members.substr(pos, next - pos));
      pos = next + 3;
    }
    std::sort(cluster.mentions.begin(), cluster.mentions.end());
    clusters.push_back(std::move(cluster));
    centers.push_back(center);
  }
  GlobalClusterSet globals(std::move(clusters), default_pronouns());
  globals.set_centers(std::move(centers));
  return globals;
}

}  // namespace newstrend
