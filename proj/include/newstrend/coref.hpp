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
#ifndef NEWSTREND_COREF_HPP_
#define NEWSTREND_COREF_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "newstrend/corpus.hpp"

namespace newstrend {

using Lexicon = std::unordered_set<std::string>;
using MentionFrequency = std::unordered_map<std::string, long>;

// Mentions are stored normalized, sorted and unique.
struct MentionCluster {
  std::vector<std::string> mentions;
  std::string source_doc;

  bool contains(std::string_view mention) const;
  bool operator==(const MentionCluster &) const = default;
};

// Normalizes and deduplicates raw mention strings. Empty mentions (e.g.
// pure punctuation) are dropped.
MentionCluster make_cluster(std::span<const std::string> raw,
                            std::string source_doc);

// Mentions excluded from the shared-mention test when merging clusters.
const std::unordered_set<std::string> &default_pronouns();

enum class CenterKind { kLongestSpan, kWordNet, kNameEntity };

struct CenterPolicy {
  CenterKind kind = CenterKind::kLongestSpan;
  std::optional<Lexicon> lexicon;

  // "longest" | "wordnet" | "entity"; throws InvalidArgument otherwise.
  static CenterKind parse_kind(std::string_view name);
};

// Global clusters after cross-document merging. Cluster ids are positions
// in a canonical order (sorted by smallest non-pronoun mention), so the set
// does not depend on the order of the local clusters it was built from.
class GlobalClusterSet {
 public:
  GlobalClusterSet() = default;
  GlobalClusterSet(std::vector<MentionCluster> clusters,
                   const std::unordered_set<std::string> &pronouns);

  std::size_t size() const { return clusters_.size(); }
  const std::vector<MentionCluster> &clusters() const { return clusters_; }
  const MentionCluster &cluster(std::size_t id) const { return clusters_[id]; }

  // Cluster holding a normalized, non-pronoun mention.
  std::optional<std::size_t> find(std::string_view mention) const;

  bool has_centers() const { return !centers_.empty() || clusters_.empty(); }
  const std::string &center(std::size_t id) const { return centers_.at(id); }
  void assign_centers(const CenterPolicy &policy,
                      const MentionFrequency &frequency);
  // Throws InvalidArgument unless centers[i] belongs to cluster i.
  void set_centers(std::vector<std::string> centers);
  bool is_pronoun(std::string_view mention) const {
    return pronouns_.contains(std::string(mention));
  }

  bool operator==(const GlobalClusterSet &other) const {
    return clusters_ == other.clusters_ && centers_ == other.centers_;
  }

 private:
  std::vector<MentionCluster> clusters_;
  std::vector<std::string> centers_;
  std::unordered_map<std::string, std::size_t> mention_index_;
  std::unordered_set<std::string> pronouns_;
};

// Transitive closure over shared non-pronoun mentions. Pronouns stay inside
// their clusters but never link two clusters; local clusters made only of
// pronouns have nothing to link to and are dropped.
GlobalClusterSet merge_global(
    std::span<const MentionCluster> local,
    const std::unordered_set<std::string> &pronouns = default_pronouns());

// Candidate centers per policy, most frequent first, ties to the longer
// mention and then the lexicographically smaller one. Pronouns are never
// candidates unless the cluster holds nothing else. An empty candidate set
// falls back to the longest span. Throws MissingLexicon.
std::string select_center(
    const MentionCluster &cluster, const CenterPolicy &policy,
    const MentionFrequency &frequency,
    const std::unordered_set<std::string> &pronouns = default_pronouns());

// Center of the cluster holding the normalized subject, else the
// normalized subject itself.
std::string canonicalize(std::string_view subject,
                         const GlobalClusterSet &globals);

// One MentionCluster per local cluster in the corpus.
std::vector<MentionCluster> local_clusters(const Corpus &corpus);

// Number of frames in which each normalized mention is subject or object.
MentionFrequency mention_frequency(const Corpus &corpus);

// One phrase per line, normalized on load; blank lines skipped.
Lexicon load_lexicon(const std::filesystem::path &path);

// local_clusters -> merge_global -> assign_centers.
GlobalClusterSet resolve_corpus(const Corpus &corpus,
                                const CenterPolicy &policy);

// Tab-separated report: cluster id, center, members joined by " | ".
void write_cluster_report(const GlobalClusterSet &globals, std::ostream &out);
GlobalClusterSet read_cluster_report(std::istream &in);

}  // namespace newstrend

#endif  // NEWSTREND_COREF_HPP_
