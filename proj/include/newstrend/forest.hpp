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
#ifndef NEWSTREND_FOREST_HPP_
#define NEWSTREND_FOREST_HPP_

#include <cstddef>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "newstrend/coref.hpp"
#include "newstrend/corpus.hpp"
#include "newstrend/embeddings.hpp"

namespace newstrend {

struct ObjectNode {
  std::string object;
  long weight = 0;
  // Original phrases folded into this node; {object} before any merge.
  std::vector<std::string> members;

  bool operator==(const ObjectNode &) const = default;
};

struct VerbNode {
  std::string verb;
  // weight = sum of object weights + bare.
  long weight = 0;
  // Frames under this verb that carry no object.
  long bare = 0;
  std::vector<ObjectNode> objects;
  std::vector<std::string> members;

  const ObjectNode *find_object(std::string_view object) const;
  bool operator==(const VerbNode &) const = default;
};

// Subject-rooted tree: verbs are the first layer, objects the leaves.
struct RoleTree {
  std::string subject;
  std::vector<VerbNode> verbs;

  const VerbNode *find_verb(std::string_view verb) const;
  long verb_mass() const;
  long object_mass() const;
  bool operator==(const RoleTree &) const = default;
};

struct Forest {
  std::string slice_label;
  std::map<std::string, RoleTree> trees;

  const RoleTree *find(std::string_view subject) const;
  bool operator==(const Forest &) const = default;
};

struct MergeConfig {
  double object_sim_threshold = 0.7;
  double verb_sim_threshold = 0.6;
  long min_edge_weight = 1;
  long max_edge_weight = std::numeric_limits<long>::max();
  bool lemmatize = false;
  bool attach_modifiers = true;
  bool mark_negation = true;

  // Throws InvalidThreshold / InvalidArgument.
  void validate() const;
};

// [modifiers ]["not "]verb, using the lemma when lemmatize is set and one
// is available.
std::string verb_label(const Frame &frame, const MergeConfig &config);

// Raw co-occurrence counts, one tree per canonical subject. A subject span
// that belongs to a local coreference cluster resolves through that
// cluster, so pronoun subjects reach their antecedent's center.
Forest build_forest(const Corpus &corpus_slice, const GlobalClusterSet &globals,
                    const MergeConfig &config);

// Pairwise TF-IDF cosine between phrases. Each phrase is one document of
// the collection; idf = ln((1 + N) / (1 + df)) + 1 and stop words are
// ignored unless a phrase has nothing else.
std::vector<std::vector<double>> object_similarity(
    std::span<const std::string> phrases);

// Groups objects under each verb by single-link over cosine >= threshold
// between member phrases. Throws InvalidThreshold unless threshold is in
// [0, 1].
RoleTree merge_objects(RoleTree tree, double threshold);

// Groups verbs whose word vectors have cosine >= threshold. Multi-word
// labels are looked up with underscores; verbs missing from the vocabulary
// are never merged. Objects of merged verbs are re-merged at
// object_threshold (1.0 folds only identical phrases). Throws
// InvalidThreshold unless threshold is in [-1, 1].
RoleTree merge_verbs(RoleTree tree, const EmbeddingSlice &vectors,
                     double threshold, double object_threshold = 1.0);

RoleTree filter_verbs(RoleTree tree, long min_w, long max_w);

// Verb merge (when vectors are given), object merge, then weight filter.
RoleTree apply_merges(RoleTree tree, const EmbeddingSlice *vectors,
                      const MergeConfig &config);

struct RankedVerb {
  std::string verb;
  long weight = 0;
  // The object holding at least half of the verb's weight, if any.
  std::optional<std::string> main_object;
};

using ForestSeries = std::map<std::string, Forest>;

std::map<std::string, std::vector<RankedVerb>> verb_ranking(
    const ForestSeries &forests, std::string_view subject);

// Sum over verbs of the verb-object edge weight for this object.
long object_weight(const RoleTree &tree, std::string_view object);

inline constexpr std::string_view kOthersLabel = "Others";

struct ObjectShare {
  std::string object;
  double share = 0.0;
};

// Top-k objects by weight pooled over all months, then each month's share
// of its own total; the remainder goes to the Others bucket. Months where
// the subject has no object edges yield an empty list.
std::map<std::string, std::vector<ObjectShare>> object_shares(
    const ForestSeries &forests, std::string_view subject, std::size_t k);

// Line records: subject, verb, object ("" for bare frames), weight, month.
void write_forest_records(const Forest &forest, std::ostream &out);
Forest read_forest_records(std::istream &in, std::string slice_label);

// Layered graph payload: nodes {id, label, kind, weight}, edges
// {source, target, weight}.
nlohmann::json tree_graph(const RoleTree &tree, std::string_view month);

}  // namespace newstrend

#endif  // NEWSTREND_FOREST_HPP_
