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
#include "newstrend/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "newstrend/errors.hpp"
#include "newstrend/text.hpp"

namespace newstrend {

namespace {

const std::unordered_set<std::string> &stop_words() {
  static const std::unordered_set<std::string> words = {
      "a",    "an",   "the",  "of",   "to",   "in",  "on",   "at",  "for",
      "with", "by",   "from", "and",  "or",   "but", "as",   "is",  "are",
      "was",  "were", "be",   "been", "its",  "his", "her",  "their",
      "this", "that", "these", "those", "some", "any", "no", "all"};
  return words;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
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

void sort_objects(std::vector<ObjectNode> &objects) {
  std::sort(objects.begin(), objects.end(), [](const auto &a, const auto &b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.object < b.object;
  });
}

void sort_verbs(std::vector<VerbNode> &verbs) {
  std::sort(verbs.begin(), verbs.end(), [](const auto &a, const auto &b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.verb < b.verb;
  });
}

std::vector<std::string> union_sorted(std::vector<std::string> a,
                                      const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Cosine lookup over the member phrases of a whole tree.
class PhraseSimilarity {
 public:
  explicit PhraseSimilarity(const RoleTree &tree) {
    std::set<std::string> phrases;
    for (const auto &v : tree.verbs) {
      for (const auto &o : v.objects) phrases.insert(o.members.begin(), o.members.end());
    }
    phrases_.assign(phrases.begin(), phrases.end());
    for (std::size_t i = 0; i < phrases_.size(); ++i) index_[phrases_[i]] = i;
    sim_ = object_similarity(phrases_);
  }

  double operator()(const std::string &a, const std::string &b) const {
    return sim_[index_.at(a)][index_.at(b)];
  }

 private:
  std::vector<std::string> phrases_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<double>> sim_;
};

// Single-link grouping of one verb's objects. Group label is the heaviest
// member node, then the longest label, then the smallest.
std::vector<ObjectNode> group_objects(std::vector<ObjectNode> objects,
                                      double threshold,
                                      const PhraseSimilarity &sim) {
  const std::size_t n = objects.size();
  DisjointSets sets(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (sets.find(a) == sets.find(b)) continue;
      bool linked = false;
      for (const auto &ma : objects[a].members) {
        for (const auto &mb : objects[b].members) {
          if (ma == mb || sim(ma, mb) >= threshold) {
            linked = true;
            break;
          }
        }
        if (linked) break;
      }
      if (linked) sets.unite(a, b);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

  std::vector<ObjectNode> merged;
  for (const auto &[root, ids] : groups) {
    std::size_t best = ids.front();
    ObjectNode node;
    for (auto i : ids) {
      const auto &o = objects[i];
      const auto &b = objects[best];
      if (o.weight > b.weight ||
          (o.weight == b.weight &&
           (o.object.size() > b.object.size() ||
            (o.object.size() == b.object.size() && o.object < b.object)))) {
        best = i;
      }
      node.weight += o.weight;
      node.members = union_sorted(std::move(node.members), o.members);
    }
    node.object = objects[best].object;
    merged.push_back(std::move(node));
  }
  sort_objects(merged);
  return merged;
}

void check_unit_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidThreshold(t);
}

}  // namespace

const ObjectNode *VerbNode::find_object(std::string_view object) const {
  for (const auto &o : objects) {
    if (o.object == object) return &o;
  }
  return nullptr;
}

const VerbNode *RoleTree::find_verb(std::string_view verb) const {
  for (const auto &v : verbs) {
    if (v.verb == verb) return &v;
  }
  return nullptr;
}

long RoleTree::verb_mass() const {
  long m = 0;
  for (const auto &v : verbs) m += v.weight;
  return m;
}

long RoleTree::object_mass() const {
  long m = 0;
  for (const auto &v : verbs) {
    for (const auto &o : v.objects) m += o.weight;
  }
  return m;
}

const RoleTree *Forest::find(std::string_view subject) const {
  auto it = trees.find(std::string(subject));
  return it == trees.end() ? nullptr : &it->second;
}

void MergeConfig::validate() const {
  check_unit_threshold(object_sim_threshold);
  if (!(verb_sim_threshold >= -1.0 && verb_sim_threshold <= 1.0)) {
    throw InvalidThreshold(verb_sim_threshold);
  }
  if (min_edge_weight > max_edge_weight) {
    throw InvalidArgument("min_edge_weight exceeds max_edge_weight");
  }
}

std::string verb_label(const Frame &frame, const MergeConfig &config) {
  std::vector<std::string> parts;
  if (config.attach_modifiers) {
    for (const auto &m : frame.modifiers) {
      auto t = text::normalize(m.text);
      if (!t.empty()) parts.push_back(std::move(t));
    }
  }
  if (config.mark_negation && frame.negated) parts.emplace_back("not");
  if (config.lemmatize && frame.verb_lemma) {
    parts.push_back(*frame.verb_lemma);
  } else {
    parts.push_back(text::normalize(frame.verb.text));
  }
  return text::join(parts, " ");
}

Forest build_forest(const Corpus &corpus_slice, const GlobalClusterSet &globals,
                    const MergeConfig &config) {
  struct VerbCounts {
    long bare = 0;
    std::map<std::string, long> objects;
  };
  std::map<std::string, std::map<std::string, VerbCounts>> counts;

  for (const auto &doc : corpus_slice.documents()) {
    for (const auto &sentence : doc.sentences) {
      // Global cluster of each local cluster, via any indexed mention.
      std::vector<std::optional<std::size_t>> local_global;
      for (const auto &spans : sentence.clusters) {
        std::optional<std::size_t> id;
        for (const auto &s : spans) {
          if ((id = globals.find(text::normalize(s.text)))) break;
        }
        local_global.push_back(id);
      }

      for (const auto &frame : sentence.frames) {
        const auto subject_norm = text::normalize(frame.subject.text);
        std::optional<std::string> subject;
        for (std::size_t c = 0; c < sentence.clusters.size() && !subject; ++c) {
          if (!local_global[c]) continue;
          for (const auto &s : sentence.clusters[c]) {
            if ((s.start == frame.subject.start && s.end == frame.subject.end) ||
                text::normalize(s.text) == subject_norm) {
              subject = globals.center(*local_global[c]);
              break;
            }
          }
        }
        if (!subject) subject = canonicalize(subject_norm, globals);
        if (subject->empty()) continue;

        auto &verb = counts[*subject][verb_label(frame, config)];
        std::string object;
        if (frame.object) object = text::normalize(frame.object->text);
        if (object.empty()) {
          ++verb.bare;
        } else {
          ++verb.objects[object];
        }
      }
    }
  }

  Forest forest;
  if (!corpus_slice.slices().empty()) {
    forest.slice_label = corpus_slice.slices().front().label;
  }
  for (auto &[subject, verbs] : counts) {
    RoleTree tree{subject, {}};
    for (auto &[label, vc] : verbs) {
      VerbNode node{label, vc.bare, vc.bare, {}, {label}};
      for (auto &[object, w] : vc.objects) {
        node.objects.push_back({object, w, {object}});
        node.weight += w;
      }
      sort_objects(node.objects);
      tree.verbs.push_back(std::move(node));
    }
    sort_verbs(tree.verbs);
    forest.trees.emplace(subject, std::move(tree));
  }
  return forest;
}

std::vector<std::vector<double>> object_similarity(
    std::span<const std::string> phrases) {
  const std::size_t n = phrases.size();
  std::vector<std::map<std::string, double>> tf(n);
  std::map<std::string, long> df;
  for (std::size_t i = 0; i < n; ++i) {
    auto tokens = text::split_whitespace(phrases[i]);
    std::vector<std::string> content;
    for (const auto &t : tokens) {
      if (!stop_words().contains(t)) content.push_back(t);
    }
    if (content.empty()) content = tokens;
    for (const auto &t : content) tf[i][t] += 1.0;
    for (const auto &[t, c] : tf[i]) ++df[t];
  }
  const double N = static_cast<double>(n);
  std::vector<std::map<std::string, double>> vec(n);
  std::vector<double> norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto &[t, c] : tf[i]) {
      const double idf = std::log((1.0 + N) / (1.0 + static_cast<double>(df[t]))) + 1.0;
      vec[i][t] = c * idf;
      norm[i] += c * idf * c * idf;
    }
    norm[i] = std::sqrt(norm[i]);
  }
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    sim[i][i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (const auto &[t, w] : vec[i]) {
        auto it = vec[j].find(t);
        if (it != vec[j].end()) dot += w * it->second;
      }
      double c = (norm[i] > 0 && norm[j] > 0) ? dot / (norm[i] * norm[j]) : 0.0;
      if (phrases[i] == phrases[j]) c = 1.0;
      sim[i][j] = sim[j][i] = std::min(c, 1.0);
    }
  }
  return sim;
}

RoleTree merge_objects(RoleTree tree, double threshold) {
  check_unit_threshold(threshold);
  const PhraseSimilarity sim(tree);
  for (auto &verb : tree.verbs) {
    verb.objects = group_objects(std::move(verb.objects), threshold, sim);
  }
  return tree;
}

RoleTree merge_verbs(RoleTree tree, const EmbeddingSlice &vectors,
                     double threshold, double object_threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw InvalidThreshold(threshold);
  check_unit_threshold(object_threshold);

  const std::size_t n = tree.verbs.size();
  auto vector_of = [&](const std::string &verb) -> std::optional<Vector> {
    if (auto i = vectors.vocab.find(text::underscore(verb))) {
      return Vector(vectors.matrix.row(static_cast<Eigen::Index>(*i)).transpose());
    }
    return std::nullopt;
  };

  DisjointSets sets(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (sets.find(a) == sets.find(b)) continue;
      bool linked = false;
      for (const auto &ma : tree.verbs[a].members) {
        auto va = vector_of(ma);
        if (!va) continue;
        for (const auto &mb : tree.verbs[b].members) {
          auto vb = vector_of(mb);
          if (vb && cosine(*va, *vb) >= threshold) {
            linked = true;
            break;
          }
        }
        if (linked) break;
      }
      if (linked) sets.unite(a, b);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);
  if (groups.size() == n) return tree;

  const PhraseSimilarity sim(tree);
  std::vector<VerbNode> merged;
  for (const auto &[root, ids] : groups) {
    if (ids.size() == 1) {
      merged.push_back(std::move(tree.verbs[ids.front()]));
      continue;
    }
    std::size_t best = ids.front();
    VerbNode node;
    for (auto i : ids) {
      auto &v = tree.verbs[i];
      const auto &b = tree.verbs[best];
      if (v.weight > b.weight || (v.weight == b.weight && v.verb < b.verb)) best = i;
      node.weight += v.weight;
      node.bare += v.bare;
      node.members = union_sorted(std::move(node.members), v.members);
      for (auto &o : v.objects) node.objects.push_back(std::move(o));
    }
    node.verb = tree.verbs[best].verb;
    node.objects = group_objects(std::move(node.objects), object_threshold, sim);
    merged.push_back(std::move(node));
  }
  sort_verbs(merged);
  tree.verbs = std::move(merged);
  return tree;
}

RoleTree filter_verbs(RoleTree tree, long min_w, long max_w) {
  if (min_w > max_w) throw InvalidArgument("min weight exceeds max weight");
  std::erase_if(tree.verbs, [&](const VerbNode &v) {
    return v.weight < min_w || v.weight > max_w;
  });
  return tree;
}

RoleTree apply_merges(RoleTree tree, const EmbeddingSlice *vectors,
                      const MergeConfig &config) {
  config.validate();
  if (vectors) {
    tree = merge_verbs(std::move(tree), *vectors, config.verb_sim_threshold,
                       config.object_sim_threshold);
  }
  tree = merge_objects(std::move(tree), config.object_sim_threshold);
  return filter_verbs(std::move(tree), config.min_edge_weight,
                      config.max_edge_weight);
}

std::map<std::string, std::vector<RankedVerb>> verb_ranking(
    const ForestSeries &forests, std::string_view subject) {
  std::map<std::string, std::vector<RankedVerb>> out;
  for (const auto &[month, forest] : forests) {
    auto &ranked = out[month];
    const RoleTree *tree = forest.find(subject);
    if (!tree) continue;
    for (const auto &v : tree->verbs) {
      RankedVerb r{v.verb, v.weight, std::nullopt};
      const ObjectNode *top = nullptr;
      for (const auto &o : v.objects) {
        if (!top || o.weight > top->weight ||
            (o.weight == top->weight && o.object < top->object)) {
          top = &o;
        }
      }
      if (top && 2 * top->weight >= v.weight) r.main_object = top->object;
      ranked.push_back(std::move(r));
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.verb < b.verb;
    });
  }
  return out;
}

long object_weight(const RoleTree &tree, std::string_view object) {
  long w = 0;
  for (const auto &v : tree.verbs) {
    if (const auto *o = v.find_object(object)) w += o->weight;
  }
  return w;
}

std::map<std::string, std::vector<ObjectShare>> object_shares(
    const ForestSeries &forests, std::string_view subject, std::size_t k) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  std::map<std::string, long> pooled;
  for (const auto &[month, forest] : forests) {
    if (const RoleTree *tree = forest.find(subject)) {
      for (const auto &v : tree->verbs) {
        for (const auto &o : v.objects) pooled[o.object] += o.weight;
      }
    }
  }
  std::vector<std::pair<std::string, long>> ranked(pooled.begin(), pooled.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);

  std::map<std::string, std::vector<ObjectShare>> out;
  for (const auto &[month, forest] : forests) {
    auto &shares = out[month];
    const RoleTree *tree = forest.find(subject);
    const long total = tree ? tree->object_mass() : 0;
    if (total == 0) continue;
    long covered = 0;
    for (const auto &[object, pooled_weight] : ranked) {
      const long w = object_weight(*tree, object);
      covered += w;
      shares.push_back({object, static_cast<double>(w) / static_cast<double>(total)});
    }
    shares.push_back({std::string(kOthersLabel),
                      static_cast<double>(total - covered) / static_cast<double>(total)});
  }
  return out;
}

void write_forest_records(const Forest &forest, std::ostream &out) {
  for (const auto &[subject, tree] : forest.trees) {
    for (const auto &v : tree.verbs) {
      for (const auto &o : v.objects) {
        out << subject << '\t' << v.verb << '\t' << o.object << '\t' << o.weight
            << '\t' << forest.slice_label << '\n';
      }
      if (v.bare > 0) {
        out << subject << '\t' << v.verb << "\t\t" << v.bare << '\t'
            << forest.slice_label << '\n';
      }
    }
  }
}

Forest read_forest_records(std::istream &in, std::string slice_label) {
  struct VerbCounts {
    long bare = 0;
    std::map<std::string, long> objects;
  };
  std::map<std::string, std::map<std::string, VerbCounts>> counts;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string field; std::getline(ls, field, '\t');) f.push_back(field);
    if (f.size() != 5) throw MalformedRecord(line_no, "forest record needs 5 fields");
    if (f[4] != slice_label) {
      throw MalformedRecord(line_no, "record month " + f[4] + " != " + slice_label);
    }
    long w = 0;
    try {
      w = std::stol(f[3]);
    } catch (const std::exception &) {
      throw MalformedRecord(line_no, "bad weight '" + f[3] + "'");
    }
    if (w < 1) throw MalformedRecord(line_no, "weight must be positive");
    auto &vc = counts[f[0]][f[1]];
    if (f[2].empty()) {
      vc.bare += w;
    } else {
      vc.objects[f[2]] += w;
    }
  }
  Forest forest;
  forest.slice_label = std::move(slice_label);
  for (auto &[subject, verbs] : counts) {
    RoleTree tree{subject, {}};
    for (auto &[label, vc] : verbs) {
      VerbNode node{label, vc.bare, vc.bare, {}, {label}};
      for (auto &[object, w] : vc.objects) {
        node.objects.push_back({object, w, {object}});
        node.weight += w;
      }
      sort_objects(node.objects);
      tree.verbs.push_back(std::move(node));
    }
    sort_verbs(tree.verbs);
    forest.trees.emplace(subject, std::move(tree));
  }
  return forest;
}

nlohmann::json tree_graph(const RoleTree &tree, std::string_view month) {
  using nlohmann::json;
  json nodes = json::array(), edges = json::array();
  nodes.push_back({{"id", "s"}, {"label", tree.subject}, {"kind", "subject"},
                   {"weight", tree.verb_mass()}});
  for (std::size_t i = 0; i < tree.verbs.size(); ++i) {
    const auto &v = tree.verbs[i];
    const std::string vid = "v" + std::to_string(i);
    nodes.push_back({{"id", vid}, {"label", v.verb}, {"kind", "verb"},
                     {"weight", v.weight}, {"members", v.members}});
    edges.push_back({{"source", "s"}, {"target", vid}, {"weight", v.weight}});
    for (std::size_t j = 0; j < v.objects.size(); ++j) {
      const auto &o = v.objects[j];
      const std::string oid = vid + ".o" + std::to_string(j);
      nodes.push_back({{"id", oid}, {"label", o.object}, {"kind", "object"},
                       {"weight", o.weight}, {"members", o.members}});
      edges.push_back({{"source", vid}, {"target", oid}, {"weight", o.weight}});
    }
  }
  return json{{"subject", tree.subject}, {"month", month}, {"nodes", nodes},
              {"edges", edges}};
}

}  // namespace newstrend
