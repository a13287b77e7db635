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
#include "newstrend/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "newstrend/alignment.hpp"
#include "newstrend/errors.hpp"
#include "newstrend/trends.hpp"

namespace newstrend {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json &j, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    throw InvalidArgument("config section '" + std::string(section) +
                          "' must be an object");
  }
  for (const auto &[key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidArgument("unknown config key '" + std::string(section) + "." +
                            key + "'");
    }
  }
}

template <typename T>
void read(const json &j, const char *key, T &out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

fs::path resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

const char *center_name(CenterKind kind) {
  switch (kind) {
    case CenterKind::kWordNet: return "wordnet";
    case CenterKind::kNameEntity: return "entity";
    default: return "longest";
  }
}

void parse_sections(const json &j, PipelineConfig &c) {
  if (j.contains("coref")) {
    const auto &s = j.at("coref");
    check_keys(s, "coref", {"policy", "lexicon"});
    if (s.contains("policy")) c.center = CenterPolicy::parse_kind(s.at("policy").get<std::string>());
  }
  if (j.contains("forest")) {
    const auto &s = j.at("forest");
    check_keys(s, "forest", {"object_threshold", "verb_threshold", "min_weight",
                             "max_weight", "lemmatize", "attach_modifiers",
                             "mark_negation"});
    read(s, "object_threshold", c.merge.object_sim_threshold);
    read(s, "verb_threshold", c.merge.verb_sim_threshold);
    read(s, "min_weight", c.merge.min_edge_weight);
    read(s, "max_weight", c.merge.max_edge_weight);
    read(s, "lemmatize", c.merge.lemmatize);
    read(s, "attach_modifiers", c.merge.attach_modifiers);
    read(s, "mark_negation", c.merge.mark_negation);
  }
  if (j.contains("phrases")) {
    const auto &s = j.at("phrases");
    check_keys(s, "phrases", {"enabled", "min_count", "threshold", "max_len", "passes"});
    read(s, "enabled", c.phrases);
    read(s, "min_count", c.phrase_params.min_count);
    read(s, "threshold", c.phrase_params.threshold);
    read(s, "max_len", c.phrase_params.max_len);
    read(s, "passes", c.phrase_params.passes);
  }
  if (j.contains("train")) {
    const auto &s = j.at("train");
    check_keys(s, "train", {"dim", "window", "negatives", "epochs", "initial_lr",
                            "min_count", "seed", "threads"});
    read(s, "dim", c.train.dim);
    read(s, "window", c.train.window);
    read(s, "negatives", c.train.negatives);
    read(s, "epochs", c.train.epochs);
    read(s, "initial_lr", c.train.initial_lr);
    read(s, "min_count", c.train.min_count);
    read(s, "seed", c.train.seed);
    read(s, "threads", c.train.threads);
  }
  if (j.contains("alignment")) {
    const auto &s = j.at("alignment");
    check_keys(s, "alignment", {"anchor", "shared_top"});
    if (s.contains("anchor") && !s.at("anchor").is_null()) {
      c.anchor = s.at("anchor").get<std::string>();
    }
    read(s, "shared_top", c.shared_top);
  }
  if (j.contains("reports")) {
    const auto &s = j.at("reports");
    check_keys(s, "reports", {"keys", "neighbors_n", "drift_pool", "drift_top"});
    read(s, "keys", c.reports.keys);
    read(s, "neighbors_n", c.reports.neighbors_n);
    read(s, "drift_pool", c.reports.drift_pool);
    read(s, "drift_top", c.reports.drift_top);
  }
  if (j.contains("projection")) {
    const auto &s = j.at("projection");
    check_keys(s, "projection", {"perplexity", "iterations", "seed"});
    read(s, "perplexity", c.tsne.perplexity);
    read(s, "iterations", c.tsne.iterations);
    read(s, "seed", c.tsne.seed);
  }
  read(j, "topic", c.topic);
  read(j, "deterministic", c.deterministic);
  c.merge.validate();
  c.train.validate();
  if (c.phrase_params.max_len < 1 || c.phrase_params.max_len > 4) {
    throw InvalidArgument("phrases.max_len must be within 1..4");
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json &j, const fs::path &base_dir) {
  PipelineConfig c;
  try {
    check_keys(j, "<root>", {"input", "store", "topic", "coref", "forest", "phrases",
                             "train", "alignment", "reports", "projection",
                             "deterministic"});
    if (!j.contains("input")) throw InvalidArgument("config needs 'input'");
    c.input = resolve(base_dir, j.at("input").get<std::string>());
    if (j.contains("store") && !j.at("store").is_null()) {
      c.store = resolve(base_dir, j.at("store").get<std::string>());
    }
    if (j.contains("coref") && j.at("coref").contains("lexicon") &&
        !j.at("coref").at("lexicon").is_null()) {
      c.lexicon = resolve(base_dir, j.at("coref").at("lexicon").get<std::string>());
    }
    parse_sections(j, c);
  } catch (const json::exception &e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception &e) {
    throw InvalidArgument("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j, path.parent_path());
}

json PipelineConfig::settings_json() const {
  return json{
      {"topic", topic},
      {"coref", {{"policy", center_name(center)}}},
      {"forest",
       {{"object_threshold", merge.object_sim_threshold},
        {"verb_threshold", merge.verb_sim_threshold},
        {"min_weight", merge.min_edge_weight},
        {"max_weight", merge.max_edge_weight},
        {"lemmatize", merge.lemmatize},
        {"attach_modifiers", merge.attach_modifiers},
        {"mark_negation", merge.mark_negation}}},
      {"phrases",
       {{"enabled", phrases},
        {"min_count", phrase_params.min_count},
        {"threshold", phrase_params.threshold},
        {"max_len", phrase_params.max_len},
        {"passes", phrase_params.passes}}},
      {"train",
       {{"dim", train.dim},
        {"window", train.window},
        {"negatives", train.negatives},
        {"epochs", train.epochs},
        {"initial_lr", train.initial_lr},
        {"min_count", train.min_count},
        {"seed", train.seed}}},
      {"alignment",
       {{"anchor", anchor ? json(*anchor) : json(nullptr)}, {"shared_top", shared_top}}},
      {"reports",
       {{"keys", reports.keys},
        {"neighbors_n", reports.neighbors_n},
        {"drift_pool", reports.drift_pool},
        {"drift_top", reports.drift_top}}},
      {"projection",
       {{"perplexity", tsne.perplexity},
        {"iterations", tsne.iterations},
        {"seed", tsne.seed}}},
      {"deterministic", deterministic}};
}

PipelineConfig PipelineConfig::from_settings(const json &settings) {
  PipelineConfig c;
  try {
    parse_sections(settings, c);
  } catch (const json::exception &e) {
    throw StoreError(std::string("bad settings: ") + e.what());
  }
  return c;
}

namespace {

template <typename F>
auto stage(const char *name, std::ostream *log, F &&body) {
  if (log) *log << "[" << name << "]\n";
  try {
    return body();
  } catch (const Error &e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

std::string slug(std::string_view subject) {
  std::string out;
  for (char c : subject) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      out.push_back(static_cast<char>(std::tolower(u)));
    } else if (!out.empty() && out.back() != '-') {
      out.push_back('-');
    }
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out.empty() ? "subject" : out;
}

class ArtifactWriter {
 public:
  ArtifactWriter(fs::path root, PipelineReport &report)
      : root_(std::move(root)), report_(report) {}

  void put(const std::string &relative, const std::string &kind,
           const std::string &content) {
    if (write_if_changed(root_ / relative, content)) {
      report_.written.push_back(relative);
    } else {
      report_.unchanged.push_back(relative);
    }
    report_.manifest.files.push_back({relative, kind, sha256_hex(content)});
  }

 private:
  fs::path root_;
  PipelineReport &report_;
};

}  // namespace

PipelineReport run_pipeline(const PipelineConfig &config, const fs::path &store_root,
                            std::ostream *log) {
  PipelineReport report;
  ArtifactWriter out(store_root, report);
  const Exec exec = config.deterministic ? Exec::kSerial : Exec::kParallel;

  Corpus corpus = stage("ingest", log, [&] {
    auto c = filter_by_topic(load_corpus(config.input, exec), config.topic);
    if (c.empty()) throw EmptyCorpus();
    return c;
  });
  std::vector<std::string> labels;
  for (const auto &s : corpus.slices()) labels.push_back(s.label);
  report.manifest.slices = labels;

  GlobalClusterSet globals = stage("coref", log, [&] {
    CenterPolicy policy{config.center, std::nullopt};
    if (config.lexicon) policy.lexicon = load_lexicon(*config.lexicon);
    auto g = resolve_corpus(corpus, policy);
    std::ostringstream s;
    write_cluster_report(g, s);
    out.put("coref/clusters.tsv", "coref", s.str());
    return g;
  });

  ForestSeries forests = stage("forest", log, [&] {
    ForestSeries f;
    for (const auto &label : labels) {
      f[label] = build_forest(slice(corpus, label), globals, config.merge);
      std::ostringstream s;
      write_forest_records(f[label], s);
      out.put("forest/" + label + ".tsv", "forest", s.str());
    }
    return f;
  });

  const PhraseModel phrases = stage("phrases", log, [&] {
    PhraseModel model(config.phrase_params);
    if (config.phrases) model = learn_phrases(token_streams(corpus), config.phrase_params);
    std::ostringstream s;
    model.write(s);
    out.put("phrases.tsv", "phrases", s.str());
    return model;
  });

  std::vector<EmbeddingSlice> trained = stage("embed", log, [&] {
    const long n = static_cast<long>(labels.size());
    std::vector<EmbeddingSlice> slices(n);
    std::vector<std::exception_ptr> errors(n);
    TrainConfig train = config.train;
    train.exec = exec;
    // Deterministic mode trains slices concurrently, each single-threaded.
#pragma omp parallel for schedule(dynamic) if (config.deterministic)
    for (long t = 0; t < n; ++t) {
      try {
        slices[t] = train_slice(slice(corpus, labels[t]),
                                config.phrases ? &phrases : nullptr, train)
                        .slice;
      } catch (const Error &e) {
        errors[t] = std::make_exception_ptr(
            Error(e.code(), "slice " + labels[t] + ": " + e.what()));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
    for (auto &e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto &s : slices) {
      std::ostringstream os;
      write_embedding(s, os);
      out.put("embeddings/" + s.label + ".vec", "embedding", os.str());
    }
    return slices;
  });

  AlignedSeries series = stage("align", log, [&] {
    if (trained.size() < 2) {
      // A single slice is its own frame.
      AlignedSeries one;
      one.slices = trained;
      one.slices.front().aligned_to = one.slices.front().label;
      report.manifest.anchor = one.slices.front().label;
      return one;
    }
    auto result = align_series(trained, config.anchor, config.shared_top, exec);
    report.manifest.anchor = result.map.anchor;
    for (const auto &s : result.series.slices) {
      std::ostringstream es, ts;
      write_embedding(s, es);
      out.put("aligned/" + s.label + ".vec", "aligned", es.str());
      write_matrix(result.map.transforms.at(s.label), ts);
      out.put("transforms/" + s.label + ".txt", "transform", ts.str());
    }
    return std::move(result.series);
  });
  if (trained.size() < 2) {
    std::ostringstream es;
    write_embedding(series.slices.front(), es);
    out.put("aligned/" + series.slices.front().label + ".vec", "aligned", es.str());
  }

  stage("graphs", log, [&] {
    for (const auto &[label, forest] : forests) {
      const EmbeddingSlice *vectors = series.find(label);
      std::set<std::string> used;
      for (const auto &[subject, tree] : forest.trees) {
        auto name = slug(subject);
        if (!used.insert(name).second) {
          name += "-" + sha256_hex(subject).substr(0, 8);
          used.insert(name);
        }
        const auto merged = apply_merges(tree, vectors, config.merge);
        out.put("graphs/" + label + "/" + name + ".json", "graph",
                tree_graph(merged, label).dump(1) + "\n");
      }
    }
    return 0;
  });

  stage("reports", log, [&] {
    for (const auto &key : config.reports.keys) {
      const bool anywhere = std::any_of(series.slices.begin(), series.slices.end(),
                                        [&](const auto &s) { return s.contains(key); });
      if (!anywhere) {
        if (log) *log << "  skipping report key '" << key << "': not in vocabulary\n";
        continue;
      }
      const auto table = neighbors(series, key, config.reports.neighbors_n, exec);
      std::ostringstream ns;
      ns << "slice\trank\tword\tcosine\n";
      for (const auto &row : table.slices) {
        for (std::size_t r = 0; r < row.neighbors.size(); ++r) {
          ns << row.slice << '\t' << r + 1 << '\t' << row.neighbors[r].word << '\t'
             << format_double(row.neighbors[r].cosine) << '\n';
        }
      }
      out.put("reports/neighbors_" + key + ".tsv", "report", ns.str());

      const bool everywhere = std::all_of(series.slices.begin(), series.slices.end(),
                                          [&](const auto &s) { return s.contains(key); });
      if (!everywhere || series.slices.size() < 2) continue;
      const auto dr = top_drift_words(series, key, config.reports.drift_pool,
                                      config.reports.drift_top, exec);
      std::ostringstream ds, ss;
      ds << "word\tdrift\n";
      ss << "word\tslice\tcosine\n";
      for (const auto &c : dr.candidates) {
        ds << c.word << '\t' << format_double(c.drift) << '\n';
        const auto &values = dr.series.at(c.word);
        for (std::size_t t = 0; t < values.size(); ++t) {
          ss << c.word << '\t' << dr.slices[t] << '\t' << format_double(values[t]) << '\n';
        }
      }
      out.put("reports/drift_" + key + ".tsv", "report", ds.str());
      out.put("reports/series_" + key + ".tsv", "report", ss.str());
    }
    return 0;
  });

  out.put("settings.json", "settings", config.settings_json().dump(2) + "\n");

  std::sort(report.manifest.files.begin(), report.manifest.files.end(),
            [](const auto &a, const auto &b) { return a.path < b.path; });
  if (write_if_changed(store_root / kManifestFile, report.manifest.dump())) {
    report.written.push_back(kManifestFile);
  } else {
    report.unchanged.push_back(kManifestFile);
  }
  return report;
}

}  // namespace newstrend
