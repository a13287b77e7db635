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
// newstrend: command-line front end for the trend-analytics engine.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "newstrend/alignment.hpp"
#include "newstrend/coref.hpp"
#include "newstrend/corpus.hpp"
#include "newstrend/embeddings.hpp"
#include "newstrend/errors.hpp"
#include "newstrend/forest.hpp"
#include "newstrend/pipeline.hpp"
#include "newstrend/projection.hpp"
#include "newstrend/service.hpp"
#include "newstrend/store.hpp"
#include "newstrend/trends.hpp"

namespace fs = std::filesystem;
using namespace newstrend;

namespace {

struct Globals {
  std::string config_path;
  std::string store;
  bool deterministic = false;
};

PipelineConfig base_config(const Globals &g) {
  if (g.config_path.empty()) return PipelineConfig{};
  return PipelineConfig::load(g.config_path);
}

fs::path input_path(const std::string &flag, const PipelineConfig &config) {
  if (!flag.empty()) return flag;
  if (!config.input.empty()) return config.input;
  throw InvalidArgument("no input corpus (--input or config 'input')");
}

fs::path store_root(const Globals &g, const PipelineConfig &config) {
  std::optional<fs::path> flag;
  if (!g.store.empty()) flag = g.store;
  return resolve_store_root(flag, config.store);
}

Exec exec_mode(const Globals &g) {
  return g.deterministic ? Exec::kSerial : Exec::kParallel;
}

CenterPolicy make_policy(const std::string &name, const std::string &lexicon) {
  CenterPolicy policy{CenterPolicy::parse_kind(name), std::nullopt};
  if (!lexicon.empty()) policy.lexicon = load_lexicon(lexicon);
  return policy;
}

// Aligned slices from explicit files, else from the artifact store.
AlignedSeries load_series(const Globals &g, const PipelineConfig &config,
                          const std::vector<std::string> &files) {
  AlignedSeries series;
  if (!files.empty()) {
    for (const auto &f : files) series.slices.push_back(load_embedding(f));
  } else {
    const auto store = ArtifactStore::open(store_root(g, config));
    for (const auto *e : store.manifest().of_kind("aligned")) {
      series.slices.push_back(load_embedding(store.path(e->path)));
    }
  }
  std::sort(series.slices.begin(), series.slices.end(),
            [](const auto &a, const auto &b) { return a.label < b.label; });
  return series;
}

void write_to(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << content;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"newstrend - semantic-role forests and aligned word embeddings "
               "for news trend analysis"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--store", g.store, "artifact store directory (overrides NEWSTREND_STORE)");
  app.add_flag("--deterministic", g.deterministic,
               "serial kernels and bitwise-reproducible training");

  // ingest
  auto *ingest = app.add_subcommand("ingest", "load and validate an annotated corpus");
  std::string ingest_input, ingest_output, ingest_topic;
  bool validate_only = false;
  ingest->add_option("--input", ingest_input, "line-delimited corpus file");
  ingest->add_option("--topic", ingest_topic, "keep documents under this taxonomy prefix");
  ingest->add_option("--output", ingest_output, "write the normalized corpus here");
  ingest->add_flag("--validate", validate_only, "only report whether the corpus is valid");

  // coref
  auto *coref = app.add_subcommand("coref", "merge coreference clusters across documents");
  std::string coref_input, policy_name = "longest", lexicon_path;
  coref->add_option("--input", coref_input, "line-delimited corpus file");
  coref->add_option("--policy", policy_name, "center policy")
      ->check(CLI::IsMember({"longest", "wordnet", "entity"}));
  coref->add_option("--lexicon", lexicon_path, "lexicon file for wordnet/entity")
      ->check(CLI::ExistingFile);

  // forest
  auto *forest = app.add_subcommand("forest", "build a month's role trees");
  std::string forest_input, month, subject, forest_vectors, forest_policy = "longest",
                                                            forest_lexicon;
  MergeConfig merge;
  bool graph = false;
  forest->add_option("--input", forest_input, "line-delimited corpus file");
  forest->add_option("--month", month, "slice label, e.g. 2019-01")->required();
  forest->add_option("--subject", subject, "only this (canonicalized) subject");
  auto *obj_opt = forest->add_option("--object-threshold", merge.object_sim_threshold,
                                     "TF-IDF cosine for merging objects");
  auto *verb_opt = forest->add_option("--verb-threshold", merge.verb_sim_threshold,
                                      "embedding cosine for merging verbs");
  auto *min_opt = forest->add_option("--min-weight", merge.min_edge_weight, "minimum verb weight");
  auto *max_opt = forest->add_option("--max-weight", merge.max_edge_weight, "maximum verb weight");
  auto *lemma_opt = forest->add_flag("--lemmatize", merge.lemmatize, "use verb lemmas");
  forest->add_option("--vectors", forest_vectors, "embedding file used for verb merging")
      ->check(CLI::ExistingFile);
  forest->add_option("--policy", forest_policy, "coref center policy")
      ->check(CLI::IsMember({"longest", "wordnet", "entity"}));
  forest->add_option("--lexicon", forest_lexicon, "coref lexicon")->check(CLI::ExistingFile);
  forest->add_flag("--graph", graph, "emit graph JSON instead of line records");

  // embed
  auto *embed = app.add_subcommand("embed", "train one month's embeddings");
  std::string embed_input, embed_month, embed_output;
  TrainConfig train;
  bool use_phrases = false;
  embed->add_option("--input", embed_input, "line-delimited corpus file");
  embed->add_option("--month", embed_month, "slice label")->required();
  auto *dim_opt = embed->add_option("--dim", train.dim, "embedding dimension");
  auto *win_opt = embed->add_option("--window", train.window, "context radius");
  auto *neg_opt = embed->add_option("--neg", train.negatives, "negative samples");
  auto *ep_opt = embed->add_option("--epochs", train.epochs, "training epochs");
  auto *mc_opt = embed->add_option("--min-count", train.min_count, "vocabulary cutoff");
  auto *seed_opt = embed->add_option("--seed", train.seed, "random seed");
  embed->add_option("--threads", train.threads, "worker threads (non-deterministic mode)");
  embed->add_flag("--phrases", use_phrases, "join collocations (learned on the full corpus)");
  embed->add_option("--output", embed_output, "embedding file (default stdout)");

  // align
  auto *align = app.add_subcommand("align", "rotate monthly embeddings into one frame");
  std::string anchor, align_output;
  std::size_t shared_top = 5000;
  std::vector<std::string> align_files;
  align->add_option("--anchor", anchor, "slice whose frame is kept (default latest)");
  auto *top_opt = align->add_option("--shared-top", shared_top, "shared words used per fit");
  align->add_option("--embeddings", align_files, "embedding files (default: store)")
      ->check(CLI::ExistingFile);
  align->add_option("--output", align_output, "directory for aligned files and transforms");

  // neighbors
  auto *nb = app.add_subcommand("neighbors", "nearest neighbors of a key word per month");
  std::string nb_key;
  std::size_t nb_n = 10;
  std::vector<std::string> nb_files;
  nb->add_option("--key", nb_key, "key word")->required();
  nb->add_option("--n", nb_n, "neighbors per month")->check(CLI::PositiveNumber);
  nb->add_option("--embeddings", nb_files, "aligned embedding files (default: store)");

  // drift
  auto *dr = app.add_subcommand("drift", "words whose similarity to the key moves most");
  std::string dr_key;
  std::size_t pool = 100, top = 10;
  std::vector<std::string> dr_files;
  dr->add_option("--key", dr_key, "key word")->required();
  dr->add_option("--pool", pool, "per-month neighbor pool size")->check(CLI::PositiveNumber);
  dr->add_option("--top", top, "words to report")->check(CLI::PositiveNumber);
  dr->add_option("--embeddings", dr_files, "aligned embedding files (default: store)");

  // project
  auto *pj = app.add_subcommand("project", "2D t-SNE map of a key word's neighbors");
  std::string pj_key;
  std::size_t pj_n = 8;
  TsneParams tsne_params;
  bool pj_json = false;
  std::vector<std::string> pj_files;
  pj->add_option("--key", pj_key, "key word")->required();
  pj->add_option("--n", pj_n, "neighbors per month")->check(CLI::PositiveNumber);
  auto *perp_opt = pj->add_option("--perplexity", tsne_params.perplexity, "t-SNE perplexity");
  auto *iter_opt = pj->add_option("--iterations", tsne_params.iterations, "gradient steps");
  auto *pseed_opt = pj->add_option("--seed", tsne_params.seed, "initialization seed");
  pj->add_flag("--json", pj_json, "emit the structured payload");
  pj->add_option("--embeddings", pj_files, "aligned embedding files (default: store)");

  // pipeline
  auto *pl = app.add_subcommand("pipeline", "run every stage and write the artifact store");

  // serve
  auto *sv = app.add_subcommand("serve", "serve the read-only HTTP API");
  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  sv->add_option("--host", host, "bind address");
  sv->add_option("--port", port, "bind port");
  sv->add_option("--static", static_dir, "directory with the web UI bundle");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config = base_config(g);

    if (ingest->parsed()) {
      auto corpus = filter_by_topic(load_corpus(input_path(ingest_input, config), exec_mode(g)),
                                    ingest_topic);
      std::cout << "valid: " << corpus.size() << " documents, " << corpus.slices().size()
                << " slices\n";
      if (!validate_only) {
        for (const auto &s : corpus.slices()) {
          std::cout << s.index << '\t' << s.label << '\t' << slice(corpus, s.label).size()
                    << '\n';
        }
      }
      if (!ingest_output.empty()) {
        std::ostringstream os;
        write_corpus(corpus, os);
        write_to(ingest_output, os.str());
      }
    } else if (coref->parsed()) {
      auto corpus = load_corpus(input_path(coref_input, config), exec_mode(g));
      auto globals = resolve_corpus(corpus, make_policy(policy_name, lexicon_path));
      write_cluster_report(globals, std::cout);
    } else if (forest->parsed()) {
      if (!obj_opt->count()) merge.object_sim_threshold = config.merge.object_sim_threshold;
      if (!verb_opt->count()) merge.verb_sim_threshold = config.merge.verb_sim_threshold;
      if (!min_opt->count()) merge.min_edge_weight = config.merge.min_edge_weight;
      if (!max_opt->count()) merge.max_edge_weight = config.merge.max_edge_weight;
      if (!lemma_opt->count()) merge.lemmatize = config.merge.lemmatize;
      merge.validate();
      auto corpus = load_corpus(input_path(forest_input, config), exec_mode(g));
      auto globals = resolve_corpus(corpus, make_policy(forest_policy, forest_lexicon));
      auto built = build_forest(slice(corpus, month), globals, merge);
      std::optional<EmbeddingSlice> vectors;
      if (!forest_vectors.empty()) vectors = load_embedding(forest_vectors);
      Forest merged{built.slice_label, {}};
      for (auto &[s, tree] : built.trees) {
        merged.trees[s] = apply_merges(tree, vectors ? &*vectors : nullptr, merge);
      }
      const auto wanted = subject.empty() ? std::string() : canonicalize(subject, globals);
      if (!wanted.empty() && !merged.find(wanted)) {
        throw Error("UNKNOWN_SUBJECT", "no tree for '" + wanted + "' in " + month);
      }
      if (graph) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &[s, tree] : merged.trees) {
          if (wanted.empty() || s == wanted) out.push_back(tree_graph(tree, month));
        }
        std::cout << out.dump(2) << '\n';
      } else {
        Forest shown{merged.slice_label, {}};
        for (auto &[s, tree] : merged.trees) {
          if (wanted.empty() || s == wanted) shown.trees.emplace(s, tree);
        }
        write_forest_records(shown, std::cout);
      }
    } else if (embed->parsed()) {
      if (!dim_opt->count()) train.dim = config.train.dim;
      if (!win_opt->count()) train.window = config.train.window;
      if (!neg_opt->count()) train.negatives = config.train.negatives;
      if (!ep_opt->count()) train.epochs = config.train.epochs;
      if (!mc_opt->count()) train.min_count = config.train.min_count;
      if (!seed_opt->count()) train.seed = config.train.seed;
      train.exec = exec_mode(g);
      auto corpus = load_corpus(input_path(embed_input, config), exec_mode(g));
      std::optional<PhraseModel> phrases;
      if (use_phrases) phrases = learn_phrases(token_streams(corpus), config.phrase_params);
      auto result = train_slice(slice(corpus, embed_month), phrases ? &*phrases : nullptr, train);
      std::ostringstream os;
      write_embedding(result.slice, os);
      write_to(embed_output, os.str());
      std::cerr << "trained " << result.slice.vocab.size() << " words x " << train.dim
                << ", probe loss";
      for (double l : result.epoch_loss) std::cerr << ' ' << l;
      std::cerr << '\n';
    } else if (align->parsed()) {
      if (!top_opt->count()) shared_top = config.shared_top;
      std::vector<EmbeddingSlice> slices;
      fs::path out_dir = align_output;
      if (!align_files.empty()) {
        for (const auto &f : align_files) slices.push_back(load_embedding(f));
      } else {
        const auto store = ArtifactStore::open(store_root(g, config));
        for (const auto *e : store.manifest().of_kind("embedding")) {
          slices.push_back(load_embedding(store.path(e->path)));
        }
      }
      std::optional<std::string> anchor_label;
      if (!anchor.empty()) anchor_label = anchor;
      else if (config.anchor) anchor_label = config.anchor;
      auto result = align_series(std::move(slices), anchor_label, shared_top, exec_mode(g));
      for (const auto &s : result.series.slices) {
        const auto &q = result.map.transforms.at(s.label);
        std::cout << s.label << "\tanchor=" << result.map.anchor
                  << "\torthogonality_error=" << max_orthogonality_error(q) << '\n';
        if (!out_dir.empty()) {
          std::ostringstream es, ts;
          write_embedding(s, es);
          write_to((out_dir / "aligned" / (s.label + ".vec")).string(), es.str());
          write_matrix(q, ts);
          write_to((out_dir / "transforms" / (s.label + ".txt")).string(), ts.str());
        }
      }
    } else if (nb->parsed()) {
      auto series = load_series(g, config, nb_files);
      auto table = neighbors(series, nb_key, nb_n, exec_mode(g));
      std::cout << "slice\trank\tword\tcosine\n";
      for (const auto &row : table.slices) {
        for (std::size_t r = 0; r < row.neighbors.size(); ++r) {
          std::cout << row.slice << '\t' << r + 1 << '\t' << row.neighbors[r].word << '\t'
                    << row.neighbors[r].cosine << '\n';
        }
      }
    } else if (dr->parsed()) {
      auto series = load_series(g, config, dr_files);
      auto report = top_drift_words(series, dr_key, pool, top, exec_mode(g));
      std::cout << "word\tdrift";
      for (const auto &s : report.slices) std::cout << '\t' << s;
      std::cout << '\n';
      for (const auto &c : report.candidates) {
        std::cout << c.word << '\t' << c.drift;
        for (double v : report.series.at(c.word)) std::cout << '\t' << v;
        std::cout << '\n';
      }
    } else if (pj->parsed()) {
      auto series = load_series(g, config, pj_files);
      if (!perp_opt->count()) tsne_params.perplexity = config.tsne.perplexity;
      if (!iter_opt->count()) tsne_params.iterations = config.tsne.iterations;
      if (!pseed_opt->count()) tsne_params.seed = config.tsne.seed;
      tsne_params.exec = exec_mode(g);
      auto points = pool_neighbors(series, pj_key, pj_n);
      auto proj = tsne(points, tsne_params);
      if (pj_json) {
        nlohmann::json list = nlohmann::json::array();
        for (std::size_t i = 0; i < proj.labels.size(); ++i) {
          list.push_back({{"label", proj.labels[i]},
                          {"x", proj.coords[i][0]},
                          {"y", proj.coords[i][1]}});
        }
        std::cout << nlohmann::json{{"key", pj_key}, {"points", list}}.dump(2) << '\n';
      } else {
        std::cout << "label\tx\ty\n";
        for (std::size_t i = 0; i < proj.labels.size(); ++i) {
          std::cout << proj.labels[i] << '\t' << proj.coords[i][0] << '\t'
                    << proj.coords[i][1] << '\n';
        }
      }
    } else if (pl->parsed()) {
      if (g.config_path.empty()) throw InvalidArgument("pipeline needs --config");
      if (g.deterministic) config.deterministic = true;
      const auto root = store_root(g, config);
      auto report = run_pipeline(config, root, &std::cerr);
      std::cout << "store " << root.string() << ": " << report.manifest.files.size()
                << " artifacts, " << report.written.size() << " written, "
                << report.unchanged.size() << " unchanged\n";
    } else if (sv->parsed()) {
      const auto store = ArtifactStore::open(store_root(g, config));
      TrendService service(store);
      std::optional<fs::path> dir;
      if (!static_dir.empty()) dir = static_dir;
      ApiServer server(service, dir);
      const int bound = server.bind(host, port);
      std::cerr << "serving " << store.root().string() << " on http://" << host << ":"
                << bound << '\n';
      server.run();
    }
  } catch (const Error &e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
