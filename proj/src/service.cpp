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
#include "newstrend/service.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "httplib.h"
#include "newstrend/errors.hpp"
#include "newstrend/projection.hpp"
#include "newstrend/text.hpp"
#include "newstrend/trends.hpp"

namespace newstrend {

using nlohmann::json;

namespace {

ApiResponse error(int status, const std::string &code, const std::string &message) {
  return {status, json{{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(const std::string &code) {
  if (code.starts_with("UNKNOWN_")) return 404;
  if (code == "BAD_PARAMETER" || code == "INVALID_THRESHOLD" ||
      code == "TOO_FEW_POINTS" || code == "TOO_FEW_SLICES" ||
      code == "PERPLEXITY_TOO_HIGH") {
    return 400;
  }
  return 500;
}

const std::string &required(const QueryParams &params, const char *name) {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty()) {
    throw InvalidArgument(std::string("missing parameter '") + name + "'");
  }
  return it->second;
}

long integer(const QueryParams &params, const char *name, long fallback, long min,
             long max) {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty()) return fallback;
  long v = 0;
  const auto &s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument(std::string("parameter '") + name + "' is not an integer");
  }
  if (v < min || v > max) {
    throw InvalidArgument(std::string("parameter '") + name + "' out of range [" +
                          std::to_string(min) + ", " + std::to_string(max) + "]");
  }
  return v;
}

double real(const QueryParams &params, const char *name, double fallback,
            double min, double max) {
  auto it = params.find(name);
  if (it == params.end() || it->second.empty()) return fallback;
  double v = 0;
  const auto &s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument(std::string("parameter '") + name + "' is not a number");
  }
  if (v < min || v > max) {
    throw InvalidArgument(std::string("parameter '") + name + "' out of range");
  }
  return v;
}

json ranked_json(const std::vector<RankedVerb> &ranked) {
  json out = json::array();
  for (const auto &r : ranked) {
    out.push_back({{"verb", r.verb},
                   {"weight", r.weight},
                   {"main_object", r.main_object ? json(*r.main_object) : json(nullptr)}});
  }
  return out;
}

constexpr long kMaxCount = 10000;

}  // namespace

TrendService::TrendService(const ArtifactStore &store) {
  const auto &m = store.manifest();
  settings_ = PipelineConfig::from_settings(json::parse(read_file(store.path("settings.json"))));
  for (const auto *e : m.of_kind("forest")) {
    const auto label = std::filesystem::path(e->path).stem().string();
    std::ifstream in(store.path(e->path));
    forests_[label] = read_forest_records(in, label);
  }
  if (const auto *e = m.find("coref/clusters.tsv")) {
    std::ifstream in(store.path(e->path));
    globals_ = read_cluster_report(in);
  }
  for (const auto *e : m.of_kind("aligned")) {
    series_.slices.push_back(load_embedding(store.path(e->path)));
  }
  std::sort(series_.slices.begin(), series_.slices.end(),
            [](const auto &a, const auto &b) { return a.label < b.label; });
}

ApiResponse TrendService::handle(std::string_view path, const QueryParams &params) const {
  using Handler = ApiResponse (TrendService::*)(const QueryParams &) const;
  static const std::map<std::string, Handler, std::less<>> routes = {
      {"/api/subjects", &TrendService::subjects},
      {"/api/tree", &TrendService::tree},
      {"/api/verb-ranking", &TrendService::verb_ranking},
      {"/api/object-shares", &TrendService::object_shares},
      {"/api/neighbors", &TrendService::neighbors},
      {"/api/drift", &TrendService::drift},
      {"/api/similarity", &TrendService::similarity},
      {"/api/projection", &TrendService::projection},
      {"/api/coref", &TrendService::coref}};
  auto it = routes.find(path);
  if (it == routes.end()) return error(404, "NOT_FOUND", "no endpoint " + std::string(path));
  try {
    return (this->*(it->second))(params);
  } catch (const Error &e) {
    return error(status_for(e.code()), e.code(), e.what());
  } catch (const std::exception &e) {
    return error(500, "INTERNAL", e.what());
  }
}

ApiResponse TrendService::subjects(const QueryParams &params) const {
  const auto q = text::normalize(params.contains("q") ? params.at("q") : "");
  const long limit = integer(params, "limit", 50, 1, kMaxCount);
  std::set<std::string> all;
  for (const auto &[month, forest] : forests_) {
    for (const auto &[subject, tree] : forest.trees) {
      if (subject.starts_with(q)) all.insert(subject);
    }
  }
  json list = json::array();
  for (const auto &s : all) {
    if (static_cast<long>(list.size()) >= limit) break;
    list.push_back(s);
  }
  return {200, json{{"query", q}, {"subjects", list}}};
}

ApiResponse TrendService::tree(const QueryParams &params) const {
  const auto subject = canonicalize(required(params, "subject"), globals_);
  const auto &month = required(params, "month");
  MergeConfig config = settings_.merge;
  config.min_edge_weight = integer(params, "min_w", config.min_edge_weight, 0,
                                   std::numeric_limits<long>::max());
  config.max_edge_weight = integer(params, "max_w", config.max_edge_weight, 0,
                                   std::numeric_limits<long>::max());
  config.object_sim_threshold =
      real(params, "object_threshold", config.object_sim_threshold, 0.0, 1.0);
  config.verb_sim_threshold =
      real(params, "verb_threshold", config.verb_sim_threshold, -1.0, 1.0);
  if (config.min_edge_weight > config.max_edge_weight) {
    throw InvalidArgument("min_w exceeds max_w");
  }
  auto f = forests_.find(month);
  if (f == forests_.end()) return error(404, "UNKNOWN_MONTH", "no slice " + month);
  const RoleTree *raw = f->second.find(subject);
  if (!raw) {
    return error(404, "UNKNOWN_SUBJECT", "no tree for '" + subject + "' in " + month);
  }
  auto merged = apply_merges(*raw, series_.find(month), config);
  return {200, tree_graph(merged, month)};
}

ApiResponse TrendService::verb_ranking(const QueryParams &params) const {
  const auto subject = canonicalize(required(params, "subject"), globals_);
  const bool known = std::any_of(forests_.begin(), forests_.end(),
                                 [&](const auto &kv) { return kv.second.find(subject); });
  if (!known) return error(404, "UNKNOWN_SUBJECT", "unknown subject '" + subject + "'");
  json months = json::object();
  for (const auto &[month, ranked] : newstrend::verb_ranking(forests_, subject)) {
    months[month] = ranked_json(ranked);
  }
  return {200, json{{"subject", subject}, {"months", months}}};
}

ApiResponse TrendService::object_shares(const QueryParams &params) const {
  const auto subject = canonicalize(required(params, "subject"), globals_);
  const long k = integer(params, "k", 4, 1, kMaxCount);
  const bool known = std::any_of(forests_.begin(), forests_.end(),
                                 [&](const auto &kv) { return kv.second.find(subject); });
  if (!known) return error(404, "UNKNOWN_SUBJECT", "unknown subject '" + subject + "'");
  json months = json::object();
  for (const auto &[month, shares] :
       newstrend::object_shares(forests_, subject, static_cast<std::size_t>(k))) {
    json list = json::array();
    for (const auto &s : shares) list.push_back({{"object", s.object}, {"share", s.share}});
    months[month] = list;
  }
  return {200, json{{"subject", subject}, {"k", k}, {"months", months}}};
}

ApiResponse TrendService::neighbors(const QueryParams &params) const {
  const auto &key = required(params, "key");
  const long n = integer(params, "n", 10, 1, kMaxCount);
  const auto table = newstrend::neighbors(series_, key, static_cast<std::size_t>(n));
  json slices = json::array();
  for (const auto &row : table.slices) {
    json list = json::array();
    for (const auto &nb : row.neighbors) list.push_back({{"word", nb.word}, {"cosine", nb.cosine}});
    slices.push_back({{"slice", row.slice}, {"neighbors", list}});
  }
  return {200, json{{"key", key}, {"n", n}, {"slices", slices}}};
}

ApiResponse TrendService::drift(const QueryParams &params) const {
  const auto &key = required(params, "key");
  const long pool = integer(params, "pool", settings_.reports.drift_pool, 1, kMaxCount);
  const long top = integer(params, "top", settings_.reports.drift_top, 1, kMaxCount);
  const auto report = top_drift_words(series_, key, static_cast<std::size_t>(pool),
                                      static_cast<std::size_t>(top));
  json candidates = json::array();
  for (const auto &c : report.candidates) {
    candidates.push_back({{"word", c.word}, {"drift", c.drift}, {"series", report.series.at(c.word)}});
  }
  return {200, json{{"key", key}, {"slices", report.slices}, {"candidates", candidates}}};
}

ApiResponse TrendService::similarity(const QueryParams &params) const {
  const auto &key = required(params, "key");
  const auto &word = required(params, "word");
  for (const auto &w : {key, word}) {
    if (std::none_of(series_.slices.begin(), series_.slices.end(),
                     [&](const auto &s) { return s.contains(w); })) {
      throw UnknownWord(w);
    }
  }
  json values = json::array();
  for (const auto &v : similarity_series(series_, key, word)) {
    values.push_back(v ? json(*v) : json(nullptr));
  }
  return {200, json{{"key", key}, {"word", word}, {"slices", series_.labels()},
                    {"cosine", values}}};
}

ApiResponse TrendService::projection(const QueryParams &params) const {
  const auto &key = required(params, "key");
  const long n = integer(params, "n", 8, 1, 200);
  const auto points = pool_neighbors(series_, key, static_cast<std::size_t>(n));
  TsneParams tp = settings_.tsne;
  const double limit = (static_cast<double>(points.points.size()) - 1.0) / 3.0;
  // Small pools cannot support the configured perplexity.
  if (tp.perplexity >= limit) tp.perplexity = 0.9 * limit;
  const auto proj = tsne(points, tp);
  json list = json::array();
  for (std::size_t i = 0; i < proj.labels.size(); ++i) {
    list.push_back({{"label", proj.labels[i]},
                    {"word", points.points[i].word},
                    {"slice", points.points[i].slice},
                    {"x", proj.coords[i][0]},
                    {"y", proj.coords[i][1]}});
  }
  return {200, json{{"key", key},
                    {"points", list},
                    {"params", {{"perplexity", tp.perplexity},
                                {"iterations", tp.iterations},
                                {"seed", tp.seed}}}}};
}

ApiResponse TrendService::coref(const QueryParams &params) const {
  const auto mention = text::normalize(required(params, "mention"));
  auto id = globals_.find(mention);
  if (!id) return error(404, "UNKNOWN_MENTION", "no cluster holds '" + mention + "'");
  return {200, json{{"mention", mention},
                    {"cluster_id", *id},
                    {"center", globals_.center(*id)},
                    {"members", globals_.cluster(*id).mentions}}};
}

struct ApiServer::Impl {
  httplib::Server server;
};

ApiServer::ApiServer(const TrendService &service,
                     const std::optional<std::filesystem::path> &static_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->server.Get(R"(/api/.*)", [&service](const httplib::Request &req,
                                               httplib::Response &res) {
    QueryParams params;
    for (const auto &[k, v] : req.params) params.emplace(k, v);
    const auto r = service.handle(req.path, params);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  });
  if (static_dir && !impl_->server.set_mount_point("/", static_dir->string())) {
    throw InvalidArgument("static directory not found: " + static_dir->string());
  }
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string &host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error("BIND_FAILED", "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

void serve(const TrendService &service, const std::string &host, int port,
           const std::optional<std::filesystem::path> &static_dir) {
  ApiServer server(service, static_dir);
  server.bind(host, port);
  server.run();
}

}  // namespace newstrend
