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
#ifndef NEWSTREND_SERVICE_HPP_
#define NEWSTREND_SERVICE_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "newstrend/alignment.hpp"
#include "newstrend/coref.hpp"
#include "newstrend/forest.hpp"
#include "newstrend/pipeline.hpp"
#include "newstrend/store.hpp"

namespace newstrend {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

using QueryParams = std::map<std::string, std::string>;

// Read-only request handler over a loaded artifact store. Holds no mutable
// state, so one instance serves concurrent requests.
class TrendService {
 public:
  explicit TrendService(const ArtifactStore &store);

  ApiResponse handle(std::string_view path, const QueryParams &params) const;

 private:
  ApiResponse subjects(const QueryParams &params) const;
  ApiResponse tree(const QueryParams &params) const;
  ApiResponse verb_ranking(const QueryParams &params) const;
  ApiResponse object_shares(const QueryParams &params) const;
  ApiResponse neighbors(const QueryParams &params) const;
  ApiResponse drift(const QueryParams &params) const;
  ApiResponse similarity(const QueryParams &params) const;
  ApiResponse projection(const QueryParams &params) const;
  ApiResponse coref(const QueryParams &params) const;

  PipelineConfig settings_;
  ForestSeries forests_;
  GlobalClusterSet globals_;
  AlignedSeries series_;
};

// HTTP front end for a TrendService. Answers GET /api/* and, when a static
// directory is given, serves the UI bundle from /.
class ApiServer {
 public:
  ApiServer(const TrendService &service,
            const std::optional<std::filesystem::path> &static_dir);
  ~ApiServer();
  ApiServer(const ApiServer &) = delete;
  ApiServer &operator=(const ApiServer &) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string &host, int port);
  // Blocks until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocks serving /api/* (and static files from static_dir when given).
void serve(const TrendService &service, const std::string &host, int port,
           const std::optional<std::filesystem::path> &static_dir);

}  // namespace newstrend

#endif  // NEWSTREND_SERVICE_HPP_
