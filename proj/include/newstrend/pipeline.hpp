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
#ifndef NEWSTREND_PIPELINE_HPP_
#define NEWSTREND_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "newstrend/coref.hpp"
#include "newstrend/embeddings.hpp"
#include "newstrend/forest.hpp"
#include "newstrend/projection.hpp"
#include "newstrend/store.hpp"

namespace newstrend {

struct ReportConfig {
  std::vector<std::string> keys;
  std::size_t neighbors_n = 10;
  std::size_t drift_pool = 100;
  std::size_t drift_top = 10;
};

// Every tunable of the pipeline. Unset keys in the config file keep the
// defaults of the owning module.
struct PipelineConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> store;
  std::string topic;
  CenterKind center = CenterKind::kLongestSpan;
  std::optional<std::filesystem::path> lexicon;
  MergeConfig merge;
  bool phrases = true;
  PhraseParams phrase_params;
  TrainConfig train;
  std::optional<std::string> anchor;
  std::size_t shared_top = 5000;
  ReportConfig reports;
  TsneParams tsne;
  bool deterministic = true;

  // Relative paths resolve against base_dir. Throws InvalidArgument on
  // unknown keys or bad values.
  static PipelineConfig from_json(const nlohmann::json &j,
                                  const std::filesystem::path &base_dir);
  static PipelineConfig load(const std::filesystem::path &path);

  // Path-free settings persisted in the store for the service.
  nlohmann::json settings_json() const;
  static PipelineConfig from_settings(const nlohmann::json &settings);
};

struct PipelineReport {
  Manifest manifest;
  std::vector<std::string> written;
  std::vector<std::string> unchanged;
};

// ingest -> coref -> forests -> phrases -> embeddings -> align -> reports.
// Files whose bytes did not change are left untouched. Module errors are
// rethrown with the stage name prefixed.
PipelineReport run_pipeline(const PipelineConfig &config,
                            const std::filesystem::path &store_root,
                            std::ostream *log = nullptr);

}  // namespace newstrend

#endif  // NEWSTREND_PIPELINE_HPP_
