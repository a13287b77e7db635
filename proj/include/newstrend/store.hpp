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
#ifndef NEWSTREND_STORE_HPP_
#define NEWSTREND_STORE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace newstrend {

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path &path);
std::string read_file(const std::filesystem::path &path);

// Writes content unless the file already holds exactly these bytes.
// Returns true if the file was (re)written.
bool write_if_changed(const std::filesystem::path &path,
                      std::string_view content);

struct ManifestEntry {
  std::string path;  // relative to the store root, '/'-separated
  std::string kind;
  std::string sha256;
};

struct Manifest {
  int version = 1;
  std::string anchor;
  std::vector<std::string> slices;
  std::vector<ManifestEntry> files;  // sorted by path

  const ManifestEntry *find(std::string_view path) const;
  std::vector<const ManifestEntry *> of_kind(std::string_view kind) const;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json &j);
  // Stable serialization, newline-terminated.
  std::string dump() const;
};

inline constexpr const char *kManifestFile = "manifest.json";

// A validated artifact directory: every manifest entry exists and matches
// its recorded hash.
class ArtifactStore {
 public:
  // Throws StoreError naming the first missing or corrupted file.
  static ArtifactStore open(const std::filesystem::path &root);

  const std::filesystem::path &root() const { return root_; }
  const Manifest &manifest() const { return manifest_; }
  std::filesystem::path path(std::string_view relative) const {
    return root_ / std::filesystem::path(relative);
  }

 private:
  std::filesystem::path root_;
  Manifest manifest_;
};

// --store flag, then the NEWSTREND_STORE environment variable, then the
// configured value. Throws InvalidArgument if none is set.
std::filesystem::path resolve_store_root(
    const std::optional<std::filesystem::path> &flag,
    const std::optional<std::filesystem::path> &configured);

}  // namespace newstrend

#endif  // NEWSTREND_STORE_HPP_
