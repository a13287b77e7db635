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
#include "newstrend/store.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "newstrend/errors.hpp"

namespace newstrend {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char *kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string file_sha256(const fs::path &path) { return sha256_hex(read_file(path)); }

bool write_if_changed(const fs::path &path, std::string_view content) {
  std::error_code ec;
  if (fs::exists(path, ec) && fs::file_size(path, ec) == content.size() &&
      read_file(path) == content) {
    return false;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw StoreError("write failed for " + path.string());
  return true;
}

const ManifestEntry *Manifest::find(std::string_view path) const {
  for (const auto &f : files) {
    if (f.path == path) return &f;
  }
  return nullptr;
}

std::vector<const ManifestEntry *> Manifest::of_kind(std::string_view kind) const {
  std::vector<const ManifestEntry *> out;
  for (const auto &f : files) {
    if (f.kind == kind) out.push_back(&f);
  }
  return out;
}

json Manifest::to_json() const {
  json entries = json::array();
  for (const auto &f : files) {
    entries.push_back({{"path", f.path}, {"kind", f.kind}, {"sha256", f.sha256}});
  }
  return json{{"version", version}, {"anchor", anchor}, {"slices", slices},
              {"files", entries}};
}

Manifest Manifest::from_json(const json &j) {
  Manifest m;
  try {
    m.version = j.at("version").get<int>();
    m.anchor = j.at("anchor").get<std::string>();
    m.slices = j.at("slices").get<std::vector<std::string>>();
    for (const auto &e : j.at("files")) {
      m.files.push_back({e.at("path").get<std::string>(),
                         e.at("kind").get<std::string>(),
                         e.at("sha256").get<std::string>()});
    }
  } catch (const json::exception &e) {
    throw StoreError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string Manifest::dump() const { return to_json().dump(2) + "\n"; }

ArtifactStore ArtifactStore::open(const fs::path &root) {
  ArtifactStore store;
  store.root_ = root;
  const auto manifest_path = root / kManifestFile;
  if (!fs::exists(manifest_path)) {
    throw StoreError("no " + std::string(kManifestFile) + " in " + root.string());
  }
  try {
    store.manifest_ = Manifest::from_json(json::parse(read_file(manifest_path)));
  } catch (const json::exception &e) {
    throw StoreError(std::string("unreadable manifest: ") + e.what());
  }
  for (const auto &f : store.manifest_.files) {
    const auto path = store.path(f.path);
    if (!fs::exists(path)) throw StoreError("missing artifact " + f.path);
    if (file_sha256(path) != f.sha256) {
      throw StoreError("hash mismatch for artifact " + f.path);
    }
  }
  return store;
}

fs::path resolve_store_root(const std::optional<fs::path> &flag,
                            const std::optional<fs::path> &configured) {
  if (flag && !flag->empty()) return *flag;
  if (const char *env = std::getenv("NEWSTREND_STORE"); env && *env) return env;
  if (configured && !configured->empty()) return *configured;
  throw InvalidArgument("no artifact store given (--store, NEWSTREND_STORE or config)");
}

}  // namespace newstrend
