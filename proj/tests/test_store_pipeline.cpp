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

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "builders.hpp"
#include "doctest.h"
#include "newstrend/errors.hpp"
#include "newstrend/pipeline.hpp"
#include "newstrend/store.hpp"

using namespace newstrend;
using newstrend::testing::TempDir;
using newstrend::testing::test_data;
namespace fs = std::filesystem;

namespace {

PipelineConfig fixture_config() {
  return PipelineConfig::load(test_data("fixture_config.json"));
}

std::map<std::string, std::string> hash_tree(const fs::path &root) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).generic_string()] = file_sha256(e.path());
    }
  }
  return out;
}

void write_text(const fs::path &p, const std::string &s) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("write_if_changed only touches differing files") {
  TempDir dir;
  const auto p = dir.path() / "a" / "b.txt";
  CHECK(write_if_changed(p, "hello"));
  CHECK(read_file(p) == "hello");
  CHECK_FALSE(write_if_changed(p, "hello"));
  CHECK(write_if_changed(p, "hello!"));
  CHECK(read_file(p) == "hello!");
  CHECK(file_sha256(p) == sha256_hex("hello!"));
}

TEST_CASE("manifest serialization round trip") {
  Manifest m;
  m.anchor = "2019-03";
  m.slices = {"2019-02", "2019-03"};
  m.files = {{"a.tsv", "forest", sha256_hex("a")}, {"b/c.vec", "aligned", sha256_hex("c")}};
  const auto text = m.dump();
  CHECK(text.back() == '\n');
  const auto back = Manifest::from_json(nlohmann::json::parse(text));
  CHECK(back.dump() == text);
  REQUIRE(back.find("b/c.vec"));
  CHECK(back.find("b/c.vec")->kind == "aligned");
  CHECK(back.find("zzz") == nullptr);
  CHECK(back.of_kind("forest").size() == 1);
}

TEST_CASE("store open validates every artifact") {
  TempDir dir;
  Manifest m;
  m.slices = {"2019-01"};
  m.anchor = "2019-01";
  write_text(dir.path() / "x.tsv", "payload\n");
  m.files = {{"x.tsv", "forest", sha256_hex("payload\n")}};
  write_text(dir.path() / kManifestFile, m.dump());
  CHECK(ArtifactStore::open(dir.path()).manifest().files.size() == 1);

  SUBCASE("corrupted file is named") {
    write_text(dir.path() / "x.tsv", "tampered\n");
    try {
      ArtifactStore::open(dir.path());
      FAIL("expected StoreError");
    } catch (const StoreError &e) {
      CHECK(std::string(e.what()).find("x.tsv") != std::string::npos);
      CHECK(e.code() == "STORE_INVALID");
    }
  }
  SUBCASE("missing file is named") {
    fs::remove(dir.path() / "x.tsv");
    try {
      ArtifactStore::open(dir.path());
      FAIL("expected StoreError");
    } catch (const StoreError &e) {
      CHECK(std::string(e.what()).find("x.tsv") != std::string::npos);
    }
  }
  SUBCASE("malformed manifest") {
    write_text(dir.path() / kManifestFile, "{not json");
    CHECK_THROWS_AS(ArtifactStore::open(dir.path()), StoreError);
  }
  SUBCASE("no manifest") {
    TempDir empty;
    CHECK_THROWS_AS(ArtifactStore::open(empty.path()), StoreError);
  }
}

TEST_CASE("store root precedence") {
  const fs::path flag = "/flag", conf = "/conf";
  ::setenv("NEWSTREND_STORE", "/env", 1);
  CHECK(resolve_store_root(flag, conf) == flag);
  CHECK(resolve_store_root(std::nullopt, conf) == fs::path("/env"));
  ::unsetenv("NEWSTREND_STORE");
  CHECK(resolve_store_root(std::nullopt, conf) == conf);
  CHECK(resolve_store_root(flag, std::nullopt) == flag);
  CHECK_THROWS_AS(resolve_store_root(std::nullopt, std::nullopt), InvalidArgument);
}

TEST_CASE("config parsing") {
  const auto c = fixture_config();
  CHECK(c.input == test_data("fixture_corpus.jsonl"));
  REQUIRE(c.lexicon);
  CHECK(*c.lexicon == test_data("entities.txt"));
  CHECK(c.train.dim == 16);
  CHECK(c.reports.keys.size() == 3);

  const fs::path base = "/base";
  CHECK_THROWS_AS(PipelineConfig::from_json({{"input", "x"}, {"bogus", 1}}, base),
                  InvalidArgument);
  CHECK_THROWS_AS(
      PipelineConfig::from_json({{"input", "x"}, {"train", {{"dims", 3}}}}, base),
      InvalidArgument);
  CHECK_THROWS_AS(
      PipelineConfig::from_json({{"input", "x"}, {"train", {{"dim", "three"}}}}, base),
      InvalidArgument);
  const auto minimal = PipelineConfig::from_json({{"input", "in.jsonl"}}, base);
  CHECK(minimal.input == base / "in.jsonl");
  CHECK(minimal.train.dim == TrainConfig{}.dim);

  const auto again = PipelineConfig::from_settings(c.settings_json());
  CHECK(again.settings_json() == c.settings_json());
}

TEST_CASE("pipeline on the fixture corpus") {
  const auto config = fixture_config();
  TempDir dir;
  std::ostringstream log;
  const auto first = run_pipeline(config, dir.path(), &log);
  CHECK(log.str().find("[ingest]") != std::string::npos);
  CHECK(first.unchanged.empty());
  CHECK(first.written.size() == first.manifest.files.size() + 1);

  const auto &m = first.manifest;
  const std::vector<std::string> months = {"2018-06", "2018-10", "2018-11", "2018-12",
                                           "2019-01", "2019-02", "2019-03"};
  CHECK(m.slices == months);
  CHECK(m.anchor == "2019-03");
  for (const auto &mo : months) {
    CHECK(m.find("forest/" + mo + ".tsv"));
    CHECK(m.find("embeddings/" + mo + ".vec"));
    CHECK(m.find("aligned/" + mo + ".vec"));
    if (mo != m.anchor) CHECK(m.find("transforms/" + mo + ".txt"));
  }
  CHECK(m.find("coref/clusters.tsv"));
  CHECK(m.find("phrases.tsv"));
  CHECK(m.find("settings.json"));
  CHECK(m.find("graphs/2018-06/trump.json"));
  CHECK(m.find("graphs/2019-01/lebron-james.json"));
  for (const auto &key : config.reports.keys) {
    CHECK(m.find("reports/neighbors_" + key + ".tsv"));
  }
  // Drift needs the key in every slice; trump is absent from some months.
  CHECK(m.find("reports/drift_lakers.tsv"));
  CHECK(m.find("reports/drift_lebron_james.tsv"));
  CHECK_FALSE(m.find("reports/drift_trump.tsv"));
  std::set<std::string> paths;
  for (const auto &f : m.files) paths.insert(f.path);
  CHECK(paths.size() == m.files.size());
  CHECK(std::is_sorted(m.files.begin(), m.files.end(),
                       [](const auto &a, const auto &b) { return a.path < b.path; }));

  const auto store = ArtifactStore::open(dir.path());
  CHECK(store.manifest().dump() == m.dump());

  SUBCASE("rerun rewrites nothing") {
    const auto before = hash_tree(dir.path());
    const auto second = run_pipeline(config, dir.path());
    CHECK(second.written.empty());
    CHECK(second.unchanged.size() == m.files.size() + 1);
    CHECK(hash_tree(dir.path()) == before);
  }
  SUBCASE("deterministic across fresh stores") {
    TempDir other;
    const auto again = run_pipeline(config, other.path());
    CHECK(again.manifest.dump() == m.dump());
    CHECK(hash_tree(other.path()) == hash_tree(dir.path()));
  }
  SUBCASE("a changed setting rewrites only affected artifacts") {
    auto tweaked = config;
    tweaked.reports.neighbors_n = 3;
    const auto second = run_pipeline(tweaked, dir.path());
    CHECK_FALSE(second.written.empty());
    for (const auto &p : second.written) {
      CHECK((p.starts_with("reports/") || p == "settings.json" || p == kManifestFile));
    }
  }
}

TEST_CASE("pipeline errors carry the stage name") {
  TempDir dir;
  auto config = fixture_config();
  SUBCASE("missing input") {
    config.input = dir.path() / "absent.jsonl";
    try {
      run_pipeline(config, dir.path());
      FAIL("expected error");
    } catch (const Error &e) {
      CHECK(std::string(e.what()).starts_with("ingest: "));
    }
  }
  SUBCASE("unknown topic") {
    config.topic = "no-such-topic";
    try {
      run_pipeline(config, dir.path());
      FAIL("expected error");
    } catch (const Error &e) {
      CHECK(e.code() == "EMPTY_CORPUS");
      CHECK(std::string(e.what()).starts_with("ingest: "));
    }
  }
  SUBCASE("vocabulary pruned away") {
    config.train.min_count = 1000000;
    try {
      run_pipeline(config, dir.path());
      FAIL("expected error");
    } catch (const Error &e) {
      CHECK(e.code() == "EMPTY_VOCABULARY");
      CHECK(std::string(e.what()).starts_with("embed"));
    }
  }
  SUBCASE("lexicon policy without lexicon") {
    config.center = CenterKind::kNameEntity;
    config.lexicon.reset();
    try {
      run_pipeline(config, dir.path());
      FAIL("expected error");
    } catch (const Error &e) {
      CHECK(e.code() == "MISSING_LEXICON");
      CHECK(std::string(e.what()).starts_with("coref: "));
    }
  }
  CHECK_FALSE(fs::exists(dir.path() / kManifestFile));
}
