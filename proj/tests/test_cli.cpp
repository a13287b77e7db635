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

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "builders.hpp"
#include "doctest.h"
#include "newstrend/store.hpp"

using newstrend::testing::TempDir;
using newstrend::testing::test_data;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string &args) {
  const std::string cmd = std::string("\"") + NEWSTREND_CLI + "\" " + args + " 2>&1";
  FILE *pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int rc = ::pclose(pipe);
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string q(const std::filesystem::path &p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("cli subcommands over a fixture store") {
  TempDir dir;
  const auto store = dir.path() / "store";
  const auto config = q(test_data("fixture_config.json"));
  auto p = run("--config " + config + " --store " + q(store) + " --deterministic pipeline");
  REQUIRE(p.status == 0);
  CHECK(newstrend::read_file(store / "manifest.json") ==
        newstrend::read_file(test_data("golden_manifest.json")));

  auto nb = run("--store " + q(store) + " neighbors --key lakers --n 3");
  CHECK(nb.status == 0);
  CHECK(nb.out.find("2019-03") != std::string::npos);

  auto dr = run("--store " + q(store) + " drift --key lakers --pool 10 --top 3");
  CHECK(dr.status == 0);

  auto pr = run("--config " + config + " --store " + q(store) + " project --key lakers --n 4 --json");
  CHECK(pr.status == 0);
  CHECK(nlohmann::json::parse(pr.out.substr(pr.out.find('{'))).contains("points"));

  auto missing = run("--store " + q(store) + " neighbors --key no_such_word");
  CHECK(missing.status == 2);
  CHECK(missing.out.find("UNKNOWN_WORD") != std::string::npos);

  auto ingest = run("ingest --input " + q(test_data("fixture_corpus.jsonl")) + " --validate");
  CHECK(ingest.status == 0);

  auto forest = run("--config " + config + " forest --month 2019-01 --subject \"lebron james\"");
  CHECK(forest.status == 0);
  CHECK(forest.out.find("miss") != std::string::npos);

  auto bad = run("--store " + q(dir.path() / "nowhere") + " neighbors --key lakers");
  CHECK(bad.status == 2);
  CHECK(bad.out.find("STORE_INVALID") != std::string::npos);
}
