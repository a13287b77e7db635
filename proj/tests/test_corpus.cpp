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
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "builders.hpp"
#include "doctest.h"
#include "newstrend/corpus.hpp"
#include "newstrend/errors.hpp"
#include "newstrend/text.hpp"

using namespace newstrend;
using namespace newstrend::testing;

TEST_CASE("normalize folds case, whitespace and edge punctuation") {
  CHECK(text::normalize("  The   Eagles!! ") == "the eagles");
  CHECK(text::normalize("\"Hilary Clinton,\"") == "hilary clinton");
  CHECK(text::normalize("U.S.") == "u.s");
  CHECK(text::normalize("...") == "");
  CHECK(text::normalize("") == "");
}

TEST_CASE("parse_date accepts ISO dates and rejects invalid ones") {
  auto d = parse_date("2019-01-31");
  REQUIRE(d);
  CHECK(d->month_label() == "2019-01");
  CHECK(parse_date("2018-12-05T09:30:00Z")->month_label() == "2018-12");
  CHECK_FALSE(parse_date("2019-13-01"));
  CHECK_FALSE(parse_date("2019-02-30"));
  CHECK_FALSE(parse_date("yesterday"));
  CHECK(parse_date("2020-02-29"));
}

TEST_CASE("two documents give two slices in order") {
  auto c = corpus_of({doc("b", "2019-01-03", {plain("lakers win")}),
                      doc("a", "2018-12-30", {plain("lakers lose")})});
  CHECK(c.size() == 2);
  REQUIRE(c.slices().size() == 2);
  CHECK(c.slices()[0] == TimeSlice{"2018-12", 1});
  CHECK(c.slices()[1] == TimeSlice{"2019-01", 2});
}

TEST_CASE("empty input is EmptyCorpus") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_corpus(empty), EmptyCorpus);
  std::istringstream blank("\n  \n");
  CHECK_THROWS_AS(parse_corpus(blank), EmptyCorpus);
}

TEST_CASE("object span past the token count reports its line") {
  auto bad = doc("x", "2019-01-01", {svo({"Lakers", "want", "Davis"})});
  bad["sentences"][0]["frames"][0]["object"]["end"] = 9;
  std::istringstream in(lines({doc("a", "2019-01-01", {plain("ok")}),
                               doc("b", "2019-01-02", {plain("ok")}), bad}));
  try {
    parse_corpus(in);
    FAIL("expected MalformedRecord");
  } catch (const MalformedRecord &e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.code()) == "MALFORMED_RECORD");
  }
}

TEST_CASE("span invariants are enforced") {
  auto base = doc("x", "2019-01-01", {svo({"Lakers", "want", "Davis"})});
  auto reject = [](const json &record) {
    std::istringstream in(record.dump() + "\n");
    CHECK_THROWS_AS(parse_corpus(in), MalformedRecord);
  };
  SUBCASE("empty span") {
    auto d = base;
    d["sentences"][0]["frames"][0]["verb"] = span(1, 1);
    reject(d);
  }
  SUBCASE("negative start") {
    auto d = base;
    d["sentences"][0]["frames"][0]["subject"] = span(-1, 1);
    reject(d);
  }
  SUBCASE("subject overlaps verb") {
    auto d = base;
    d["sentences"][0]["frames"][0]["subject"] = span(0, 2);
    reject(d);
  }
  SUBCASE("uppercase lemma") {
    auto d = base;
    d["sentences"][0]["frames"][0]["verb_lemma"] = "Want";
    reject(d);
  }
  SUBCASE("empty lemma") {
    auto d = base;
    d["sentences"][0]["frames"][0]["verb_lemma"] = "";
    reject(d);
  }
  SUBCASE("empty cluster") {
    auto d = base;
    d["sentences"][0]["clusters"] = json::array({json::array()});
    reject(d);
  }
  SUBCASE("cluster mention out of bounds") {
    auto d = base;
    d["sentences"][0]["clusters"] = json::array({json::array({span(2, 7)})});
    reject(d);
  }
  SUBCASE("missing field") {
    auto d = base;
    d.erase("published_at");
    reject(d);
  }
  SUBCASE("bad date") {
    auto d = base;
    d["published_at"] = "2019-02-31";
    reject(d);
  }
  SUBCASE("not json") {
    std::istringstream in("{not json\n");
    CHECK_THROWS_AS(parse_corpus(in), MalformedRecord);
  }
}

TEST_CASE("duplicate doc_id is rejected") {
  std::istringstream in(lines({doc("a", "2019-01-01", {plain("x")}),
                               doc("a", "2019-01-02", {plain("y")})}));
  CHECK_THROWS_AS(parse_corpus(in), MalformedRecord);
}

TEST_CASE("frames without objects are kept and span text is cached") {
  auto c = corpus_of({doc("a", "2019-01-01", {svo({"LeBron James", "resign", ""})})});
  const auto &f = c.documents()[0].sentences[0].frames[0];
  CHECK_FALSE(f.object);
  CHECK(f.subject.text == "LeBron James");
  CHECK(f.verb.text == "resign");
}

TEST_CASE("slice keeps exactly one month") {
  auto c = corpus_of({doc("a", "2019-02-01", {plain("x")}), doc("b", "2019-02-20", {plain("y")}),
                      doc("c", "2019-03-01", {plain("z")})});
  CHECK(slice(c, "2019-02").size() == 2);
  CHECK(slice(c, "2019-03").size() == 1);
  CHECK_THROWS_AS(slice(c, "2020-01"), UnknownSlice);
}

TEST_CASE("filter_by_topic") {
  auto c = corpus_of({doc("a", "2019-02-01", {plain("x")}, "/sports/basketball"),
                      doc("b", "2019-02-01", {plain("y")}, "/news"),
                      doc("c", "2019-02-01", {plain("z")})});
  CHECK(filter_by_topic(c, "/sports").size() == 1);
  CHECK(filter_by_topic(c, "") == c);
  CHECK(filter_by_topic(c, "/finance").empty());
}

namespace {

std::vector<json> random_docs(std::mt19937_64 &rng, int n) {
  const char *topics[] = {"/sports/basketball", "/sports/football", "/news/politics"};
  std::vector<json> docs;
  for (int i = 0; i < n; ++i) {
    const int month = 1 + static_cast<int>(rng() % 6);
    const std::string date = "2019-0" + std::to_string(month) + "-1" + std::to_string(rng() % 9);
    std::optional<std::string> topic;
    if (rng() % 4) topic = topics[rng() % 3];
    docs.push_back(doc("d" + std::to_string(i), date,
                       {svo({"Lakers", "want", (rng() % 2) ? "Davis" : ""}), plain("filler text")},
                       topic));
  }
  return docs;
}

}  // namespace

TEST_CASE("round trip, partition and topic count on random corpora") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto docs = random_docs(rng, 40);
    auto c = corpus_of(docs);

    std::ostringstream out;
    write_corpus(c, out);
    std::istringstream back(out.str());
    CHECK(parse_corpus(back) == c);

    std::multiset<std::string> ids, united;
    for (const auto &d : c.documents()) ids.insert(d.doc_id);
    for (const auto &s : c.slices()) {
      const auto part = slice(c, s.label);
      for (const auto &d : part.documents()) united.insert(d.doc_id);
    }
    CHECK(ids == united);

    std::size_t basketball = 0;
    for (const auto &d : docs) {
      basketball += d["topic"].is_string() &&
                    d["topic"].get<std::string>().rfind("/sports/basketball", 0) == 0;
    }
    CHECK(filter_by_topic(c, "/sports/basketball").size() == basketball);
  }
}

TEST_CASE("random span corruption is always rejected") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = doc("x", "2019-01-01", {svo({"the Lakers", "want", "Anthony Davis"})});
    auto &frame = d["sentences"][0]["frames"][0];
    const char *fields[] = {"subject", "verb", "object"};
    auto &target = frame[fields[rng() % 3]];
    const int start = static_cast<int>(rng() % 12) - 3;
    const int end = static_cast<int>(rng() % 12) - 3;
    target = span(start, end);
    const int n = static_cast<int>(d["sentences"][0]["tokens"].size());
    const auto s = frame["subject"], v = frame["verb"];
    bool valid = true;
    for (const auto *k : fields) {
      const auto &sp = frame[k];
      valid = valid && sp["start"].get<int>() >= 0 && sp["start"].get<int>() < sp["end"].get<int>() &&
              sp["end"].get<int>() <= n;
    }
    valid = valid && (s["end"].get<int>() <= v["start"].get<int>() ||
                      v["end"].get<int>() <= s["start"].get<int>());
    std::istringstream in(d.dump() + "\n");
    if (valid) {
      CHECK_NOTHROW(parse_corpus(in));
    } else {
      CHECK_THROWS_AS(parse_corpus(in), MalformedRecord);
    }
  }
}

TEST_CASE("parallel parse equals serial parse") {
  std::mt19937_64 rng(3);
  const auto text = lines(random_docs(rng, 500));
  std::istringstream a(text), b(text);
  CHECK(parse_corpus(a, Exec::kSerial) == parse_corpus(b, Exec::kParallel));
}
