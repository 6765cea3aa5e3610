// Copyright 2026 The mgkb Authors.
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

#include <cmath>

#include "doctest.h"
#include "mgkb/lexicon.h"

using namespace mgkb;
using namespace mgkb::lexicon;

namespace {

embed::SkipGramModel FixtureModel() {
  // Five 2-d vectors; "asylum" is closest to "refugee".
  const std::vector<std::pair<std::string, std::vector<double>>> rows = {
      {"refugee", {1.0, 0.2}},  {"asylum", {0.9, 0.25}}, {"border", {0.5, 0.5}},
      {"football", {-0.2, 1.0}}, {"cake", {-1.0, -0.1}}};
  embed::SkipGramModel m;
  m.dim = 2;
  for (const auto &[term, vec] : rows) {
    m.vocab.Add(term, 10);
    m.input.insert(m.input.end(), vec.begin(), vec.end());
  }
  m.output.assign(m.input.size(), 0.0);
  return m;
}

Ranking BruteForce(const embed::SkipGramModel &m, const std::string &seed) {
  Ranking all;
  auto s = m.Vector(seed);
  for (const auto &term : m.vocab.terms()) {
    if (term == seed) continue;
    auto v = m.Vector(term);
    double dot = s[0] * v[0] + s[1] * v[1];
    double cos = dot / (std::hypot(s[0], s[1]) * std::hypot(v[0], v[1]));
    all.emplace_back(term, cos);
  }
  // Exhaustive selection sort by (cos desc, term asc).
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      bool swap = all[j].second > all[i].second ||
                  (all[j].second == all[i].second && all[j].first < all[i].first);
      if (swap) std::swap(all[i], all[j]);
    }
  }
  return all;
}

corpus::PreprocessedTweet Tagged(std::vector<std::string> tags) {
  corpus::PreprocessedTweet t;
  t.tokens = tags;
  t.hashtag_tokens = tags;
  return t;
}

}  // namespace

TEST_CASE("expand_seeds ranks by exhaustive cosine") {
  auto model = FixtureModel();
  auto ranked = ExpandSeeds({"refugee"}, model, 1);
  REQUIRE(ranked.size() == 1);
  REQUIRE(ranked[0].size() == 1);
  CHECK(ranked[0][0].first == "asylum");

  for (const auto &seed : model.vocab.terms()) {
    auto full = ExpandSeeds({seed}, model, 10)[0];
    auto oracle = BruteForce(model, seed);
    REQUIRE(full.size() == oracle.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
      CHECK(full[i].first == oracle[i].first);
      CHECK(full[i].second == doctest::Approx(oracle[i].second).epsilon(1e-12));
      if (i > 0) CHECK(full[i].second <= full[i - 1].second);
    }
    CHECK(ExpandSeeds({seed}, model, 3)[0].size() == 3);
  }
  CHECK(ExpandSeeds({"refugee", "cake"}, model, 0) ==
        std::vector<Ranking>{Ranking{}, Ranking{}});
  CHECK_THROWS_WITH_AS(ExpandSeeds({"unknownword"}, model, 5),
                       doctest::Contains("unknownword"), Error);
}

TEST_CASE("expand_seeds ties are lexicographic") {
  embed::SkipGramModel m;
  m.dim = 1;
  for (std::string t : {"seed", "zeta", "alpha", "mid"}) {
    m.vocab.Add(t, 1);
    m.input.push_back(1.0);
  }
  auto r = ExpandSeeds({"seed"}, m, 3)[0];
  CHECK(r[0].first == "alpha");
  CHECK(r[1].first == "mid");
  CHECK(r[2].first == "zeta");
}

TEST_CASE("select_popular_hashtags uses a strict distinct-tweet threshold") {
  std::vector<corpus::PreprocessedTweet> corpus;
  for (int i = 0; i < 101; ++i) {
    std::vector<std::string> tags = {"popular"};
    if (i < 100) tags.push_back("borderline");
    corpus.push_back(Tagged(tags));
  }
  // Repeating a hashtag inside one tweet counts once.
  corpus.push_back(Tagged({"repeat", "repeat"}));
  auto popular = SelectPopularHashtags(corpus, 100);
  REQUIRE(popular.size() == 1);
  CHECK(popular[0] == std::make_pair(std::string("popular"), std::size_t{101}));
  CHECK(SelectPopularHashtags({}, 100).empty());

  auto low = SelectPopularHashtags(corpus, 0);
  REQUIRE(low.size() == 3);
  CHECK(low[0].first == "popular");
  CHECK(low[1].first == "borderline");
  CHECK(low[2] == std::make_pair(std::string("repeat"), std::size_t{1}));
}

TEST_CASE("apply_allowlist") {
  std::string path = "/tmp/mgkb_allow.txt";
  WriteFile(path, "");
  CHECK(ApplyAllowlist({{"a", Origin::kEmbeddingExpansion}}, path).keywords.empty());

  WriteFile(path, "# reviewed\nb\nc\n");
  auto lex = ApplyAllowlist(
      {{"a", Origin::kEmbeddingExpansion}, {"b", Origin::kEmbeddingExpansion}},
      path);
  CHECK(lex.keywords == std::set<std::string>{"b", "c"});
  CHECK(lex.provenance.at("b") == Origin::kEmbeddingExpansion);
  CHECK(lex.provenance.at("c") == Origin::kManual);

  corpus::StopWords sw = {"c"};
  auto filtered = ApplyAllowlist({}, path, Target::kHashtags, &sw);
  CHECK(filtered.hashtags == std::set<std::string>{"b"});
  CHECK_THROWS_AS(ApplyAllowlist({}, "/nonexistent/allow.txt"), Error);
}

TEST_CASE("shipped keyword allowlist is reproduced verbatim") {
  const std::string path = "config/keywords_allowlist.txt";
  auto listed = LoadAllowlist(path);
  auto lex = ApplyAllowlist({}, path);
  CHECK(lex.keywords == std::set<std::string>(listed.begin(), listed.end()));
  CHECK(lex.keywords.size() == listed.size());
}
