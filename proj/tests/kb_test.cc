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

#include <set>

#include "doctest.h"
#include "mgkb/kb.h"
#include "mgkb/random.h"

using namespace mgkb;
using namespace mgkb::kb;
using rdf::Term;
using rdf::Triple;

namespace {

KbTweet Minimal() {
  KbTweet t;
  t.id = "1001";
  t.created_at = "2020-03-01T10:00:00Z";
  t.year = 2020;
  t.country = "GB";
  t.place_name = "London, England";
  t.topic = "topic_3";
  t.sentiment = annotate::Sentiment::kNeutral;
  t.hate = annotate::Hate::kHate;
  return t;
}

indicators::IndicatorRecord Record(const std::string &country, int year,
                                   indicators::Kind kind,
                                   const std::string &value) {
  return {country, year, kind, std::stod(value), value, "Eurostat", "2021-07-01"};
}

std::set<std::string> Categories(const std::vector<Triple> &triples) {
  std::set<std::string> out;
  for (const auto &t : triples)
    if (t.predicate == Name("onyx:hasEmotionCategory")) out.insert(t.object.value);
  return out;
}

}  // namespace

TEST_CASE("minimal tweet") {
  auto triples = TriplifyTweet(Minimal(), {});
  CHECK(triples.size() == 15);
  CHECK(triples.size() == ExpectedTweetTriples(false, 0, 0, 0, false));
  auto cats = Categories(triples);
  CHECK(cats == std::set<std::string>{Name("wna:hate").value,
                                      Name("wna:neutral-emotion").value});
  const Term post = Term::Iri(TweetIri("1001"));
  bool typed = false, country = false;
  for (const auto &t : triples) {
    typed = typed || (t.subject == post && t.predicate.value == rdf::kRdfType &&
                      t.object == Name("sioc:Post"));
    country = country || (t.predicate == Name("schema:addressCountry") &&
                          t.object == Term::Literal("GB"));
  }
  CHECK(typed);
  CHECK(country);
  CHECK(post.value == "https://migrationskb.github.io/MGKB/ns#tweet_1001");

  KbTweet positive = Minimal();
  positive.sentiment = annotate::Sentiment::kPositive;
  positive.hate = annotate::Hate::kOffensive;
  CHECK(Categories(TriplifyTweet(positive, {})) ==
        std::set<std::string>{Name("wna:positive-emotion").value,
                              Name("mgkb:offensive").value});
}

TEST_CASE("missing fields name the tweet") {
  KbTweet t = Minimal();
  t.topic.clear();
  try {
    TriplifyTweet(t, {});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()) == "tweet 1001: missing topic");
  }
  t = Minimal();
  t.country.clear();
  CHECK_THROWS_WITH_AS(TriplifyTweet(t, {}), "tweet 1001: missing country", Error);
  t = Minimal();
  t.created_at = "yesterday";
  CHECK_THROWS_AS(TriplifyTweet(t, {}), Error);
}

TEST_CASE("triple count follows the construction rules") {
  Rng rng(14);
  auto gdp = Record("GB", 2020, indicators::Kind::kGdpGrowthRate, "-9.7");
  auto youth = Record("GB", 2020, indicators::Kind::kYouthUnemploymentRate, "14.4");
  auto total = Record("GB", 2020, indicators::Kind::kTotalUnemploymentRate, "4.5");
  const std::vector<const indicators::IndicatorRecord *> all = {&gdp, &youth, &total};
  for (int trial = 0; trial < 300; ++trial) {
    KbTweet t = Minimal();
    t.id = "t" + std::to_string(trial);
    if (rng.Below(2)) t.point = corpus::GeoPoint{51.5, -0.12};
    std::set<std::string> tags;
    for (int i = 0, n = rng.Below(6); i < n; ++i) {
      std::string tag = std::string(rng.Below(2) ? "Refugees" : "refugees") +
                        std::to_string(rng.Below(3));
      t.hashtags.push_back(tag);
      tags.insert(tag);
    }
    std::set<std::string> uris;
    for (int i = 0, n = rng.Below(5); i < n; ++i) {
      std::string uri = "https://en.wikipedia.org/wiki/E" + std::to_string(rng.Below(4));
      t.entities.push_back({uri, "E"});
      uris.insert(uri);
    }
    std::vector<const indicators::IndicatorRecord *> matched(
        all.begin(), all.begin() + rng.Below(4));
    if (rng.Below(2)) t.reply_count = rng.Below(10);
    auto triples = TriplifyTweet(t, matched);
    CHECK(triples.size() == ExpectedTweetTriples(t.point.has_value(), tags.size(),
                                                 uris.size(), matched.size(),
                                                 t.reply_count.has_value()));
    std::set<Triple> unique(triples.begin(), triples.end());
    CHECK(unique.size() == triples.size());
  }
}

TEST_CASE("indicator triples") {
  auto gdp = TriplifyIndicator(Record("GB", 2020, indicators::Kind::kGdpGrowthRate, "-9.7"));
  const Term node = Term::Iri(IndicatorIri(Record("GB", 2020, indicators::Kind::kGdpGrowthRate, "-9.7")));
  CHECK(std::count(gdp.begin(), gdp.end(),
                   Triple{node, Name("fibo_ind_ei_ei:hasIndicatorValue"),
                          Term::Literal("-9.7", std::string(rdf::kXsd) + "decimal")}) == 1);
  CHECK(std::count(gdp.begin(), gdp.end(),
                   Triple{node, Name("dc:date"),
                          Term::Literal("2020", std::string(rdf::kXsd) + "gYear")}) == 1);

  auto types = [](const std::vector<Triple> &ts) {
    std::set<std::string> out;
    for (const auto &t : ts)
      if (t.predicate.value == rdf::kRdfType) out.insert(t.object.value);
    return out;
  };
  auto youth = types(TriplifyIndicator(
      Record("GB", 2020, indicators::Kind::kYouthUnemploymentRate, "14.4")));
  auto total = types(TriplifyIndicator(
      Record("GB", 2020, indicators::Kind::kTotalUnemploymentRate, "4.5")));
  CHECK(youth.count(Name("mgkb:YouthUnemploymentRate").value) == 1);
  CHECK(youth.count(Name("mgkb:TotalUnemploymentRate").value) == 0);
  CHECK(total.count(Name("mgkb:TotalUnemploymentRate").value) == 1);
  CHECK(youth.count(Name("fibo_ind_ei_ei:UnemployedPopulation").value) == 1);
  CHECK(youth.count(Name("fibo_fnd_arr_asmt:AssessmentActivity").value) == 1);
  CHECK(youth.count(Name("prov:Organization").value) == 1);
  CHECK(youth.count(Name("fibo_fnd_dt_fd:ExplicitDate").value) == 1);

  CHECK(IndicatorIri(Record("GB", 2019, indicators::Kind::kGdpGrowthRate, "1.4")) !=
        IndicatorIri(Record("GB", 2020, indicators::Kind::kGdpGrowthRate, "-9.7")));
}

TEST_CASE("graph assembly") {
  std::vector<indicators::IndicatorRecord> recs = {
      Record("GB", 2020, indicators::Kind::kGdpGrowthRate, "-9.7"),
      Record("GB", 2019, indicators::Kind::kGdpGrowthRate, "1.4")};
  KbTweet a = Minimal();
  a.hashtags = {"RefugeesWelcome"};
  KbTweet b = Minimal();
  b.id = "1002";
  b.hashtags = {"RefugeesWelcome", "refugees"};
  b.point = corpus::GeoPoint{51.5, -0.1};
  rdf::Graph g = BuildGraph({a, b}, recs);
  const Term post_a = Term::Iri(TweetIri("1001"));
  CHECK(g.Contains({post_a, Name("fibo_fnd_rel_rel:isCharacterizedBy"),
                    Term::Iri(IndicatorIri(recs[0]))}));
  CHECK(!g.Contains({post_a, Name("fibo_fnd_rel_rel:isCharacterizedBy"),
                     Term::Iri(IndicatorIri(recs[1]))}));
  // The shared tag node and the shared organization node are stored once.
  std::size_t expected = SchemaTriples().size() +
                         TriplifyIndicator(recs[0]).size() +
                         TriplifyIndicator(recs[1]).size() +
                         ExpectedTweetTriples(false, 1, 0, 1, false) +
                         ExpectedTweetTriples(true, 2, 0, 1, false) - 2 - 2;
  CHECK(g.size() == expected);
  CHECK_THROWS_AS(BuildGraph({a, a}, recs), Error);

  // Every IRI is absolute and every namespace used is configured.
  rdf::Graph back = rdf::ParseNTriples(rdf::SerializeNTriples(g));
  CHECK(rdf::SameTriples(back, g));
  for (const auto &t : g.Triples()) {
    for (const Term *term : {&t.subject, &t.predicate, &t.object}) {
      if (!term->IsIri()) continue;
      if (StartsWith(term->value, "https://en.wikipedia.org/")) continue;
      bool known = false;
      for (const auto &[p, ns] : DefaultPrefixes())
        known = known || StartsWith(term->value, ns);
      CHECK_MESSAGE(known, term->value);
    }
  }
  std::string ttl = rdf::SerializeTurtle(g);
  CHECK(ttl.find("mgkb:tweet_1001\n    a sioc:Post ;") == std::string::npos);
  CHECK(ttl.find("    a sioc:Post") != std::string::npos);
}

TEST_CASE("shipped namespace config matches the defaults") {
  CHECK(LoadPrefixes("config/namespaces.json") == DefaultPrefixes());
  CHECK_THROWS_AS(Name("nope:x"), Error);
}
