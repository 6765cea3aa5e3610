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

#include <cstdio>
#include <random>
#include <regex>

#include "doctest.h"
#include "mgkb/corpus.h"

using namespace mgkb;
using namespace mgkb::corpus;

namespace {

StopWords TestStopWords() { return LoadStopWords("config/stopwords.txt"); }

Gazetteer TestGazetteer() { return Gazetteer::Load("config/gazetteer.csv"); }

PreprocessedTweet Doc(std::vector<std::string> tokens) {
  PreprocessedTweet t;
  t.tokens = std::move(tokens);
  return t;
}

}  // namespace

TEST_CASE("load_dump: empty file gives no records") {
  std::string path = "/tmp/mgkb_empty_dump.jsonl";
  WriteFile(path, "");
  auto result = LoadDump(path);
  CHECK(result.records.empty());
  CHECK(result.warnings.empty());
}

TEST_CASE("load_dump: malformed line is skipped with a line-numbered warning") {
  std::string dump =
      R"({"id":"a","text":"x","created_at":"2020-01-01T00:00:00Z","geo":{"place":"Paris"}})"
      "\n"
      R"({"id":"b","text":"y","created_at":"2020-01-01T00:00:00Z","geo":{"lat":1,"lon":2}})"
      "\n"
      R"({"text":"no id","created_at":"2020-01-01T00:00:00Z","geo":{"place":"Rome"}})"
      "\n"
      R"({"id":"c","text":"z","created_at":"2021-05-01T00:00:00Z","geo":{"place":"Rome"}})"
      "\n";
  auto result = ParseDump(dump);
  REQUIRE(result.records.size() == 3);
  CHECK(result.records[0].id == "a");
  CHECK(result.records[2].id == "c");
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings.messages[0].find("line 3") != std::string::npos);
}

TEST_CASE("load_dump: fixture of ten records keeps ids in file order") {
  auto lines = ReadLines("tests/data/dump10.jsonl");
  auto result = LoadDump("tests/data/dump10.jsonl");
  REQUIRE(result.records.size() == lines.size());
  CHECK(result.records.size() == 10);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "t%02zu", i + 1);
    CHECK(result.records[i].id == id);
  }
  // Offset timestamps are converted to the UTC year.
  CHECK(result.records[9].Year() == 2014);
  CHECK(result.records[2].Year() == 2019);
}

TEST_CASE("load_dump: unreadable file is fatal") {
  CHECK_THROWS_AS(LoadDump("/nonexistent/dump.jsonl"), Error);
}

TEST_CASE("load_dump: geo validation") {
  auto result = ParseDump(
      R"({"id":"a","text":"x","created_at":"2020-01-01T00:00:00Z","geo":{"lat":91,"lon":0}})"
      "\n"
      R"({"id":"b","text":"x","created_at":"2020-01-01T00:00:00Z","geo":{}})"
      "\n"
      R"({"id":"c","text":"x","created_at":"2020-01-01","geo":{"place":"Rome"}})"
      "\n"
      R"({"id":"d","text":"x","created_at":"2020-01-01T00:00:00Z","geo":{"lat":41.9,"lon":12.5,"place":"Paris"}})"
      "\n"
      R"({"id":"d","text":"dup","created_at":"2020-01-01T00:00:00Z","geo":{"place":"Rome"}})");
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].id == "d");
  CHECK(result.records[0].geo.point.has_value());
  // out of range, empty geo, bad timestamp, both-present note, duplicate id
  CHECK(result.warnings.size() == 5);
}

TEST_CASE("resolve_country: place names") {
  Gazetteer g = TestGazetteer();
  Geo geo;
  geo.place_name = "Budapest, Hungary";
  CHECK(ResolveCountry(geo, g) == std::optional<std::string>("HU"));
  geo.place_name = "Manchester, UK";
  CHECK(ResolveCountry(geo, g) == std::optional<std::string>("GB"));
  // Alias matches respect word boundaries.
  geo.place_name = "Milwaukee, WI";
  CHECK_FALSE(ResolveCountry(geo, g).has_value());
  geo.place_name = "Nowhere";
  CHECK_FALSE(ResolveCountry(geo, g).has_value());
}

TEST_CASE("resolve_country: coordinates match the brute-force box scan") {
  Gazetteer g = TestGazetteer();
  auto oracle = [&](GeoPoint p) -> std::optional<std::string> {
    std::vector<std::string> hits;
    for (const auto &e : g.entries()) {
      for (const auto &b : e.boxes) {
        if (p.latitude >= b.lat_min && p.latitude <= b.lat_max &&
            p.longitude >= b.lon_min && p.longitude <= b.lon_max) {
          hits.push_back(e.code);
        }
      }
    }
    for (auto code : kDestinationCountries) {
      for (const auto &h : hits) {
        if (h == code) return h;
      }
    }
    return std::nullopt;
  };
  Geo geo;
  geo.point = GeoPoint{48.2, 16.37};
  CHECK(oracle(*geo.point) == std::optional<std::string>("AT"));
  CHECK(ResolveCountry(geo, g) == std::optional<std::string>("AT"));

  geo.point = GeoPoint{-33.9, 151.2};
  CHECK_FALSE(ResolveCountry(geo, g).has_value());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(34, 62), lon(-12, 26);
  for (int i = 0; i < 2000; ++i) {
    geo.point = GeoPoint{lat(rng), lon(rng)};
    auto got = ResolveCountry(geo, g);
    CHECK(got == oracle(*geo.point));
    if (got) CHECK(g.Find(*got) != nullptr);
  }
}

TEST_CASE("gazetteer rejects non-destination countries and bad boxes") {
  CHECK_THROWS_AS(Gazetteer::Parse("code,names,a,b,c,d\nUS,usa,1,2,3,4\n"),
                  Error);
  CHECK_THROWS_AS(Gazetteer::Parse("code,names,a,b,c,d\nDE,de,5,2,3,4\n"),
                  Error);
}

TEST_CASE("preprocess: ordered rules") {
  StopWords sw = TestStopWords();
  CHECK(Preprocess("RT @usr I can't stop this!! https://t.co/x", sw) ==
        std::vector<std::string>{"cannot", "stop"});
  CHECK(Preprocess("", sw).empty());
  // Single surviving token: dropped.
  CHECK(Preprocess("#RefugeesWelcome 100%", sw).empty());

  auto t = PreprocessText(
      "<b>Refugees</b> &amp; migrants \xF0\x9F\x98\x80 welcome :) #RefugeesWelcome "
      "(#Refugees) 2015",
      sw);
  CHECK(t.tokens == std::vector<std::string>{"refugee", "migrant", "welcome",
                                             "refugeeswelcome", "refugees"});
  CHECK(t.hashtag_tokens ==
        std::vector<std::string>{"refugeeswelcome", "refugees"});
  CHECK(t.hashtag_labels ==
        std::vector<std::string>{"RefugeesWelcome", "Refugees"});
}

TEST_CASE("lemmatizer") {
  CHECK(Lemmatize("refugees") == "refugee");
  CHECK(Lemmatize("countries") == "country");
  CHECK(Lemmatize("churches") == "church");
  CHECK(Lemmatize("classes") == "class");
  CHECK(Lemmatize("crisis") == "crisis");
  CHECK(Lemmatize("children") == "child");
  CHECK(Lemmatize("mens") == "man");
  CHECK(Lemmatize("status") == "status");
}

TEST_CASE("contractions") {
  CHECK(ExpandContractions("I can't, won't!") == "I cannot, will not!");
  CHECK(ExpandContractions("they're here") == "they are here");
  CHECK(ExpandContractions("don\xE2\x80\x99t") == "do not");
  CHECK(ExpandContractions("#can't @won't") == "#can't @won't");
}

TEST_CASE("preprocess properties over generated tweets") {
  StopWords sw = TestStopWords();
  const std::vector<std::string> pieces = {
      "refugees", "Migrants", "can't", "won't", "@someone", "RT", "#Refugees",
      "#WorldRefugeeDay!", "https://t.co/abc", "www.example.org", "<p>",
      "</a>", "&amp;", "100%", "1,000", "12:30", "2019", "\xF0\x9F\x98\xA1",
      "\xE2\x9D\xA4\xEF\xB8\x8F", ":)", "<3", "xD", "border,", "asylum.",
      "people's", "children", "crises", "(#asylum)", "stop!!", "the", "this",
      "U.S.", "covid19", "\xE2\x80\x9Cquoted\xE2\x80\x9D", "caf\xC3\xA9",
      "well-known", "boxes", "I'm", "they'd", "#rt", "r't", "x.d", "#2020"};
  const std::regex url(R"(^(https?://|www\.))"), mention(R"(@)"),
      html(R"([<>&;])"), numeric(R"(^[0-9]+$)");
  std::mt19937_64 rng(11);
  for (int n = 0; n < 500; ++n) {
    std::uniform_int_distribution<int> len(0, 12);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string text;
    int k = len(rng);
    for (int i = 0; i < k; ++i) text += pieces[pick(rng)] + " ";
    TweetRecord rec;
    rec.id = "x";
    rec.text = text;
    rec.created_at = "2020-01-01T00:00:00Z";
    auto once = PreprocessTweet(rec, sw);
    if (!once) {
      CHECK(Preprocess(text, sw).empty());
      continue;
    }
    CHECK(once->tokens.size() >= 2);
    for (const auto &tok : once->tokens) {
      CHECK_FALSE(std::regex_search(tok, url));
      CHECK_FALSE(std::regex_search(tok, mention));
      CHECK_FALSE(std::regex_search(tok, html));
      CHECK_FALSE(std::regex_search(tok, numeric));
      CHECK(sw.count(tok) == 0);
      CHECK(AsciiLower(tok) == tok);
    }
    for (const auto &tag : once->hashtag_tokens) {
      CHECK(std::find(once->tokens.begin(), once->tokens.end(), tag) !=
            once->tokens.end());
    }
    rec.text = JoinTokens(*once);
    auto twice = PreprocessTweet(rec, sw);
    REQUIRE(twice.has_value());
    CHECK_MESSAGE(twice->tokens == once->tokens, text);
  }
}

TEST_CASE("prune_by_document_frequency") {
  std::vector<PreprocessedTweet> corpus;
  for (int i = 0; i < 10; ++i) {
    std::vector<std::string> toks = {"every"};
    if (i < 7) toks.push_back("seven");
    if (i == 0) toks.push_back("rare");
    corpus.push_back(Doc(toks));
  }
  auto vocab = PruneByDocumentFrequency(corpus, 0.70);
  CHECK(vocab.count("every") == 0);
  CHECK(vocab.count("seven") == 1);
  CHECK(vocab.count("rare") == 1);
  CHECK(PruneByDocumentFrequency({}, 0.7).empty());
  CHECK_THROWS_AS(PruneByDocumentFrequency(corpus, 0.0), Error);

  std::vector<PreprocessedTweet> hundred;
  for (int i = 0; i < 100; ++i) {
    hundred.push_back(Doc(i == 3 ? std::vector<std::string>{"once", "x"}
                                 : std::vector<std::string>{"x"}));
  }
  CHECK(PruneByDocumentFrequency(hundred, 0.7).count("once") == 1);

  // Anti-monotone in max_df.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> term(0, 15), len(1, 6);
  std::vector<PreprocessedTweet> random;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> toks;
    for (int k = len(rng); k > 0; --k) toks.push_back("w" + std::to_string(term(rng)));
    random.push_back(Doc(toks));
  }
  std::uniform_real_distribution<double> df(0.01, 1.0);
  for (int i = 0; i < 50; ++i) {
    double a = df(rng), b = df(rng);
    if (a > b) std::swap(a, b);
    auto low = PruneByDocumentFrequency(random, a);
    auto high = PruneByDocumentFrequency(random, b);
    for (const auto &t : low) CHECK(high.count(t) == 1);
  }
}
