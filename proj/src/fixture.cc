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

#include "mgkb/fixture.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace mgkb {
namespace fixture {
namespace {

using nlohmann::json;

long NonNegative(const json &j, const std::string &what) {
  if (!j.is_number_integer() || j.get<long>() < 0)
    throw Error("fixture spec: " + what + " must be a non-negative integer");
  return j.get<long>();
}

template <typename E>
std::map<E, long> ParseCounts(const json &j, const std::string &what,
                              std::optional<E> (*parse)(std::string_view)) {
  std::map<E, long> out;
  for (const auto &[name, count] : j.items()) {
    auto e = parse(name);
    if (!e) throw Error("fixture spec: unknown " + what + " label '" + name + "'");
    out[*e] = NonNegative(count, what + " count");
  }
  return out;
}

long Total(const auto &counts) {
  long n = 0;
  for (const auto &[k, v] : counts) n += v;
  return n;
}

std::string Padded(long i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%06ld", i);
  return buf;
}

kb::KbTweet Tweet(const std::string &id, const std::string &country, int year) {
  kb::KbTweet t;
  t.id = id;
  t.created_at = std::to_string(year) + "-06-01T12:00:00Z";
  t.year = year;
  t.country = country;
  t.topic = "topic_0";
  return t;
}

}  // namespace

Spec ParseSpec(const std::string &json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(std::string("fixture spec: ") + e.what());
  }
  Spec s;
  s.default_country = j.value("default_country", s.default_country);
  s.default_year = j.value("default_year", s.default_year);
  for (const auto &h : j.value("hashtags", json::array()))
    s.hashtags.push_back({h.at("label").get<std::string>(),
                          NonNegative(h.at("count"), "hashtag count")});
  for (const auto &e : j.value("entities", json::array()))
    s.entities.push_back({e.at("uri").get<std::string>(), e.at("label").get<std::string>(),
                          NonNegative(e.at("count"), "entity count")});
  if (j.contains("entity_emotions")) {
    const json &em = j["entity_emotions"];
    s.filler_label = em.value("filler_label", "");
    s.sentiment = ParseCounts<annotate::Sentiment>(em.value("sentiment", json::object()),
                                                   "sentiment", annotate::ParseSentiment);
    s.hate = ParseCounts<annotate::Hate>(em.value("hate", json::object()), "hate",
                                         annotate::ParseHate);
  }
  if (j.contains("indicator_hate")) {
    const json &ih = j["indicator_hate"];
    s.indicator_country = ih.at("country").get<std::string>();
    auto kind = indicators::ParseKind(ih.at("kind").get<std::string>());
    if (!kind) throw Error("fixture spec: unknown indicator kind");
    s.indicator_kind = *kind;
    s.indicator_source = ih.value("source", "fixture");
    s.indicator_last_updated = ih.value("last_updated", "2021-07-01");
    for (const auto &r : ih.at("rows"))
      s.indicator_rows.push_back({r.at("year").get<int>(), r.at("value").get<std::string>(),
                                  NonNegative(r.at("hate_tweets"), "hate_tweets")});
  }
  return s;
}

Spec LoadSpec(const std::string &path) { return ParseSpec(ReadFile(path)); }

Generated Generate(const Spec &spec) {
  Generated g;

  // Tweet i carries every hashtag whose count exceeds i.
  std::set<std::string> labels;
  long hashtag_tweets = 0;
  for (const auto &h : spec.hashtags) {
    if (!labels.insert(h.label).second)
      throw Error("fixture spec: duplicate hashtag '" + h.label + "'");
    hashtag_tweets = std::max(hashtag_tweets, h.count);
  }
  for (long i = 0; i < hashtag_tweets; ++i) {
    kb::KbTweet t = Tweet("h" + Padded(i), spec.default_country, spec.default_year);
    for (const auto &h : spec.hashtags)
      if (h.count > i) t.hashtags.push_back(h.label);
    g.tweets.push_back(std::move(t));
  }

  // One entity per tweet, listed entities first, then fillers.
  std::set<std::string> uris;
  long listed = 0, min_count = 0;
  for (const auto &e : spec.entities) {
    if (!uris.insert(e.uri).second)
      throw Error("fixture spec: duplicate entity '" + e.uri + "'");
    listed += e.count;
    min_count = min_count == 0 ? e.count : std::min(min_count, e.count);
  }
  long sentiment_total = Total(spec.sentiment), hate_total = Total(spec.hate);
  bool has_emotions = !spec.sentiment.empty() || !spec.hate.empty();
  if (has_emotions && sentiment_total != hate_total)
    throw Error("fixture spec: sentiment total " + std::to_string(sentiment_total) +
                " differs from hate total " + std::to_string(hate_total));
  long entity_tweets = has_emotions ? sentiment_total : listed;
  if (entity_tweets < listed)
    throw Error("fixture spec: emotion total " + std::to_string(entity_tweets) +
                " is below the " + std::to_string(listed) + " entity mentions");
  std::vector<Spec::Entity> all = spec.entities;
  long remaining = entity_tweets - listed;
  if (remaining > 0) {
    if (spec.filler_label.empty())
      throw Error("fixture spec: emotion totals exceed entity counts and no filler_label");
    long cap = spec.entities.empty() ? remaining : min_count - 1;
    if (cap <= 0)
      throw Error("fixture spec: no room for filler entities below the smallest count");
    for (int k = 1; remaining > 0; ++k) {
      long n = std::min(cap, remaining);
      char suffix[16];
      std::snprintf(suffix, sizeof(suffix), " %02d", k);
      std::string label = spec.filler_label + suffix;
      std::string uri = "http://example.org/fixture/entity/" + std::to_string(k);
      all.push_back({uri, label, n});
      remaining -= n;
    }
  }
  std::vector<annotate::Sentiment> sentiments;
  std::vector<annotate::Hate> hates;
  for (const auto &[s, n] : spec.sentiment) sentiments.insert(sentiments.end(), n, s);
  for (const auto &[h, n] : spec.hate) hates.insert(hates.end(), n, h);
  long e_index = 0;
  for (const auto &e : all) {
    for (long i = 0; i < e.count; ++i, ++e_index) {
      kb::KbTweet t = Tweet("e" + Padded(e_index), spec.default_country, spec.default_year);
      t.entities.push_back({e.uri, e.label});
      if (has_emotions) {
        t.sentiment = sentiments[e_index];
        t.hate = hates[e_index];
      }
      g.tweets.push_back(std::move(t));
    }
  }

  // Hate tweets linked to the indicator of their country and year.
  std::set<int> years;
  for (const auto &r : spec.indicator_rows) {
    if (!years.insert(r.year).second)
      throw Error("fixture spec: duplicate indicator year " + std::to_string(r.year));
    std::string csv = "country,year,kind,value,source,last_updated\n" +
                      spec.indicator_country + "," + std::to_string(r.year) + "," +
                      std::string(indicators::KindName(spec.indicator_kind)) + "," + r.value +
                      "," + spec.indicator_source + "," + spec.indicator_last_updated + "\n";
    auto parsed = indicators::ParseIndicators(csv, "fixture");
    g.records.insert(g.records.end(), parsed.begin(), parsed.end());
    for (long i = 0; i < r.hate_tweets; ++i) {
      kb::KbTweet t = Tweet("g" + std::to_string(r.year) + "_" + Padded(i),
                            spec.indicator_country, r.year);
      t.sentiment = annotate::Sentiment::kNegative;
      t.hate = annotate::Hate::kHate;
      g.tweets.push_back(std::move(t));
    }
  }
  if (spec.default_country == spec.indicator_country && !spec.indicator_rows.empty())
    throw Error("fixture spec: default_country must differ from the indicator country");
  return g;
}

rdf::Graph FixtureGraph(const Spec &spec) {
  if (spec.empty()) return rdf::Graph();
  Generated g = Generate(spec);
  return kb::BuildGraph(g.tweets, g.records);
}

}  // namespace fixture
}  // namespace mgkb
