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

#include "mgkb/kb.h"

#include <cctype>
#include <cmath>
#include <regex>
#include <set>
#include <tuple>

#include "json.hpp"

namespace mgkb {
namespace kb {
namespace {

using rdf::Term;
using rdf::Triple;

constexpr char kMgkb[] = "https://migrationskb.github.io/MGKB/ns#";
constexpr char kXsd[] = "http://www.w3.org/2001/XMLSchema#";

// Percent-encodes everything outside the unreserved set.
std::string Encode(std::string_view s) {
  static const char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += c;
    } else {
      out += '%';
      out += kHex[u >> 4];
      out += kHex[u & 0xF];
    }
  }
  return out;
}

Term Iri(const std::string &iri) { return Term::Iri(iri); }
Term Typed(const std::string &lex, const char *xsd_local) {
  return Term::Literal(lex, std::string(kXsd) + xsd_local);
}

[[noreturn]] void Missing(const KbTweet &t, const char *field) {
  throw Error("tweet " + (t.id.empty() ? std::string("<no id>") : t.id) +
              ": missing " + field);
}

bool ValidDateTime(const std::string &s) {
  static const std::regex re(
      R"(-?\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?(Z|[+-]\d{2}:\d{2})?)");
  return std::regex_match(s, re);
}

}  // namespace

const rdf::PrefixMap &DefaultPrefixes() {
  static const rdf::PrefixMap kPrefixes = {
      {"dc", "http://purl.org/dc/terms/"},
      {"fibo_fnd_arr_asmt",
       "https://spec.edmcouncil.org/fibo/ontology/FND/Arrangements/Assessments/"},
      {"fibo_fnd_dt_fd",
       "https://spec.edmcouncil.org/fibo/ontology/FND/DatesAndTimes/FinancialDates/"},
      {"fibo_fnd_rel_rel",
       "https://spec.edmcouncil.org/fibo/ontology/FND/Relations/Relations/"},
      {"fibo_ind_ei_ei",
       "https://spec.edmcouncil.org/fibo/ontology/IND/EconomicIndicators/"
       "EconomicIndicators/"},
      {"mgkb", kMgkb},
      {"nee", "http://www.ics.forth.gr/isl/oae/core#"},
      {"onyx", "http://www.gsi.dit.upm.es/ontologies/onyx/ns#"},
      {"prov", "http://www.w3.org/ns/prov#"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"schema", "http://schema.org/"},
      {"sioc", "http://rdfs.org/sioc/ns#"},
      {"sioc_t", "http://rdfs.org/sioc/types#"},
      {"wna", "http://www.gsi.dit.upm.es/ontologies/wnaffect/ns#"},
      {"xsd", kXsd},
  };
  return kPrefixes;
}

rdf::PrefixMap LoadPrefixes(const std::string &path) {
  rdf::PrefixMap out;
  try {
    auto j = nlohmann::json::parse(ReadFile(path));
    if (!j.is_object()) throw Error(path + ": expected a JSON object");
    for (const auto &[k, v] : j.items()) {
      std::string iri = v.get<std::string>();
      if (!rdf::IsAbsoluteIri(iri))
        throw Error(path + ": prefix " + k + " is not an absolute IRI");
      out[k] = iri;
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(path + ": " + e.what());
  }
  return out;
}

Term Name(std::string_view prefixed) {
  std::size_t colon = prefixed.find(':');
  if (colon == std::string_view::npos)
    throw Error("not a prefixed name: " + std::string(prefixed));
  const auto &prefixes = DefaultPrefixes();
  auto it = prefixes.find(std::string(prefixed.substr(0, colon)));
  if (it == prefixes.end())
    throw Error("unknown prefix in " + std::string(prefixed));
  return Term::Iri(it->second + std::string(prefixed.substr(colon + 1)));
}

std::string TweetIri(const std::string &id) {
  return std::string(kMgkb) + "tweet_" + Encode(id);
}

std::string HashtagIri(const std::string &label) {
  return std::string(kMgkb) + "hashtag_" + Encode(label);
}

std::string IndicatorIri(const indicators::IndicatorRecord &rec) {
  return std::string(kMgkb) + "indicator_" + Encode(rec.country) + "_" +
         std::to_string(rec.year) + "_" +
         std::string(indicators::KindName(rec.kind));
}

Term SentimentCategory(annotate::Sentiment s) {
  switch (s) {
    case annotate::Sentiment::kNegative: return Name("wna:negative-emotion");
    case annotate::Sentiment::kNeutral: return Name("wna:neutral-emotion");
    case annotate::Sentiment::kPositive: return Name("wna:positive-emotion");
  }
  throw Error("bad sentiment");
}

Term HateCategory(annotate::Hate h) {
  switch (h) {
    case annotate::Hate::kHate: return Name("wna:hate");
    case annotate::Hate::kOffensive: return Name("mgkb:offensive");
    case annotate::Hate::kNormal: return Name("mgkb:normal");
  }
  throw Error("bad hate label");
}

std::size_t ExpectedTweetTriples(bool has_coordinates, std::size_t hashtags,
                                 std::size_t entities, std::size_t indicators,
                                 bool has_replies) {
  return 15 + (has_coordinates ? 2 : 0) + 3 * hashtags + 5 * entities +
         indicators + (has_replies ? 4 : 0);
}

std::vector<Triple> TriplifyTweet(
    const KbTweet &t,
    const std::vector<const indicators::IndicatorRecord *> &matched) {
  if (t.id.empty()) Missing(t, "id");
  if (t.created_at.empty()) Missing(t, "created_at");
  if (!ValidDateTime(t.created_at))
    throw Error("tweet " + t.id + ": created_at is not an xsd:dateTime: " +
                t.created_at);
  if (t.year <= 0) Missing(t, "year");
  if (t.country.empty()) Missing(t, "country");
  if (t.topic.empty()) Missing(t, "topic");
  const Term a = Term::Iri(rdf::kRdfType);
  const std::string base = TweetIri(t.id);
  const Term post = Iri(base);
  const Term place = Iri(base + "_place");
  const Term set = Iri(base + "_emotions");
  const Term emo_s = Iri(base + "_sentiment");
  const Term emo_h = Iri(base + "_hate");
  std::vector<Triple> out = {
      {post, a, Name("sioc:Post")},
      {post, Name("dc:created"), Typed(t.created_at, "dateTime")},
      {post, Name("schema:location"), place},
      {place, a, Name("schema:Place")},
      {place, Name("sioc:name"),
       Term::Literal(t.place_name.empty() ? t.country : t.place_name)},
      {place, Name("schema:addressCountry"), Term::Literal(t.country)},
      {post, Name("dc:subject"), Term::Literal(t.topic)},
      {post, Name("onyx:hasEmotionSet"), set},
      {set, a, Name("onyx:EmotionSet")},
      {set, Name("onyx:hasEmotion"), emo_s},
      {emo_s, a, Name("onyx:Emotion")},
      {emo_s, Name("onyx:hasEmotionCategory"), SentimentCategory(t.sentiment)},
      {set, Name("onyx:hasEmotion"), emo_h},
      {emo_h, a, Name("onyx:Emotion")},
      {emo_h, Name("onyx:hasEmotionCategory"), HateCategory(t.hate)},
  };
  if (t.point) {
    if (!std::isfinite(t.point->latitude) || !std::isfinite(t.point->longitude))
      throw Error("tweet " + t.id + ": non-finite coordinates");
    out.push_back({place, Name("schema:latitude"),
                   Typed(FormatDouble(t.point->latitude), "double")});
    out.push_back({place, Name("schema:longitude"),
                   Typed(FormatDouble(t.point->longitude), "double")});
  }
  std::set<std::string> tags;
  for (const auto &label : t.hashtags) {
    if (label.empty()) throw Error("tweet " + t.id + ": empty hashtag");
    if (!tags.insert(label).second) continue;
    Term tag = Iri(HashtagIri(label));
    out.push_back({post, Name("schema:mentions"), tag});
    out.push_back({tag, a, Name("sioc_t:Tag")});
    out.push_back({tag, Name("rdfs:label"), Term::Literal(label)});
  }
  std::set<std::string> uris;
  std::size_t k = 0;
  for (const auto &e : t.entities) {
    if (!uris.insert(e.uri).second) continue;
    Term mention = Iri(base + "_entity" + std::to_string(k++));
    Term uri = Iri(e.uri);
    out.push_back({post, Name("schema:mentions"), mention});
    out.push_back({mention, a, Name("nee:Entity")});
    out.push_back({mention, Name("nee:hasMatchedURI"), uri});
    out.push_back({uri, a, Name("rdfs:Resource")});
    out.push_back({uri, Name("rdfs:label"), Term::Literal(e.label)});
  }
  std::set<std::string> inds;
  for (const auto *rec : matched) {
    std::string iri = IndicatorIri(*rec);
    if (!inds.insert(iri).second) continue;
    out.push_back({post, Name("fibo_fnd_rel_rel:isCharacterizedBy"), Iri(iri)});
  }
  if (t.reply_count) {
    if (*t.reply_count < 0) throw Error("tweet " + t.id + ": negative reply count");
    Term stat = Iri(base + "_replies");
    out.push_back({post, Name("schema:interactionStatistic"), stat});
    out.push_back({stat, a, Name("schema:InteractionCounter")});
    out.push_back({stat, Name("schema:interactionType"), Name("schema:ReplyAction")});
    out.push_back({stat, Name("schema:userInteractionCount"),
                   Typed(std::to_string(*t.reply_count), "integer")});
  }
  return out;
}

std::vector<Triple> TriplifyIndicator(const indicators::IndicatorRecord &rec) {
  using indicators::Kind;
  const Term a = Term::Iri(rdf::kRdfType);
  const std::string base = IndicatorIri(rec);
  const Term node = Iri(base);
  std::vector<Triple> out;
  switch (rec.kind) {
    case Kind::kGdpGrowthRate:
      out.push_back({node, a, Name("fibo_ind_ei_ei:GrossDomesticProduct")});
      break;
    case Kind::kTotalUnemploymentRate:
    case Kind::kYouthUnemploymentRate: {
      bool youth = rec.kind == Kind::kYouthUnemploymentRate;
      Term pop = Iri(base + "_population");
      out.push_back({node, a, Name("fibo_ind_ei_ei:UnemploymentRate")});
      out.push_back({node, a,
                     Name(youth ? "mgkb:YouthUnemploymentRate"
                                : "mgkb:TotalUnemploymentRate")});
      out.push_back({node, Name("mgkb:hasPopulation"), pop});
      out.push_back({pop, a, Name("fibo_ind_ei_ei:UnemployedPopulation")});
      out.push_back({pop, Name("rdfs:label"),
                     Term::Literal(youth ? "youth unemployed population"
                                         : "total unemployed population")});
      break;
    }
    default:
      throw Error("unknown indicator kind");
  }
  if (rec.value_text.empty())
    throw Error("indicator " + base + ": missing value lexical form");
  out.push_back({node, Name("schema:addressCountry"), Term::Literal(rec.country)});
  out.push_back({node, Name("dc:date"), Typed(std::to_string(rec.year), "gYear")});
  out.push_back({node, Name("fibo_ind_ei_ei:hasIndicatorValue"),
                 Typed(rec.value_text, "decimal")});
  // Provenance: who assessed the value and when it was last updated.
  Term activity = Iri(base + "_assessment");
  Term org = Iri(std::string(kMgkb) + "organization_" + Encode(rec.source));
  Term date = Iri(base + "_updated");
  out.push_back({node, Name("prov:wasGeneratedBy"), activity});
  out.push_back({activity, a, Name("fibo_fnd_arr_asmt:AssessmentActivity")});
  out.push_back({activity, Name("prov:wasAssociatedWith"), org});
  out.push_back({org, a, Name("prov:Organization")});
  out.push_back({org, Name("rdfs:label"), Term::Literal(rec.source)});
  out.push_back({activity, Name("mgkb:lastUpdated"), date});
  out.push_back({date, a, Name("fibo_fnd_dt_fd:ExplicitDate")});
  out.push_back({date, Name("fibo_fnd_dt_fd:hasDateValue"),
                 Typed(rec.last_updated, "date")});
  return out;
}

std::vector<Triple> SchemaTriples() {
  const Term sub = Name("rdfs:subClassOf");
  return {
      {Name("fibo_ind_ei_ei:GrossDomesticProduct"), sub,
       Name("mgkb:EconomicIndicators")},
      {Name("fibo_ind_ei_ei:UnemploymentRate"), sub,
       Name("mgkb:EconomicIndicators")},
      {Name("mgkb:YouthUnemploymentRate"), sub,
       Name("fibo_ind_ei_ei:UnemploymentRate")},
      {Name("mgkb:TotalUnemploymentRate"), sub,
       Name("fibo_ind_ei_ei:UnemploymentRate")},
      {Name("fibo_fnd_arr_asmt:AssessmentActivity"), sub, Name("prov:Activity")},
      {Name("prov:Organization"), sub, Name("prov:Agent")},
  };
}

rdf::Graph BuildGraph(const std::vector<KbTweet> &tweets,
                      const std::vector<indicators::IndicatorRecord> &records) {
  rdf::Graph g;
  g.prefixes() = DefaultPrefixes();
  for (const auto &t : SchemaTriples()) g.Add(t);
  std::map<std::pair<std::string, int>,
           std::vector<const indicators::IndicatorRecord *>>
      by_key;
  for (const auto &rec : records) {
    for (const auto &t : TriplifyIndicator(rec)) g.Add(t);
    by_key[{rec.country, rec.year}].push_back(&rec);
  }
  static const std::vector<const indicators::IndicatorRecord *> kNone;
  std::set<std::string> ids;
  for (const auto &tweet : tweets) {
    if (!ids.insert(tweet.id).second)
      throw Error("duplicate tweet id in graph input: " + tweet.id);
    auto it = by_key.find({tweet.country, tweet.year});
    for (const auto &t : TriplifyTweet(tweet, it == by_key.end() ? kNone : it->second))
      g.Add(t);
  }
  return g;
}

}  // namespace kb
}  // namespace mgkb
