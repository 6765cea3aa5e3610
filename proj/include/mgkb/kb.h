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

#ifndef MGKB_KB_H_
#define MGKB_KB_H_

#include <optional>
#include <string>
#include <vector>

#include "mgkb/annotate.h"
#include "mgkb/corpus.h"
#include "mgkb/indicators.h"
#include "mgkb/rdf.h"

namespace mgkb {
namespace kb {

// The shipped prefix map (config/namespaces.json holds the same entries).
const rdf::PrefixMap &DefaultPrefixes();
// JSON object prefix -> namespace IRI.
rdf::PrefixMap LoadPrefixes(const std::string &path);

// Expands "prefix:local" against the default prefixes; throws on an unknown
// prefix.
rdf::Term Name(std::string_view prefixed);

struct LinkedEntity {
  std::string uri;
  std::string label;
};

struct KbTweet {
  std::string id;
  std::string created_at;  // xsd:dateTime lexical form
  int year = 0;            // UTC year of created_at
  std::string country;
  std::string place_name;  // falls back to the country code when empty
  std::optional<corpus::GeoPoint> point;
  std::string topic;
  annotate::Sentiment sentiment = annotate::Sentiment::kNeutral;
  annotate::Hate hate = annotate::Hate::kNormal;
  std::vector<std::string> hashtags;  // original case, duplicates ignored
  std::vector<LinkedEntity> entities;  // duplicate URIs ignored
  std::optional<long> reply_count;
};

// IRIs of the generated nodes.
std::string TweetIri(const std::string &id);
std::string HashtagIri(const std::string &label);
std::string IndicatorIri(const indicators::IndicatorRecord &rec);

rdf::Term SentimentCategory(annotate::Sentiment s);
rdf::Term HateCategory(annotate::Hate h);

// The tweet's own triples. `matched` are the indicators of the tweet's
// (country, year). Throws naming the tweet and field when one is missing.
std::vector<rdf::Triple> TriplifyTweet(
    const KbTweet &tweet,
    const std::vector<const indicators::IndicatorRecord *> &matched);

// Base triples plus the optional parts, as TriplifyTweet emits them.
std::size_t ExpectedTweetTriples(bool has_coordinates, std::size_t hashtags,
                                 std::size_t entities, std::size_t indicators,
                                 bool has_replies);

std::vector<rdf::Triple> TriplifyIndicator(
    const indicators::IndicatorRecord &rec);

// Class hierarchy of the indicator and provenance classes.
std::vector<rdf::Triple> SchemaTriples();

// Whole graph: schema, every indicator, every tweet linked to the indicators
// of its country and year.
rdf::Graph BuildGraph(const std::vector<KbTweet> &tweets,
                      const std::vector<indicators::IndicatorRecord> &records);

}  // namespace kb
}  // namespace mgkb

#endif  // MGKB_KB_H_
