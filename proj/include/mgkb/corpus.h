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

#ifndef MGKB_CORPUS_H_
#define MGKB_CORPUS_H_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mgkb/common.h"

namespace mgkb {
namespace corpus {

struct GeoPoint {
  double latitude = 0;   // degrees, [-90, 90]
  double longitude = 0;  // degrees, [-180, 180]
};

// Geographic metadata of a post. Raw input carries exactly one of the two;
// when both are present the coordinates win.
struct Geo {
  std::optional<GeoPoint> point;
  std::optional<std::string> place_name;
};

struct TweetRecord {
  std::string id;
  std::string text;
  std::string created_at;  // RFC 3339, UTC
  Geo geo;
  std::optional<std::string> country_code;
  std::optional<long> reply_count;

  int Year() const;
};

struct PreprocessedTweet {
  std::string id;
  std::vector<std::string> tokens;
  // Distinct hashtag terms in first-occurrence order; each is also in tokens.
  std::vector<std::string> hashtag_tokens;
  // Hashtags as written (without '#'), used for labels in the graph.
  std::vector<std::string> hashtag_labels;
  int year = 0;
};

// The destination countries in the fixed resolution order.
inline constexpr std::array<std::string_view, 11> kDestinationCountries = {
    "DE", "ES", "PL", "FR", "SE", "GB", "AT", "HU", "CH", "NL", "IT"};

bool IsDestinationCountry(std::string_view code);

struct BoundingBox {
  double lat_min, lat_max, lon_min, lon_max;

  bool Contains(const GeoPoint &p) const {
    return p.latitude >= lat_min && p.latitude <= lat_max &&
           p.longitude >= lon_min && p.longitude <= lon_max;
  }
};

struct CountryEntry {
  std::string code;
  std::vector<std::string> aliases;  // lowercase
  std::vector<BoundingBox> boxes;
};

class Gazetteer {
 public:
  // CSV with header `code,names,lat_min,lat_max,lon_min,lon_max`. `names` is
  // a '|'-separated alias list. A country may span several rows (one box
  // each); aliases accumulate.
  static Gazetteer Load(const std::string &path);
  static Gazetteer Parse(std::string_view csv);

  void Add(const std::string &code, const std::vector<std::string> &aliases,
           const BoundingBox &box);

  // Entries in kDestinationCountries order.
  const std::vector<CountryEntry> &entries() const { return entries_; }
  const CountryEntry *Find(std::string_view code) const;

 private:
  std::vector<CountryEntry> entries_;
};

// Point-in-box over coordinates, then word-bounded case-insensitive alias
// containment over the place name.
std::optional<std::string> ResolveCountry(const Geo &geo,
                                          const Gazetteer &gazetteer);

struct DumpResult {
  std::vector<TweetRecord> records;
  Warnings warnings;
};

// Line-delimited JSON: {"id","text","created_at","geo":{"lat","lon"} |
// {"place"}, optional "reply_count"}. Only the "jsonl" format is known.
DumpResult LoadDump(const std::string &path, std::string_view format = "jsonl");
DumpResult ParseDump(std::string_view contents);

using StopWords = std::unordered_set<std::string>;

// One word per line, '#' comments. A CSV with a single column is accepted.
StopWords LoadStopWords(const std::string &path);

struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<std::string> hashtag_tokens;
  std::vector<std::string> hashtag_labels;
};

// Full normalization. Returns no tokens when fewer than two survive.
TokenizedText PreprocessText(std::string_view text, const StopWords &stopwords);
std::vector<std::string> Preprocess(std::string_view text,
                                    const StopWords &stopwords);

// Empty optional when the tweet has fewer than two tokens.
std::optional<PreprocessedTweet> PreprocessTweet(const TweetRecord &record,
                                                 const StopWords &stopwords);

// Rebuilds text from a preprocessed tweet, re-marking hashtag terms with '#'.
std::string JoinTokens(const PreprocessedTweet &tweet);

std::string ExpandContractions(std::string_view text);
std::string Lemmatize(std::string_view word);

// Terms whose document frequency is at most max_df * |corpus|.
std::set<std::string> PruneByDocumentFrequency(
    const std::vector<PreprocessedTweet> &corpus, double max_df = 0.70);

}  // namespace corpus
}  // namespace mgkb

#endif  // MGKB_CORPUS_H_
