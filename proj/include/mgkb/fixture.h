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

#ifndef MGKB_FIXTURE_H_
#define MGKB_FIXTURE_H_

#include <map>
#include <string>
#include <vector>

#include "mgkb/annotate.h"
#include "mgkb/indicators.h"
#include "mgkb/kb.h"
#include "mgkb/rdf.h"

namespace mgkb {
namespace fixture {

// Target statistics for a synthetic graph. Each part is optional.
struct Spec {
  std::string default_country = "DE";
  int default_year = 2020;

  // Distinct tweets per hashtag label.
  struct Count {
    std::string label;
    long count = 0;
  };
  std::vector<Count> hashtags;

  // Tweets per linked entity. Each entity tweet mentions one entity.
  struct Entity {
    std::string uri, label;
    long count = 0;
  };
  std::vector<Entity> entities;

  // Emotions of the entity tweets. When the totals exceed the entity counts
  // the remainder mentions filler entities ranked below every listed one.
  std::string filler_label;
  std::map<annotate::Sentiment, long> sentiment;
  std::map<annotate::Hate, long> hate;

  // Hate tweets per year linked to one country's indicator.
  struct IndicatorRow {
    int year = 0;
    std::string value;
    long hate_tweets = 0;
  };
  std::string indicator_country;
  indicators::Kind indicator_kind = indicators::Kind::kGdpGrowthRate;
  std::string indicator_source, indicator_last_updated;
  std::vector<IndicatorRow> indicator_rows;

  bool empty() const {
    return hashtags.empty() && entities.empty() && sentiment.empty() &&
           hate.empty() && indicator_rows.empty();
  }
};

Spec ParseSpec(const std::string &json_text);
Spec LoadSpec(const std::string &path);

struct Generated {
  std::vector<kb::KbTweet> tweets;
  std::vector<indicators::IndicatorRecord> records;
};

// Throws Error on contradictory targets.
Generated Generate(const Spec &spec);

// Empty spec gives an empty graph; otherwise the kb graph of Generate().
rdf::Graph FixtureGraph(const Spec &spec);

}  // namespace fixture
}  // namespace mgkb

#endif  // MGKB_FIXTURE_H_
