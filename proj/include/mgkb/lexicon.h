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

#ifndef MGKB_LEXICON_H_
#define MGKB_LEXICON_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mgkb/corpus.h"
#include "mgkb/skipgram.h"

namespace mgkb {
namespace lexicon {

enum class Origin { kSeed, kEmbeddingExpansion, kHashtagMining, kManual };

std::string_view OriginName(Origin origin);

struct Candidate {
  std::string term;
  Origin origin;
};

// Crawl/filter vocabulary. Terms are lowercase and never stop words.
struct Lexicon {
  std::set<std::string> keywords;
  std::set<std::string> hashtags;
  std::map<std::string, Origin> provenance;

  // Union; existing provenance entries win.
  void Merge(const Lexicon &other);
};

using Ranking = std::vector<std::pair<std::string, double>>;

// For each seed, the k nearest vocabulary terms by cosine, seed excluded,
// ties broken lexicographically.
std::vector<Ranking> ExpandSeeds(const std::vector<std::string> &seeds,
                                 const embed::SkipGramModel &model,
                                 int k = 50);

// Hashtags used in strictly more than min_tweets distinct tweets, by count
// descending then hashtag ascending.
std::vector<std::pair<std::string, std::size_t>> SelectPopularHashtags(
    const std::vector<corpus::PreprocessedTweet> &corpus,
    std::size_t min_tweets = 100);

// One term per line; '#' starts a comment line.
std::vector<std::string> LoadAllowlist(const std::string &path);

enum class Target { kKeywords, kHashtags };

// Keeps the candidates that are allowlisted; allowlist-only terms enter with
// origin kManual. Terms in `stopwords` are dropped.
Lexicon ApplyAllowlist(const std::vector<Candidate> &candidates,
                       const std::string &allowlist_file,
                       Target target = Target::kKeywords,
                       const corpus::StopWords *stopwords = nullptr);

}  // namespace lexicon
}  // namespace mgkb

#endif  // MGKB_LEXICON_H_
