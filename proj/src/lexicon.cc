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

#include "mgkb/lexicon.h"

#include <algorithm>
#include <unordered_map>

namespace mgkb {
namespace lexicon {

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kSeed:
      return "seed";
    case Origin::kEmbeddingExpansion:
      return "embedding-expansion";
    case Origin::kHashtagMining:
      return "hashtag-mining";
    case Origin::kManual:
      return "manual";
  }
  return "unknown";
}

void Lexicon::Merge(const Lexicon &other) {
  keywords.insert(other.keywords.begin(), other.keywords.end());
  hashtags.insert(other.hashtags.begin(), other.hashtags.end());
  for (const auto &[term, origin] : other.provenance) provenance.emplace(term, origin);
}

std::vector<Ranking> ExpandSeeds(const std::vector<std::string> &seeds,
                                 const embed::SkipGramModel &model, int k) {
  if (k < 0) throw Error("expand_seeds: k must be non-negative");
  std::vector<Ranking> result;
  for (const auto &seed : seeds) {
    int seed_index = model.vocab.Index(seed);
    if (seed_index < 0) throw Error("seed not in vocabulary: '" + seed + "'");
    Ranking ranking;
    if (k > 0) {
      auto seed_vec = model.Vector(seed_index);
      for (int i = 0; i < model.vocab.size(); ++i) {
        if (i == seed_index) continue;
        ranking.emplace_back(model.vocab.Term(i),
                             embed::Cosine(seed_vec, model.Vector(i)));
      }
      auto better = [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      };
      std::size_t keep = std::min<std::size_t>(k, ranking.size());
      std::partial_sort(ranking.begin(), ranking.begin() + keep, ranking.end(),
                        better);
      ranking.resize(keep);
    }
    result.push_back(std::move(ranking));
  }
  return result;
}

std::vector<std::pair<std::string, std::size_t>> SelectPopularHashtags(
    const std::vector<corpus::PreprocessedTweet> &corpus,
    std::size_t min_tweets) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto &tweet : corpus) {
    std::set<std::string> distinct(tweet.hashtag_tokens.begin(),
                                   tweet.hashtag_tokens.end());
    for (const auto &tag : distinct) ++counts[tag];
  }
  std::vector<std::pair<std::string, std::size_t>> popular;
  for (const auto &[tag, count] : counts) {
    if (count > min_tweets) popular.emplace_back(tag, count);
  }
  std::sort(popular.begin(), popular.end(), [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return popular;
}

std::vector<std::string> LoadAllowlist(const std::string &path) {
  std::vector<std::string> terms;
  for (const auto &raw : ReadLines(path)) {
    std::string_view line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    terms.push_back(AsciiLower(line));
  }
  return terms;
}

Lexicon ApplyAllowlist(const std::vector<Candidate> &candidates,
                       const std::string &allowlist_file, Target target,
                       const corpus::StopWords *stopwords) {
  const auto allowlist = LoadAllowlist(allowlist_file);
  const std::set<std::string> allowed(allowlist.begin(), allowlist.end());
  Lexicon lexicon;
  auto &terms = target == Target::kKeywords ? lexicon.keywords : lexicon.hashtags;
  auto admit = [&](const std::string &term, Origin origin) {
    if (term.empty() || (stopwords && stopwords->count(term))) return;
    terms.insert(term);
    lexicon.provenance.emplace(term, origin);
  };
  for (const auto &c : candidates) {
    std::string term = AsciiLower(c.term);
    if (allowed.count(term)) admit(term, c.origin);
  }
  for (const auto &term : allowlist) admit(term, Origin::kManual);
  return lexicon;
}

}  // namespace lexicon
}  // namespace mgkb
