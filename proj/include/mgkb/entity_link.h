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

#ifndef MGKB_ENTITY_LINK_H_
#define MGKB_ENTITY_LINK_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mgkb/common.h"

namespace mgkb {
namespace link {

struct Candidate {
  std::string uri;
  std::string label;
  double prior = 0;
};

// Lowercase surface forms (space-joined token sequences) to candidates
// ranked by prior descending, then URI ascending.
class AliasTable {
 public:
  // Throws on relative URIs, negative priors or a surface whose priors
  // exceed one.
  void Add(const std::string &surface, Candidate candidate);

  // TSV "surface<TAB>uri<TAB>label<TAB>prior"; '#' comment lines.
  static AliasTable Load(const std::string &path);
  static AliasTable Parse(std::string_view contents,
                          const std::string &source = "alias table");

  // Ranked candidates for a surface form; null when absent.
  const std::vector<Candidate> *Find(const std::string &surface) const;
  std::size_t MaxLength() const { return max_tokens_; }
  bool empty() const { return by_surface_.empty(); }
  std::size_t size() const { return by_surface_.size(); }

 private:
  std::map<std::string, std::vector<Candidate>> by_surface_;
  std::size_t max_tokens_ = 0;
};

struct EntityMention {
  std::string tweet_id;
  std::size_t start = 0;  // token span [start, end)
  std::size_t end = 0;
  std::string uri;
  std::string label;
};

// Greedy left-to-right longest match; each match takes its top candidate.
std::vector<EntityMention> Link(const std::string &tweet_id,
                                const std::vector<std::string> &tokens,
                                const AliasTable &table);

// Distinct tweets per entity label, by count descending then label.
std::vector<std::pair<std::string, std::size_t>> EntityFrequency(
    const std::vector<EntityMention> &mentions);

}  // namespace link
}  // namespace mgkb

#endif  // MGKB_ENTITY_LINK_H_
