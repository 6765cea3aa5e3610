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

#include "mgkb/entity_link.h"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <set>

namespace mgkb {
namespace link {
namespace {

bool IsAbsoluteIri(std::string_view uri) {
  std::size_t colon = uri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(uri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = uri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  for (char c : uri)
    if (c == ' ' || c == '<' || c == '>' || c == '"') return false;
  return colon + 1 < uri.size();
}

std::string Normalize(std::string_view surface) {
  std::string out;
  for (const auto &tok : Split(AsciiLower(Trim(surface)), ' ')) {
    if (tok.empty()) continue;
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace

void AliasTable::Add(const std::string &surface, Candidate candidate) {
  std::string key = Normalize(surface);
  if (key.empty()) throw Error("empty alias surface");
  if (!IsAbsoluteIri(candidate.uri))
    throw Error("alias '" + key + "': URI is not absolute: " + candidate.uri);
  if (!(candidate.prior >= 0))
    throw Error("alias '" + key + "': negative prior");
  auto &list = by_surface_[key];
  double sum = candidate.prior;
  for (const auto &c : list) {
    if (c.uri == candidate.uri)
      throw Error("alias '" + key + "': duplicate URI " + candidate.uri);
    sum += c.prior;
  }
  if (sum > 1 + 1e-9) throw Error("alias '" + key + "': priors sum above 1");
  list.push_back(std::move(candidate));
  std::sort(list.begin(), list.end(), [](const Candidate &a, const Candidate &b) {
    if (a.prior != b.prior) return a.prior > b.prior;
    return a.uri < b.uri;
  });
  max_tokens_ = std::max(max_tokens_, Split(key, ' ').size());
}

AliasTable AliasTable::Parse(std::string_view contents,
                             const std::string &source) {
  AliasTable table;
  std::size_t line_no = 0;
  for (const auto &raw : Split(contents, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    auto cells = Split(line, '\t');
    std::string where = source + ": line " + std::to_string(line_no);
    if (cells.size() != 4) throw Error(where + ": expected 4 tab-separated fields");
    char *end = nullptr;
    errno = 0;
    double prior = std::strtod(cells[3].c_str(), &end);
    if (cells[3].empty() || *end != '\0' || errno != 0)
      throw Error(where + ": bad prior '" + cells[3] + "'");
    try {
      table.Add(cells[0], Candidate{cells[1], cells[2], prior});
    } catch (const Error &e) {
      throw Error(where + ": " + e.what());
    }
  }
  return table;
}

AliasTable AliasTable::Load(const std::string &path) {
  return Parse(ReadFile(path), path);
}

const std::vector<Candidate> *AliasTable::Find(
    const std::string &surface) const {
  auto it = by_surface_.find(surface);
  return it == by_surface_.end() ? nullptr : &it->second;
}

std::vector<EntityMention> Link(const std::string &tweet_id,
                                const std::vector<std::string> &tokens,
                                const AliasTable &table) {
  std::vector<EntityMention> out;
  if (table.empty()) return out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(table.MaxLength(), tokens.size() - i);
    bool matched = false;
    for (std::size_t len = longest; len >= 1; --len) {
      std::string surface = tokens[i];
      for (std::size_t j = i + 1; j < i + len; ++j) surface += " " + tokens[j];
      const auto *cands = table.Find(surface);
      if (cands == nullptr || cands->empty()) continue;
      const Candidate &top = cands->front();
      out.push_back({tweet_id, i, i + len, top.uri, top.label});
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return out;
}

std::vector<std::pair<std::string, std::size_t>> EntityFrequency(
    const std::vector<EntityMention> &mentions) {
  std::map<std::string, std::set<std::string>> tweets;
  for (const auto &m : mentions) tweets[m.label].insert(m.tweet_id);
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto &[label, ids] : tweets) out.emplace_back(label, ids.size());
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;
  });
  return out;
}

}  // namespace link
}  // namespace mgkb
