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

#include "mgkb/corpus.h"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "json.hpp"

namespace mgkb {
namespace corpus {

namespace {

using json = nlohmann::json;

bool IsAsciiAlnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool IsAsciiDigit(char c) { return c >= '0' && c <= '9'; }

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Decodes one UTF-8 sequence at text[i]. Invalid bytes decode as U+FFFD with
// length 1.
char32_t DecodeUtf8(std::string_view text, std::size_t i, std::size_t *len) {
  auto b0 = static_cast<unsigned char>(text[i]);
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  }
  int n = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    n = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    n = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    n = 4;
    cp = b0 & 0x07;
  } else {
    *len = 1;
    return 0xFFFD;
  }
  if (i + n > text.size()) {
    *len = 1;
    return 0xFFFD;
  }
  for (int k = 1; k < n; ++k) {
    auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0) != 0x80) {
      *len = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  *len = n;
  return cp;
}

// Emoji, pictographs, dingbats, variation selectors and joiners.
bool IsEmoji(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
         (cp >= 0x2300 && cp <= 0x23FF) || (cp >= 0x2B00 && cp <= 0x2BFF) ||
         (cp >= 0x2190 && cp <= 0x21FF) || (cp >= 0xFE00 && cp <= 0xFE0F) ||
         (cp >= 0xE0020 && cp <= 0xE007F) || cp == 0x200D || cp == 0x20E3 ||
         cp == 0x3030 || cp == 0x303D || cp == 0x3297 || cp == 0x3299 ||
         cp == 0x00A9 || cp == 0x00AE || cp == 0x2122 || cp == 0xFFFD;
}

bool IsUnicodePunct(char32_t cp) {
  return (cp >= 0x00A0 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
         (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
         (cp >= 0xFE30 && cp <= 0xFE4F) || (cp >= 0xFF00 && cp <= 0xFF0F) ||
         (cp >= 0xFF1A && cp <= 0xFF20);
}

bool IsApostrophe(char32_t cp) {
  return cp == '\'' || cp == 0x2019 || cp == 0x2018;
}

bool IsAllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), IsAsciiDigit);
}

// A token with at least one digit and no letters: 100%, 1,000, 12:30, +3.5.
bool IsNumericToken(std::string_view s) {
  bool digit = false;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t len;
    char32_t cp = DecodeUtf8(s, i, &len);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (IsAsciiDigit(c)) {
        digit = true;
      } else if (IsAsciiAlnum(c)) {
        return false;
      }
    } else if (!IsUnicodePunct(cp) && !IsEmoji(cp)) {
      return false;
    }
    i += len;
  }
  return digit;
}

bool IsUrl(std::string_view lower) {
  return StartsWith(lower, "http://") || StartsWith(lower, "https://") ||
         StartsWith(lower, "www.") || lower.find("://") != std::string::npos ||
         StartsWith(lower, "pic.twitter.com");
}

bool IsSmiley(std::string_view t) {
  static const std::unordered_set<std::string> kSmileys = {
      ":)",  ":-)", ":(",  ":-(", ":d",  ":-d", ";)",  ";-)", ":p",  ":-p",
      ":o",  ":-o", ":/",  ":-/", ":\\", ":|",  ":-|", ":*",  ":-*", "<3",
      "</3", ":')", ":'(", "=)",  "=(",  "=d",  "xd",  "x-d", "^^",  "^_^",
      "-_-", "o_o", ":]",  ":[",  ";]",  ";p",  ";d",  ":3",  "(:",  "):",
      "8)",  "b)",  ":$",  ":@",  "d:",  ">:(", ":))", ":((", ":-))"};
  return kSmileys.count(AsciiLower(t)) > 0;
}

// Removes HTML tags and character entities.
std::string StripHtml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '<' && i + 1 < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[i + 1])) ||
         text[i + 1] == '/' || text[i + 1] == '!')) {
      std::size_t close = text.find('>', i + 1);
      if (close != std::string_view::npos) {
        out.push_back(' ');
        i = close;
        continue;
      }
    }
    if (c == '&') {
      std::size_t j = i + 1;
      if (j < text.size() && text[j] == '#') ++j;
      std::size_t start = j;
      while (j < text.size() && IsAsciiAlnum(text[j])) ++j;
      if (j > start && j < text.size() && text[j] == ';' && j - start <= 10) {
        out.push_back(' ');
        i = j;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

// Drops "@name" runs embedded in a token, e.g. "(@user)".
std::string StripMentions(std::string_view token) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == '@') {
      std::size_t j = i + 1;
      while (j < token.size() && (IsAsciiAlnum(token[j]) || token[j] == '_')) ++j;
      if (j > i + 1) {
        out.push_back(' ');
        i = j - 1;
        continue;
      }
    }
    out.push_back(token[i]);
  }
  return out;
}

std::string StripEmoji(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len;
    char32_t cp = DecodeUtf8(text, i, &len);
    if (IsEmoji(cp)) {
      out.push_back(' ');
    } else {
      out.append(text.substr(i, len));
    }
    i += len;
  }
  return out;
}

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsAsciiSpace(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

// Splits on punctuation; apostrophes are deleted rather than split on.
void SplitWords(std::string_view text, std::vector<std::string> *words) {
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len;
    char32_t cp = DecodeUtf8(text, i, &len);
    if (IsApostrophe(cp)) {
      // dropped
    } else if (cp < 0x80 ? !IsAsciiAlnum(static_cast<char>(cp))
                         : (IsUnicodePunct(cp) || IsEmoji(cp))) {
      if (!current.empty()) words->push_back(std::move(current));
      current.clear();
    } else {
      current.append(text.substr(i, len));
    }
    i += len;
  }
  if (!current.empty()) words->push_back(std::move(current));
}

// Length of the hashtag body starting at text[0] (after '#').
std::size_t HashtagBodyLength(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len;
    char32_t cp = DecodeUtf8(text, i, &len);
    bool word = cp < 0x80 ? (IsAsciiAlnum(static_cast<char>(cp)) || cp == '_')
                          : !(IsUnicodePunct(cp) || IsEmoji(cp));
    if (!word) break;
    i += len;
  }
  return i;
}

bool ParseRfc3339(std::string_view s, int *year) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  auto digits = [&](std::size_t pos, std::size_t n, int *out) {
    if (pos + n > s.size()) return false;
    int v = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!IsAsciiDigit(s[pos + k])) return false;
      v = v * 10 + (s[pos + k] - '0');
    }
    *out = v;
    return true;
  };
  int y, mo, d, h, mi, sec;
  if (!digits(0, 4, &y) || s.size() < 20 || s[4] != '-' || !digits(5, 2, &mo) ||
      s[7] != '-' || !digits(8, 2, &d) || (s[10] != 'T' && s[10] != 't') ||
      !digits(11, 2, &h) || s[13] != ':' || !digits(14, 2, &mi) ||
      s[16] != ':' || !digits(17, 2, &sec)) {
    return false;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) {
    return false;
  }
  std::size_t p = 19;
  if (p < s.size() && s[p] == '.') {
    ++p;
    std::size_t start = p;
    while (p < s.size() && IsAsciiDigit(s[p])) ++p;
    if (p == start) return false;
  }
  int offset_minutes = 0;
  if (p < s.size() && (s[p] == 'Z' || s[p] == 'z')) {
    ++p;
  } else if (p < s.size() && (s[p] == '+' || s[p] == '-')) {
    int oh, om;
    if (!digits(p + 1, 2, &oh) || p + 3 >= s.size() || s[p + 3] != ':' ||
        !digits(p + 4, 2, &om)) {
      return false;
    }
    offset_minutes = (s[p] == '+' ? 1 : -1) * (oh * 60 + om);
    p += 6;
  } else {
    return false;
  }
  if (p != s.size()) return false;
  // Only the UTC year matters; it shifts only across a New Year boundary.
  int minutes = h * 60 + mi - offset_minutes;
  if (minutes < 0 && mo == 1 && d == 1) --y;
  if (minutes >= 24 * 60 && mo == 12 && d == 31) ++y;
  *year = y;
  return true;
}

const std::map<std::string, std::string> &ExactContractions() {
  static const std::map<std::string, std::string> kMap = {
      {"can't", "cannot"},      {"cannot", "cannot"},   {"won't", "will not"},
      {"shan't", "shall not"},  {"ain't", "am not"},    {"let's", "let us"},
      {"it's", "it is"},        {"that's", "that is"},  {"what's", "what is"},
      {"there's", "there is"},  {"here's", "here is"},  {"who's", "who is"},
      {"where's", "where is"},  {"he's", "he is"},      {"she's", "she is"},
      {"how's", "how is"},      {"y'all", "you all"},   {"ma'am", "madam"},
      {"o'clock", "of the clock"}};
  return kMap;
}

std::string ExpandWord(std::string_view word) {
  std::string lower = AsciiLower(word);
  auto it = ExactContractions().find(lower);
  if (it != ExactContractions().end()) return it->second;
  static const std::pair<std::string_view, std::string_view> kSuffixes[] = {
      {"n't", " not"}, {"'re", " are"}, {"'ve", " have"},
      {"'ll", " will"}, {"'d", " would"}, {"'m", " am"}};
  for (const auto &[suffix, expansion] : kSuffixes) {
    if (lower.size() > suffix.size() && EndsWith(lower, suffix)) {
      return std::string(word.substr(0, word.size() - suffix.size())) +
             std::string(expansion);
    }
  }
  return std::string(word);
}

}  // namespace

int TweetRecord::Year() const {
  int year = 0;
  if (!ParseRfc3339(created_at, &year)) {
    throw Error("tweet " + id + ": bad created_at '" + created_at + "'");
  }
  return year;
}

bool IsDestinationCountry(std::string_view code) {
  return std::find(kDestinationCountries.begin(), kDestinationCountries.end(),
                   code) != kDestinationCountries.end();
}

// ---------------------------------------------------------------------------
// Gazetteer

void Gazetteer::Add(const std::string &code,
                    const std::vector<std::string> &aliases,
                    const BoundingBox &box) {
  if (!IsDestinationCountry(code)) {
    throw Error("gazetteer: '" + code + "' is not a destination country");
  }
  if (!(box.lat_min < box.lat_max) || !(box.lon_min < box.lon_max) ||
      box.lat_min < -90 || box.lat_max > 90 || box.lon_min < -180 ||
      box.lon_max > 180) {
    throw Error("gazetteer: malformed bounding box for " + code);
  }
  CountryEntry *entry = nullptr;
  for (auto &e : entries_) {
    if (e.code == code) entry = &e;
  }
  if (entry == nullptr) {
    entries_.push_back(CountryEntry{code, {}, {}});
    entry = &entries_.back();
  }
  for (const auto &alias : aliases) {
    std::string a = AsciiLower(Trim(alias));
    if (a.empty()) continue;
    if (std::find(entry->aliases.begin(), entry->aliases.end(), a) ==
        entry->aliases.end()) {
      entry->aliases.push_back(a);
    }
  }
  entry->boxes.push_back(box);
  auto rank = [](const CountryEntry &e) {
    return std::find(kDestinationCountries.begin(), kDestinationCountries.end(),
                     e.code) -
           kDestinationCountries.begin();
  };
  std::stable_sort(entries_.begin(), entries_.end(),
                   [&](const CountryEntry &a, const CountryEntry &b) {
                     return rank(a) < rank(b);
                   });
}

const CountryEntry *Gazetteer::Find(std::string_view code) const {
  for (const auto &e : entries_) {
    if (e.code == code) return &e;
  }
  return nullptr;
}

Gazetteer Gazetteer::Parse(std::string_view csv) {
  Gazetteer g;
  auto lines = Split(csv, '\n');
  bool header = true;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = Trim(lines[n]);
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (StartsWith(line, "code,")) continue;
    }
    auto fields = SplitCsv(line);
    if (fields.size() != 6) {
      throw Error("gazetteer line " + std::to_string(n + 1) +
                  ": expected 6 fields");
    }
    BoundingBox box{};
    try {
      box.lat_min = std::stod(fields[2]);
      box.lat_max = std::stod(fields[3]);
      box.lon_min = std::stod(fields[4]);
      box.lon_max = std::stod(fields[5]);
    } catch (const std::exception &) {
      throw Error("gazetteer line " + std::to_string(n + 1) + ": bad number");
    }
    g.Add(std::string(Trim(fields[0])), Split(fields[1], '|'), box);
  }
  return g;
}

Gazetteer Gazetteer::Load(const std::string &path) {
  return Parse(ReadFile(path));
}

std::optional<std::string> ResolveCountry(const Geo &geo,
                                          const Gazetteer &gazetteer) {
  if (geo.point) {
    for (const auto &entry : gazetteer.entries()) {
      for (const auto &box : entry.boxes) {
        if (box.Contains(*geo.point)) return entry.code;
      }
    }
    return std::nullopt;
  }
  if (geo.place_name) {
    std::string place = AsciiLower(*geo.place_name);
    auto boundary = [&](std::size_t pos) {
      return pos >= place.size() || !IsAsciiAlnum(place[pos]);
    };
    for (const auto &entry : gazetteer.entries()) {
      for (const auto &alias : entry.aliases) {
        for (std::size_t pos = place.find(alias); pos != std::string::npos;
             pos = place.find(alias, pos + 1)) {
          if ((pos == 0 || boundary(pos - 1)) && boundary(pos + alias.size())) {
            return entry.code;
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Dump loading

DumpResult ParseDump(std::string_view contents) {
  DumpResult result;
  std::unordered_set<std::string> seen;
  auto lines = Split(contents, '\n');
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = Trim(lines[n]);
    if (line.empty()) continue;
    std::string where = "line " + std::to_string(n + 1) + ": ";
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      result.warnings.Add(where + "not a JSON object");
      continue;
    }
    TweetRecord rec;
    auto str_field = [&](const char *key, std::string *out) {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string()) return false;
      *out = it->get<std::string>();
      return true;
    };
    if (!str_field("id", &rec.id) || rec.id.empty()) {
      result.warnings.Add(where + "missing id");
      continue;
    }
    if (!str_field("text", &rec.text)) {
      result.warnings.Add(where + "missing text");
      continue;
    }
    int year;
    if (!str_field("created_at", &rec.created_at) ||
        !ParseRfc3339(rec.created_at, &year)) {
      result.warnings.Add(where + "missing or malformed created_at");
      continue;
    }
    auto geo = obj.find("geo");
    if (geo == obj.end() || !geo->is_object()) {
      result.warnings.Add(where + "missing geo");
      continue;
    }
    bool has_lat = geo->contains("lat"), has_lon = geo->contains("lon");
    if (has_lat || has_lon) {
      if (!has_lat || !has_lon || !(*geo)["lat"].is_number() ||
          !(*geo)["lon"].is_number()) {
        result.warnings.Add(where + "malformed coordinates");
        continue;
      }
      GeoPoint p{(*geo)["lat"].get<double>(), (*geo)["lon"].get<double>()};
      if (p.latitude < -90 || p.latitude > 90 || p.longitude < -180 ||
          p.longitude > 180) {
        result.warnings.Add(where + "coordinates out of range");
        continue;
      }
      rec.geo.point = p;
    }
    auto place = geo->find("place");
    if (place != geo->end()) {
      if (!place->is_string() || place->get<std::string>().empty()) {
        result.warnings.Add(where + "malformed place");
        continue;
      }
      rec.geo.place_name = place->get<std::string>();
    }
    if (!rec.geo.point && !rec.geo.place_name) {
      result.warnings.Add(where + "geo has neither coordinates nor place");
      continue;
    }
    if (rec.geo.point && rec.geo.place_name) {
      result.warnings.Add(where + "both coordinates and place; using coordinates");
    }
    std::string code;
    if (str_field("country_code", &code)) rec.country_code = code;
    auto replies = obj.find("reply_count");
    if (replies != obj.end()) {
      if (!replies->is_number_integer() || replies->get<long>() < 0) {
        result.warnings.Add(where + "malformed reply_count");
        continue;
      }
      rec.reply_count = replies->get<long>();
    }
    if (!seen.insert(rec.id).second) {
      result.warnings.Add(where + "duplicate id " + rec.id);
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

DumpResult LoadDump(const std::string &path, std::string_view format) {
  if (format != "jsonl") {
    throw Error("unknown dump format '" + std::string(format) + "'");
  }
  return ParseDump(ReadFile(path));
}

StopWords LoadStopWords(const std::string &path) {
  StopWords words;
  for (const auto &raw : ReadLines(path)) {
    std::string_view line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::string word = AsciiLower(Trim(SplitCsv(line)[0]));
    if (!word.empty()) words.insert(word);
  }
  return words;
}

// ---------------------------------------------------------------------------
// Normalization

std::string ExpandContractions(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsAsciiSpace(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !IsAsciiSpace(text[i])) ++i;
    std::string token(text.substr(start, i - start));
    // Normalize typographic apostrophes so the tables below apply.
    for (std::size_t p = token.find("\xE2\x80\x99"); p != std::string::npos;
         p = token.find("\xE2\x80\x99", p)) {
      token.replace(p, 3, "'");
    }
    // Expand the leading word; keep any trailing punctuation.
    std::size_t core_end = token.size();
    while (core_end > 0 && !IsAsciiAlnum(token[core_end - 1])) --core_end;
    std::size_t core_start = 0;
    while (core_start < core_end && !IsAsciiAlnum(token[core_start]) &&
           token[core_start] != '#' && token[core_start] != '@') {
      ++core_start;
    }
    std::string_view core =
        std::string_view(token).substr(core_start, core_end - core_start);
    if (core.find('\'') != std::string_view::npos && !core.empty() &&
        core[0] != '#' && core[0] != '@') {
      out += token.substr(0, core_start);
      out += ExpandWord(core);
      out += token.substr(core_end);
    } else {
      out += token;
    }
  }
  return out;
}

std::string Lemmatize(std::string_view word) {
  static const std::unordered_map<std::string, std::string> kExceptions = {
      {"children", "child"}, {"men", "man"},       {"women", "woman"},
      {"people", "people"},  {"feet", "foot"},     {"teeth", "tooth"},
      {"mice", "mouse"},     {"geese", "goose"},   {"lives", "life"},
      {"wives", "wife"},     {"knives", "knife"},  {"wolves", "wolf"},
      {"leaves", "leaf"},    {"thieves", "thief"}, {"halves", "half"},
      {"shelves", "shelf"},  {"crises", "crisis"}, {"analyses", "analysis"},
      {"news", "news"},      {"series", "series"}, {"species", "species"},
      {"is", "be"},          {"are", "be"},        {"was", "be"},
      {"were", "be"},        {"been", "be"},       {"am", "be"},
      {"has", "have"},       {"had", "have"},      {"does", "do"},
      {"did", "do"},         {"done", "do"},       {"goes", "go"},
      {"went", "go"},        {"gone", "go"},       {"gets", "get"},
      {"got", "get"},        {"made", "make"},     {"makes", "make"},
      {"said", "say"},       {"says", "say"},      {"took", "take"},
      {"taken", "take"},     {"takes", "take"},    {"came", "come"},
      {"comes", "come"},     {"gave", "give"},     {"given", "give"},
      {"gives", "give"},     {"this", "this"},     {"us", "us"},
      {"its", "its"},        {"his", "his"},       {"hers", "hers"},
      {"yes", "yes"},        {"bus", "bus"},       {"gas", "gas"},
      {"always", "always"},  {"perhaps", "perhaps"}};
  std::string w = AsciiLower(word);
  auto it = kExceptions.find(w);
  if (it != kExceptions.end()) return it->second;
  std::string r = w;
  if (w.size() > 4 && EndsWith(w, "ies")) {
    r = w.substr(0, w.size() - 3) + "y";
  } else if (EndsWith(w, "sses")) {
    r = w.substr(0, w.size() - 2);
  } else if (w.size() > 4 && (EndsWith(w, "xes") || EndsWith(w, "ches") ||
                              EndsWith(w, "shes"))) {
    r = w.substr(0, w.size() - 2);
  } else if (w.size() > 3 && EndsWith(w, "s") && !EndsWith(w, "ss") &&
             !EndsWith(w, "us") && !EndsWith(w, "is")) {
    r = w.substr(0, w.size() - 1);
  }
  // Exception values are fixed points of the suffix rules, so mapping the
  // stripped form once more keeps Lemmatize idempotent ("mens" -> "man").
  it = kExceptions.find(r);
  return it != kExceptions.end() ? it->second : r;
}

TokenizedText PreprocessText(std::string_view text, const StopWords &stopwords) {
  std::string expanded = ExpandContractions(text);
  std::string cleaned = StripEmoji(StripHtml(expanded));

  TokenizedText out;
  std::set<std::string> seen_tags, seen_labels;
  auto keep = [&](const std::string &term) {
    return !term.empty() && !IsAllDigits(term) && stopwords.count(term) == 0;
  };
  auto add_words = [&](std::string_view piece) {
    std::vector<std::string> words;
    SplitWords(piece, &words);
    for (const auto &word : words) {
      if (IsAllDigits(word)) continue;
      std::string lemma = AsciiLower(Lemmatize(word));
      // Alphanumeric leftovers that would be stripped on a second pass.
      if (lemma == "rt" || IsSmiley(lemma)) continue;
      if (keep(lemma)) out.tokens.push_back(lemma);
    }
  };

  for (std::string_view token : SplitWhitespace(cleaned)) {
    std::string lower = AsciiLower(token);
    if (token[0] == '@') continue;
    std::string no_mentions = StripMentions(token);
    token = no_mentions;
    if (lower == "rt") continue;
    if (IsUrl(lower)) continue;
    if (IsSmiley(token)) continue;
    if (IsNumericToken(token)) continue;

    // Hashtags may be preceded by punctuation ("(#refugees").
    std::size_t hash = token.find('#');
    while (hash != std::string_view::npos) {
      add_words(token.substr(0, hash));
      std::string_view rest = token.substr(hash + 1);
      std::size_t body = HashtagBodyLength(rest);
      if (body > 0) {
        std::string label(rest.substr(0, body));
        std::string term;
        for (char c : AsciiLower(label)) {
          if (c != '_') term.push_back(c);
        }
        if (keep(term)) {
          out.tokens.push_back(term);
          if (seen_tags.insert(term).second) out.hashtag_tokens.push_back(term);
          if (seen_labels.insert(label).second) {
            out.hashtag_labels.push_back(label);
          }
        }
      }
      token = rest.substr(body);
      hash = token.find('#');
    }
    add_words(token);
  }

  if (out.tokens.size() < 2) return TokenizedText{};
  return out;
}

std::vector<std::string> Preprocess(std::string_view text,
                                    const StopWords &stopwords) {
  return PreprocessText(text, stopwords).tokens;
}

std::optional<PreprocessedTweet> PreprocessTweet(const TweetRecord &record,
                                                 const StopWords &stopwords) {
  TokenizedText t = PreprocessText(record.text, stopwords);
  if (t.tokens.empty()) return std::nullopt;
  PreprocessedTweet out;
  out.id = record.id;
  out.tokens = std::move(t.tokens);
  out.hashtag_tokens = std::move(t.hashtag_tokens);
  out.hashtag_labels = std::move(t.hashtag_labels);
  out.year = record.Year();
  return out;
}

std::string JoinTokens(const PreprocessedTweet &tweet) {
  std::set<std::string> tags(tweet.hashtag_tokens.begin(),
                             tweet.hashtag_tokens.end());
  std::string out;
  for (const auto &token : tweet.tokens) {
    if (!out.empty()) out.push_back(' ');
    if (tags.count(token)) out.push_back('#');
    out += token;
  }
  return out;
}

std::set<std::string> PruneByDocumentFrequency(
    const std::vector<PreprocessedTweet> &corpus, double max_df) {
  if (!(max_df > 0 && max_df <= 1)) {
    throw Error("max_df must be in (0, 1]");
  }
  std::map<std::string, std::size_t> df;
  for (const auto &tweet : corpus) {
    std::set<std::string> distinct(tweet.tokens.begin(), tweet.tokens.end());
    for (const auto &term : distinct) ++df[term];
  }
  const double limit = max_df * static_cast<double>(corpus.size());
  std::set<std::string> vocab;
  for (const auto &[term, count] : df) {
    // Inclusive boundary, with slack for products such as 0.7 * 10.
    if (static_cast<double>(count) <= limit + 1e-9) vocab.insert(term);
  }
  return vocab;
}

}  // namespace corpus
}  // namespace mgkb
