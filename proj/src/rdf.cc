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

#include "mgkb/rdf.h"

#include <algorithm>
#include <cctype>

namespace mgkb {
namespace rdf {
namespace {

void AppendUtf8(std::string &out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string EscapeLiteral(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default:
        if ((u < 0x20 && c != '\t') || u == 0x7F) {
          static const char kHex[] = "0123456789ABCDEF";
          out += "\\u00";
          out += kHex[u >> 4];
          out += kHex[u & 0xF];
        } else {
          out += c;
        }
    }
  }
  return out;
}

bool ValidBlankLabel(std::string_view s) {
  if (s.empty() || s.back() == '.' || s.front() == '.' || s.front() == '-')
    return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x80 || std::isalnum(u) || c == '_' || c == '-' || c == '.')
      continue;
    return false;
  }
  return true;
}

bool ValidLanguage(std::string_view s) {
  if (s.empty()) return false;
  bool first = true;
  std::size_t run = 0;
  for (char c : s) {
    if (c == '-') {
      if (run == 0) return false;
      first = false;
      run = 0;
      continue;
    }
    unsigned char u = static_cast<unsigned char>(c);
    if (first ? !std::isalpha(u) : !std::isalnum(u)) return false;
    ++run;
  }
  return run > 0;
}

bool SafeLocal(std::string_view s) {
  if (s.empty() || s.back() == '.') return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char u = static_cast<unsigned char>(s[i]);
    bool ok = std::isalnum(u) || u == '_' || (i > 0 && (u == '-' || u == '.'));
    if (!ok) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view line, std::size_t line_no)
      : s_(line), line_(line_no) {}

  Triple Parse() {
    Triple t;
    SkipWs();
    t.subject = SubjectOrObject(false);
    SkipWs();
    if (Peek() != '<') Fail("expected predicate IRI");
    t.predicate = Term::Iri(IriRef());
    SkipWs();
    t.object = SubjectOrObject(true);
    SkipWs();
    if (Peek() != '.') Fail("expected '.'");
    ++pos_;
    SkipWs();
    if (pos_ < s_.size() && s_[pos_] != '#') Fail("unexpected text after '.'");
    return t;
  }

 private:
  [[noreturn]] void Fail(const std::string &msg) const {
    throw Error("N-Triples line " + std::to_string(line_) + ", column " +
                std::to_string(pos_ + 1) + ": " + msg);
  }

  char Peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void SkipWs() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::uint32_t Hex(int digits) {
    std::uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      char c = Peek();
      if (!std::isxdigit(static_cast<unsigned char>(c))) Fail("bad \\u escape");
      v = v * 16 + (std::isdigit(static_cast<unsigned char>(c))
                        ? c - '0'
                        : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
      ++pos_;
    }
    if (v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF)) Fail("bad code point");
    return v;
  }

  std::string IriRef() {
    const std::size_t begin = pos_;
    ++pos_;  // '<'
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) Fail("unterminated IRI");
      char c = s_[pos_];
      if (c == '>') break;
      if (c == '\\') {
        ++pos_;
        char k = Peek();
        ++pos_;
        if (k == 'u') AppendUtf8(out, Hex(4));
        else if (k == 'U') AppendUtf8(out, Hex(8));
        else Fail("bad escape in IRI");
        continue;
      }
      out += c;
      ++pos_;
    }
    ++pos_;
    if (!IsAbsoluteIri(out)) {
      pos_ = begin;
      Fail("invalid or relative IRI <" + out + ">");
    }
    return out;
  }

  std::string Label() {
    pos_ += 2;  // "_:"
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t') ++pos_;
    // A '.' directly after the label terminates the statement.
    std::size_t end = pos_;
    if (end > start && s_[end - 1] == '.') --end;
    pos_ = end;
    std::string label(s_.substr(start, end - start));
    if (!ValidBlankLabel(label)) Fail("bad blank node label");
    return label;
  }

  Term SubjectOrObject(bool object) {
    char c = Peek();
    if (c == '<') return Term::Iri(IriRef());
    if (c == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':')
      return Term::Blank(Label());
    if (object && c == '"') return LiteralTerm();
    Fail(object ? "expected object" : "expected subject");
  }

  Term LiteralTerm() {
    ++pos_;
    std::string lex;
    while (true) {
      if (pos_ >= s_.size()) Fail("unterminated literal");
      char c = s_[pos_];
      if (c == '"') break;
      if (c == '\\') {
        ++pos_;
        char k = Peek();
        ++pos_;
        switch (k) {
          case 't': lex += '\t'; break;
          case 'b': lex += '\b'; break;
          case 'n': lex += '\n'; break;
          case 'r': lex += '\r'; break;
          case 'f': lex += '\f'; break;
          case '"': lex += '"'; break;
          case '\'': lex += '\''; break;
          case '\\': lex += '\\'; break;
          case 'u': AppendUtf8(lex, Hex(4)); break;
          case 'U': AppendUtf8(lex, Hex(8)); break;
          default: --pos_; Fail("bad escape in literal");
        }
        continue;
      }
      if (c == '\n' || c == '\r') Fail("raw line break in literal");
      lex += c;
      ++pos_;
    }
    ++pos_;
    if (Peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-'))
        ++pos_;
      std::string lang(s_.substr(start, pos_ - start));
      if (!ValidLanguage(lang)) Fail("bad language tag");
      return Term::LangLiteral(lex, lang);
    }
    if (Peek() == '^') {
      if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '^') Fail("expected '^^'");
      pos_ += 2;
      if (Peek() != '<') Fail("expected datatype IRI");
      return Term::Literal(lex, IriRef());
    }
    return Term::Literal(lex);
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// Serialized terms cached per id, and the id triples sorted by them.
std::vector<std::pair<Graph::IdTriple, std::array<const std::string *, 3>>>
SortedTriples(const Graph &g, std::vector<std::string> &cache) {
  cache.assign(g.TermCount(), "");
  std::vector<bool> done(g.TermCount(), false);
  std::vector<std::pair<Graph::IdTriple, std::array<const std::string *, 3>>> out;
  out.reserve(g.size());
  for (const auto &t : g.id_triples()) {
    for (Graph::Id id : t) {
      if (!done[id]) {
        cache[id] = ToNTriples(g.term(id));
        done[id] = true;
      }
    }
  }
  for (const auto &t : g.id_triples())
    out.push_back({t, {&cache[t[0]], &cache[t[1]], &cache[t[2]]}});
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    for (int i = 0; i < 3; ++i) {
      int c = a.second[i]->compare(*b.second[i]);
      if (c != 0) return c < 0;
    }
    return false;
  });
  return out;
}

}  // namespace

Term Term::Iri(std::string iri) {
  Term t;
  t.kind = Kind::kIri;
  t.value = std::move(iri);
  return t;
}

Term Term::Blank(std::string label) {
  Term t;
  t.kind = Kind::kBlank;
  t.value = std::move(label);
  return t;
}

Term Term::Literal(std::string lexical, std::string datatype) {
  Term t;
  t.kind = Kind::kLiteral;
  t.value = std::move(lexical);
  if (datatype != kXsdString) t.datatype = std::move(datatype);
  return t;
}

Term Term::LangLiteral(std::string lexical, std::string language) {
  Term t;
  t.kind = Kind::kLiteral;
  t.value = std::move(lexical);
  t.language = AsciiLower(language);
  return t;
}

std::string Term::EffectiveDatatype() const {
  if (!language.empty()) return kRdfLangString;
  return datatype.empty() ? kXsdString : datatype;
}

bool IsAbsoluteIri(std::string_view iri) {
  std::size_t colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return false;
  }
  for (char c : iri) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
        c == '|' || c == '^' || c == '`' || c == '\\')
      return false;
  }
  return true;
}

std::string ToNTriples(const Term &t) {
  switch (t.kind) {
    case Term::Kind::kIri:
      return "<" + t.value + ">";
    case Term::Kind::kBlank:
      return "_:" + t.value;
    case Term::Kind::kLiteral: {
      std::string out = "\"" + EscapeLiteral(t.value) + "\"";
      if (!t.language.empty()) out += "@" + t.language;
      else if (!t.datatype.empty()) out += "^^<" + t.datatype + ">";
      return out;
    }
  }
  return "";
}

Graph::Id Graph::Intern(const Term &term) {
  std::string key = ToNTriples(term);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Id id = static_cast<Id>(terms_.size());
  terms_.push_back(term);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<Graph::Id> Graph::Find(const Term &term) const {
  auto it = index_.find(ToNTriples(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Graph::Add(const Term &s, const Term &p, const Term &o) {
  if (s.IsLiteral()) throw Error("literal in subject position");
  if (!p.IsIri()) throw Error("predicate must be an IRI");
  for (const Term *t : {&s, &p, &o}) {
    if (t->IsIri() && !IsAbsoluteIri(t->value))
      throw Error("not an absolute IRI: " + t->value);
    if (t->IsBlank() && !ValidBlankLabel(t->value))
      throw Error("bad blank node label: " + t->value);
    if (t->IsLiteral()) {
      if (!t->language.empty() && !t->datatype.empty())
        throw Error("literal with both language and datatype");
      if (!t->datatype.empty() && !IsAbsoluteIri(t->datatype))
        throw Error("not an absolute datatype IRI: " + t->datatype);
      if (!t->language.empty() && !ValidLanguage(t->language))
        throw Error("bad language tag: " + t->language);
    }
  }
  return triples_.insert({Intern(s), Intern(p), Intern(o)}).second;
}

void Graph::Merge(const Graph &other) {
  for (const auto &t : other.triples_)
    triples_.insert({Intern(other.term(t[0])), Intern(other.term(t[1])),
                     Intern(other.term(t[2]))});
  for (const auto &[k, v] : other.prefixes_) prefixes_.emplace(k, v);
}

bool Graph::Contains(const Triple &t) const {
  auto s = Find(t.subject), p = Find(t.predicate), o = Find(t.object);
  return s && p && o && triples_.count({*s, *p, *o}) > 0;
}

std::vector<Triple> Graph::Triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (const auto &t : triples_)
    out.push_back({terms_[t[0]], terms_[t[1]], terms_[t[2]]});
  return out;
}

std::string SerializeNTriples(const Graph &graph) {
  std::vector<std::string> cache;
  std::string out;
  for (const auto &[ids, s] : SortedTriples(graph, cache)) {
    out += *s[0];
    out += ' ';
    out += *s[1];
    out += ' ';
    out += *s[2];
    out += " .\n";
  }
  return out;
}

Graph ParseNTriples(std::string_view text) {
  Graph g;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    std::string_view trimmed = Trim(line);
    if (!trimmed.empty() && trimmed[0] != '#') {
      Triple t = Parser(line, line_no).Parse();
      try {
        g.Add(t);
      } catch (const Error &e) {
        throw Error("N-Triples line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return g;
}

std::string SerializeTurtle(const Graph &graph) {
  std::string out;
  for (const auto &[prefix, iri] : graph.prefixes())
    out += "@prefix " + prefix + ": <" + iri + "> .\n";
  if (!graph.prefixes().empty()) out += '\n';
  auto iri = [&](const std::string &v) {
    std::string best_prefix;
    std::size_t best_len = 0;
    for (const auto &[prefix, ns] : graph.prefixes()) {
      if (ns.size() > best_len && StartsWith(v, ns) &&
          SafeLocal(std::string_view(v).substr(ns.size()))) {
        best_prefix = prefix;
        best_len = ns.size();
      }
    }
    if (best_len == 0) return "<" + v + ">";
    return best_prefix + ":" + v.substr(best_len);
  };
  auto term = [&](const Term &t) {
    if (t.IsIri()) return iri(t.value);
    if (t.IsLiteral() && t.language.empty() && !t.datatype.empty())
      return "\"" + EscapeLiteral(t.value) + "\"^^" + iri(t.datatype);
    return ToNTriples(t);
  };
  std::vector<std::string> cache;
  auto sorted = SortedTriples(graph, cache);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto &ids = sorted[i].first;
    bool new_subject = i == 0 || sorted[i - 1].first[0] != ids[0];
    if (new_subject) out += term(graph.term(ids[0])) + "\n";
    const Term &p = graph.term(ids[1]);
    out += "    " + (p.value == kRdfType ? std::string("a") : term(p)) + " " +
           term(graph.term(ids[2]));
    bool last = i + 1 == sorted.size() || sorted[i + 1].first[0] != ids[0];
    out += last ? " .\n" : " ;\n";
  }
  return out;
}

bool SameTriples(const Graph &a, const Graph &b) {
  return a.size() == b.size() && SerializeNTriples(a) == SerializeNTriples(b);
}

}  // namespace rdf
}  // namespace mgkb
