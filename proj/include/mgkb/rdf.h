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

#ifndef MGKB_RDF_H_
#define MGKB_RDF_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mgkb/common.h"

namespace mgkb {
namespace rdf {

inline constexpr char kXsd[] = "http://www.w3.org/2001/XMLSchema#";
inline constexpr char kRdfType[] =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr char kXsdString[] = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr char kRdfLangString[] =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

struct Term {
  enum class Kind { kIri = 0, kBlank = 1, kLiteral = 2 };
  Kind kind = Kind::kIri;
  std::string value;     // IRI, blank label or lexical form
  std::string datatype;  // literals; empty means xsd:string
  std::string language;  // literals; lowercase

  static Term Iri(std::string iri);
  static Term Blank(std::string label);
  static Term Literal(std::string lexical, std::string datatype = "");
  static Term LangLiteral(std::string lexical, std::string language);

  bool IsIri() const { return kind == Kind::kIri; }
  bool IsBlank() const { return kind == Kind::kBlank; }
  bool IsLiteral() const { return kind == Kind::kLiteral; }
  // xsd:string for simple literals, rdf:langString for tagged ones.
  std::string EffectiveDatatype() const;

  auto operator<=>(const Term &) const = default;
};

// Absolute IRI with a scheme and none of the characters N-Triples forbids.
bool IsAbsoluteIri(std::string_view iri);

// Canonical N-Triples form of a term.
std::string ToNTriples(const Term &term);

struct Triple {
  Term subject, predicate, object;
  auto operator<=>(const Triple &) const = default;
};

using PrefixMap = std::map<std::string, std::string>;

// Interned terms plus a set of id triples.
class Graph {
 public:
  using Id = std::uint32_t;
  using IdTriple = std::array<Id, 3>;

  Id Intern(const Term &term);
  std::optional<Id> Find(const Term &term) const;
  const Term &term(Id id) const { return terms_[id]; }
  std::size_t TermCount() const { return terms_.size(); }

  // Validates positions (subject IRI or blank, predicate IRI) and IRIs.
  // Returns false when the triple was already present.
  bool Add(const Term &s, const Term &p, const Term &o);
  bool Add(const Triple &t) { return Add(t.subject, t.predicate, t.object); }
  void Merge(const Graph &other);

  bool Contains(const Triple &t) const;
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::set<IdTriple> &id_triples() const { return triples_; }
  std::vector<Triple> Triples() const;

  PrefixMap &prefixes() { return prefixes_; }
  const PrefixMap &prefixes() const { return prefixes_; }

 private:
  std::vector<Term> terms_;
  std::unordered_map<std::string, Id> index_;
  std::set<IdTriple> triples_;
  PrefixMap prefixes_;
};

// One triple per line, sorted by the serialized (S, P, O).
std::string SerializeNTriples(const Graph &graph);
// Throws Error with line and column on syntax errors.
Graph ParseNTriples(std::string_view text);

// Prefixed names where the local part is safe, same ordering as N-Triples.
std::string SerializeTurtle(const Graph &graph);

// Set equality of the triples.
bool SameTriples(const Graph &a, const Graph &b);

}  // namespace rdf
}  // namespace mgkb

#endif  // MGKB_RDF_H_
