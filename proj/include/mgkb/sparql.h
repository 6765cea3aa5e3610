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

#ifndef MGKB_SPARQL_H_
#define MGKB_SPARQL_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgkb/common.h"
#include "mgkb/rdf.h"

namespace mgkb {
namespace sparql {

// Parse errors, including rejected constructs. The message carries the
// line and column.
class QueryError : public Error {
 public:
  using Error::Error;
};

struct Expr {
  enum class Kind { kVar, kConst, kOr, kAnd, kNot, kEq, kNe, kRegex, kLcase, kStr };
  Kind kind = Kind::kConst;
  std::string var;
  rdf::Term constant;
  std::vector<Expr> args;
};

struct PatternTerm {
  bool is_var = false;
  std::string var;
  rdf::Term term;
};

struct TriplePattern {
  PatternTerm subject, predicate, object;
};

struct Projection {
  enum class Kind { kVar, kCount };
  Kind kind = Kind::kVar;
  std::string name;       // projected variable or alias
  std::string count_var;  // empty for COUNT(*)
  bool distinct = false;
};

struct OrderKey {
  std::string var;
  bool descending = false;
};

struct Query {
  rdf::PrefixMap prefixes;  // built-in plus declared
  bool select_all = false;
  bool distinct = false;
  std::vector<Projection> select;
  std::vector<TriplePattern> patterns;
  std::vector<Expr> filters;
  std::vector<std::string> group_by;
  std::vector<OrderKey> order_by;
  std::optional<std::size_t> limit;

  bool HasAggregates() const;
  // Variables in pattern order of first appearance.
  std::vector<std::string> PatternVariables() const;
};

// `builtins` are available without PREFIX declarations.
Query ParseQuery(std::string_view text, const rdf::PrefixMap &builtins);

// Immutable indexed view of a graph.
class Store {
 public:
  using Id = rdf::Graph::Id;
  static constexpr Id kAny = static_cast<Id>(-1);

  explicit Store(std::shared_ptr<const rdf::Graph> graph);

  const rdf::Graph &graph() const { return *graph_; }
  std::optional<Id> Find(const rdf::Term &t) const { return graph_->Find(t); }
  const rdf::Term &term(Id id) const { return graph_->term(id); }

  // Triples matching the bound positions (kAny is a wildcard).
  std::vector<rdf::Graph::IdTriple> Match(Id s, Id p, Id o) const;
  std::size_t Count(Id s, Id p, Id o) const;

 private:
  std::shared_ptr<const rdf::Graph> graph_;
  std::vector<rdf::Graph::IdTriple> spo_, pos_, osp_;
};

// One solution: a value per variable of Query::PatternVariables().
using Solution = std::vector<std::optional<rdf::Term>>;

// Three-valued filter result.
enum class Truth { kFalse, kTrue, kError };

// Evaluates an expression against variable values; throws Error on type
// errors (callers map them to kError).
rdf::Term EvalExpr(const Expr &e, const std::vector<std::string> &vars,
                   const Solution &row);
Truth EvalFilter(const Expr &e, const std::vector<std::string> &vars,
                 const Solution &row);

// Basic graph pattern solutions that pass every filter, in no particular
// order.
std::vector<Solution> Solve(const Query &q, const Store &store);

struct ResultSet {
  std::vector<std::string> vars;
  std::vector<std::vector<std::optional<rdf::Term>>> rows;
};

// Numeric when both are numeric literals, otherwise unbound < blank < IRI <
// literal, then codepoint order of the lexical form, datatype and language.
int CompareTerms(const std::optional<rdf::Term> &a,
                 const std::optional<rdf::Term> &b);

// Grouping, counting, ordering and limit over the solutions. An aggregate
// over an empty solution set yields no rows.
ResultSet Finish(const Query &q, const std::vector<Solution> &solutions);

ResultSet Evaluate(const Query &q, const Store &store);

// application/sparql-results+json
std::string ToJson(const ResultSet &rs);
// Tab-separated, terms compacted with the prefixes when possible.
std::string ToTable(const ResultSet &rs, const rdf::PrefixMap &prefixes);

}  // namespace sparql
}  // namespace mgkb

#endif  // MGKB_SPARQL_H_
