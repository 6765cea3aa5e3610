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


// Random generators and brute-force oracles shared by the unit tests and the
// acceptance suite.

#ifndef MGKB_TESTS_SUPPORT_ORACLES_H_
#define MGKB_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mgkb/etm.h"
#include "mgkb/random.h"
#include "mgkb/rdf.h"
#include "mgkb/sparql.h"

namespace mgkb {
namespace testing {

using namespace etm;
using namespace sparql;
using rdf::Graph;
using rdf::Term;

inline const char kExample[] = "http://example.org/";

// RDF graphs with awkward literals and IRIs for serializer round trips.
inline std::string RandomText(Rng &rng) {
  static const std::vector<std::string> kPieces = {
      "a", "Z", "9", " ", "\"", "\\", "\n", "\r", "\t", "é", "😀", "<", ">",
      "#", ".", "\x01", "\x7f", "'", "_:"};
  std::string out;
  for (int i = 0, n = rng.Below(6); i < n; ++i)
    out += kPieces[rng.Below(kPieces.size())];
  return out;
}

inline Term RandomTerm(Rng &rng, int position) {
  static const std::vector<std::string> kIris = {
      "http://ex.org/a", "http://ex.org/b", "https://ex.org/path#frag",
      "urn:x:1", "http://ex.org/%C3%A9", "http://ex.org/é",
      "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"};
  if (position == 1) return Term::Iri(kIris[rng.Below(kIris.size())]);
  int kind = rng.Below(position == 0 ? 2 : 5);
  switch (kind) {
    case 0: return Term::Iri(kIris[rng.Below(kIris.size())]);
    case 1: return Term::Blank("b" + std::to_string(rng.Below(20)));
    case 2: return Term::Literal(RandomText(rng));
    case 3:
      return Term::Literal(RandomText(rng),
                           rng.Below(2) ? "http://www.w3.org/2001/XMLSchema#integer"
                                        : "http://ex.org/dt");
    default:
      return Term::LangLiteral(RandomText(rng), rng.Below(2) ? "en" : "de-AT");
  }
}

inline Graph RandomNtGraph(Rng &rng, std::size_t triples) {
  Graph g;
  for (std::size_t i = 0; i < triples; ++i)
    g.Add(RandomTerm(rng, 0), RandomTerm(rng, 1), RandomTerm(rng, 2));
  return g;
}

// Random graph over a small vocabulary so that joins hit often.
inline std::shared_ptr<rdf::Graph> RandomGraph(Rng &rng, std::size_t n) {
  auto g = std::make_shared<rdf::Graph>();
  auto node = [&]() { return Term::Iri(std::string(kExample) + "s" + std::to_string(rng.Below(8))); };
  while (g->size() < n) {
    Term s = rng.Below(10) == 0 ? Term::Blank("b" + std::to_string(rng.Below(3))) : node();
    Term p = Term::Iri(std::string(kExample) + "p" + std::to_string(rng.Below(3)));
    Term o;
    switch (rng.Below(5)) {
      case 0: o = Term::Literal(std::string(1, static_cast<char>('a' + rng.Below(4)))); break;
      case 1: o = Term::Literal(std::to_string(rng.Below(4)), std::string(rdf::kXsd) + "integer"); break;
      case 2: o = Term::LangLiteral(rng.Below(2) ? "A" : "b", "en"); break;
      default: o = node();
    }
    g->Add(s, p, o);
  }
  return g;
}

inline std::string RandomQuery(Rng &rng) {
  const char *vars[] = {"?a", "?b", "?c"};
  auto node = [&]() { return "ex:s" + std::to_string(rng.Below(8)); };
  std::string where;
  std::vector<std::string> used;
  std::size_t np = 1 + rng.Below(3);
  for (std::size_t i = 0; i < np; ++i) {
    std::string pos[3];
    for (int k = 0; k < 3; ++k) {
      if (k == 1) {
        pos[k] = rng.Below(3) ? "ex:p" + std::to_string(rng.Below(3)) : "?p";
        if (pos[k] == "?p") used.push_back(pos[k]);
      } else if (rng.Below(4) != 0) {
        pos[k] = vars[rng.Below(3)];
        used.push_back(pos[k]);
      } else if (k == 2 && rng.Below(2)) {
        pos[k] = rng.Below(2) ? "\"a\"" : "2";
      } else {
        pos[k] = node();
      }
    }
    where += "  " + pos[0] + " " + pos[1] + " " + pos[2] + " .\n";
  }
  if (used.empty()) {
    where += "  ?a ex:p0 ?b .\n";
    used = {"?a", "?b"};
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  auto pick = [&]() { return used[rng.Below(used.size())]; };
  if (rng.Below(2)) {
    std::string f;
    switch (rng.Below(5)) {
      case 0: f = pick() + " = " + node(); break;
      case 1: f = "regex(str(" + pick() + "), \"s[0-3]\")"; break;
      case 2: f = pick() + " != \"a\" || " + pick() + " = 1"; break;
      case 3: f = "lcase(str(" + pick() + ")) = \"a\""; break;
      default: f = "!(" + pick() + " = " + pick() + ") && regex(" + pick() + ", \"A\", \"i\")";
    }
    where += "  FILTER(" + f + ")\n";
  }
  std::string head, tail;
  switch (rng.Below(3)) {
    case 0:
      head = rng.Below(2) ? "SELECT *" : "SELECT DISTINCT " + pick();
      if (rng.Below(2)) tail = " ORDER BY DESC(" + pick() + ")";
      break;
    case 1: {
      std::string g = pick();
      head = "SELECT " + g + " (COUNT(" + std::string(rng.Below(2) ? "DISTINCT " : "") +
             pick() + ") AS ?n)";
      tail = " GROUP BY " + g + " ORDER BY DESC(?n) " + g;
      break;
    }
    default:
      head = "SELECT (COUNT(*) AS ?n)";
  }
  if (rng.Below(3) == 0) tail += " LIMIT " + std::to_string(rng.Below(4));
  return "PREFIX ex: <http://example.org/>\n" + head + " WHERE {\n" + where + "}" + tail;
}

// Naive evaluation: nested scans in written order, filters at the end.
inline std::vector<Solution> NaiveSolve(const Query &q, const rdf::Graph &g) {
  auto vars = q.PatternVariables();
  auto triples = g.Triples();
  std::vector<Solution> out;
  Solution cur(vars.size());
  auto idx = [&](const std::string &v) {
    return std::find(vars.begin(), vars.end(), v) - vars.begin();
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == q.patterns.size()) {
      for (const auto &f : q.filters)
        if (EvalFilter(f, vars, cur) != Truth::kTrue) return;
      out.push_back(cur);
      return;
    }
    const auto &p = q.patterns[i];
    for (const auto &t : triples) {
      Solution saved = cur;
      bool ok = true;
      const PatternTerm *pt[3] = {&p.subject, &p.predicate, &p.object};
      const Term *tt[3] = {&t.subject, &t.predicate, &t.object};
      for (int k = 0; k < 3 && ok; ++k) {
        if (!pt[k]->is_var) {
          ok = pt[k]->term == *tt[k];
        } else {
          auto &slot = cur[idx(pt[k]->var)];
          if (!slot) slot = *tt[k];
          else ok = *slot == *tt[k];
        }
      }
      if (ok) rec(i + 1);
      cur = saved;
    }
  };
  rec(0);
  return out;
}

inline std::multiset<std::string> Keys(const std::vector<Solution> &sols) {
  std::multiset<std::string> out;
  for (const auto &s : sols) {
    std::string k;
    for (const auto &v : s) k += (v ? rdf::ToNTriples(*v) : "-") + "|";
    out.insert(k);
  }
  return out;
}

// Small ETM models, finite differences and a two-group toy corpus.

inline EtmModel SmallModel(int v, int l, int k, int h, std::uint64_t seed) {
  std::vector<std::string> vocab;
  for (int i = 0; i < v; ++i) vocab.push_back("w" + std::to_string(i));
  Rng rng(seed + 100);
  Matrix rho(v, l);
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < l; ++j) rho(i, j) = rng.Uniform(-1, 1);
  return InitModel(vocab, rho, k, h, seed);
}

inline double ParamNorm(const Matrix &m) { return m.norm(); }

// Central differences over every entry of `param`, compared with `analytic`.
template <typename T>
inline double RelativeError(EtmModel &model, T &param, const T &analytic,
                     const Matrix &counts, const Matrix &noise) {
  const double h = 1e-6;
  T numeric = T::Zero(param.rows(), param.cols());
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    double keep = param.data()[i];
    param.data()[i] = keep + h;
    double up = NegativeElbo(model, counts, noise, nullptr).total;
    param.data()[i] = keep - h;
    double down = NegativeElbo(model, counts, noise, nullptr).total;
    param.data()[i] = keep;
    numeric.data()[i] = (up - down) / (2 * h);
  }
  double denom = ParamNorm(numeric) + ParamNorm(analytic);
  return denom == 0 ? 0 : ParamNorm(numeric - analytic) / denom;
}

inline bool IsSimplex(const Vector &v) {
  return v.minCoeff() >= 0 && std::abs(v.sum() - 1) <= 1e-6;
}

// Two disjoint vocabularies: terms 0..2 and 3..5.
inline BowCorpus TwoGroupCorpus(int docs, std::uint64_t seed) {
  BowCorpus c;
  c.vocabulary = {"a", "b", "c", "x", "y", "z"};
  Rng rng(seed);
  for (int d = 0; d < docs; ++d) {
    int base = d % 2 == 0 ? 0 : 3;
    std::vector<int> doc;
    for (int t = 0; t < 10; ++t) doc.push_back(base + rng.Below(3));
    c.ids.push_back("d" + std::to_string(d));
    c.documents.push_back(doc);
  }
  for (int d = 0; d < docs; ++d) {
    if (d % 20 == 0) c.validation.push_back(d);
    else if (d % 10 == 1) c.test.push_back(d);
    else c.train.push_back(d);
  }
  return c;
}

}  // namespace testing
}  // namespace mgkb

#endif  // MGKB_TESTS_SUPPORT_ORACLES_H_
