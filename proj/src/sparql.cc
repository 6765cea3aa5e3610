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

#include "mgkb/sparql.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <regex>
#include <set>
#include <tuple>

#include "json.hpp"

namespace mgkb {
namespace sparql {
namespace {

using rdf::Term;

constexpr char kXsd[] = "http://www.w3.org/2001/XMLSchema#";

// ---------------------------------------------------------------------------
// Tokenizer

struct Token {
  enum class Type { kIri, kPname, kVar, kString, kNumber, kPunct, kWord, kEnd };
  Type type = Type::kEnd;
  std::string text;       // IRI, pname, var name, lexical form, punct, word
  std::string lang;       // strings
  std::string datatype;   // strings: raw IRI or pname
  bool datatype_is_pname = false;
  std::size_t line = 1, col = 1;
};

bool IsNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool IsNameChar(char c) {
  return IsNameStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpaceAndComments();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      Next(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void Fail(const std::string &msg) const {
    throw QueryError("parse error at line " + std::to_string(line_) +
                     ", column " + std::to_string(col_) + ": " + msg);
  }

  char Peek(std::size_t k = 0) const {
    return pos_ + k < s_.size() ? s_[pos_ + k] : '\0';
  }

  void Advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void SkipSpaceAndComments() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') Advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else {
        break;
      }
    }
  }

  // '<' starts an IRI when a '>' closes it before any forbidden character.
  bool IriAhead() const {
    for (std::size_t i = pos_ + 1; i < s_.size(); ++i) {
      char c = s_[i];
      if (c == '>') return true;
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' ||
          c == '{' || c == '}' || c == '|' || c == '^' || c == '`' || c == '\\')
        return false;
    }
    return false;
  }

  std::string ReadIri() {
    Advance();  // '<'
    std::string out;
    while (Peek() != '>') {
      out += Peek();
      Advance();
    }
    Advance();
    return out;
  }

  std::string ReadLocal() {
    std::string out;
    while (pos_ < s_.size()) {
      char c = Peek();
      if (IsNameChar(c) || c == '-' || c == ':' || c == '%' ||
          (c == '.' && (IsNameChar(Peek(1)) || Peek(1) == '-' || Peek(1) == '%'))) {
        out += c;
        Advance();
      } else {
        break;
      }
    }
    return out;
  }

  // prefix ':' local, with the prefix already consumed into `prefix`.
  std::string ReadPnameRest(const std::string &prefix) {
    Advance();  // ':'
    return prefix + ":" + ReadLocal();
  }

  void ReadString(Token &t) {
    char quote = Peek();
    Advance();
    std::string lex;
    while (true) {
      if (pos_ >= s_.size() || Peek() == '\n') Fail("unterminated string");
      char c = Peek();
      if (c == quote) break;
      if (c == '\\') {
        Advance();
        char k = Peek();
        Advance();
        switch (k) {
          case 't': lex += '\t'; break;
          case 'n': lex += '\n'; break;
          case 'r': lex += '\r'; break;
          case 'b': lex += '\b'; break;
          case 'f': lex += '\f'; break;
          case '"': lex += '"'; break;
          case '\'': lex += '\''; break;
          case '\\': lex += '\\'; break;
          default: Fail("bad escape in string");
        }
        continue;
      }
      lex += c;
      Advance();
    }
    Advance();
    t.type = Token::Type::kString;
    t.text = std::move(lex);
    if (Peek() == '@') {
      Advance();
      while (std::isalnum(static_cast<unsigned char>(Peek())) || Peek() == '-') {
        t.lang += Peek();
        Advance();
      }
      if (t.lang.empty()) Fail("empty language tag");
    } else if (Peek() == '^' && Peek(1) == '^') {
      Advance(2);
      if (Peek() == '<' && IriAhead()) {
        t.datatype = ReadIri();
      } else {
        std::string prefix;
        while (IsNameChar(Peek()) || Peek() == '-') {
          prefix += Peek();
          Advance();
        }
        if (Peek() != ':') Fail("expected datatype IRI");
        t.datatype = ReadPnameRest(prefix);
        t.datatype_is_pname = true;
      }
    }
  }

  void Next(Token &t) {
    char c = Peek();
    if (c == '<' && IriAhead()) {
      t.type = Token::Type::kIri;
      t.text = ReadIri();
      return;
    }
    if ((c == '?' || c == '$') && IsNameChar(Peek(1))) {
      Advance();
      t.type = Token::Type::kVar;
      while (IsNameChar(Peek())) {
        t.text += Peek();
        Advance();
      }
      return;
    }
    if (c == '"' || c == '\'') {
      ReadString(t);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
      t.type = Token::Type::kNumber;
      t.text += c;
      Advance();
      while (std::isdigit(static_cast<unsigned char>(Peek())) ||
             (Peek() == '.' && std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        t.text += Peek();
        Advance();
      }
      return;
    }
    if (c == ':') {
      t.type = Token::Type::kPname;
      t.text = ReadPnameRest("");
      return;
    }
    if (IsNameStart(c)) {
      std::string word;
      while (IsNameChar(Peek()) || Peek() == '-' ||
             (Peek() == '.' && IsNameChar(Peek(1)))) {
        word += Peek();
        Advance();
      }
      if (Peek() == ':') {
        t.type = Token::Type::kPname;
        t.text = ReadPnameRest(word);
      } else {
        t.type = Token::Type::kWord;
        t.text = word;
      }
      return;
    }
    static const char *kTwo[] = {"||", "&&", "!=", "<=", ">=", "^^"};
    for (const char *op : kTwo) {
      if (c == op[0] && Peek(1) == op[1]) {
        t.type = Token::Type::kPunct;
        t.text = op;
        Advance(2);
        return;
      }
    }
    if (std::string_view("{}().;,*=!|/^+?<>[]").find(c) != std::string_view::npos) {
      t.type = Token::Type::kPunct;
      t.text = std::string(1, c);
      Advance();
      return;
    }
    Fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> &UnsupportedKeywords() {
  static const std::set<std::string> kWords = {
      "OPTIONAL", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE",
      "HAVING", "OFFSET", "FROM", "BASE", "CONSTRUCT", "ASK", "DESCRIBE",
      "REDUCED", "EXISTS", "NOT", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP",
      "CREATE", "WITH", "SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT",
      "IF", "COALESCE", "BOUND", "CONTAINS", "STRSTARTS", "STRENDS", "UCASE",
      "LANG", "DATATYPE", "IRI", "URI", "CONCAT", "SUBSTR", "STRLEN",
      "LANGMATCHES", "SAMETERM", "ISIRI", "ISURI", "ISBLANK", "ISLITERAL",
      "REPLACE", "ABS", "ROUND", "CEIL", "FLOOR", "RAND", "NOW", "YEAR"};
  return kWords;
}

std::string Upper(std::string s) {
  for (char &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const rdf::PrefixMap &builtins)
      : toks_(std::move(tokens)) {
    q_.prefixes = builtins;
  }

  Query Run() {
    Prologue();
    Select();
    Where();
    Modifiers();
    if (Cur().type != Token::Type::kEnd) Unexpected("end of query");
    Validate();
    return std::move(q_);
  }

 private:
  const Token &Cur() const { return toks_[i_]; }
  const Token &Ahead(std::size_t k = 1) const {
    return toks_[std::min(i_ + k, toks_.size() - 1)];
  }
  void Skip() {
    if (i_ + 1 < toks_.size()) ++i_;
  }

  std::string Position(const Token &t) const {
    return "line " + std::to_string(t.line) + ", column " + std::to_string(t.col);
  }

  [[noreturn]] void Fail(const Token &t, const std::string &msg) const {
    throw QueryError("parse error at " + Position(t) + ": " + msg);
  }

  [[noreturn]] void Unsupported(const Token &t, const std::string &what) const {
    throw QueryError("unsupported construct " + what + " at " + Position(t));
  }

  [[noreturn]] void Unexpected(const std::string &expected) const {
    const Token &t = Cur();
    if (t.type == Token::Type::kWord && UnsupportedKeywords().count(Upper(t.text)))
      Unsupported(t, Upper(t.text));
    std::string got = t.type == Token::Type::kEnd ? "end of input" : "'" + t.text + "'";
    Fail(t, "expected " + expected + ", got " + got);
  }

  bool IsWord(const char *w) const {
    return Cur().type == Token::Type::kWord && Upper(Cur().text) == w;
  }
  bool IsPunct(const char *p) const {
    return Cur().type == Token::Type::kPunct && Cur().text == p;
  }
  void ExpectPunct(const char *p) {
    if (!IsPunct(p)) Unexpected(std::string("'") + p + "'");
    Skip();
  }
  void ExpectWord(const char *w) {
    if (!IsWord(w)) Unexpected(w);
    Skip();
  }
  std::string ExpectVar() {
    if (Cur().type != Token::Type::kVar) Unexpected("a variable");
    std::string v = Cur().text;
    Skip();
    return v;
  }

  std::string Expand(const Token &t, const std::string &pname) const {
    std::size_t colon = pname.find(':');
    std::string prefix = pname.substr(0, colon);
    auto it = q_.prefixes.find(prefix);
    if (it == q_.prefixes.end()) Fail(t, "unknown prefix '" + prefix + "'");
    return it->second + pname.substr(colon + 1);
  }

  void Prologue() {
    while (IsWord("PREFIX")) {
      Skip();
      const Token &p = Cur();
      if (p.type != Token::Type::kPname || p.text.back() != ':')
        Unexpected("a prefix name");
      std::string prefix = p.text.substr(0, p.text.size() - 1);
      Skip();
      if (Cur().type != Token::Type::kIri) Unexpected("an IRI");
      if (!rdf::IsAbsoluteIri(Cur().text)) Fail(Cur(), "relative IRI");
      q_.prefixes[prefix] = Cur().text;
      Skip();
    }
  }

  void Select() {
    if (IsWord("CONSTRUCT") || IsWord("ASK") || IsWord("DESCRIBE"))
      Unsupported(Cur(), Upper(Cur().text));
    ExpectWord("SELECT");
    if (IsWord("DISTINCT")) {
      q_.distinct = true;
      Skip();
    }
    if (IsPunct("*")) {
      q_.select_all = true;
      Skip();
      return;
    }
    while (true) {
      if (Cur().type == Token::Type::kVar) {
        Projection p;
        p.name = Cur().text;
        q_.select.push_back(p);
        Skip();
      } else if (IsPunct("(")) {
        Skip();
        if (!IsWord("COUNT")) {
          if (Cur().type == Token::Type::kWord)
            Unsupported(Cur(), Upper(Cur().text) + " in SELECT");
          Unsupported(Cur(), "expression in SELECT");
        }
        Projection p;
        p.kind = Projection::Kind::kCount;
        Skip();
        ExpectPunct("(");
        if (IsWord("DISTINCT")) {
          p.distinct = true;
          Skip();
        }
        if (IsPunct("*")) {
          Skip();
        } else {
          p.count_var = ExpectVar();
        }
        ExpectPunct(")");
        ExpectWord("AS");
        p.name = ExpectVar();
        ExpectPunct(")");
        q_.select.push_back(p);
      } else {
        break;
      }
    }
    if (q_.select.empty()) Unexpected("a projection");
  }

  PatternTerm ParseTerm(bool predicate) {
    const Token &t = Cur();
    PatternTerm out;
    switch (t.type) {
      case Token::Type::kVar:
        out.is_var = true;
        out.var = t.text;
        break;
      case Token::Type::kIri:
        if (!rdf::IsAbsoluteIri(t.text)) Fail(t, "relative IRI");
        out.term = Term::Iri(t.text);
        break;
      case Token::Type::kPname:
        out.term = Term::Iri(Expand(t, t.text));
        break;
      case Token::Type::kWord:
        if (predicate && t.text == "a") {
          out.term = Term::Iri(rdf::kRdfType);
          break;
        }
        if (!predicate && (t.text == "true" || t.text == "false")) {
          out.term = Term::Literal(t.text, std::string(kXsd) + "boolean");
          break;
        }
        Unexpected(predicate ? "a predicate" : "a term");
      case Token::Type::kString:
      case Token::Type::kNumber:
        if (predicate) Unexpected("a predicate");
        out.term = Constant(t);
        break;
      case Token::Type::kPunct:
        if (t.text == "[") Unsupported(t, "blank node property list");
        if (t.text == "(") Unsupported(t, predicate ? "property path" : "collection");
        if (predicate && (t.text == "^" || t.text == "!"))
          Unsupported(t, "property path");
        if (t.text == "{") Unsupported(t, "nested group pattern");
        Unexpected(predicate ? "a predicate" : "a term");
      default:
        Unexpected(predicate ? "a predicate" : "a term");
    }
    Skip();
    return out;
  }

  rdf::Term Constant(const Token &t) const {
    if (t.type == Token::Type::kNumber) {
      bool dec = t.text.find('.') != std::string::npos;
      return Term::Literal(t.text, std::string(kXsd) + (dec ? "decimal" : "integer"));
    }
    if (!t.lang.empty()) return Term::LangLiteral(t.text, t.lang);
    if (!t.datatype.empty()) {
      std::string dt = t.datatype_is_pname ? Expand(t, t.datatype) : t.datatype;
      return Term::Literal(t.text, dt);
    }
    return Term::Literal(t.text);
  }

  void CheckNoPath() {
    if (Cur().type == Token::Type::kPunct) {
      const std::string &p = Cur().text;
      if (p == "/" || p == "|" || p == "^" || p == "*" || p == "+" || p == "?")
        Unsupported(Cur(), "property path");
    }
  }

  void TriplesSameSubject() {
    if (Cur().type == Token::Type::kWord && Upper(Cur().text) == "SELECT")
      Unsupported(Cur(), "subquery");
    if (Cur().type == Token::Type::kPname && Cur().text.rfind("_:", 0) == 0)
      Unsupported(Cur(), "blank node");
    PatternTerm subject = ParseTerm(false);
    while (true) {
      PatternTerm pred = ParseTerm(true);
      CheckNoPath();
      while (true) {
        PatternTerm obj = ParseTerm(false);
        q_.patterns.push_back({subject, pred, obj});
        if (!IsPunct(",")) break;
        Skip();
      }
      if (!IsPunct(";")) break;
      while (IsPunct(";")) Skip();
      if (IsPunct(".") || IsPunct("}")) break;
    }
  }

  Expr Primary() {
    const Token &t = Cur();
    if (IsPunct("(")) {
      Skip();
      Expr e = Or();
      ExpectPunct(")");
      return e;
    }
    if (t.type == Token::Type::kVar) {
      Expr e;
      e.kind = Expr::Kind::kVar;
      e.var = t.text;
      Skip();
      return e;
    }
    if (t.type == Token::Type::kString || t.type == Token::Type::kNumber) {
      Expr e;
      e.constant = Constant(t);
      Skip();
      return e;
    }
    if (t.type == Token::Type::kIri || t.type == Token::Type::kPname) {
      Expr e;
      e.constant = t.type == Token::Type::kIri ? Term::Iri(t.text)
                                               : Term::Iri(Expand(t, t.text));
      Skip();
      return e;
    }
    if (t.type == Token::Type::kWord) {
      std::string w = Upper(t.text);
      if (w == "TRUE" || w == "FALSE") {
        Expr e;
        e.constant = Term::Literal(AsciiLower(w), std::string(kXsd) + "boolean");
        Skip();
        return e;
      }
      Expr e;
      std::size_t arity;
      if (w == "REGEX") {
        e.kind = Expr::Kind::kRegex;
        arity = 3;
      } else if (w == "LCASE") {
        e.kind = Expr::Kind::kLcase;
        arity = 1;
      } else if (w == "STR") {
        e.kind = Expr::Kind::kStr;
        arity = 1;
      } else {
        Unsupported(t, "function " + w);
      }
      Skip();
      ExpectPunct("(");
      e.args.push_back(Or());
      while (IsPunct(",")) {
        Skip();
        e.args.push_back(Or());
      }
      ExpectPunct(")");
      bool ok = e.kind == Expr::Kind::kRegex
                    ? (e.args.size() == 2 || e.args.size() == 3)
                    : e.args.size() == arity;
      if (!ok) Fail(t, "wrong number of arguments to " + w);
      if (e.kind == Expr::Kind::kRegex) {
        for (std::size_t k = 1; k < e.args.size(); ++k)
          if (e.args[k].kind != Expr::Kind::kConst || !e.args[k].constant.IsLiteral())
            Fail(t, "regex pattern and flags must be string literals");
        if (e.args.size() == 3 &&
            e.args[2].constant.value.find_first_not_of("i") != std::string::npos)
          Unsupported(t, "regex flags '" + e.args[2].constant.value + "'");
      }
      return e;
    }
    if (t.type == Token::Type::kPunct &&
        (t.text == "<" || t.text == ">" || t.text == "<=" || t.text == ">=" ||
         t.text == "+" || t.text == "*" || t.text == "/"))
      Unsupported(t, "operator " + t.text);
    Unexpected("an expression");
  }

  Expr Unary() {
    if (IsPunct("!")) {
      Skip();
      Expr e;
      e.kind = Expr::Kind::kNot;
      e.args.push_back(Unary());
      return e;
    }
    return Primary();
  }

  Expr Relational() {
    Expr left = Unary();
    if (IsPunct("=") || IsPunct("!=")) {
      Expr e;
      e.kind = IsPunct("=") ? Expr::Kind::kEq : Expr::Kind::kNe;
      Skip();
      e.args.push_back(std::move(left));
      e.args.push_back(Unary());
      return e;
    }
    if (Cur().type == Token::Type::kPunct &&
        (Cur().text == "<" || Cur().text == ">" || Cur().text == "<=" ||
         Cur().text == ">=" || Cur().text == "+" || Cur().text == "*" ||
         Cur().text == "/"))
      Unsupported(Cur(), "operator " + Cur().text);
    return left;
  }

  Expr And() {
    Expr left = Relational();
    while (IsPunct("&&")) {
      Skip();
      Expr e;
      e.kind = Expr::Kind::kAnd;
      e.args.push_back(std::move(left));
      e.args.push_back(Relational());
      left = std::move(e);
    }
    return left;
  }

  Expr Or() {
    Expr left = And();
    while (IsPunct("||")) {
      Skip();
      Expr e;
      e.kind = Expr::Kind::kOr;
      e.args.push_back(std::move(left));
      e.args.push_back(And());
      left = std::move(e);
    }
    return left;
  }

  void Filter() {
    Skip();  // FILTER
    if (IsWord("NOT") || IsWord("EXISTS")) Unsupported(Cur(), "EXISTS");
    if (IsPunct("(")) {
      Skip();
      q_.filters.push_back(Or());
      ExpectPunct(")");
    } else if (Cur().type == Token::Type::kWord) {
      q_.filters.push_back(Primary());
    } else {
      Unexpected("'(' after FILTER");
    }
  }

  void Where() {
    if (IsWord("FROM")) Unsupported(Cur(), "FROM");
    if (IsWord("WHERE")) Skip();
    ExpectPunct("{");
    while (!IsPunct("}")) {
      if (Cur().type == Token::Type::kEnd) Unexpected("'}'");
      if (IsWord("FILTER")) {
        Filter();
        if (IsPunct(".")) Skip();
        continue;
      }
      if (Cur().type == Token::Type::kWord && UnsupportedKeywords().count(Upper(Cur().text)))
        Unsupported(Cur(), Upper(Cur().text));
      if (IsPunct("{")) Unsupported(Cur(), "nested group pattern");
      TriplesSameSubject();
      if (IsPunct(".")) {
        Skip();
      } else if (!IsPunct("}") && !IsWord("FILTER")) {
        Unexpected("'.' or '}'");
      }
    }
    Skip();
  }

  void Modifiers() {
    if (IsWord("GROUP")) {
      Skip();
      ExpectWord("BY");
      while (Cur().type == Token::Type::kVar) {
        q_.group_by.push_back(Cur().text);
        Skip();
      }
      if (q_.group_by.empty()) {
        if (IsPunct("(")) Unsupported(Cur(), "GROUP BY expression");
        Unexpected("a variable");
      }
    }
    if (IsWord("HAVING")) Unsupported(Cur(), "HAVING");
    if (IsWord("ORDER")) {
      Skip();
      ExpectWord("BY");
      while (true) {
        if (Cur().type == Token::Type::kVar) {
          q_.order_by.push_back({Cur().text, false});
          Skip();
        } else if (IsWord("ASC") || IsWord("DESC")) {
          bool desc = IsWord("DESC");
          Skip();
          ExpectPunct("(");
          if (Cur().type != Token::Type::kVar) Unsupported(Cur(), "ORDER BY expression");
          q_.order_by.push_back({Cur().text, desc});
          Skip();
          ExpectPunct(")");
        } else {
          break;
        }
      }
      if (q_.order_by.empty()) {
        if (IsPunct("(") || Cur().type == Token::Type::kWord)
          Unsupported(Cur(), "ORDER BY expression");
        Unexpected("an order key");
      }
    }
    if (IsWord("LIMIT")) {
      Skip();
      if (Cur().type != Token::Type::kNumber || Cur().text.find_first_not_of("0123456789") != std::string::npos)
        Unexpected("a non-negative integer");
      q_.limit = std::stoull(Cur().text);
      Skip();
    }
    if (IsWord("OFFSET")) Unsupported(Cur(), "OFFSET");
  }

  void Validate() {
    const Token &end = Cur();
    std::set<std::string> names;
    for (const auto &p : q_.select)
      if (!names.insert(p.name).second) Fail(end, "duplicate projection ?" + p.name);
    if (q_.HasAggregates() || !q_.group_by.empty()) {
      if (q_.select_all) Fail(end, "SELECT * cannot be combined with grouping");
      std::set<std::string> group(q_.group_by.begin(), q_.group_by.end());
      for (const auto &p : q_.select) {
        if (p.kind == Projection::Kind::kVar && !group.count(p.name))
          Fail(end, "?" + p.name + " is projected but not grouped");
      }
      auto vars = q_.PatternVariables();
      for (const auto &p : q_.select)
        if (p.kind == Projection::Kind::kCount &&
            std::count(vars.begin(), vars.end(), p.name))
          Fail(end, "alias ?" + p.name + " is already a pattern variable");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  Query q_;
};

// ---------------------------------------------------------------------------
// Expressions

bool IsNumericType(const std::string &dt) {
  static const std::set<std::string> kTypes = {
      "integer", "decimal", "float", "double", "int", "long", "short", "byte",
      "nonNegativeInteger", "positiveInteger", "negativeInteger",
      "nonPositiveInteger", "unsignedInt", "unsignedLong", "unsignedShort",
      "unsignedByte"};
  return StartsWith(dt, kXsd) && kTypes.count(dt.substr(sizeof(kXsd) - 1));
}

std::optional<double> NumericValue(const Term &t) {
  if (!t.IsLiteral() || !t.language.empty() || !IsNumericType(t.datatype))
    return std::nullopt;
  const char *begin = t.value.c_str();
  char *end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') return std::nullopt;
  return v;
}

bool IsStringLike(const Term &t) {
  return t.IsLiteral() && (t.datatype.empty() || !t.language.empty());
}

using Lookup = std::function<const std::optional<Term> *(const std::string &)>;

Term Eval(const Expr &e, const Lookup &lookup);

Truth Ebv(const Expr &e, const Lookup &lookup) {
  switch (e.kind) {
    case Expr::Kind::kOr: {
      Truth a = Ebv(e.args[0], lookup), b = Ebv(e.args[1], lookup);
      if (a == Truth::kTrue || b == Truth::kTrue) return Truth::kTrue;
      if (a == Truth::kError || b == Truth::kError) return Truth::kError;
      return Truth::kFalse;
    }
    case Expr::Kind::kAnd: {
      Truth a = Ebv(e.args[0], lookup), b = Ebv(e.args[1], lookup);
      if (a == Truth::kFalse || b == Truth::kFalse) return Truth::kFalse;
      if (a == Truth::kError || b == Truth::kError) return Truth::kError;
      return Truth::kTrue;
    }
    case Expr::Kind::kNot: {
      Truth a = Ebv(e.args[0], lookup);
      if (a == Truth::kError) return a;
      return a == Truth::kTrue ? Truth::kFalse : Truth::kTrue;
    }
    default:
      break;
  }
  Term v;
  try {
    v = Eval(e, lookup);
  } catch (const Error &) {
    return Truth::kError;
  }
  if (!v.IsLiteral()) return Truth::kError;
  if (v.datatype == std::string(kXsd) + "boolean")
    return v.value == "true" || v.value == "1" ? Truth::kTrue : Truth::kFalse;
  if (IsStringLike(v)) return v.value.empty() ? Truth::kFalse : Truth::kTrue;
  if (auto n = NumericValue(v)) return *n != 0 && *n == *n ? Truth::kTrue : Truth::kFalse;
  return Truth::kError;
}

Term Boolean(bool b) {
  return Term::Literal(b ? "true" : "false", std::string(kXsd) + "boolean");
}

bool TermsEqual(const Term &a, const Term &b) {
  auto na = NumericValue(a), nb = NumericValue(b);
  if (na && nb) return *na == *nb;
  if (a.IsLiteral() && b.IsLiteral() && a != b) {
    // Different literals are unequal only when both are comparable kinds.
    bool known = (IsStringLike(a) || na) && (IsStringLike(b) || nb);
    if (!known) throw Error("incomparable literals");
  }
  return a == b;
}

Term Eval(const Expr &e, const Lookup &lookup) {
  switch (e.kind) {
    case Expr::Kind::kConst:
      return e.constant;
    case Expr::Kind::kVar: {
      const std::optional<Term> *v = lookup(e.var);
      if (v == nullptr || !v->has_value()) throw Error("unbound variable ?" + e.var);
      return **v;
    }
    case Expr::Kind::kOr:
    case Expr::Kind::kAnd:
    case Expr::Kind::kNot: {
      Truth t = Ebv(e, lookup);
      if (t == Truth::kError) throw Error("type error");
      return Boolean(t == Truth::kTrue);
    }
    case Expr::Kind::kEq:
    case Expr::Kind::kNe: {
      bool eq = TermsEqual(Eval(e.args[0], lookup), Eval(e.args[1], lookup));
      return Boolean(e.kind == Expr::Kind::kEq ? eq : !eq);
    }
    case Expr::Kind::kStr: {
      Term v = Eval(e.args[0], lookup);
      if (v.IsBlank()) throw Error("str of a blank node");
      return Term::Literal(v.value);
    }
    case Expr::Kind::kLcase: {
      Term v = Eval(e.args[0], lookup);
      if (!IsStringLike(v)) throw Error("lcase of a non-string");
      v.value = AsciiLower(v.value);
      return v;
    }
    case Expr::Kind::kRegex: {
      Term v = Eval(e.args[0], lookup);
      if (!IsStringLike(v)) throw Error("regex on a non-string");
      const std::string &pattern = e.args[1].constant.value;
      bool icase = e.args.size() == 3 && e.args[2].constant.value == "i";
      // Compiled patterns are cached per thread.
      thread_local std::map<std::pair<std::string, bool>, std::regex> cache;
      auto it = cache.find({pattern, icase});
      if (it == cache.end()) {
        auto flags = std::regex::ECMAScript;
        if (icase) flags |= std::regex::icase;
        try {
          it = cache.emplace(std::make_pair(pattern, icase), std::regex(pattern, flags)).first;
        } catch (const std::regex_error &) {
          throw Error("bad regex");
        }
      }
      return Boolean(std::regex_search(v.value, it->second));
    }
  }
  throw Error("bad expression");
}

void ExprVars(const Expr &e, std::set<std::string> &out) {
  if (e.kind == Expr::Kind::kVar) out.insert(e.var);
  for (const auto &a : e.args) ExprVars(a, out);
}

std::string RowKey(const std::vector<std::optional<Term>> &row) {
  std::string key;
  for (const auto &v : row) {
    key += v ? rdf::ToNTriples(*v) : std::string("\x01");
    key += '\x02';
  }
  return key;
}

}  // namespace

// ---------------------------------------------------------------------------

bool Query::HasAggregates() const {
  for (const auto &p : select)
    if (p.kind == Projection::Kind::kCount) return true;
  return false;
}

std::vector<std::string> Query::PatternVariables() const {
  std::vector<std::string> out;
  auto add = [&](const PatternTerm &t) {
    if (t.is_var && std::find(out.begin(), out.end(), t.var) == out.end())
      out.push_back(t.var);
  };
  for (const auto &p : patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
  return out;
}

Query ParseQuery(std::string_view text, const rdf::PrefixMap &builtins) {
  return Parser(Lexer(text).Run(), builtins).Run();
}

Store::Store(std::shared_ptr<const rdf::Graph> graph) : graph_(std::move(graph)) {
  for (const auto &t : graph_->id_triples()) {
    spo_.push_back(t);
    pos_.push_back({t[1], t[2], t[0]});
    osp_.push_back({t[2], t[0], t[1]});
  }
  std::sort(pos_.begin(), pos_.end());
  std::sort(osp_.begin(), osp_.end());
}

namespace {

struct Range {
  const rdf::Graph::IdTriple *begin = nullptr, *end = nullptr;
  int perm = 0;  // 0: spo, 1: pos, 2: osp
};

// Returns triples in the index order; Decode() maps them back to (s, p, o).
rdf::Graph::IdTriple Decode(const rdf::Graph::IdTriple &t, int perm) {
  switch (perm) {
    case 1: return {t[2], t[0], t[1]};
    case 2: return {t[1], t[2], t[0]};
    default: return t;
  }
}

Range Lookup3(const std::vector<rdf::Graph::IdTriple> &index, int perm,
              rdf::Graph::IdTriple key, int bound) {
  rdf::Graph::IdTriple lo = key, hi = key;
  for (int i = bound; i < 3; ++i) {
    lo[i] = 0;
    hi[i] = Store::kAny;
  }
  auto b = std::lower_bound(index.begin(), index.end(), lo);
  auto e = std::upper_bound(b, index.end(), hi);
  Range r;
  r.begin = index.data() + (b - index.begin());
  r.end = index.data() + (e - index.begin());
  r.perm = perm;
  return r;
}

}  // namespace

std::vector<rdf::Graph::IdTriple> Store::Match(Id s, Id p, Id o) const {
  std::vector<rdf::Graph::IdTriple> out;
  Range r;
  if (s != kAny && (p != kAny || o == kAny)) {
    r = Lookup3(spo_, 0, {s, p, o}, p == kAny ? 1 : (o == kAny ? 2 : 3));
  } else if (s != kAny) {
    r = Lookup3(osp_, 2, {o, s, 0}, 2);
  } else if (p != kAny) {
    r = Lookup3(pos_, 1, {p, o, 0}, o == kAny ? 1 : 2);
  } else if (o != kAny) {
    r = Lookup3(osp_, 2, {o, 0, 0}, 1);
  } else {
    r = Lookup3(spo_, 0, {0, 0, 0}, 0);
  }
  out.reserve(r.end - r.begin);
  for (auto *t = r.begin; t != r.end; ++t) out.push_back(Decode(*t, r.perm));
  return out;
}

std::size_t Store::Count(Id s, Id p, Id o) const { return Match(s, p, o).size(); }

rdf::Term EvalExpr(const Expr &e, const std::vector<std::string> &vars,
                   const Solution &row) {
  Lookup lookup = [&](const std::string &v) -> const std::optional<rdf::Term> * {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return &row[i];
    return nullptr;
  };
  return Eval(e, lookup);
}

Truth EvalFilter(const Expr &e, const std::vector<std::string> &vars,
                 const Solution &row) {
  Lookup lookup = [&](const std::string &v) -> const std::optional<rdf::Term> * {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return &row[i];
    return nullptr;
  };
  return Ebv(e, lookup);
}

std::vector<Solution> Solve(const Query &q, const Store &store) {
  using Id = Store::Id;
  const std::vector<std::string> vars = q.PatternVariables();
  const int nv = static_cast<int>(vars.size());
  auto var_index = [&](const std::string &v) {
    return static_cast<int>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  };
  // Pattern positions: a constant id or a variable index.
  struct Slot {
    int var = -1;
    Id id = Store::kAny;
  };
  struct Compiled {
    Slot s[3];
  };
  std::vector<Compiled> pats;
  for (const auto &p : q.patterns) {
    Compiled c;
    const PatternTerm *pt[3] = {&p.subject, &p.predicate, &p.object};
    for (int i = 0; i < 3; ++i) {
      if (pt[i]->is_var) {
        c.s[i].var = var_index(pt[i]->var);
      } else {
        auto id = store.Find(pt[i]->term);
        if (!id) return {};
        c.s[i].id = *id;
      }
    }
    pats.push_back(c);
  }

  // Greedy order: patterns joined to a bound variable first, then most bound
  // positions, then fewest constant matches.
  std::vector<int> order;
  std::vector<bool> used(pats.size(), false), bound(nv, false);
  for (std::size_t step = 0; step < pats.size(); ++step) {
    int best = -1;
    std::tuple<bool, int, std::size_t> best_key;
    for (std::size_t i = 0; i < pats.size(); ++i) {
      if (used[i]) continue;
      int nb = 0;
      bool joined = false;
      for (const Slot &sl : pats[i].s) {
        nb += sl.var < 0 || bound[sl.var];
        joined |= sl.var >= 0 && bound[sl.var];
      }
      std::size_t cnt = store.Count(pats[i].s[0].id, pats[i].s[1].id, pats[i].s[2].id);
      std::tuple<bool, int, std::size_t> key{!joined, -nb, cnt};
      if (best < 0 || key < best_key) {
        best = static_cast<int>(i);
        best_key = key;
      }
    }
    used[best] = true;
    order.push_back(best);
    for (const Slot &sl : pats[best].s)
      if (sl.var >= 0) bound[sl.var] = true;
  }

  // Each filter runs right after the step that binds its last variable.
  std::vector<std::vector<const Expr *>> filters_at(pats.size() + 1);
  {
    std::vector<int> bound_at(nv, -1);
    for (std::size_t step = 0; step < order.size(); ++step)
      for (const Slot &sl : pats[order[step]].s)
        if (sl.var >= 0 && bound_at[sl.var] < 0) bound_at[sl.var] = static_cast<int>(step);
    for (const auto &f : q.filters) {
      std::set<std::string> fv;
      ExprVars(f, fv);
      int at = 0;
      bool unknown = false;
      for (const auto &v : fv) {
        int i = var_index(v);
        if (i >= nv) {
          unknown = true;
          continue;
        }
        at = std::max(at, bound_at[i]);
      }
      filters_at[unknown || pats.empty() ? pats.size() : at].push_back(&f);
    }
  }

  std::vector<Solution> out;
  if (pats.empty()) return out;
  std::vector<Id> cur(nv, Store::kAny);
  auto make_row = [&]() {
    Solution row(nv);
    for (int i = 0; i < nv; ++i)
      if (cur[i] != Store::kAny) row[i] = store.term(cur[i]);
    return row;
  };
  auto pass = [&](const std::vector<const Expr *> &fs) {
    if (fs.empty()) return true;
    Solution row = make_row();
    for (const Expr *f : fs)
      if (EvalFilter(*f, vars, row) != Truth::kTrue) return false;
    return true;
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t step) {
    if (step == order.size()) {
      if (pass(filters_at[pats.size()])) out.push_back(make_row());
      return;
    }
    const Compiled &c = pats[order[step]];
    Id key[3];
    for (int i = 0; i < 3; ++i)
      key[i] = c.s[i].var >= 0 ? cur[c.s[i].var] : c.s[i].id;
    for (const auto &t : store.Match(key[0], key[1], key[2])) {
      std::vector<int> assigned;
      bool ok = true;
      for (int i = 0; i < 3 && ok; ++i) {
        int v = c.s[i].var;
        if (v < 0) continue;
        if (cur[v] == Store::kAny) {
          cur[v] = t[i];
          assigned.push_back(v);
        } else if (cur[v] != t[i]) {
          ok = false;
        }
      }
      if (ok && pass(filters_at[step])) dfs(step + 1);
      for (int v : assigned) cur[v] = Store::kAny;
    }
  };
  dfs(0);
  return out;
}

int CompareTerms(const std::optional<rdf::Term> &a,
                 const std::optional<rdf::Term> &b) {
  if (!a || !b) return a.has_value() - b.has_value();
  auto na = NumericValue(*a), nb = NumericValue(*b);
  if (na && nb) return *na < *nb ? -1 : (*na > *nb ? 1 : 0);
  int ka = static_cast<int>(a->kind), kb = static_cast<int>(b->kind);
  if (ka != kb) return ka < kb ? -1 : 1;
  if (int c = a->value.compare(b->value)) return c < 0 ? -1 : 1;
  if (int c = a->datatype.compare(b->datatype)) return c < 0 ? -1 : 1;
  if (int c = a->language.compare(b->language)) return c < 0 ? -1 : 1;
  return 0;
}

ResultSet Finish(const Query &q, const std::vector<Solution> &solutions) {
  const std::vector<std::string> vars = q.PatternVariables();
  auto index_of = [&](const std::vector<std::string> &names, const std::string &v) {
    auto it = std::find(names.begin(), names.end(), v);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
  };
  ResultSet rs;
  if (q.select_all) {
    rs.vars = vars;
  } else {
    for (const auto &p : q.select) rs.vars.push_back(p.name);
  }

  // Rows carry projected cells plus hidden order-key cells.
  struct Row {
    std::vector<std::optional<rdf::Term>> cells;
    std::vector<std::optional<rdf::Term>> keys;
    std::string tie;
  };
  std::vector<Row> rows;
  const bool grouped = q.HasAggregates() || !q.group_by.empty();
  if (!grouped) {
    for (const auto &s : solutions) {
      Row r;
      for (const auto &v : rs.vars) {
        int i = index_of(vars, v);
        r.cells.push_back(i >= 0 ? s[i] : std::nullopt);
      }
      for (const auto &k : q.order_by) {
        int i = index_of(vars, k.var);
        r.keys.push_back(i >= 0 ? s[i] : std::nullopt);
      }
      r.tie = RowKey(r.cells) + '\x03' + RowKey(s);
      rows.push_back(std::move(r));
    }
  } else {
    std::map<std::string, std::vector<const Solution *>> groups;
    std::map<std::string, std::vector<std::optional<rdf::Term>>> group_values;
    for (const auto &s : solutions) {
      std::vector<std::optional<rdf::Term>> key;
      for (const auto &g : q.group_by) {
        int i = index_of(vars, g);
        key.push_back(i >= 0 ? s[i] : std::nullopt);
      }
      std::string k = RowKey(key);
      groups[k].push_back(&s);
      group_values.emplace(k, std::move(key));
    }
    for (const auto &[k, members] : groups) {
      const auto &gv = group_values[k];
      Row r;
      for (const auto &p : q.select) {
        if (p.kind == Projection::Kind::kVar) {
          r.cells.push_back(gv[index_of(q.group_by, p.name)]);
          continue;
        }
        std::size_t n = 0;
        int ci = p.count_var.empty() ? -1 : index_of(vars, p.count_var);
        if (p.distinct) {
          std::set<std::string> seen;
          for (const Solution *s : members) {
            if (p.count_var.empty()) seen.insert(RowKey(*s));
            else if (ci >= 0 && (*s)[ci]) seen.insert(rdf::ToNTriples(*(*s)[ci]));
          }
          n = seen.size();
        } else {
          for (const Solution *s : members)
            n += p.count_var.empty() || (ci >= 0 && (*s)[ci].has_value());
        }
        r.cells.push_back(Term::Literal(std::to_string(n), std::string(kXsd) + "integer"));
      }
      for (const auto &key : q.order_by) {
        int pi = index_of(rs.vars, key.var);
        int gi = index_of(q.group_by, key.var);
        r.keys.push_back(pi >= 0 ? r.cells[pi] : (gi >= 0 ? gv[gi] : std::nullopt));
      }
      r.tie = RowKey(r.cells);
      rows.push_back(std::move(r));
    }
  }

  std::sort(rows.begin(), rows.end(), [&](const Row &a, const Row &b) {
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
      int c = CompareTerms(a.keys[i], b.keys[i]);
      if (c != 0) return q.order_by[i].descending ? c > 0 : c < 0;
    }
    return a.tie < b.tie;
  });
  std::set<std::string> seen;
  for (auto &r : rows) {
    if (q.distinct && !seen.insert(RowKey(r.cells)).second) continue;
    if (q.limit && rs.rows.size() >= *q.limit) break;
    rs.rows.push_back(std::move(r.cells));
  }
  return rs;
}

ResultSet Evaluate(const Query &q, const Store &store) {
  return Finish(q, Solve(q, store));
}

std::string ToJson(const ResultSet &rs) {
  nlohmann::json j;
  j["head"]["vars"] = rs.vars;
  nlohmann::json bindings = nlohmann::json::array();
  for (const auto &row : rs.rows) {
    nlohmann::json b = nlohmann::json::object();
    for (std::size_t i = 0; i < rs.vars.size(); ++i) {
      if (!row[i]) continue;
      const Term &t = *row[i];
      nlohmann::json v;
      v["value"] = t.value;
      if (t.IsIri()) {
        v["type"] = "uri";
      } else if (t.IsBlank()) {
        v["type"] = "bnode";
      } else {
        v["type"] = "literal";
        if (!t.language.empty()) v["xml:lang"] = t.language;
        else if (!t.datatype.empty()) v["datatype"] = t.datatype;
      }
      b[rs.vars[i]] = v;
    }
    bindings.push_back(b);
  }
  j["results"]["bindings"] = bindings;
  return j.dump() + "\n";
}

std::string ToTable(const ResultSet &rs, const rdf::PrefixMap &prefixes) {
  auto compact = [&](const std::string &iri) {
    std::string best;
    std::size_t len = 0;
    for (const auto &[p, ns] : prefixes) {
      if (ns.size() > len && StartsWith(iri, ns) &&
          iri.find_first_of("/#?", ns.size()) == std::string::npos) {
        best = p + ":" + iri.substr(ns.size());
        len = ns.size();
      }
    }
    return len ? best : "<" + iri + ">";
  };
  std::string out;
  for (std::size_t i = 0; i < rs.vars.size(); ++i)
    out += (i ? "\t?" : "?") + rs.vars[i];
  out += '\n';
  for (const auto &row : rs.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      if (!row[i]) continue;
      const Term &t = *row[i];
      if (t.IsIri()) {
        out += compact(t.value);
      } else if (t.IsLiteral() && !t.datatype.empty() && t.language.empty() &&
                 NumericValue(t)) {
        out += t.value;
      } else if (t.IsLiteral() && !t.datatype.empty() && t.language.empty()) {
        out += rdf::ToNTriples(Term::Literal(t.value)) + "^^" + compact(t.datatype);
      } else {
        out += rdf::ToNTriples(t);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace sparql
}  // namespace mgkb
