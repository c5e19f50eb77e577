#pragma once

// Script language: declarations of signatures, sets, groupoids, functors and
// algebras, followed by commands. One statement per line; `#` starts a comment.
//
//   sig Tree = leaf:0 | node:2
//   set A = {a, b, c}
//   group swap2 = pair:2 (1 0)
//   F = 1 + X*X
//   P = mu Y. 1 + X*Y
//   alg Count : F on 3 = [0, 1, 2, 2, 2, 2, 2, 2, 2, 2]
//   mu F size nat budget 5

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sizedmu/functors.hpp"

namespace sizedmu::dsl {

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

[[noreturn]] inline void fail_at(ErrorKind kind, const Pos& p, const std::string& what) {
  throw SourceError(kind, what, p.line, p.column);
}

// ---------------------------------------------------------------- lexer

enum class Tok { ident, number, symbol, newline, end };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  Pos p;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (c == '\n') {
      out.push_back({Tok::newline, "\n", p});
      advance(1);
    } else if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::number, src.substr(i, j - i), p});
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\''))
        ++j;
      out.push_back({Tok::ident, src.substr(i, j - i), p});
      advance(j - i);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::symbol, "->", p});
      advance(2);
    } else if (std::string("=|:+*^()<>,.{}[]").find(c) != std::string::npos) {
      out.push_back({Tok::symbol, std::string(1, c), p});
      advance(1);
    } else {
      fail_at(ErrorKind::SyntaxError, p, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::newline, "\n", p});
  out.push_back({Tok::end, "", p});
  return out;
}

// ---------------------------------------------------------------- syntax

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Functor expression as written. Positions are ignored by equality.
struct Expr {
  enum class Kind { number, name, sum, product, power, sym, poly, mu, compose, pair };
  Kind kind;
  std::string text;  // identifier, numeral, exponent, group/signature name or bound variable
  std::vector<ExprPtr> kids;
  Pos pos;

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.text != b.text || a.kids.size() != b.kids.size()) return false;
    for (std::size_t k = 0; k < a.kids.size(); ++k)
      if (!(*a.kids[k] == *b.kids[k])) return false;
    return true;
  }
};

struct SigDecl {
  std::string name;
  std::vector<std::pair<std::string, std::size_t>> ops;
  bool operator==(const SigDecl&) const = default;
};

struct SetDecl {
  std::string name;
  std::size_t size = 0;
  std::vector<std::string> labels;  // empty when declared by cardinality
  bool operator==(const SetDecl&) const = default;
};

struct GroupItem {
  // object `name:arity perm*` when target is empty, else arrow `name -> target perm`
  std::string name;
  std::string target;
  std::size_t arity = 0;
  std::vector<std::vector<std::size_t>> perms;
  bool operator==(const GroupItem&) const = default;
};

struct GroupDecl {
  std::string name;
  std::vector<GroupItem> items;
  bool operator==(const GroupDecl&) const = default;
};

struct FunctorDecl {
  std::string name;
  ExprPtr expr;
  friend bool operator==(const FunctorDecl& a, const FunctorDecl& b) {
    return a.name == b.name && *a.expr == *b.expr;
  }
};

struct AlgDecl {
  std::string name;
  std::string functor;
  std::string carrier;  // numeral or set name
  std::vector<std::size_t> table;
  bool operator==(const AlgDecl&) const = default;
};

struct Command {
  std::string verb;
  std::vector<std::string> args;
  std::map<std::string, std::string> options;
  bool operator==(const Command&) const = default;
};

struct Statement {
  std::variant<SigDecl, SetDecl, GroupDecl, FunctorDecl, AlgDecl, Command> v;
  Pos pos;
  friend bool operator==(const Statement& a, const Statement& b) { return a.v == b.v; }
};

struct Script {
  std::vector<Statement> statements;
  bool operator==(const Script&) const = default;
};

struct CommandSpec {
  std::string verb;
  std::size_t positional;
  std::vector<std::string> options;
};

inline const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"iterate", 1, {"size", "budget", "upto"}},
      {"mu", 1, {"size", "budget"}},
      {"cata", 2, {"size", "budget", "at"}},
      {"free", 2, {"size", "budget"}},
      {"nu", 1, {"budget"}},
      {"enumerate", 1, {"depth"}},
      {"check", 0, {"seed"}},
  };
  return specs;
}

inline const CommandSpec* find_command(const std::string& verb) {
  for (const auto& s : command_specs())
    if (s.verb == verb) return &s;
  return nullptr;
}

inline bool is_reserved(const std::string& w) {
  static const std::vector<std::string> words = {"sig",  "set",  "group",   "alg",  "sym",
                                                 "poly", "mu",   "compose", "inf",  "on",
                                                 "nat",  "plump"};
  if (find_command(w)) return true;
  return std::find(words.begin(), words.end(), w) != words.end();
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Script parse_script() {
    Script s;
    for (;;) {
      while (peek().kind == Tok::newline) next();
      if (peek().kind == Tok::end) break;
      s.statements.push_back(statement());
      if (peek().kind != Tok::newline) error("expected end of line");
      next();
    }
    return s;
  }

  ExprPtr parse_expr_only() {
    ExprPtr e = expr();
    while (peek().kind == Tok::newline) next();
    if (peek().kind != Tok::end) error("unexpected input after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void error(const std::string& what) const {
    const Token& t = peek();
    std::string near = t.kind == Tok::newline ? "end of line" : t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    fail_at(ErrorKind::SyntaxError, t.pos, what + " near " + near);
  }

  bool at_symbol(const char* s) const { return peek().kind == Tok::symbol && peek().text == s; }
  bool at_word(const char* s) const { return peek().kind == Tok::ident && peek().text == s; }

  void expect(const char* s) {
    if (!at_symbol(s)) error(std::string("expected '") + s + "'");
    next();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::ident) error(std::string("expected ") + what);
    return next().text;
  }

  std::string fresh_name(const char* what) {
    Pos p = peek().pos;
    std::string n = ident(what);
    if (is_reserved(n) || n == "X") fail_at(ErrorKind::SyntaxError, p, "'" + n + "' is reserved");
    return n;
  }

  std::size_t number(const char* what) {
    if (peek().kind != Tok::number) error(std::string("expected ") + what);
    Token t = next();
    if (t.text.size() > 9) fail_at(ErrorKind::SyntaxError, t.pos, "number too large");
    return std::stoul(t.text);
  }

  Statement statement() {
    Statement st;
    st.pos = peek().pos;
    if (peek().kind != Tok::ident) error("expected a declaration or command");
    const std::string w = peek().text;
    if (w == "sig") {
      st.v = sig_decl();
    } else if (w == "set") {
      st.v = set_decl();
    } else if (w == "group") {
      st.v = group_decl();
    } else if (w == "alg") {
      st.v = alg_decl();
    } else if (find_command(w)) {
      st.v = command();
    } else {
      FunctorDecl d;
      d.name = fresh_name("functor name");
      expect("=");
      d.expr = expr();
      st.v = std::move(d);
    }
    return st;
  }

  SigDecl sig_decl() {
    next();
    SigDecl d;
    d.name = fresh_name("signature name");
    expect("=");
    do {
      std::string op = ident("operation symbol");
      expect(":");
      if (at_word("inf"))
        fail_at(ErrorKind::InfiniteArity, peek().pos,
                "operation '" + op + "' has infinite arity; only finite arities are supported");
      std::size_t ar = number("arity");
      for (const auto& [n, a] : d.ops)
        if (n == op) error("duplicate operation symbol '" + op + "'");
      d.ops.emplace_back(op, ar);
    } while (at_symbol("|") && (next(), true));
    return d;
  }

  SetDecl set_decl() {
    next();
    SetDecl d;
    d.name = fresh_name("set name");
    expect("=");
    if (at_symbol("{")) {
      next();
      if (!at_symbol("}")) {
        do {
          Pos p = peek().pos;
          std::string l = peek().kind == Tok::number ? next().text : ident("element label");
          if (std::find(d.labels.begin(), d.labels.end(), l) != d.labels.end())
            fail_at(ErrorKind::SyntaxError, p, "duplicate element '" + l + "'");
          d.labels.push_back(l);
        } while (at_symbol(",") && (next(), true));
      }
      expect("}");
      d.size = d.labels.size();
    } else {
      d.size = number("cardinality or {elements}");
    }
    return d;
  }

  std::vector<std::size_t> perm() {
    expect("(");
    std::vector<std::size_t> p;
    while (peek().kind == Tok::number) p.push_back(number("index"));
    expect(")");
    return p;
  }

  GroupDecl group_decl() {
    next();
    GroupDecl d;
    d.name = fresh_name("groupoid name");
    expect("=");
    do {
      GroupItem it;
      it.name = ident("object name");
      if (at_symbol("->")) {
        next();
        it.target = ident("target object");
        it.perms.push_back(perm());
      } else {
        expect(":");
        it.arity = number("arity");
        while (at_symbol("(")) it.perms.push_back(perm());
      }
      d.items.push_back(std::move(it));
    } while (at_symbol("|") && (next(), true));
    return d;
  }

  AlgDecl alg_decl() {
    next();
    AlgDecl d;
    d.name = fresh_name("algebra name");
    expect(":");
    d.functor = ident("functor name");
    if (!at_word("on")) error("expected 'on'");
    next();
    d.carrier = peek().kind == Tok::number ? next().text : ident("carrier");
    expect("=");
    expect("[");
    if (!at_symbol("]")) {
      do d.table.push_back(number("table entry"));
      while (at_symbol(",") && (next(), true));
    }
    expect("]");
    return d;
  }

  Command command() {
    Command c;
    c.verb = next().text;
    const CommandSpec& spec = *find_command(c.verb);
    for (std::size_t k = 0; k < spec.positional; ++k)
      c.args.push_back(peek().kind == Tok::number ? next().text : ident("argument"));
    while (peek().kind == Tok::ident) {
      Pos p = peek().pos;
      std::string key = next().text;
      if (std::find(spec.options.begin(), spec.options.end(), key) == spec.options.end())
        fail_at(ErrorKind::SyntaxError, p, "'" + c.verb + "' does not take option '" + key + "'");
      if (c.options.count(key)) fail_at(ErrorKind::SyntaxError, p, "option '" + key + "' repeated");
      std::string value;
      if (key == "size") {
        std::string kind = ident("nat or plump:<signature>");
        if (kind == "nat") {
          value = "nat";
        } else if (kind == "plump") {
          expect(":");
          value = "plump:" + ident("signature name");
        } else {
          fail_at(ErrorKind::SyntaxError, p, "size must be nat or plump:<signature>");
        }
      } else {
        value = std::to_string(number("number"));
      }
      c.options[key] = value;
    }
    return c;
  }

  static ExprPtr mk(Expr::Kind k, std::string text, std::vector<ExprPtr> kids, Pos p) {
    return std::make_shared<const Expr>(Expr{k, std::move(text), std::move(kids), p});
  }

  ExprPtr expr() {
    Pos p = peek().pos;
    std::vector<ExprPtr> parts{product()};
    while (at_symbol("+")) {
      next();
      parts.push_back(product());
    }
    return parts.size() == 1 ? parts[0] : mk(Expr::Kind::sum, "", std::move(parts), p);
  }

  ExprPtr product() {
    Pos p = peek().pos;
    std::vector<ExprPtr> parts{power()};
    while (at_symbol("*")) {
      next();
      parts.push_back(power());
    }
    return parts.size() == 1 ? parts[0] : mk(Expr::Kind::product, "", std::move(parts), p);
  }

  ExprPtr power() {
    Pos p = peek().pos;
    ExprPtr base = unary();
    if (!at_symbol("^")) return base;
    next();
    std::string exp = peek().kind == Tok::number ? std::to_string(number("exponent")) : ident("exponent");
    return mk(Expr::Kind::power, exp, {base}, p);
  }

  ExprPtr unary() {
    Pos p = peek().pos;
    if (at_word("sym") || at_word("poly")) {
      Expr::Kind k = peek().text == "sym" ? Expr::Kind::sym : Expr::Kind::poly;
      next();
      expect("<");
      std::string name = ident(k == Expr::Kind::sym ? "groupoid name" : "signature name");
      expect(">");
      return mk(k, name, {unary()}, p);
    }
    if (at_word("mu")) {
      next();
      std::string var = ident("bound variable");
      if (is_reserved(var)) fail_at(ErrorKind::SyntaxError, p, "'" + var + "' is reserved");
      expect(".");
      return mk(Expr::Kind::mu, var, {expr()}, p);
    }
    return atom();
  }

  ExprPtr atom() {
    Pos p = peek().pos;
    if (peek().kind == Tok::number) return mk(Expr::Kind::number, std::to_string(number("number")), {}, p);
    if (at_symbol("(")) {
      next();
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (at_symbol("<")) {
      next();
      std::vector<ExprPtr> parts{expr()};
      while (at_symbol(",")) {
        next();
        parts.push_back(expr());
      }
      expect(">");
      return mk(Expr::Kind::pair, "", std::move(parts), p);
    }
    if (at_word("compose")) {
      next();
      expect("(");
      ExprPtr outer = expr();
      expect(",");
      ExprPtr inner = expr();
      expect(")");
      return mk(Expr::Kind::compose, "", {outer, inner}, p);
    }
    if (peek().kind == Tok::ident) {
      std::string n = next().text;
      if (is_reserved(n)) fail_at(ErrorKind::SyntaxError, p, "unexpected keyword '" + n + "'");
      return mk(Expr::Kind::name, n, {}, p);
    }
    error("expected a functor expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printer

namespace detail {
inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::sum: return 0;
    case Expr::Kind::product: return 1;
    case Expr::Kind::power: return 2;
    case Expr::Kind::sym:
    case Expr::Kind::poly:
    case Expr::Kind::mu: return 3;
    default: return 4;
  }
}
}  // namespace detail

inline std::string print(const Expr& e) {
  // A child is parenthesised unless it binds strictly tighter than the
  // operator, so nested sums and products survive a round trip.
  auto wrap = [](const Expr& c, int need) {
    bool paren = detail::precedence(c) < need || c.kind == Expr::Kind::mu;
    return paren ? "(" + print(c) + ")" : print(c);
  };
  auto join = [&](const char* sep, int need) {
    std::string s;
    for (std::size_t k = 0; k < e.kids.size(); ++k) {
      if (k) s += sep;
      s += wrap(*e.kids[k], need);
    }
    return s;
  };
  switch (e.kind) {
    case Expr::Kind::number:
    case Expr::Kind::name: return e.text;
    case Expr::Kind::sum: return join(" + ", 1);
    case Expr::Kind::product: return join(" * ", 2);
    case Expr::Kind::power: return wrap(*e.kids[0], 3) + "^" + e.text;
    case Expr::Kind::sym:
    case Expr::Kind::poly: {
      const Expr& arg = *e.kids[0];
      bool paren = detail::precedence(arg) < 3 || arg.kind == Expr::Kind::mu;
      std::string a = paren ? "(" + print(arg) + ")" : print(arg);
      return std::string(e.kind == Expr::Kind::sym ? "sym<" : "poly<") + e.text + "> " + a;
    }
    case Expr::Kind::mu: return "mu " + e.text + ". " + print(*e.kids[0]);
    case Expr::Kind::compose: return "compose(" + print(*e.kids[0]) + ", " + print(*e.kids[1]) + ")";
    case Expr::Kind::pair: {
      std::string s = "<";
      for (std::size_t k = 0; k < e.kids.size(); ++k) s += (k ? ", " : "") + print(*e.kids[k]);
      return s + ">";
    }
  }
  return "";
}

inline std::string print(const Statement& st) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        std::string s;
        if constexpr (std::is_same_v<T, SigDecl>) {
          s = "sig " + d.name + " =";
          for (std::size_t k = 0; k < d.ops.size(); ++k)
            s += (k ? " | " : " ") + d.ops[k].first + ":" + std::to_string(d.ops[k].second);
        } else if constexpr (std::is_same_v<T, SetDecl>) {
          s = "set " + d.name + " = ";
          if (d.labels.empty() && d.size > 0) {
            s += std::to_string(d.size);
          } else {
            s += "{";
            for (std::size_t k = 0; k < d.labels.size(); ++k) s += (k ? ", " : "") + d.labels[k];
            s += "}";
          }
        } else if constexpr (std::is_same_v<T, GroupDecl>) {
          s = "group " + d.name + " =";
          for (std::size_t k = 0; k < d.items.size(); ++k) {
            const GroupItem& it = d.items[k];
            s += k ? " | " : " ";
            s += it.name;
            s += it.target.empty() ? ":" + std::to_string(it.arity) : " -> " + it.target;
            for (const auto& p : it.perms) {
              s += " (";
              for (std::size_t j = 0; j < p.size(); ++j) s += (j ? " " : "") + std::to_string(p[j]);
              s += ")";
            }
          }
        } else if constexpr (std::is_same_v<T, FunctorDecl>) {
          s = d.name + " = " + print(*d.expr);
        } else if constexpr (std::is_same_v<T, AlgDecl>) {
          s = "alg " + d.name + " : " + d.functor + " on " + d.carrier + " = [";
          for (std::size_t k = 0; k < d.table.size(); ++k) s += (k ? ", " : "") + std::to_string(d.table[k]);
          s += "]";
        } else {
          s = d.verb;
          for (const auto& a : d.args) s += " " + a;
          for (const auto& key : find_command(d.verb)->options)
            if (auto it = d.options.find(key); it != d.options.end()) s += " " + key + " " + it->second;
        }
        return s;
      },
      st.v);
}

inline std::string print(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print(st) + "\n";
  return out;
}

// ---------------------------------------------------------------- resolution

struct FunctorEntry {
  FunctorExpr expr;
  ExprPtr syntax;
};

struct AlgebraEntry {
  std::string functor;
  AlgebraSpec spec;
};

/// Declarations in scope after processing a script, with expressions built.
struct Environment {
  std::map<std::string, std::pair<Signature, std::string>> sigs;
  std::map<std::string, FiniteSet> sets;
  std::map<std::string, Groupoid> groups;
  std::map<std::string, FunctorEntry> functors;
  std::map<std::string, AlgebraEntry> algebras;
  std::vector<std::string> functor_order;

  bool declared(const std::string& n) const {
    return sigs.count(n) || sets.count(n) || groups.count(n) || functors.count(n) || algebras.count(n);
  }

  const Signature& signature(const std::string& n, const Pos& p) const {
    auto it = sigs.find(n);
    if (it == sigs.end()) fail_at(ErrorKind::NameError, p, "undeclared signature '" + n + "'");
    return it->second.first;
  }

  const FunctorEntry& functor(const std::string& n, const Pos& p) const {
    auto it = functors.find(n);
    if (it == functors.end()) fail_at(ErrorKind::NameError, p, "undeclared functor '" + n + "'");
    return it->second;
  }

  /// A numeral or a declared set.
  FiniteSet set_operand(const std::string& s, const Pos& p) const {
    if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) return FiniteSet(std::stoul(s));
    auto it = sets.find(s);
    if (it == sets.end()) fail_at(ErrorKind::NameError, p, "undeclared set '" + s + "'");
    return it->second;
  }

  SizeBackend backend(const std::string& spec, const Pos& p) const {
    if (spec == "nat") return nat_backend();
    if (spec.rfind("plump:", 0) == 0) {
      std::string n = spec.substr(6);
      return kappa_sigma(signature(n, p), n);
    }
    fail_at(ErrorKind::SyntaxError, p, "size must be nat or plump:<signature>");
  }
};

/// Builds the functor denoted by e where `ctx` lists the variables in scope
/// (X first). With one variable it is the identity, otherwise a projection.
inline FunctorExpr build(const Expr& e, const std::vector<std::string>& ctx, const Environment& env) {
  auto wrap_error = [&](auto&& f) -> FunctorExpr {
    try {
      return f();
    } catch (const SourceError&) {
      throw;
    } catch (const Error& err) {
      fail_at(err.kind(), e.pos, err.what());
    }
  };
  switch (e.kind) {
    case Expr::Kind::number: return fx::constant(std::stoul(e.text));
    case Expr::Kind::name: {
      for (std::size_t k = ctx.size(); k-- > 0;)
        if (ctx[k] == e.text) return ctx.size() == 1 ? fx::identity() : fx::projection(k);
      if (auto it = env.sets.find(e.text); it != env.sets.end()) return fx::constant(it->second, e.text);
      if (auto it = env.functors.find(e.text); it != env.functors.end()) {
        if (ctx.size() != 1)
          fail_at(ErrorKind::ShapeMismatch, e.pos,
                  "functor '" + e.text + "' used under a binder; write compose(" + e.text + ", " +
                      ctx.back() + ")");
        return it->second.expr;
      }
      fail_at(ErrorKind::NameError, e.pos, "undeclared name '" + e.text + "'");
    }
    case Expr::Kind::sum:
    case Expr::Kind::product:
    case Expr::Kind::pair: {
      std::vector<FunctorExpr> parts;
      for (const auto& k : e.kids) parts.push_back(build(*k, ctx, env));
      if (e.kind == Expr::Kind::pair) return fx::pairing(std::move(parts));
      return e.kind == Expr::Kind::sum ? fx::sum(std::move(parts)) : fx::product(std::move(parts));
    }
    case Expr::Kind::power: {
      FunctorExpr base = build(*e.kids[0], ctx, env);
      std::size_t k = std::isdigit(static_cast<unsigned char>(e.text[0]))
                          ? std::stoul(e.text)
                          : env.set_operand(e.text, e.pos).size();
      return fx::power(base, k);
    }
    case Expr::Kind::sym:
    case Expr::Kind::poly: {
      FunctorExpr head;
      if (e.kind == Expr::Kind::sym) {
        auto it = env.groups.find(e.text);
        if (it == env.groups.end()) fail_at(ErrorKind::NameError, e.pos, "undeclared groupoid '" + e.text + "'");
        head = wrap_error([&] { return fx::sym(it->second, e.text); });
      } else {
        head = fx::container(env.signature(e.text, e.pos), e.text);
      }
      FunctorExpr arg = build(*e.kids[0], ctx, env);
      if (arg->v.index() == 0) return head;  // bare identity
      if (output_arity(arg, ctx.size()) != 1)
        fail_at(ErrorKind::ShapeMismatch, e.kids[0]->pos, "argument must be set-valued");
      return fx::compose(head, arg);
    }
    case Expr::Kind::mu: {
      std::vector<std::string> inner = ctx;
      inner.push_back(e.text);
      return fx::mu(build(*e.kids[0], inner, env), e.text);
    }
    case Expr::Kind::compose: {
      FunctorExpr outer = build(*e.kids[0], {"X"}, env);
      FunctorExpr in = build(*e.kids[1], ctx, env);
      if (output_arity(in, ctx.size()) != 1)
        fail_at(ErrorKind::ShapeMismatch, e.kids[1]->pos, "inner functor must be set-valued");
      return fx::compose(outer, in);
    }
  }
  fail_at(ErrorKind::InternalInvariant, e.pos, "unknown expression");
}

/// Processes declarations in order, building every functor and algebra.
/// Commands are checked for undeclared references only.
inline Environment resolve(const Script& script) {
  Environment env;
  auto fresh = [&](const std::string& n, const Pos& p) {
    if (env.declared(n)) fail_at(ErrorKind::NameError, p, "'" + n + "' is already declared");
  };
  for (const auto& st : script.statements) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, SigDecl>) {
            fresh(d.name, st.pos);
            std::vector<std::string> names;
            std::vector<std::size_t> ar;
            for (const auto& [n, a] : d.ops) {
              names.push_back(n);
              ar.push_back(a);
            }
            env.sigs.emplace(d.name, std::make_pair(Signature(names, ar), d.name));
          } else if constexpr (std::is_same_v<T, SetDecl>) {
            fresh(d.name, st.pos);
            env.sets.emplace(d.name, d.labels.empty() ? FiniteSet(d.size) : FiniteSet(d.size, d.labels));
          } else if constexpr (std::is_same_v<T, GroupDecl>) {
            fresh(d.name, st.pos);
            Groupoid g;
            auto index = [&](const std::string& n) -> std::size_t {
              auto it = std::find(g.names.begin(), g.names.end(), n);
              if (it == g.names.end()) fail_at(ErrorKind::NameError, st.pos, "unknown groupoid object '" + n + "'");
              return static_cast<std::size_t>(it - g.names.begin());
            };
            for (const auto& it : d.items)
              if (it.target.empty()) {
                if (std::find(g.names.begin(), g.names.end(), it.name) != g.names.end())
                  fail_at(ErrorKind::NameError, st.pos, "groupoid object '" + it.name + "' repeated");
                g.names.push_back(it.name);
                g.arity.push_back(it.arity);
              }
            for (const auto& it : d.items) {
              std::size_t src = index(it.name);
              std::size_t dst = it.target.empty() ? src : index(it.target);
              for (const auto& p : it.perms) g.arrows.push_back({src, dst, p});
            }
            try {
              fx::check_groupoid(g);
            } catch (const Error& e) {
              fail_at(e.kind(), st.pos, e.what());
            }
            env.groups.emplace(d.name, std::move(g));
          } else if constexpr (std::is_same_v<T, FunctorDecl>) {
            fresh(d.name, st.pos);
            FunctorExpr f = build(*d.expr, {"X"}, env);
            if (output_arity(f, 1) != 1)
              fail_at(ErrorKind::ShapeMismatch, st.pos, "functor '" + d.name + "' is not set-valued");
            env.functors.emplace(d.name, FunctorEntry{f, d.expr});
            env.functor_order.push_back(d.name);
          } else if constexpr (std::is_same_v<T, AlgDecl>) {
            fresh(d.name, st.pos);
            const FunctorEntry& f = env.functor(d.functor, st.pos);
            FiniteSet carrier = env.set_operand(d.carrier, st.pos);
            FiniteSet fa;
            try {
              fa = eval_functor(f.expr, carrier);
            } catch (const Error& e) {
              fail_at(e.kind(), st.pos, e.what());
            }
            if (d.table.size() != fa.size())
              fail_at(ErrorKind::NoAlgebra, st.pos,
                      "algebra table needs " + std::to_string(fa.size()) + " entries, got " +
                          std::to_string(d.table.size()));
            for (std::size_t v : d.table)
              if (v >= carrier.size())
                fail_at(ErrorKind::NoAlgebra, st.pos, "algebra table entry outside the carrier");
            env.algebras.emplace(d.name, AlgebraEntry{d.functor, {carrier, FiniteFn(fa, carrier, d.table)}});
          } else {
            const std::string& v = d.verb;
            if (v == "iterate" || v == "mu" || v == "nu" || v == "cata" || v == "free")
              env.functor(d.args.at(0), st.pos);
            if (v == "cata" && !env.algebras.count(d.args[1]))
              fail_at(ErrorKind::NameError, st.pos, "undeclared algebra '" + d.args[1] + "'");
            if (v == "free") env.set_operand(d.args[1], st.pos);
            if (v == "enumerate") env.signature(d.args[0], st.pos);
            if (auto it = d.options.find("size"); it != d.options.end()) env.backend(it->second, st.pos);
          }
        },
        st.v);
  }
  return env;
}

/// Parses and checks names. Throws SourceError.
inline Script parse_dsl(const std::string& text) {
  Script s = Parser(text).parse_script();
  resolve(s);
  return s;
}

/// Parses a single functor expression in the unary context.
inline ExprPtr parse_expr(const std::string& text) { return Parser(text).parse_expr_only(); }

}  // namespace sizedmu::dsl
