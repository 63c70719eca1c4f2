#include "foarith/syntax.hpp"

#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

namespace foarith {

namespace {

enum class Tok { Ident, Dot, LParen, RParen, Comma, And, Or, Bang, Eq, Neq, Less, Plus, Times, End };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (c == 0xC3 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x97) {
      out.push_back({Tok::Times, "*", start});
      i += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '.': k = Tok::Dot; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '&': k = Tok::And; break;
      case '|': k = Tok::Or; break;
      case '=': k = Tok::Eq; break;
      case '<': k = Tok::Less; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Times; break;
      case '!':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::Neq, "!=", start});
          i += 2;
          continue;
        }
        k = Tok::Bang;
        break;
      default:
        throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    out.push_back({k, std::string(1, static_cast<char>(c)), start});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_constant_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'c') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_keyword(const std::string& s) { return s == "exists" || s == "forall"; }

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab) : toks_(tokenize(text)), vocab_(vocab) {}

  Formula parse() {
    auto f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().pos, msg); }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    take();
  }

  Formula formula() {
    if (peek().kind == Tok::Ident && is_keyword(peek().text)) {
      bool ex = take().text == "exists";
      if (peek().kind != Tok::Ident || is_keyword(peek().text) || is_constant_name(peek().text))
        fail("expected a variable");
      Var v = Var::named(take().text);
      expect(Tok::Dot, "'.'");
      auto body = formula();
      return ex ? exists(v, body) : forall(v, body);
    }
    return disjunction();
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (peek().kind == Tok::Or) {
      take();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts[0] : disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (peek().kind == Tok::And) {
      take();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts[0] : conj(std::move(parts));
  }

  Formula unary() {
    if (peek().kind == Tok::Bang) {
      take();
      return neg(unary());
    }
    if (peek().kind == Tok::LParen) {
      take();
      auto f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atomic();
  }

  Formula atomic() {
    const Token& t = peek();
    bool rel_name = t.kind == Tok::Ident && !is_keyword(t.text) && !is_constant_name(t.text) &&
                    peek(1).kind == Tok::LParen;
    bool builtin = (t.kind == Tok::Plus || t.kind == Tok::Times || t.kind == Tok::Less) && peek(1).kind == Tok::LParen;
    if (rel_name || builtin) {
      size_t at = t.pos;
      Rel rel = t.kind == Tok::Plus    ? Rel::plus()
                : t.kind == Tok::Times ? Rel::times()
                : t.kind == Tok::Less  ? Rel::less()
                                       : Rel::named(t.text);
      take();
      take();
      std::vector<Term> args{term()};
      while (peek().kind == Tok::Comma) {
        take();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
      auto arity = vocab_.arity(rel);
      if (!arity) throw ParseError(at, "unknown relation '" + rel.name() + "'");
      if (*arity != args.size())
        throw ParseError(at, "arity mismatch for '" + rel.name() + "': expected " + std::to_string(*arity) +
                                 ", got " + std::to_string(args.size()));
      return atom(rel, std::move(args));
    }
    Term a = term();
    Tok op = peek().kind;
    if (op != Tok::Eq && op != Tok::Neq && op != Tok::Less) fail("expected '=', '!=' or '<'");
    take();
    Term b = term();
    if (op == Tok::Eq) return eq(a, b);
    if (op == Tok::Neq) return neg(eq(a, b));
    return less(a, b);
  }

  Term term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a term");
    take();
    if (is_constant_name(t.text)) {
      unsigned long long idx = 0;
      try {
        idx = std::stoull(t.text.substr(1));
      } catch (const std::exception&) {
        throw ParseError(t.pos, "constant index too large");
      }
      if (idx >= vocab_.constant_budget)
        throw ParseError(t.pos, "constant index " + t.text.substr(1) + " outside budget " +
                                    std::to_string(vocab_.constant_budget));
      return Term::constant(static_cast<uint32_t>(idx));
    }
    return Term::var(t.text);
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const Vocabulary& vocab_;
};

enum class Ctx { Top, InAnd, InOr, InNot };

void render(std::ostream& out, const Formula& f, Ctx ctx);

void render_terms(std::ostream& out, const std::vector<Term>& ts) {
  out << "(";
  for (size_t i = 0; i < ts.size(); ++i) out << (i ? "," : "") << render_term(ts[i]);
  out << ")";
}

std::string macro_call(const MacroSpec& m) {
  std::ostringstream out;
  out << m.name;
  if (!m.params.empty()) out << "[" << m.params << "]";
  render_terms(out, m.args);
  return out.str();
}

void render_junction(std::ostream& out, const Node& n, bool is_and, Ctx ctx) {
  std::vector<Formula> kids;
  for_each_child(n, [&](const Formula& c) {
    kids.push_back(c);
    return true;
  });
  if (kids.empty()) {
    out << (is_and ? "c0 = c0" : "c0 != c0");
    return;
  }
  bool parens = ctx == Ctx::InNot || (ctx == Ctx::InAnd) || (ctx == Ctx::InOr && !is_and) || kids.size() == 1;
  if (parens) out << "(";
  for (size_t i = 0; i < kids.size(); ++i) {
    if (i) out << (is_and ? " & " : " | ");
    render(out, kids[i], is_and ? Ctx::InAnd : Ctx::InOr);
  }
  if (parens) out << ")";
}

void render(std::ostream& out, const Formula& f, Ctx ctx) {
  switch (f->kind()) {
    case Kind::Equal:
      out << render_term(f->terms()[0]) << " = " << render_term(f->terms()[1]);
      return;
    case Kind::Atom: {
      Rel r = f->relation();
      if (r == Rel::less()) {
        bool p = ctx == Ctx::InNot;
        if (p) out << "(";
        out << render_term(f->terms()[0]) << " < " << render_term(f->terms()[1]);
        if (p) out << ")";
        return;
      }
      out << r.name();
      render_terms(out, f->terms());
      return;
    }
    case Kind::Not: {
      auto& c = f->children()[0];
      if (c->kind() == Kind::Equal) {
        out << render_term(c->terms()[0]) << " != " << render_term(c->terms()[1]);
        return;
      }
      out << "!";
      render(out, c, Ctx::InNot);
      return;
    }
    case Kind::And:
    case Kind::BigAnd:
      render_junction(out, *f, true, ctx);
      return;
    case Kind::Or:
    case Kind::BigOr:
      render_junction(out, *f, false, ctx);
      return;
    case Kind::Exists:
    case Kind::Forall: {
      bool p = ctx != Ctx::Top;
      if (p) out << "(";
      out << (f->kind() == Kind::Exists ? "exists " : "forall ") << f->bound().name() << ". ";
      render(out, f->body(), Ctx::Top);
      if (p) out << ")";
      return;
    }
    case Kind::Macro:
      out << macro_call(f->macro());
      return;
  }
}

void collect_macros(const Formula& f, std::unordered_set<const Node*>& seen,
                    std::vector<std::pair<std::string, std::string>>& out, std::set<std::string>& names) {
  if (!seen.insert(f.get()).second) return;
  if (f->kind() == Kind::Macro) {
    auto call = macro_call(f->macro());
    if (names.insert(call).second) out.emplace_back(call, render_formula(f->macro().expansion));
    collect_macros(f->macro().expansion, seen, out, names);
    return;
  }
  if (!f->has_macro()) return;
  for_each_child(*f, [&](const Formula& c) {
    collect_macros(c, seen, out, names);
    return true;
  });
}

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& vocab) { return Parser(text, vocab).parse(); }

std::string render_term(const Term& t) {
  if (t.is_var()) return t.as_var().name();
  return "c" + std::to_string(t.value);
}

std::string render_formula(const Formula& f) {
  std::ostringstream out;
  render(out, f, Ctx::Top);
  return out.str();
}

std::vector<std::pair<std::string, std::string>> macro_table(const Formula& f) {
  std::unordered_set<const Node*> seen;
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> names;
  collect_macros(f, seen, out, names);
  return out;
}

}  // namespace foarith
