#include "foarith/parafo.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include "foarith/transform.hpp"

namespace foarith {

namespace {

void add_shifted(ArithStructure& out, Rel rel, const RelationData& data, uint32_t shift) {
  std::vector<uint32_t> t(data.arity());
  for (size_t i = 0; i < data.size(); ++i) {
    auto src = data.tuple(i);
    for (size_t j = 0; j < t.size(); ++j) t[j] = src[j] + shift;
    out.add(rel, t);
  }
}

// The local built-in of one side, written into out with the given shift.
void add_local_builtin(ArithStructure& out, const ArithStructure& side, Rel rel, uint32_t shift) {
  if (side.overridden(rel)) {
    add_shifted(out, rel, *side.relation(rel), shift);
    return;
  }
  uint32_t n = side.size();
  if (rel == Rel::less()) {
    for (uint32_t x = 0; x < n; ++x)
      for (uint32_t y = x + 1; y < n; ++y) out.add(rel, {x + shift, y + shift});
  } else if (rel == Rel::plus()) {
    for (uint32_t x = 0; x < n; ++x)
      for (uint32_t y = 0; x + y < n; ++y) out.add(rel, {x + shift, y + shift, x + y + shift});
  } else {
    for (uint32_t y = 0; y < n; ++y) out.add(rel, {shift, y + shift, shift});
    for (uint32_t x = 1; x < n; ++x)
      for (uint32_t y = 0; uint64_t{x} * y < n; ++y) out.add(rel, {x + shift, y + shift, x * y + shift});
  }
}

}  // namespace

ArithStructure disjoint_union(const ArithStructure& a, const ArithStructure& b, std::string_view marker) {
  uint64_t total = uint64_t{a.size()} + b.size();
  if (total > UINT32_MAX) throw std::length_error("disjoint union: universe too large");
  Rel u = Rel::named(marker);
  if (u.builtin()) throw std::invalid_argument("disjoint union: marker must not be a built-in");
  ArithStructure out(static_cast<uint32_t>(total));
  uint32_t shift = a.size();
  for (auto& d : a.declared())
    if (!d.rel.builtin()) {
      if (d.rel == u) throw std::invalid_argument("disjoint union: marker '" + u.name() + "' already used");
      out.declare(d.rel, d.arity);
      add_shifted(out, d.rel, *a.relation(d.rel), 0);
    }
  for (auto& d : b.declared())
    if (!d.rel.builtin()) {
      if (d.rel == u || out.has(d.rel))
        throw std::invalid_argument("disjoint union: relation '" + d.rel.name() + "' on both sides");
      out.declare(d.rel, d.arity);
      add_shifted(out, d.rel, *b.relation(d.rel), shift);
    }
  out.declare(u, 1);
  for (uint32_t x = 0; x < b.size(); ++x) out.add(u, {x + shift});
  for (Rel r : {Rel::plus(), Rel::times()}) {
    out.override_builtin(r);
    add_local_builtin(out, a, r, 0);
    add_local_builtin(out, b, r, shift);
  }
  // The concatenated order is the natural order unless a side overrides <.
  if (a.overridden(Rel::less()) || b.overridden(Rel::less())) {
    out.override_builtin(Rel::less());
    add_local_builtin(out, a, Rel::less(), 0);
    add_local_builtin(out, b, Rel::less(), shift);
    for (uint32_t x = 0; x < a.size(); ++x)
      for (uint32_t y = 0; y < b.size(); ++y) out.add(Rel::less(), {x, y + shift});
  }
  return out;
}

// ---- normalization ----

namespace {

Term rename(const Term& t, const std::map<Var, Var>& env) {
  if (!t.is_var()) return t;
  auto it = env.find(t.as_var());
  if (it == env.end()) throw std::invalid_argument("parse tree: free variable '" + t.as_var().name() + "'");
  return Term::var(it->second);
}

Formula normalize(const Formula& f, bool pos, uint32_t depth, const std::map<Var, Var>& env) {
  switch (f->kind()) {
    case Kind::Equal:
    case Kind::Atom: {
      std::vector<Term> ts;
      for (auto& t : f->terms()) ts.push_back(rename(t, env));
      Formula g = f->kind() == Kind::Equal ? eq(ts[0], ts[1]) : atom(f->relation(), std::move(ts));
      return pos ? g : neg(g);
    }
    case Kind::Not:
      return normalize(f->children()[0], !pos, depth, env);
    case Kind::And:
    case Kind::Or: {
      bool is_and = (f->kind() == Kind::And) == pos;
      std::vector<Formula> kids;
      for (auto& c : f->children()) {
        auto g = normalize(c, pos, depth, env);
        if (g->kind() == (is_and ? Kind::And : Kind::Or))
          kids.insert(kids.end(), g->children().begin(), g->children().end());
        else
          kids.push_back(g);
      }
      return is_and ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Kind::Exists:
    case Kind::Forall: {
      bool ex = (f->kind() == Kind::Exists) == pos;
      Var x = Var::named("x" + std::to_string(depth + 1));
      auto inner = env;
      inner[f->bound()] = x;
      auto body = normalize(f->body(), pos, depth + 1, inner);
      return ex ? exists(x, body) : forall(x, body);
    }
    default:
      throw std::logic_error("parse tree: unexpanded macro or family");
  }
}

std::optional<uint32_t> var_index(Var v) {
  const std::string& s = v.name();
  if (s.size() < 2 || s[0] != 'x' || s[1] == '0') return std::nullopt;
  uint32_t j = 0;
  for (size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9' || j > 100000) return std::nullopt;
    j = j * 10 + static_cast<uint32_t>(s[i] - '0');
  }
  return j;
}

std::string rel_name(const Node& n) { return n.kind() == Kind::Equal ? std::string(kEqualityName) : n.relation().name(); }

}  // namespace

Formula normalize_for_parse_tree(const Formula& f) {
  return normalize(materialize(expand_macros(f)), true, 0, {});
}

std::string atom_label(Rel r) { return "At-" + r.name(); }
std::string var_label(uint32_t pos, uint32_t j, Rel r) {
  return "V" + std::to_string(pos) + "." + std::to_string(j) + "-" + r.name();
}
std::string const_label(uint32_t pos, Rel r) { return "C" + std::to_string(pos) + "-" + r.name(); }

ParseTree encode_parse_tree(const Formula& phi, uint32_t m) {
  struct Item {
    const Node* node;
    uint32_t parent;
  };
  // first pass: count, validate, collect relations and q
  std::vector<Item> order;
  std::map<std::string, uint32_t> arities;
  uint32_t q = 0;
  std::vector<Item> stack{{phi.get(), UINT32_MAX}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Node& n = *it.node;
    order.push_back(it);
    if (order.size() > UINT32_MAX / 2) throw std::length_error("parse tree: too many nodes");
    uint32_t self = static_cast<uint32_t>(order.size() - 1);
    switch (n.kind()) {
      case Kind::Equal:
      case Kind::Atom:
        arities[rel_name(n)] = static_cast<uint32_t>(n.terms().size());
        for (auto& t : n.terms()) {
          if (!t.is_var()) {
            if (t.value >= m) throw std::invalid_argument("parse tree: constant index not below m");
            continue;
          }
          auto j = var_index(t.as_var());
          if (!j) throw std::invalid_argument("parse tree: variable '" + t.as_var().name() + "' is not x_j");
          q = std::max(q, *j);
        }
        break;
      case Kind::Not:
        if (n.children()[0]->kind() != Kind::Atom && n.children()[0]->kind() != Kind::Equal)
          throw std::invalid_argument("parse tree: negation above a non-atomic formula (normalize first)");
        break;
      case Kind::Exists:
      case Kind::Forall: {
        auto j = var_index(n.bound());
        if (!j) throw std::invalid_argument("parse tree: variable '" + n.bound().name() + "' is not x_j");
        q = std::max(q, *j);
        break;
      }
      case Kind::And:
      case Kind::Or:
        break;
      default:
        throw std::invalid_argument("parse tree: macro or indexed family (normalize first)");
    }
    for (size_t c = n.children().size(); c-- > 0;) stack.push_back({n.children()[c].get(), self});
  }
  uint32_t nodes = static_cast<uint32_t>(order.size());
  ParseTree out{ArithStructure(std::max(nodes, std::max<uint32_t>(m, 1))), nodes, q};
  auto& s = out.structure;
  s.declare("E", 2);
  for (auto name : {"Exists", "Forall", "And", "Or", "Neg"}) s.declare(name, 1);
  for (uint32_t j = 1; j <= q; ++j) s.declare("X" + std::to_string(j), 1);
  for (auto& [name, ar] : arities) {
    Rel r = Rel::named(name);
    s.declare(atom_label(r), 1);
    for (uint32_t i = 1; i <= ar; ++i) {
      for (uint32_t j = 1; j <= q; ++j) s.declare(var_label(i, j, r), 1);
      s.declare(const_label(i, r), 2);
    }
  }
  for (uint32_t u = 0; u < nodes; ++u) {
    const Node& n = *order[u].node;
    if (order[u].parent != UINT32_MAX) s.add("E", {order[u].parent, u});
    switch (n.kind()) {
      case Kind::Equal:
      case Kind::Atom: {
        Rel r = Rel::named(rel_name(n));
        s.add(atom_label(r), {u});
        for (uint32_t i = 0; i < n.terms().size(); ++i) {
          const Term& t = n.terms()[i];
          if (t.is_var())
            s.add(var_label(i + 1, *var_index(t.as_var()), r), {u});
          else
            s.add(const_label(i + 1, r), {u, t.value});
        }
        break;
      }
      case Kind::Not: s.add("Neg", {u}); break;
      case Kind::And: s.add("And", {u}); break;
      case Kind::Or: s.add("Or", {u}); break;
      case Kind::Exists:
      case Kind::Forall:
        s.add(n.kind() == Kind::Exists ? "Exists" : "Forall", {u});
        s.add("X" + std::to_string(*var_index(n.bound())), {u});
        break;
      default:
        break;
    }
  }
  return out;
}

Formula decode_parse_tree(const ArithStructure& s) {
  uint32_t n = s.size();
  auto bad = [](const std::string& why) { return std::invalid_argument("decode parse tree: " + why); };
  const RelationData* e = s.relation(Rel::named("E"));
  if (!e || e->arity() != 2) throw bad("missing binary E");

  enum class Lab : uint8_t { None, Exists, Forall, And, Or, Neg, Atom };
  std::vector<Lab> kind(n, Lab::None);
  std::vector<Rel> atom_rel(n);
  std::vector<uint32_t> bound(n, 0);
  auto set_kind = [&](uint32_t u, Lab k) {
    if (kind[u] != Lab::None) throw bad("node " + std::to_string(u) + " carries two labels");
    kind[u] = k;
  };
  // relation name -> arity, and per-position labels
  struct AtomInfo {
    uint32_t arity = 0;
    std::vector<std::tuple<uint32_t, uint32_t, Rel>> var_labels;  // pos, j, label
    std::vector<std::pair<uint32_t, Rel>> const_labels;  // pos, label
  };
  std::map<std::string, AtomInfo> atoms;
  std::vector<std::pair<uint32_t, Rel>> xs;
  for (auto& d : s.declared()) {
    const std::string& name = d.rel.name();
    auto dash = name.find('-');
    if (name.rfind("At-", 0) == 0) {
      atoms[name.substr(3)];
    } else if (name.size() > 1 && name[0] == 'V' && dash != std::string::npos) {
      auto dot = name.find('.');
      if (dot == std::string::npos || dot > dash) throw bad("malformed label '" + name + "'");
      uint32_t pos = static_cast<uint32_t>(std::stoul(name.substr(1, dot - 1)));
      uint32_t j = static_cast<uint32_t>(std::stoul(name.substr(dot + 1, dash - dot - 1)));
      auto& a = atoms[name.substr(dash + 1)];
      a.arity = std::max(a.arity, pos);
      a.var_labels.emplace_back(pos, j, d.rel);
    } else if (name.size() > 1 && name[0] == 'C' && dash != std::string::npos) {
      uint32_t pos = static_cast<uint32_t>(std::stoul(name.substr(1, dash - 1)));
      auto& a = atoms[name.substr(dash + 1)];
      a.arity = std::max(a.arity, pos);
      a.const_labels.emplace_back(pos, d.rel);
    } else if (name.size() > 1 && name[0] == 'X') {
      xs.emplace_back(static_cast<uint32_t>(std::stoul(name.substr(1))), d.rel);
    }
  }
  auto members = [&](const char* name, Lab k) {
    if (auto r = s.relation(Rel::named(name)))
      for (size_t i = 0; i < r->size(); ++i) set_kind(r->tuple(i)[0], k);
  };
  members("Exists", Lab::Exists);
  members("Forall", Lab::Forall);
  members("And", Lab::And);
  members("Or", Lab::Or);
  members("Neg", Lab::Neg);
  for (auto& [name, info] : atoms)
    if (auto r = s.relation(Rel::named("At-" + name)))
      for (size_t i = 0; i < r->size(); ++i) {
        uint32_t u = r->tuple(i)[0];
        set_kind(u, Lab::Atom);
        atom_rel[u] = Rel::named(name);
      }
  for (auto& [j, rel] : xs) {
    auto r = s.relation(rel);
    for (size_t i = 0; i < r->size(); ++i) {
      uint32_t u = r->tuple(i)[0];
      if (bound[u]) throw bad("node " + std::to_string(u) + " binds two variables");
      bound[u] = j;
    }
  }
  // atom arguments
  std::map<uint32_t, std::vector<std::optional<Term>>> args;
  auto arg_slot = [&](uint32_t u, uint32_t pos) -> std::optional<Term>& {
    if (kind[u] != Lab::Atom) throw bad("argument label on non-atom node " + std::to_string(u));
    auto& v = args[u];
    v.resize(atoms[atom_rel[u].name()].arity);
    if (pos == 0 || pos > v.size()) throw bad("argument position out of range");
    if (v[pos - 1]) throw bad("node " + std::to_string(u) + " has two terms at one position");
    return v[pos - 1];
  };
  for (auto& [name, info] : atoms) {
    for (auto& [pos, j, rel] : info.var_labels) {
      auto r = s.relation(rel);
      for (size_t i = 0; i < r->size(); ++i) {
        uint32_t u = r->tuple(i)[0];
        if (atom_rel[u].name() != name) throw bad("variable label of another relation on node " + std::to_string(u));
        arg_slot(u, pos) = Term::var("x" + std::to_string(j));
      }
    }
    for (auto& [pos, rel] : info.const_labels) {
      auto r = s.relation(rel);
      for (size_t i = 0; i < r->size(); ++i) {
        uint32_t u = r->tuple(i)[0];
        if (atom_rel[u].name() != name) throw bad("constant label of another relation on node " + std::to_string(u));
        arg_slot(u, pos) = Term::constant(r->tuple(i)[1]);
      }
    }
  }
  std::vector<std::vector<uint32_t>> children(n);
  std::vector<uint32_t> parents(n, 0);
  for (size_t i = 0; i < e->size(); ++i) {
    auto t = e->tuple(i);
    children[t[0]].push_back(t[1]);
    parents[t[1]]++;
  }
  std::optional<uint32_t> root;
  for (uint32_t u = 0; u < n; ++u) {
    if (parents[u] > 1) throw bad("node " + std::to_string(u) + " has two parents");
    if (kind[u] == Lab::None) {
      if (parents[u] || !children[u].empty()) throw bad("unlabeled node " + std::to_string(u) + " in the tree");
      continue;
    }
    if (parents[u] == 0) {
      if (root) throw bad("more than one root");
      root = u;
    }
    std::sort(children[u].begin(), children[u].end());
  }
  if (!root) throw bad("no root");
  uint64_t visited = 0;
  std::function<Formula(uint32_t)> build = [&](uint32_t u) -> Formula {
    ++visited;
    auto& ch = children[u];
    bool quant = kind[u] == Lab::Exists || kind[u] == Lab::Forall;
    if (quant != (bound[u] != 0)) throw bad("variable label mismatch at node " + std::to_string(u));
    switch (kind[u]) {
      case Lab::Exists:
      case Lab::Forall: {
        if (ch.size() != 1) throw bad("quantifier node needs one child");
        Var x = Var::named("x" + std::to_string(bound[u]));
        auto body = build(ch[0]);
        return kind[u] == Lab::Exists ? exists(x, body) : forall(x, body);
      }
      case Lab::Neg:
        if (ch.size() != 1) throw bad("negation node needs one child");
        return neg(build(ch[0]));
      case Lab::And:
      case Lab::Or: {
        std::vector<Formula> kids;
        for (uint32_t c : ch) kids.push_back(build(c));
        return kind[u] == Lab::And ? conj(std::move(kids)) : disj(std::move(kids));
      }
      case Lab::Atom: {
        if (!ch.empty()) throw bad("atom node with children");
        auto& v = args[u];
        v.resize(atoms[atom_rel[u].name()].arity);
        std::vector<Term> ts;
        for (auto& t : v) {
          if (!t) throw bad("atom node " + std::to_string(u) + " misses a term");
          ts.push_back(*t);
        }
        if (atom_rel[u].name() == kEqualityName) {
          if (ts.size() != 2) throw bad("equality needs two terms");
          return eq(ts[0], ts[1]);
        }
        return atom(atom_rel[u], std::move(ts));
      }
      default:
        throw bad("unlabeled node");
    }
  };
  Formula f = build(*root);
  uint64_t labeled = static_cast<uint64_t>(std::count_if(kind.begin(), kind.end(), [](Lab k) { return k != Lab::None; }));
  if (visited != labeled) throw bad("labeled nodes outside the tree");
  return f;
}

}  // namespace foarith
