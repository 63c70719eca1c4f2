#include "foarith/bdd.hpp"

#include <cmath>
#include <functional>

#include "foarith/structure.hpp"
#include "foarith/transform.hpp"

namespace foarith {

namespace {
constexpr uint32_t kLeaf = UINT32_MAX;
}

Bdd::Bdd(uint64_t node_cap) : cap_(node_cap) {
  nodes_.push_back({kLeaf, 0, 0});
  nodes_.push_back({kLeaf, 1, 1});
}

Bdd::Ref Bdd::make(uint32_t v, Ref lo, Ref hi) {
  if (lo == hi) return lo;
  Node key{v, lo, hi};
  auto it = unique_.find(key);
  if (it != unique_.end()) return it->second;
  if (nodes_.size() >= cap_) throw BddOverflow("BDD node cap reached");
  Ref r = static_cast<Ref>(nodes_.size());
  nodes_.push_back(key);
  unique_.emplace(key, r);
  return r;
}

Bdd::Ref Bdd::negate(Ref a) {
  if (a <= 1) return 1 - a;
  auto it = neg_cache_.find(a);
  if (it != neg_cache_.end()) return it->second;
  Node n = nodes_[a];
  Ref r = make(n.var, negate(n.lo), negate(n.hi));
  neg_cache_.emplace(a, r);
  return r;
}

Bdd::Ref Bdd::apply(bool is_or, Ref a, Ref b) {
  if (a > b) std::swap(a, b);
  if (a == b) return a;
  if (is_or) {
    if (a == 1) return 1;
    if (a == 0) return b;
  } else {
    if (a == 0) return 0;
    if (a == 1) return b;
  }
  auto& cache = is_or ? or_cache_ : and_cache_;
  uint64_t key = uint64_t{a} << 32 | b;
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Node na = nodes_[a], nb = nodes_[b];
  uint32_t v = std::min(na.var, nb.var);
  Ref alo = na.var == v ? na.lo : a, ahi = na.var == v ? na.hi : a;
  Ref blo = nb.var == v ? nb.lo : b, bhi = nb.var == v ? nb.hi : b;
  Ref lo = apply(is_or, alo, blo);
  Ref hi = apply(is_or, ahi, bhi);
  Ref r = make(v, lo, hi);
  cache.emplace(key, r);
  return r;
}

bool Bdd::eval(Ref r, const std::vector<bool>& bits) const {
  while (r > 1) r = bits.at(nodes_[r].var) ? nodes_[r].hi : nodes_[r].lo;
  return r == 1;
}

double Bdd::count(Ref r, uint32_t vars) const {
  std::unordered_map<Ref, double> memo;
  // fraction of assignments reaching 1 from r
  std::function<double(Ref)> frac = [&](Ref x) -> double {
    if (x <= 1) return x;
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    double v = 0.5 * frac(nodes_[x].lo) + 0.5 * frac(nodes_[x].hi);
    memo.emplace(x, v);
    return v;
  };
  return frac(r) * std::ldexp(1.0, static_cast<int>(vars));
}

Bdd::Ref circuit_bdd(Bdd& m, const Circuit& c) {
  std::vector<Bdd::Ref> val(c.gates.size());
  for (size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    switch (gate.kind) {
      case GateKind::Const: val[g] = Bdd::constant(gate.value != 0); break;
      case GateKind::Input: val[g] = m.var(static_cast<uint32_t>(gate.value)); break;
      case GateKind::Not: val[g] = m.negate(val[gate.in.at(0)]); break;
      case GateKind::And:
      case GateKind::Or: {
        bool is_or = gate.kind == GateKind::Or;
        Bdd::Ref acc = Bdd::constant(!is_or);
        for (uint32_t i : gate.in) acc = is_or ? m.disj(acc, val[i]) : m.conj(acc, val[i]);
        val[g] = acc;
      }
    }
  }
  return val.at(c.output);
}

Bdd::Ref sentence_bdd(Bdd& m, const Formula& sentence, const EncodingLayout& layout) {
  Formula f = materialize(expand_macros(sentence));
  uint32_t n = layout.n;
  std::vector<uint32_t> env(SymbolTable::variables().size() + 1, UINT32_MAX);
  std::function<Bdd::Ref(const Node&)> go = [&](const Node& x) -> Bdd::Ref {
    auto value = [&](const Term& t) {
      if (!t.is_var()) return t.value < n ? t.value : n - 1;
      uint32_t id = t.as_var().id;
      if (id >= env.size() || env[id] == UINT32_MAX) throw std::invalid_argument("sentence_bdd: free variable");
      return env[id];
    };
    switch (x.kind()) {
      case Kind::Equal:
        return Bdd::constant(value(x.terms()[0]) == value(x.terms()[1]));
      case Kind::Atom: {
        std::vector<uint32_t> args;
        for (auto& t : x.terms()) args.push_back(value(t));
        if (layout.contains(x.relation())) return m.var(static_cast<uint32_t>(layout.bit(x.relation(), args)));
        if (x.relation().builtin()) return Bdd::constant(builtin_holds(x.relation(), n, args));
        throw std::invalid_argument("sentence_bdd: relation '" + x.relation().name() + "' not in the layout");
      }
      case Kind::Not:
        return m.negate(go(*x.children()[0]));
      case Kind::And:
      case Kind::Or: {
        bool is_or = x.kind() == Kind::Or;
        Bdd::Ref acc = Bdd::constant(!is_or);
        for (auto& c : x.children()) acc = is_or ? m.disj(acc, go(*c)) : m.conj(acc, go(*c));
        return acc;
      }
      case Kind::Exists:
      case Kind::Forall: {
        bool is_or = x.kind() == Kind::Exists;
        uint32_t id = x.bound().id;
        if (id >= env.size()) env.resize(id + 1, UINT32_MAX);
        uint32_t saved = env[id];
        Bdd::Ref acc = Bdd::constant(!is_or);
        for (uint32_t e = 0; e < n; ++e) {
          env[id] = e;
          acc = is_or ? m.disj(acc, go(*x.body())) : m.conj(acc, go(*x.body()));
        }
        env[id] = saved;
        return acc;
      }
      default:
        throw std::logic_error("sentence_bdd: unexpanded node");
    }
  };
  return go(*f);
}

}  // namespace foarith
