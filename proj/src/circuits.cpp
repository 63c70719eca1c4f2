#include "foarith/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "foarith/eval.hpp"
#include "foarith/transform.hpp"

namespace foarith {

namespace {

bool is_gate(GateKind k) { return k == GateKind::And || k == GateKind::Or; }

// Hash-consed gate store.
class Builder {
 public:
  explicit Builder(uint64_t max_gates = UINT64_MAX) : max_(max_gates) {}

  uint32_t add(GateKind kind, std::vector<uint32_t> in, uint64_t value = 0) {
    std::vector<uint64_t> key{static_cast<uint64_t>(kind), value};
    key.insert(key.end(), in.begin(), in.end());
    auto [it, fresh] = index_.try_emplace(std::move(key), static_cast<uint32_t>(gates.size()));
    if (fresh) {
      if (gates.size() >= max_) throw std::length_error("circuit exceeds the gate budget");
      gates.push_back(Gate{kind, std::move(in), value});
    }
    return it->second;
  }
  uint32_t constant(bool b) { return add(GateKind::Const, {}, b ? 1 : 0); }
  uint32_t input(uint64_t bit) { return add(GateKind::Input, {}, bit); }

  std::vector<Gate> gates;

 private:
  uint64_t max_;
  std::map<std::vector<uint64_t>, uint32_t> index_;
};

// Keeps the gates reachable from out, preserving their relative order.
Circuit prune(uint64_t input_count, const std::vector<Gate>& gates, uint32_t out) {
  std::vector<char> live(gates.size(), 0);
  live[out] = 1;
  for (size_t i = gates.size(); i-- > 0;)
    if (live[i])
      for (uint32_t c : gates[i].in) live[c] = 1;
  std::vector<uint32_t> remap(gates.size(), 0);
  Circuit c;
  c.input_count = input_count;
  for (size_t i = 0; i < gates.size(); ++i) {
    if (!live[i]) continue;
    remap[i] = static_cast<uint32_t>(c.gates.size());
    Gate g = gates[i];
    for (auto& x : g.in) x = remap[x];
    c.gates.push_back(std::move(g));
  }
  c.output = remap[out];
  return c;
}

struct Ref {
  bool constant = false;
  bool value = false;
  uint32_t gate = 0;
};

Circuit simplify_with(const Circuit& c, const std::map<uint64_t, bool>& fixed, bool renumber) {
  std::vector<uint64_t> new_bit;
  uint64_t remaining = c.input_count;
  if (renumber) {
    new_bit.assign(c.input_count, 0);
    uint64_t next = 0;
    for (uint64_t b = 0; b < c.input_count; ++b)
      if (!fixed.count(b)) new_bit[b] = next++;
    remaining = next;
  }
  Builder out;
  std::vector<Ref> ref(c.gates.size());
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::Const:
        ref[i] = {true, g.value != 0, 0};
        break;
      case GateKind::Input: {
        auto it = fixed.find(g.value);
        if (it != fixed.end())
          ref[i] = {true, it->second, 0};
        else
          ref[i] = {false, false, out.input(renumber ? new_bit[g.value] : g.value)};
        break;
      }
      case GateKind::Not: {
        Ref r = ref[g.in.at(0)];
        if (r.constant)
          ref[i] = {true, !r.value, 0};
        else if (out.gates[r.gate].kind == GateKind::Not)
          ref[i] = {false, false, out.gates[r.gate].in[0]};
        else
          ref[i] = {false, false, out.add(GateKind::Not, {r.gate})};
        break;
      }
      case GateKind::And:
      case GateKind::Or: {
        bool absorbing = g.kind == GateKind::Or;
        std::vector<uint32_t> kids;
        bool decided = false;
        for (uint32_t x : g.in) {
          Ref r = ref[x];
          if (r.constant) {
            if (r.value == absorbing) decided = true;
            continue;
          }
          const Gate& child = out.gates[r.gate];
          if (child.kind == g.kind)
            kids.insert(kids.end(), child.in.begin(), child.in.end());
          else
            kids.push_back(r.gate);
        }
        if (decided) {
          ref[i] = {true, absorbing, 0};
          break;
        }
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
        if (kids.empty())
          ref[i] = {true, !absorbing, 0};
        else if (kids.size() == 1)
          ref[i] = {false, false, kids[0]};
        else
          ref[i] = {false, false, out.add(g.kind, std::move(kids))};
        break;
      }
    }
  }
  Ref r = ref.at(c.output);
  uint32_t o = r.constant ? out.constant(r.value) : r.gate;
  return prune(remaining, out.gates, o);
}

void check_order(const Circuit& c) {
  if (c.gates.empty() || c.output >= c.gates.size()) throw std::invalid_argument("circuit: bad output gate");
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    for (uint32_t x : g.in)
      if (x >= i) throw std::invalid_argument("circuit: gates not in topological order");
    if (g.kind == GateKind::Not && g.in.size() != 1) throw std::invalid_argument("circuit: NOT needs one input");
    if ((g.kind == GateKind::Input || g.kind == GateKind::Const) && !g.in.empty())
      throw std::invalid_argument("circuit: INPUT/CONST take no inputs");
    if (g.kind == GateKind::Input && g.value >= c.input_count) throw std::invalid_argument("circuit: input bit out of range");
  }
}

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
    case GateKind::Not: return "NOT";
    case GateKind::Input: return "INPUT";
    case GateKind::Const: return "CONST";
  }
  return "?";
}

}  // namespace

bool Circuit::eval(const std::vector<bool>& bits) const {
  if (bits.size() != input_count) throw std::invalid_argument("eval_circuit: expected " + std::to_string(input_count) + " bits");
  std::vector<char> v(gates.size(), 0);
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    switch (g.kind) {
      case GateKind::Const: v[i] = g.value != 0; break;
      case GateKind::Input: v[i] = bits[g.value]; break;
      case GateKind::Not: v[i] = !v[g.in[0]]; break;
      case GateKind::And:
        v[i] = std::all_of(g.in.begin(), g.in.end(), [&](uint32_t x) { return v[x] != 0; });
        break;
      case GateKind::Or:
        v[i] = std::any_of(g.in.begin(), g.in.end(), [&](uint32_t x) { return v[x] != 0; });
        break;
    }
  }
  return v.at(output) != 0;
}

uint32_t Circuit::depth() const {
  std::vector<uint32_t> d(gates.size(), 0);
  for (size_t i = 0; i < gates.size(); ++i) {
    uint32_t m = 0;
    for (uint32_t x : gates[i].in) m = std::max(m, d[x]);
    d[i] = m + (is_gate(gates[i].kind) ? 1 : 0);
  }
  return d.at(output);
}

uint32_t Circuit::bottom_fanin() const {
  std::vector<char> literal(gates.size(), 0);
  uint32_t best = 0;
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (g.kind == GateKind::Input || g.kind == GateKind::Const) literal[i] = 1;
    if (g.kind == GateKind::Not) literal[i] = literal[g.in[0]];
    if (is_gate(g.kind) && std::all_of(g.in.begin(), g.in.end(), [&](uint32_t x) { return literal[x] != 0; }))
      best = std::max(best, static_cast<uint32_t>(g.in.size()));
  }
  return best;
}

uint64_t Circuit::count(GateKind k) const {
  return static_cast<uint64_t>(std::count_if(gates.begin(), gates.end(), [k](const Gate& g) { return g.kind == k; }));
}

uint64_t eval_circuit_lanes(const Circuit& c, std::span<const uint64_t> lanes) {
  std::vector<uint64_t> v(c.gates.size());
  for (size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    switch (gate.kind) {
      case GateKind::Const: v[g] = gate.value ? ~uint64_t{0} : 0; break;
      case GateKind::Input: v[g] = lanes[gate.value]; break;
      case GateKind::Not: v[g] = ~v[gate.in[0]]; break;
      case GateKind::And: {
        uint64_t acc = ~uint64_t{0};
        for (uint32_t i : gate.in) acc &= v[i];
        v[g] = acc;
        break;
      }
      case GateKind::Or: {
        uint64_t acc = 0;
        for (uint32_t i : gate.in) acc |= v[i];
        v[g] = acc;
        break;
      }
    }
  }
  return v.at(c.output);
}

bool eval_circuit(const Circuit& c, const std::vector<bool>& bits) { return c.eval(bits); }

Circuit restrict_circuit(const Circuit& c, const std::map<uint64_t, bool>& partial) {
  for (auto& [b, v] : partial)
    if (b >= c.input_count) throw std::out_of_range("restrict: bit " + std::to_string(b) + " out of range");
  return simplify_with(c, partial, true);
}

Circuit simplify(const Circuit& c) { return simplify_with(c, {}, false); }

std::string circuit_to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    nlohmann::json j{{"id", i}, {"kind", kind_name(g.kind)}, {"in", g.in}};
    if (g.kind == GateKind::Input) j["bit"] = g.value;
    if (g.kind == GateKind::Const) j["value"] = g.value;
    gates.push_back(std::move(j));
  }
  return nlohmann::json{{"inputs", c.input_count}, {"gates", gates}, {"output", c.output}}.dump();
}

Circuit circuit_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  Circuit c;
  c.input_count = j.at("inputs").get<uint64_t>();
  c.output = j.at("output").get<uint32_t>();
  for (auto& g : j.at("gates")) {
    if (g.at("id").get<size_t>() != c.gates.size()) throw std::invalid_argument("circuit json: ids must be 0,1,2,...");
    std::string k = g.at("kind").get<std::string>();
    Gate out;
    if (k == "AND") out.kind = GateKind::And;
    else if (k == "OR") out.kind = GateKind::Or;
    else if (k == "NOT") out.kind = GateKind::Not;
    else if (k == "INPUT") out.kind = GateKind::Input, out.value = g.at("bit").get<uint64_t>();
    else if (k == "CONST") out.kind = GateKind::Const, out.value = g.at("value").get<uint64_t>();
    else throw std::invalid_argument("circuit json: unknown gate kind '" + k + "'");
    if (g.contains("in")) out.in = g.at("in").get<std::vector<uint32_t>>();
    c.gates.push_back(std::move(out));
  }
  check_order(c);
  return c;
}

// ---- encoding ----

EncodingLayout::EncodingLayout(uint32_t n_, std::vector<RelationDecl> order_) : n(n_), order(std::move(order_)) {
  if (n == 0) throw std::invalid_argument("encoding: empty universe");
  for (auto& d : order) {
    if (std::count_if(order.begin(), order.end(), [&](const RelationDecl& e) { return e.rel == d.rel; }) > 1)
      throw std::invalid_argument("encoding: relation '" + d.rel.name() + "' listed twice");
    offset.push_back(length);
    uint64_t block = 1;
    for (uint32_t i = 0; i < d.arity; ++i) {
      block *= n;
      if (block > (uint64_t{1} << 36)) throw std::length_error("encoding: string too long");
    }
    length += block;
  }
}

bool EncodingLayout::contains(Rel rel) const {
  return std::any_of(order.begin(), order.end(), [&](const RelationDecl& d) { return d.rel == rel; });
}

uint64_t EncodingLayout::bit(Rel rel, std::span<const uint32_t> tuple) const {
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i].rel != rel) continue;
    if (tuple.size() != order[i].arity) throw std::invalid_argument("encoding: arity mismatch for " + rel.name());
    uint64_t idx = 0;
    for (size_t t = tuple.size(); t-- > 0;) idx = idx * n + tuple[t];
    return offset[i] + idx;
  }
  throw std::invalid_argument("encoding: relation '" + rel.name() + "' not in the vocabulary");
}

std::string EncodedStructure::str() const {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

EncodedStructure encode_structure(const ArithStructure& a) { return encode_structure(a, a.declared()); }

EncodedStructure encode_structure(const ArithStructure& a, const std::vector<RelationDecl>& order) {
  EncodedStructure e{EncodingLayout(a.size(), order), {}};
  e.bits.assign(e.layout.length, false);
  uint32_t n = a.size();
  for (size_t i = 0; i < order.size(); ++i) {
    std::vector<uint32_t> t(order[i].arity, 0);
    uint64_t count = e.layout.length - e.layout.offset[i];
    if (i + 1 < order.size()) count = e.layout.offset[i + 1] - e.layout.offset[i];
    for (uint64_t idx = 0; idx < count; ++idx) {
      uint64_t r = idx;
      for (auto& x : t) x = static_cast<uint32_t>(r % n), r /= n;
      if (a.holds(order[i].rel, t)) e.bits[e.layout.offset[i] + idx] = true;
    }
  }
  return e;
}

ArithStructure decode_structure(const EncodedStructure& e) {
  if (e.bits.size() != e.layout.length) throw std::invalid_argument("decode: bit string length mismatch");
  uint32_t n = e.layout.n;
  ArithStructure a(n);
  for (size_t i = 0; i < e.layout.order.size(); ++i) {
    auto& d = e.layout.order[i];
    uint64_t end = i + 1 < e.layout.order.size() ? e.layout.offset[i + 1] : e.layout.length;
    std::vector<std::vector<uint32_t>> tuples;
    bool arithmetic = d.rel.builtin();
    for (uint64_t idx = 0; idx < end - e.layout.offset[i]; ++idx) {
      std::vector<uint32_t> t(d.arity);
      uint64_t r = idx;
      for (auto& x : t) x = static_cast<uint32_t>(r % n), r /= n;
      bool bit = e.bits[e.layout.offset[i] + idx];
      if (d.rel.builtin() && bit != builtin_holds(d.rel, n, t)) arithmetic = false;
      if (bit) tuples.push_back(std::move(t));
    }
    if (arithmetic) continue;
    if (d.rel.builtin())
      a.override_builtin(d.rel);
    else
      a.declare(d.rel, d.arity);
    for (auto& t : tuples) a.add(d.rel, t);
  }
  return a;
}

// ---- prenex ----

namespace {

Term rename_term(const Term& t, const std::map<Var, Var>& env) {
  if (!t.is_var()) return t;
  auto it = env.find(t.as_var());
  return it == env.end() ? t : Term::var(it->second);
}

Formula rename_apart(const Formula& f, std::map<Var, Var> env, std::set<Var>& used, const std::set<Var>& avoid) {
  switch (f->kind()) {
    case Kind::Equal:
      return eq(rename_term(f->terms()[0], env), rename_term(f->terms()[1], env));
    case Kind::Atom: {
      std::vector<Term> ts;
      for (auto& t : f->terms()) ts.push_back(rename_term(t, env));
      return atom(f->relation(), std::move(ts));
    }
    case Kind::Not:
      return neg(rename_apart(f->children()[0], env, used, avoid));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (auto& c : f->children()) kids.push_back(rename_apart(c, env, used, avoid));
      return f->kind() == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Kind::Exists:
    case Kind::Forall: {
      Var x = f->bound();
      Var y = x;
      if (used.count(x)) {
        std::set<Var> all = used;
        all.insert(avoid.begin(), avoid.end());
        y = fresh_var(x.name(), all);
      }
      used.insert(y);
      env[x] = y;
      auto body = rename_apart(f->body(), env, used, avoid);
      return f->kind() == Kind::Exists ? exists(y, body) : forall(y, body);
    }
    default:
      throw std::logic_error("prenex: unexpanded macro or family");
  }
}

PrenexForm prenex_rec(const Formula& f, uint32_t q, bool ex) {
  PrenexForm r;
  r.first_exists = ex;
  switch (f->kind()) {
    case Kind::Equal:
    case Kind::Atom:
      r.blocks.assign(q + 1, {});
      r.matrix = f;
      return r;
    case Kind::Not: {
      auto s = prenex_rec(f->children()[0], q, !ex);
      r.blocks = std::move(s.blocks);
      r.matrix = neg(s.matrix);
      return r;
    }
    case Kind::And:
    case Kind::Or: {
      r.blocks.assign(q + 1, {});
      std::vector<Formula> ms;
      for (auto& c : f->children()) {
        auto s = prenex_rec(c, q, ex);
        for (uint32_t i = 0; i <= q; ++i) r.blocks[i].insert(r.blocks[i].end(), s.blocks[i].begin(), s.blocks[i].end());
        ms.push_back(s.matrix);
      }
      r.matrix = f->kind() == Kind::And ? conj(std::move(ms)) : disj(std::move(ms));
      return r;
    }
    case Kind::Exists:
    case Kind::Forall: {
      if (q == 0) throw std::logic_error("prenex: rank exceeds the requested level");
      bool qex = f->kind() == Kind::Exists;
      auto s = prenex_rec(f->body(), q - 1, qex);
      // A vacuous quantifier is dropped; universes are nonempty.
      auto& fv = f->body()->free_vars();
      if (std::binary_search(fv.begin(), fv.end(), f->bound())) s.blocks[0].insert(s.blocks[0].begin(), f->bound());
      if (qex == ex)
        s.blocks.emplace_back();
      else
        s.blocks.insert(s.blocks.begin(), std::vector<Var>{});
      s.first_exists = ex;
      return s;
    }
    default:
      throw std::logic_error("prenex: unexpanded macro or family");
  }
}

}  // namespace

Formula PrenexForm::formula() const {
  Formula f = matrix;
  for (size_t b = blocks.size(); b-- > 0;) {
    bool ex = (b % 2 == 0) == first_exists;
    for (size_t i = blocks[b].size(); i-- > 0;) f = ex ? exists(blocks[b][i], f) : forall(blocks[b][i], f);
  }
  return f;
}

uint32_t PrenexForm::alternations() const {
  uint32_t last = 0;
  for (size_t b = 0; b < blocks.size(); ++b)
    if (!blocks[b].empty()) last = static_cast<uint32_t>(b + 1);
  return last;
}

PrenexForm prenex_blocks(const Formula& f, uint32_t q, bool first_exists) {
  Formula g = materialize(expand_macros(f));
  if (quantifier_rank(g) > q) throw std::invalid_argument("prenex: quantifier rank exceeds q");
  std::set<Var> used(g->free_vars().begin(), g->free_vars().end());
  std::set<Var> avoid = variables_of(g);
  g = rename_apart(g, {}, used, avoid);
  return prenex_rec(g, q, first_exists);
}

Formula prenex_sigma(const Formula& f) { return prenex_sigma(f, quantifier_rank(f)); }

Formula prenex_sigma(const Formula& f, uint32_t q) { return prenex_blocks(f, q, true).formula(); }

// ---- compilation ----

namespace {

using Clause = std::vector<int32_t>;

struct AtomTable {
  std::vector<Formula> atoms;
  std::map<std::vector<uint32_t>, int32_t> ids;

  int32_t id(const Formula& f) {
    std::vector<uint32_t> key{static_cast<uint32_t>(f->kind()), f->relation().id};
    for (auto& t : f->terms()) key.push_back(static_cast<uint32_t>(t.kind)), key.push_back(t.value);
    auto [it, fresh] = ids.try_emplace(std::move(key), static_cast<int32_t>(atoms.size()) + 1);
    if (fresh) atoms.push_back(f);
    return it->second;
  }
};

constexpr size_t kClauseCap = 1 << 20;

void normalize(std::vector<Clause>& cs) {
  std::vector<Clause> out;
  for (auto& c : cs) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (int32_t l : c) taut = taut || std::binary_search(c.begin(), c.end(), -l);
    if (!taut) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  cs = std::move(out);
}

// outer_and: CNF (clauses are disjunctions) else DNF (terms are conjunctions).
std::vector<Clause> normal_form(const Formula& f, bool pos, bool outer_and, AtomTable& atoms) {
  switch (f->kind()) {
    case Kind::Equal:
    case Kind::Atom: {
      int32_t id = atoms.id(f);
      return {{pos ? id : -id}};
    }
    case Kind::Not:
      return normal_form(f->children()[0], !pos, outer_and, atoms);
    case Kind::And:
    case Kind::Or: {
      bool is_and = (f->kind() == Kind::And) == pos;
      std::vector<Clause> acc;
      if (is_and == outer_and) {
        for (auto& c : f->children()) {
          auto part = normal_form(c, pos, outer_and, atoms);
          acc.insert(acc.end(), part.begin(), part.end());
        }
      } else {
        acc = {Clause{}};
        for (auto& c : f->children()) {
          auto part = normal_form(c, pos, outer_and, atoms);
          std::vector<Clause> next;
          for (auto& a : acc)
            for (auto& b : part) {
              Clause m = a;
              m.insert(m.end(), b.begin(), b.end());
              next.push_back(std::move(m));
              if (next.size() > kClauseCap) throw std::length_error("compile: matrix normal form too large");
            }
          normalize(next);
          acc = std::move(next);
        }
      }
      normalize(acc);
      return acc;
    }
    default:
      throw std::logic_error("compile: matrix is not quantifier-free");
  }
}

}  // namespace

CompileResult compile(const Formula& sentence, const EncodingLayout& layout, const CompileOptions& opts) {
  if (!sentence->free_vars().empty())
    throw std::invalid_argument("compile: free variable '" + sentence->free_vars()[0].name() + "'");
  CompileResult res;
  res.q = quantifier_rank(sentence);
  PrenexForm pf = prenex_blocks(sentence, res.q, true);
  res.alternations = pf.alternations();

  uint32_t innermost = 0;
  bool any = false;
  for (uint32_t b = 0; b < pf.blocks.size(); ++b)
    if (!pf.blocks[b].empty()) innermost = b, any = true;
  bool cnf = !any || innermost % 2 == 1;

  AtomTable atoms;
  auto clauses = normal_form(pf.matrix, true, cnf, atoms);
  for (auto& a : atoms.atoms) {
    if (a->kind() != Kind::Atom) continue;
    Rel r = a->relation();
    if (r.builtin() && opts.fold_arith) continue;
    if (!layout.contains(r)) throw std::invalid_argument("compile: relation '" + r.name() + "' not in the vocabulary");
  }

  uint32_t n = layout.n;
  Builder bld(opts.max_gates);
  std::map<Var, uint32_t> slot;
  std::vector<Var> order;
  for (auto& b : pf.blocks)
    for (Var v : b) slot[v] = static_cast<uint32_t>(order.size()), order.push_back(v);
  std::vector<uint32_t> vals(order.size(), 0);
  auto term_value = [&](const Term& t) {
    if (!t.is_var()) return std::min(t.value, n - 1);
    return vals[slot.at(t.as_var())];
  };

  // literal -> constant or input gate
  auto literal = [&](int32_t lit) -> Ref {
    const Formula& a = atoms.atoms[std::abs(lit) - 1];
    bool pos = lit > 0;
    std::vector<uint32_t> args;
    for (auto& t : a->terms()) args.push_back(term_value(t));
    if (a->kind() == Kind::Equal) return {true, (args[0] == args[1]) == pos, 0};
    if (a->relation().builtin() && opts.fold_arith) return {true, builtin_holds(a->relation(), n, args) == pos, 0};
    uint32_t g = bld.input(layout.bit(a->relation(), args));
    return {false, false, pos ? g : bld.add(GateKind::Not, {g})};
  };
  auto matrix_gate = [&]() {
    GateKind outer = cnf ? GateKind::And : GateKind::Or;
    GateKind inner = cnf ? GateKind::Or : GateKind::And;
    bool inner_absorb = inner == GateKind::Or;
    std::vector<uint32_t> outs;
    for (auto& c : clauses) {
      std::vector<uint32_t> lits;
      bool decided = false;
      for (int32_t l : c) {
        Ref r = literal(l);
        if (r.constant) {
          if (r.value == inner_absorb) decided = true;
          continue;
        }
        lits.push_back(r.gate);
      }
      if (!decided && lits.empty()) return bld.constant(!cnf);
      if (decided) continue;
      res.clause_width = std::max(res.clause_width, static_cast<uint32_t>(lits.size()));
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      outs.push_back(bld.add(inner, std::move(lits)));
    }
    std::sort(outs.begin(), outs.end());
    outs.erase(std::unique(outs.begin(), outs.end()), outs.end());
    return bld.add(outer, std::move(outs));
  };

  std::function<uint32_t(uint32_t, uint32_t)> build = [&](uint32_t b, uint32_t pos) -> uint32_t {
    if (b == pf.blocks.size()) return matrix_gate();
    auto& block = pf.blocks[b];
    if (block.empty()) return build(b + 1, pos);
    GateKind kind = b % 2 == 0 ? GateKind::Or : GateKind::And;
    std::vector<uint32_t> kids;
    std::vector<uint32_t> digits(block.size(), 0);
    while (true) {
      for (size_t i = 0; i < block.size(); ++i) vals[pos + i] = digits[i];
      kids.push_back(build(b + 1, pos + static_cast<uint32_t>(block.size())));
      size_t i = block.size();
      while (i > 0 && ++digits[i - 1] == n) digits[--i] = 0;
      if (i == 0) break;
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    return bld.add(kind, std::move(kids));
  };
  uint32_t top = build(0, 0);
  Circuit raw;
  raw.input_count = layout.length;
  raw.gates = std::move(bld.gates);
  raw.output = top;
  Circuit c = simplify(raw);
  if (c.gates[c.output].kind != GateKind::Or) {
    c.gates.push_back(Gate{GateKind::Or, {c.output}, 0});
    c.output = static_cast<uint32_t>(c.gates.size() - 1);
  }
  res.circuit = std::move(c);
  return res;
}

// ---- Sipser functions ----

Circuit sipser_general(const std::vector<uint32_t>& m) {
  if (m.empty()) throw std::invalid_argument("sipser: d must be at least 1");
  uint64_t inputs = 1;
  for (uint32_t x : m) {
    if (x == 0) throw std::invalid_argument("sipser: every m_i must be positive");
    inputs *= x;
    if (inputs > (uint64_t{1} << 26)) throw std::length_error("sipser: too many inputs");
  }
  Circuit c;
  c.input_count = inputs;
  for (uint64_t i = 0; i < inputs; ++i) c.gates.push_back(Gate{GateKind::Input, {}, i});
  uint32_t d = static_cast<uint32_t>(m.size());
  // first gate index of the level below
  uint64_t below = 0;
  uint64_t width = inputs;
  for (uint32_t level = d; level >= 1; --level) {
    uint64_t count = width / m[level - 1];
    uint64_t start = c.gates.size();
    GateKind kind = level % 2 == 1 ? GateKind::And : GateKind::Or;
    for (uint64_t p = 0; p < count; ++p) {
      Gate g{kind, {}, 0};
      for (uint32_t j = 0; j < m[level - 1]; ++j) g.in.push_back(static_cast<uint32_t>(below + p * m[level - 1] + j));
      c.gates.push_back(std::move(g));
    }
    below = start;
    width = count;
  }
  c.output = static_cast<uint32_t>(c.gates.size() - 1);
  return c;
}

namespace {

uint32_t ceil_sqrt(long double x) {
  if (x <= 0) return 0;
  auto c = static_cast<uint64_t>(std::ceil(std::sqrt(x)));
  const long double slack = 1e-12L * x;
  while (c > 0 && static_cast<long double>(c - 1) * (c - 1) >= x - slack) --c;
  while (static_cast<long double>(c) * c < x - slack) ++c;
  return static_cast<uint32_t>(c);
}

}  // namespace

std::vector<uint32_t> sipser_parameters(uint32_t d, uint32_t m) {
  if (d < 2 || m < 2) throw std::invalid_argument("sipser_standard: needs d >= 2 and m >= 2");
  long double lg = std::log2(static_cast<long double>(m));
  std::vector<uint32_t> ms(d, m);
  ms[0] = ceil_sqrt(m / lg);
  ms[d - 1] = ceil_sqrt(static_cast<long double>(d) / 2 * m * lg);
  return ms;
}

Circuit sipser_standard(uint32_t d, uint32_t m) { return sipser_general(sipser_parameters(d, m)); }

CircuitGraph circuit_graph_structure(const Circuit& c) { return circuit_graph_structure(c, std::vector<bool>()); }

CircuitGraph circuit_graph_structure(const Circuit& c, const std::vector<bool>& inputs) {
  if (!inputs.empty() && inputs.size() != c.input_count)
    throw std::invalid_argument("circuit graph: expected " + std::to_string(c.input_count) + " input bits");
  size_t g = c.gates.size();
  std::vector<uint32_t> level(g, 0);
  for (size_t i = g; i-- > 0;)
    for (uint32_t x : c.gates[i].in) level[x] = std::max(level[x], level[i] + 1);
  std::vector<uint32_t> order(g);
  for (uint32_t i = 0; i < g; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    bool ia = c.gates[a].kind == GateKind::Input, ib = c.gates[b].kind == GateKind::Input;
    if (ia != ib) return ib;
    if (ia) return c.gates[a].value < c.gates[b].value;
    return level[a] < level[b];
  });
  CircuitGraph out{ArithStructure(static_cast<uint32_t>(g)), std::vector<uint32_t>(g), {}};
  for (uint32_t i = 0; i < g; ++i) out.node_of[order[i]] = i;
  auto& a = out.structure;
  a.declare("E", 2);
  a.declare("U", 1);
  a.declare("P", 1);
  for (size_t i = 0; i < g; ++i)
    for (uint32_t x : c.gates[i].in) a.add("E", {out.node_of[x], out.node_of[i]});
  for (uint32_t x : c.gates[c.output].in) a.add("U", {out.node_of[x]});
  out.input_nodes.assign(c.input_count, 0);
  for (size_t i = 0; i < g; ++i)
    if (c.gates[i].kind == GateKind::Input) out.input_nodes[c.gates[i].value] = out.node_of[i];
  for (size_t b = 0; b < inputs.size(); ++b)
    if (inputs[b]) a.add("P", {out.input_nodes[b]});
  return out;
}

Formula sipser_sentence(uint32_t d) {
  if (d < 2) throw std::invalid_argument("sipser_sentence: d must be at least 2");
  // psi_l(v): v sits at level d+1-l; that level's gate is AND iff d-l+1 is odd.
  std::function<Formula(uint32_t, Var)> psi = [&](uint32_t l, Var v) -> Formula {
    if (l == 0) return atom("P", {Term::var(v)});
    Var y = Var::named("y" + std::to_string(l));
    auto edge = atom("E", {Term::var(y), Term::var(v)});
    auto inner = psi(l - 1, y);
    if ((d - l + 1) % 2 == 1) return forall(y, implies(edge, inner));
    return exists(y, conj({edge, inner}));
  };
  Var x = Var::named("x");
  return forall(x, implies(atom("U", {Term::var(x)}), psi(d - 1, x)));
}

PsidReport psid_equivalence(uint32_t d, uint32_t m, uint64_t trials, std::mt19937_64& rng) {
  PsidReport rep;
  rep.d = d;
  rep.m = m;
  Circuit c = sipser_standard(d, m);
  Formula phi = sipser_sentence(d);
  rep.inputs = c.input_count;
  rep.exhaustive = c.input_count < 63 && (uint64_t{1} << c.input_count) <= trials;
  uint64_t runs = rep.exhaustive ? uint64_t{1} << c.input_count : trials;
  std::vector<bool> bits(c.input_count);
  for (uint64_t r = 0; r < runs; ++r) {
    for (uint64_t b = 0; b < c.input_count; ++b) bits[b] = rep.exhaustive ? (r >> b & 1) : (rng() & 1);
    bool circ = c.eval(bits);
    auto g = circuit_graph_structure(c, bits);
    bool logic = evaluate(g.structure, phi);
    rep.checked++;
    rep.circuit_true += circ;
    if (circ != logic && rep.mismatches++ < 16) rep.witnesses.push_back(bits);
  }
  return rep;
}

}  // namespace foarith
