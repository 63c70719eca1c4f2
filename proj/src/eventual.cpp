#include "foarith/eventual.hpp"

#include <stdexcept>

#include "foarith/syntax.hpp"

namespace foarith {

Formula characterize_structure(const ArithStructure& a, uint32_t m) {
  uint32_t n = a.size();
  if (m <= n) throw std::invalid_argument("constant budget must exceed the universe size");
  std::vector<Formula> parts;
  if (n >= 2) parts.push_back(neg(eq(Term::constant(n - 1), Term::constant(n - 2))));
  parts.push_back(eq(Term::constant(n), Term::constant(n - 1)));
  for (auto& d : a.declared()) {
    if (d.rel.builtin()) continue;
    std::vector<uint32_t> t(d.arity, 0);
    while (true) {
      std::vector<Term> args;
      for (uint32_t i = 0; i < d.arity; ++i) args.push_back(Term::constant(t[i]));
      auto lit = atom(d.rel, args);
      parts.push_back(a.holds(d.rel, t) ? lit : neg(lit));
      int i = static_cast<int>(d.arity) - 1;
      while (i >= 0 && t[i] == n - 1) t[i--] = 0;
      if (i < 0) break;
      ++t[i];
    }
  }
  return conj(std::move(parts));
}

uint64_t StructureFamily::bits_for(uint32_t n) const {
  uint64_t bits = 0;
  for (auto& d : vocab_.relations()) {
    uint64_t c = 1;
    for (uint32_t i = 0; i < d.arity; ++i) c *= n;
    bits += c;
  }
  return bits;
}

std::optional<uint64_t> StructureFamily::size() const {
  uint64_t total = 0;
  for (uint32_t n = 1; n < bound_; ++n) {
    uint64_t bits = bits_for(n);
    if (bits >= 63) return std::nullopt;
    total += uint64_t{1} << bits;
    if (total >= (uint64_t{1} << 62)) return std::nullopt;
  }
  return total;
}

bool StructureFamily::for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const {
  std::vector<uint32_t> t;
  for (uint32_t n = 1; n < bound_; ++n) {
    uint64_t bits = bits_for(n);
    t.assign(bits + 1, 0);
    t[0] = n;
    while (true) {
      if (!visit(t)) return false;
      size_t i = t.size() - 1;
      while (i >= 1 && t[i] == 1) t[i--] = 0;
      if (i == 0) break;
      t[i] = 1;
    }
  }
  return true;
}

std::string StructureFamily::describe() const { return "structures(n<" + std::to_string(bound_) + ")"; }

ArithStructure StructureFamily::decode(std::span<const uint32_t> t) const {
  uint32_t n = t[0];
  ArithStructure a(n);
  size_t pos = 1;
  for (auto& d : vocab_.relations()) {
    a.declare(d.rel, d.arity);
    std::vector<uint32_t> tup(d.arity, 0);
    while (true) {
      if (t[pos++]) a.add(d.rel, tup);
      int i = static_cast<int>(d.arity) - 1;
      while (i >= 0 && tup[i] == n - 1) tup[i--] = 0;
      if (i < 0) break;
      ++tup[i];
    }
  }
  return a;
}

SliceFamily wrap_eventual(const SliceFamily& family, std::function<uint64_t(uint32_t)> g, SmallDecider decider) {
  SliceFamily out;
  out.name = family.name + "+small";
  out.vocab = family.vocab;
  out.slice = [family, g, decider](uint32_t k) {
    uint64_t gk = g(k);
    for (uint32_t j = 0; j < k; ++j)
      if (g(j) > g(j + 1)) throw std::invalid_argument("threshold function is not monotone");
    if (gk > UINT32_MAX / 2) throw std::invalid_argument("threshold too large");
    Slice base = family.slice(k);
    uint32_t bound = static_cast<uint32_t>(gk);
    auto structures = std::make_shared<StructureFamily>(family.vocab, bound);
    uint32_t m = std::max<uint32_t>(bound, base.constant_budget);
    auto expansion = big_or(structures, [structures, decider, k, bound](std::span<const uint32_t> t) {
      ArithStructure b = structures->decode(t);
      return decider(b, k) ? characterize_structure(b, bound) : falsity();
    });
    MacroSpec spec;
    spec.name = "smallCases";
    spec.params = family.name + ",k=" + std::to_string(k) + ",g=" + std::to_string(gk);
    spec.semantics = std::make_shared<MacroSemantics>(
        [decider, k, bound](const ArithStructure& a, std::span<const uint32_t>) {
          return a.size() < bound && decider(a, k);
        });
    spec.expansion = expansion;
    auto small = macro(std::move(spec));
    Formula large = base.sentence;
    if (bound >= 2)
      large = conj({neg(eq(Term::constant(bound - 1), Term::constant(bound - 2))), base.sentence});
    Slice s;
    s.constant_budget = m;
    s.sentence = disj({large, small});
    s.threshold = 1;
    return s;
  };
  return out;
}

}  // namespace foarith
