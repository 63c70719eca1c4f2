#include "foarith/transform.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace foarith {

namespace {

struct RewriteMemo {
  std::mutex mu;
  std::unordered_map<const Node*, std::pair<Formula, Formula>> done;
};

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f->kind()) {
    case Kind::Not:
      return neg(std::move(kids[0]));
    case Kind::And:
      return conj(std::move(kids));
    case Kind::Or:
      return disj(std::move(kids));
    case Kind::Exists:
      return exists(f->bound(), std::move(kids[0]));
    case Kind::Forall:
      return forall(f->bound(), std::move(kids[0]));
    default:
      throw std::logic_error("rebuild on leaf");
  }
}

Formula expand_rec(const Formula& f, const std::shared_ptr<RewriteMemo>& memo) {
  if (!f->has_macro()) return f;
  {
    std::lock_guard lock(memo->mu);
    auto it = memo->done.find(f.get());
    if (it != memo->done.end()) return it->second.second;
  }
  Formula out;
  switch (f->kind()) {
    case Kind::Macro:
      out = expand_rec(f->macro().expansion, memo);
      break;
    case Kind::BigOr:
    case Kind::BigAnd: {
      ChildGenerator gen = f->generator();
      out = big(f->kind(), std::shared_ptr<const IndexFamily>(f, &f->family()),
                [gen, memo](std::span<const uint32_t> t) { return expand_rec(gen(t), memo); }, f->uniform());
      break;
    }
    default: {
      std::vector<Formula> kids;
      for (auto& c : f->children()) kids.push_back(expand_rec(c, memo));
      out = rebuild(f, std::move(kids));
    }
  }
  std::lock_guard lock(memo->mu);
  memo->done.emplace(f.get(), std::make_pair(f, out));
  return out;
}

Formula materialize_rec(const Formula& f, std::unordered_map<const Node*, std::pair<Formula, Formula>>& memo) {
  if (!f->has_big()) return f;
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second.second;
  Formula out;
  switch (f->kind()) {
    case Kind::Macro: {
      MacroSpec spec = f->macro();
      spec.expansion = materialize_rec(spec.expansion, memo);
      out = macro(std::move(spec));
      break;
    }
    case Kind::BigOr:
    case Kind::BigAnd: {
      std::vector<Formula> kids;
      for_each_child(*f, [&](const Formula& c) {
        kids.push_back(materialize_rec(c, memo));
        return true;
      });
      out = f->kind() == Kind::BigOr ? disj(std::move(kids)) : conj(std::move(kids));
      break;
    }
    default: {
      std::vector<Formula> kids;
      for (auto& c : f->children()) kids.push_back(materialize_rec(c, memo));
      out = rebuild(f, std::move(kids));
    }
  }
  memo.emplace(f.get(), std::make_pair(f, out));
  return out;
}

template <class Visit>
void walk(const Formula& f, std::unordered_set<const Node*>& seen, std::vector<Formula>& keep, Visit&& visit) {
  if (!seen.insert(f.get()).second) return;
  keep.push_back(f);
  visit(*f);
  if (f->kind() == Kind::Macro) {
    walk(f->macro().expansion, seen, keep, visit);
    return;
  }
  if ((f->kind() == Kind::BigOr || f->kind() == Kind::BigAnd) && !f->materialized()) {
    f->family().for_each([&](std::span<const uint32_t> t) {
      walk(f->generator()(t), seen, keep, visit);
      return !f->uniform();
    });
    return;
  }
  for (auto& c : f->children()) walk(c, seen, keep, visit);
}

}  // namespace

Formula expand_macros(const Formula& f) { return expand_rec(f, std::make_shared<RewriteMemo>()); }

Formula materialize(const Formula& f) {
  std::unordered_map<const Node*, std::pair<Formula, Formula>> memo;
  return materialize_rec(f, memo);
}

std::set<Var> variables_of(const Formula& f) {
  std::set<Var> out;
  std::unordered_set<const Node*> seen;
  std::vector<Formula> keep;
  walk(f, seen, keep, [&](const Node& n) {
    if (n.kind() == Kind::Exists || n.kind() == Kind::Forall) out.insert(n.bound());
    auto add_terms = [&](const std::vector<Term>& ts) {
      for (auto& t : ts)
        if (t.is_var()) out.insert(t.as_var());
    };
    if (n.kind() == Kind::Equal || n.kind() == Kind::Atom) add_terms(n.terms());
    if (n.kind() == Kind::Macro) add_terms(n.macro().args);
  });
  return out;
}

std::map<Rel, uint32_t> relations_of(const Formula& f) {
  std::map<Rel, uint32_t> out;
  std::unordered_set<const Node*> seen;
  std::vector<Formula> keep;
  walk(f, seen, keep, [&](const Node& n) {
    if (n.kind() == Kind::Atom && !n.relation().builtin()) out[n.relation()] = static_cast<uint32_t>(n.terms().size());
  });
  return out;
}

uint32_t constant_budget(const Formula& f) {
  uint32_t m = 0;
  std::unordered_set<const Node*> seen;
  std::vector<Formula> keep;
  walk(f, seen, keep, [&](const Node& n) {
    auto scan = [&](const std::vector<Term>& ts) {
      for (auto& t : ts)
        if (!t.is_var()) m = std::max(m, t.value + 1);
    };
    if (n.kind() == Kind::Equal || n.kind() == Kind::Atom) scan(n.terms());
    if (n.kind() == Kind::Macro) scan(n.macro().args);
  });
  return m;
}

Var fresh_var(std::string_view base, const std::set<Var>& avoid) {
  Var v = Var::named(base);
  for (uint32_t i = 1; avoid.count(v); ++i) v = Var::named(std::string(base) + std::to_string(i));
  return v;
}

uint64_t tree_size(const Formula& f, uint64_t cap) {
  std::unordered_map<const Node*, uint64_t> memo;
  std::function<uint64_t(const Formula&)> go = [&](const Formula& g) -> uint64_t {
    auto it = memo.find(g.get());
    if (it != memo.end()) return it->second;
    uint64_t s = 1;
    if (g->kind() == Kind::Macro) {
      s = 1;
    } else {
      for_each_child(*g, [&](const Formula& c) {
        uint64_t cs = go(c);
        s = (cs > cap - s) ? cap : s + cs;
        return s < cap;
      });
    }
    memo.emplace(g.get(), s);
    return s;
  };
  return go(f);
}

}  // namespace foarith
