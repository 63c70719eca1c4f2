#include "foarith/formula.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace foarith {

bool RangeFamily::for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const {
  for (uint32_t i = 0; i < count_; ++i)
    if (!visit(std::span<const uint32_t>(&i, 1))) return false;
  return true;
}

std::string RangeFamily::describe() const { return "range(" + std::to_string(count_) + ")"; }

std::optional<uint64_t> CombinationFamily::size() const {
  if (r_ > universe_) return 0;
  unsigned __int128 c = 1;
  for (uint32_t i = 0; i < r_; ++i) {
    c = c * (universe_ - i) / (i + 1);
    if (c > UINT64_MAX) return std::nullopt;
  }
  return static_cast<uint64_t>(c);
}

bool CombinationFamily::for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const {
  if (r_ > universe_) return true;
  std::vector<uint32_t> idx(r_);
  for (uint32_t i = 0; i < r_; ++i) idx[i] = i;
  while (true) {
    if (!visit(idx)) return false;
    int i = static_cast<int>(r_) - 1;
    while (i >= 0 && idx[i] == universe_ - r_ + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (uint32_t j = i + 1; j < r_; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string CombinationFamily::describe() const {
  return "combinations(" + std::to_string(universe_) + "," + std::to_string(r_) + ")";
}

bool ExplicitFamily::for_each(const std::function<bool(std::span<const uint32_t>)>& visit) const {
  for (auto& t : tuples_)
    if (!visit(t)) return false;
  return true;
}

std::string ExplicitFamily::describe() const { return "explicit(" + std::to_string(tuples_.size()) + ")"; }

namespace {

std::atomic<uint64_t>& budget_cell() {
  static std::atomic<uint64_t> cell = [] {
    uint64_t b = 100000;
    if (const char* env = std::getenv("FOARITH_BUDGET_NODES")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0') b = v;
    }
    return b;
  }();
  return cell;
}

void merge_into(std::vector<Var>& acc, const std::vector<Var>& more) {
  if (more.empty()) return;
  std::vector<Var> out;
  out.reserve(acc.size() + more.size());
  std::set_union(acc.begin(), acc.end(), more.begin(), more.end(), std::back_inserter(out));
  acc.swap(out);
}

std::optional<Guard> atom_guard(const Formula& f, Var v) {
  if (f->kind() != Kind::Atom || f->relation().builtin()) return std::nullopt;
  auto& t = f->terms();
  if (t.size() == 1) {
    if (t[0].is_var() && t[0].as_var() == v) return Guard{true, f->relation(), 0, {}, 1};
    return std::nullopt;
  }
  if (t.size() != 2) return std::nullopt;
  bool at0 = t[0].is_var() && t[0].as_var() == v;
  bool at1 = t[1].is_var() && t[1].as_var() == v;
  if (at0 == at1) return std::nullopt;
  return Guard{true, f->relation(), at0 ? 0u : 1u, at0 ? t[1] : t[0], 2};
}

Guard find_guard(Kind q, Var v, const Formula& body) {
  if (q == Kind::Exists) {
    if (auto g = atom_guard(body, v)) return *g;
    if (body->kind() == Kind::And)
      for (auto& c : body->children())
        if (auto g = find_guard(q, v, c); g.present) return g;
  } else {
    if (body->kind() == Kind::Not)
      if (auto g = atom_guard(body->children()[0], v)) return *g;
    if (body->kind() == Kind::Or)
      for (auto& c : body->children())
        if (auto g = find_guard(q, v, c); g.present) return g;
  }
  return {};
}

}  // namespace

uint64_t materialization_budget() { return budget_cell().load(); }
void set_materialization_budget(uint64_t budget) { budget_cell().store(budget); }

namespace {
std::atomic<uint64_t> serial_counter{0};
constexpr uint64_t kFootprintCap = uint64_t{1} << 40;
}  // namespace

uint64_t Node::next_serial() { return serial_counter.fetch_add(1, std::memory_order_relaxed); }

uint64_t node_serial_watermark() { return serial_counter.load(std::memory_order_relaxed); }

void Node::analyze() {
  for (auto& c : children_) footprint_ = std::min(kFootprintCap, footprint_ + c->footprint_);
  auto absorb = [this](const Node& c) {
    merge_into(free_, c.free_);
    rank_ = std::max(rank_, c.rank_);
    has_macro_ = has_macro_ || c.has_macro_;
    has_big_ = has_big_ || c.has_big_;
    cost_ = std::max(cost_, c.cost_);
  };
  switch (kind_) {
    case Kind::Equal:
    case Kind::Atom:
      for (auto& t : terms_)
        if (t.is_var()) free_.push_back(t.as_var());
      std::sort(free_.begin(), free_.end());
      free_.erase(std::unique(free_.begin(), free_.end()), free_.end());
      break;
    case Kind::Not:
      absorb(*children_[0]);
      break;
    case Kind::And:
    case Kind::Or:
      for (auto& c : children_) absorb(*c);
      break;
    case Kind::Exists:
    case Kind::Forall:
      absorb(*children_[0]);
      free_.erase(std::remove(free_.begin(), free_.end(), bound_), free_.end());
      rank_ += 1;
      cost_ = 2;
      guard_ = find_guard(kind_, bound_, children_[0]);
      break;
    case Kind::Macro: {
      absorb(*macro_->expansion);
      std::vector<Var> args;
      for (auto& t : macro_->args)
        if (t.is_var()) args.push_back(t.as_var());
      std::sort(args.begin(), args.end());
      args.erase(std::unique(args.begin(), args.end()), args.end());
      merge_into(free_, args);
      has_macro_ = true;
      cost_ = std::max<uint8_t>(cost_, 1);
      if (cost_ == 2 && macro_->semantics) cost_ = 1;
      break;
    }
    case Kind::BigOr:
    case Kind::BigAnd:
      if (materialized_) {
        for (auto& c : children_) absorb(*c);
      } else if (uniform_) {
        family_->for_each([&](std::span<const uint32_t> t) {
          absorb(*generator_(t));
          return false;
        });
      } else {
        family_->for_each([&](std::span<const uint32_t> t) {
          absorb(*generator_(t));
          return true;
        });
      }
      has_big_ = true;
      break;
  }
  if (kind_ == Kind::And || kind_ == Kind::Or || materialized_) {
    order_.resize(children_.size());
    for (uint32_t i = 0; i < order_.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(),
                     [this](uint32_t a, uint32_t b) { return children_[a]->cost_ < children_[b]->cost_; });
  }
}

Formula eq(Term a, Term b) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Equal;
  n->terms_ = {a, b};
  n->analyze();
  return n;
}

Formula atom(Rel rel, std::vector<Term> args) {
  if (args.empty()) throw std::invalid_argument("atom needs at least one argument");
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Atom;
  n->rel_ = rel;
  n->terms_ = std::move(args);
  n->analyze();
  return n;
}

Formula neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Not;
  n->children_ = {std::move(f)};
  n->analyze();
  return n;
}

Formula conj(std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::And;
  n->children_ = std::move(children);
  n->analyze();
  return n;
}

Formula disj(std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Or;
  n->children_ = std::move(children);
  n->analyze();
  return n;
}

Formula exists(Var v, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Exists;
  n->bound_ = v;
  n->children_ = {std::move(body)};
  n->analyze();
  return n;
}

Formula forall(Var v, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Forall;
  n->bound_ = v;
  n->children_ = {std::move(body)};
  n->analyze();
  return n;
}

Formula macro(MacroSpec spec) {
  if (!spec.expansion) throw std::invalid_argument("macro '" + spec.name + "' lacks an expansion");
  auto n = std::make_shared<Node>();
  n->kind_ = Kind::Macro;
  n->macro_ = std::make_unique<MacroSpec>(std::move(spec));
  n->analyze();
  return n;
}

Formula big(Kind kind, std::shared_ptr<const IndexFamily> family, ChildGenerator gen, bool uniform) {
  if (kind != Kind::BigOr && kind != Kind::BigAnd) throw std::invalid_argument("big node must be BigOr or BigAnd");
  auto n = std::make_shared<Node>();
  n->kind_ = kind;
  n->family_ = std::move(family);
  n->generator_ = std::move(gen);
  n->uniform_ = uniform;
  auto size = n->family_->size();
  uint64_t budget = materialization_budget();
  if (!n->family_->lazy() && size && *size <= budget) {
    n->children_.reserve(*size);
    uint64_t total = 0;
    n->materialized_ = n->family_->for_each([&](std::span<const uint32_t> t) {
      n->children_.push_back(n->generator_(t));
      total += n->children_.back()->footprint();
      return total <= budget;
    });
    if (!n->materialized_) n->children_ = {};
  }
  n->analyze();
  return n;
}

bool for_each_child(const Node& n, const std::function<bool(const Formula&)>& visit) {
  if ((n.kind() == Kind::BigOr || n.kind() == Kind::BigAnd) && !n.materialized()) {
    return n.family().for_each([&](std::span<const uint32_t> t) { return visit(n.generator()(t)); });
  }
  if (n.kind() == Kind::Macro) return true;
  for (auto& c : n.children())
    if (!visit(c)) return false;
  return true;
}

uint32_t quantifier_rank(const Formula& f) { return f->rank(); }

namespace {

std::vector<Formula> all_children(const Node& n) {
  std::vector<Formula> out;
  for_each_child(n, [&](const Formula& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Kind::Equal:
    case Kind::Atom:
      return a->relation() == b->relation() && a->terms() == b->terms();
    case Kind::Exists:
    case Kind::Forall:
      return a->bound() == b->bound() && structurally_equal(a->body(), b->body());
    case Kind::Macro: {
      auto& x = a->macro();
      auto& y = b->macro();
      return x.name == y.name && x.params == y.params && x.args == y.args &&
             structurally_equal(x.expansion, y.expansion);
    }
    default: {
      auto ca = all_children(*a);
      auto cb = all_children(*b);
      if (ca.size() != cb.size()) return false;
      for (size_t i = 0; i < ca.size(); ++i)
        if (!structurally_equal(ca[i], cb[i])) return false;
      return true;
    }
  }
}

}  // namespace foarith
