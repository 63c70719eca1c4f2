#include "foarith/eval.hpp"

#include <chrono>
#include <cstdlib>
#include <unordered_map>

namespace foarith {

namespace {

constexpr uint64_t kDenseMemo = 1u << 22;
constexpr uint64_t kDenseTotal = uint64_t{1} << 28;

struct MemoTable {
  Formula node;
  bool enabled = true;
  bool dense = false;
  std::vector<uint8_t> cells;
  std::unordered_map<uint64_t, uint8_t> sparse;
};

}  // namespace

struct Evaluator::Impl {
  const ArithStructure& a;
  EvalMode mode;
  uint32_t n;
  std::vector<uint32_t> vals;
  std::unordered_map<const Node*, MemoTable> memo;
  uint64_t steps = 0;
  uint64_t dense_cells = 0;
  // Nodes with serial >= this were generated while streaming a family.
  uint64_t ephemeral_from = UINT64_MAX;
  bool has_deadline = false;
  std::chrono::steady_clock::time_point deadline;

  Impl(const ArithStructure& s, EvalMode m, double timeout_s) : a(s), mode(m), n(s.size()) {
    if (timeout_s > 0) {
      has_deadline = true;
      deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(timeout_s));
    }
  }

  void tick() {
    if ((++steps & 0x3FFF) == 0 && has_deadline && std::chrono::steady_clock::now() > deadline)
      throw BudgetExceeded("evaluation timeout");
  }

  uint32_t value(const Term& t) const { return t.is_var() ? vals[t.value] : a.constant(t.value); }

  void ensure(Var v) {
    if (v.id >= vals.size()) vals.resize(v.id + 1, 0);
  }

  MemoTable& table(const Formula& f) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    MemoTable& t = memo[f.get()];
    t.node = f;
    unsigned __int128 space = 1;
    for (size_t i = 0; i < f->free_vars().size(); ++i) {
      space *= n;
      if (space > UINT64_MAX) {
        t.enabled = false;
        return t;
      }
    }
    if (space <= kDenseMemo && dense_cells + space <= kDenseTotal) {
      t.dense = true;
      t.cells.assign(static_cast<size_t>(space), 0);
      dense_cells += static_cast<uint64_t>(space);
    }
    return t;
  }

  uint64_t key(const Node& node) const {
    uint64_t k = 0;
    for (Var v : node.free_vars()) k = k * n + vals[v.id];
    return k;
  }

  bool eval(const Formula& f) {
    tick();
    const Node& node = *f;
    switch (node.kind()) {
      case Kind::Equal:
        return value(node.terms()[0]) == value(node.terms()[1]);
      case Kind::Atom: {
        uint32_t buf[16];
        std::vector<uint32_t> big;
        auto& ts = node.terms();
        uint32_t* args = buf;
        if (ts.size() > 16) {
          big.resize(ts.size());
          args = big.data();
        }
        for (size_t i = 0; i < ts.size(); ++i) args[i] = value(ts[i]);
        return a.holds(node.relation(), std::span<const uint32_t>(args, ts.size()));
      }
      case Kind::Not:
        return !eval(node.children()[0]);
      case Kind::And:
        for (uint32_t i : node.order())
          if (!eval(node.children()[i])) return false;
        return true;
      case Kind::Or:
        for (uint32_t i : node.order())
          if (eval(node.children()[i])) return true;
        return false;
      default:
        break;
    }
    if (mode == EvalMode::Naive || node.serial() >= ephemeral_from) return compute(f);
    MemoTable& t = table(f);
    if (!t.enabled) return compute(f);
    uint64_t k = key(node);
    if (t.dense) {
      if (t.cells[k]) return t.cells[k] == 2;
      bool r = compute(f);
      t.cells[k] = r ? 2 : 1;
      return r;
    }
    auto hit = t.sparse.find(k);
    if (hit != t.sparse.end()) return hit->second == 2;
    bool r = compute(f);
    t.sparse[k] = r ? 2 : 1;
    return r;
  }

  bool quantify(const Node& node) {
    bool ex = node.kind() == Kind::Exists;
    Var v = node.bound();
    ensure(v);
    uint32_t saved = vals[v.id];
    bool result = !ex;
    auto& g = node.guard();
    const RelationData* rel = g.present && mode != EvalMode::Naive ? a.relation(g.rel) : nullptr;
    if (rel && rel->arity() == g.arity) {
      auto cands = rel->candidates(g.free_pos, g.arity == 2 ? value(g.other) : 0);
      for (uint32_t c : cands) {
        vals[v.id] = c;
        if (eval(node.body()) == ex) {
          result = ex;
          break;
        }
      }
    } else {
      for (uint32_t c = 0; c < n; ++c) {
        vals[v.id] = c;
        if (eval(node.body()) == ex) {
          result = ex;
          break;
        }
      }
    }
    vals[v.id] = saved;
    return result;
  }

  bool compute(const Formula& f) {
    const Node& node = *f;
    switch (node.kind()) {
      case Kind::Exists:
      case Kind::Forall:
        return quantify(node);
      case Kind::Macro: {
        auto& m = node.macro();
        if (mode == EvalMode::MacroSemantic) {
          if (!m.semantics) throw std::runtime_error("unregistered macro '" + m.name + "' in macro-semantic mode");
          std::vector<uint32_t> args;
          args.reserve(m.args.size());
          for (auto& t : m.args) args.push_back(value(t));
          return (*m.semantics)(a, args);
        }
        return eval(m.expansion);
      }
      case Kind::BigOr:
      case Kind::BigAnd: {
        bool is_or = node.kind() == Kind::BigOr;
        if (node.materialized()) {
          for (uint32_t i : node.order())
            if (eval(node.children()[i]) == is_or) return is_or;
          return !is_or;
        }
        bool hit = false;
        uint64_t saved = ephemeral_from;
        ephemeral_from = std::min(ephemeral_from, node_serial_watermark());
        try {
          node.family().for_each([&](std::span<const uint32_t> t) {
            if (eval(node.generator()(t)) == is_or) {
              hit = true;
              return false;
            }
            return true;
          });
        } catch (...) {
          ephemeral_from = saved;
          throw;
        }
        ephemeral_from = saved;
        return hit ? is_or : !is_or;
      }
      default:
        return eval(f);
    }
  }
};

Evaluator::Evaluator(const ArithStructure& a, EvalMode mode, double timeout_s)
    : impl_(std::make_unique<Impl>(a, mode, timeout_s)) {}

Evaluator::~Evaluator() = default;

bool Evaluator::evaluate(const Formula& f, const Assignment& asg) {
  auto& im = *impl_;
  im.vals.assign(SymbolTable::variables().size(), 0);
  for (Var v : f->free_vars()) {
    auto it = asg.find(v);
    if (it == asg.end()) throw std::invalid_argument("missing free variable '" + v.name() + "'");
  }
  for (auto [v, x] : asg) {
    if (x >= im.n) throw std::invalid_argument("assignment value outside universe");
    im.ensure(v);
    im.vals[v.id] = x;
  }
  return im.eval(f);
}

uint64_t Evaluator::steps() const { return impl_->steps; }

bool evaluate(const ArithStructure& a, const Formula& f, const Assignment& asg, EvalMode mode) {
  Evaluator ev(a, mode);
  return ev.evaluate(f, asg);
}

double env_timeout_seconds() {
  if (const char* env = std::getenv("FOARITH_TIMEOUT_S")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 0;
}

}  // namespace foarith
