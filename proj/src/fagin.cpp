#include "foarith/fagin.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "foarith/eval.hpp"
#include "foarith/syntax.hpp"
#include "foarith/transform.hpp"

namespace foarith {

namespace {

const Rel kX = Rel::named("X");

uint64_t tuple_count(uint32_t n, uint32_t r) { return ipow(n, r); }

uint32_t encode(std::span<const uint32_t> t, uint32_t n) {
  uint64_t c = 0;
  for (uint32_t v : t) c = c * n + v;
  return static_cast<uint32_t>(c);
}

// Visits every l-tuple over {0..n-1}.
template <class F>
void for_each_tuple(uint32_t n, uint32_t l, F visit) {
  std::vector<uint32_t> t(l, 0);
  if (n == 0) return;
  while (true) {
    visit(t);
    int i = static_cast<int>(l) - 1;
    while (i >= 0 && t[i] == n - 1) t[i--] = 0;
    if (i < 0) return;
    ++t[i];
  }
}

// For every (a, clause) whose first-order disjuncts are all false, the
// X-tuples of its second-order disjuncts (possibly repeated).
std::vector<std::vector<uint32_t>> failing_clauses(const ArithStructure& a, const FaginFormula& phi) {
  validate_fagin(phi);
  Evaluator ev(a, EvalMode::Memoized);
  uint32_t n = a.size();
  std::vector<std::vector<uint32_t>> out;
  Assignment asg;
  for_each_tuple(n, phi.l, [&](const std::vector<uint32_t>& t) {
    for (uint32_t i = 0; i < phi.l; ++i) asg[fagin_var(i)] = t[i];
    for (auto& clause : phi.clauses) {
      bool fo_true = false;
      std::vector<uint32_t> witnesses;
      for (auto& d : clause) {
        if (!d.second_order()) {
          fo_true = ev.evaluate(d.fo, asg);
        } else {
          std::vector<uint32_t> x;
          for (uint32_t q : d.x_vars) x.push_back(t[q]);
          witnesses.push_back(encode(x, n));
        }
        if (fo_true) break;
      }
      if (!fo_true) out.push_back(std::move(witnesses));
    }
  });
  return out;
}

}  // namespace

Var fagin_var(uint32_t i) { return Var::named("y" + std::to_string(i + 1)); }

void validate_fagin(const FaginFormula& phi) {
  std::set<Var> allowed;
  for (uint32_t i = 0; i < phi.l; ++i) allowed.insert(fagin_var(i));
  if (phi.r == 0) throw std::invalid_argument("X must have arity >= 1");
  for (auto& clause : phi.clauses)
    for (auto& d : clause) {
      if (d.second_order()) {
        if (d.x_vars.size() != phi.r) throw std::invalid_argument("X disjunct with wrong arity");
        for (uint32_t q : d.x_vars)
          if (q >= phi.l) throw std::invalid_argument("X disjunct refers to an unknown variable");
        continue;
      }
      for (Var v : d.fo->free_vars())
        if (!allowed.count(v)) throw std::invalid_argument("first-order disjunct has free variable " + v.name());
      if (relations_of(d.fo).count(kX)) throw std::invalid_argument("X occurs inside a first-order disjunct");
    }
}

Formula fagin_sentence(const FaginFormula& phi) {
  validate_fagin(phi);
  std::vector<Formula> clauses;
  for (auto& clause : phi.clauses) {
    std::vector<Formula> ds;
    for (auto& d : clause) {
      if (!d.second_order()) {
        ds.push_back(d.fo);
        continue;
      }
      std::vector<Term> args;
      for (uint32_t q : d.x_vars) args.push_back(Term::var(fagin_var(q)));
      ds.push_back(atom(kX, args));
    }
    clauses.push_back(disj(std::move(ds)));
  }
  Formula f = conj(std::move(clauses));
  for (uint32_t i = phi.l; i-- > 0;) f = forall(fagin_var(i), f);
  return f;
}

FaginFormula read_fagin(std::istream& in, const Vocabulary& vocab) {
  FaginFormula phi;
  std::string line, word;
  bool header = false, done = false;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    if (!(ls >> word)) continue;
    if (done) throw std::invalid_argument("content after end");
    if (!header) {
      if (word != "fagin" || !(ls >> phi.l >> phi.r)) throw std::invalid_argument("expected 'fagin <vars> <arity>'");
      header = true;
    } else if (word == "clause") {
      phi.clauses.emplace_back();
    } else if (word == "fo" || word == "x") {
      if (phi.clauses.empty()) throw std::invalid_argument("disjunct outside a clause");
      FaginDisjunct d;
      if (word == "fo") {
        std::string rest;
        std::getline(ls, rest);
        d.fo = parse_formula(rest, vocab);
      } else {
        uint32_t q;
        while (ls >> q) {
          if (q == 0) throw std::invalid_argument("variables are numbered from 1");
          d.x_vars.push_back(q - 1);
        }
      }
      phi.clauses.back().push_back(std::move(d));
    } else if (word == "end") {
      done = true;
    } else {
      throw std::invalid_argument("unknown directive '" + word + "'");
    }
  }
  if (!header || !done) throw std::invalid_argument("incomplete fagin file");
  validate_fagin(phi);
  return phi;
}

FaginFormula parse_fagin(const std::string& text, const Vocabulary& vocab) {
  std::istringstream in(text);
  return read_fagin(in, vocab);
}

FaginReduction fagin_to_hypergraph(const ArithStructure& a, const FaginFormula& phi, uint32_t k) {
  uint32_t d = 1;
  for (auto& clause : phi.clauses)
    d = std::max<uint32_t>(d, static_cast<uint32_t>(
                                  std::count_if(clause.begin(), clause.end(), [](auto& x) { return x.second_order(); })));
  uint64_t vertices = tuple_count(a.size(), phi.r);
  if (vertices > UINT32_MAX) throw std::invalid_argument("A^r too large");
  std::vector<std::vector<uint32_t>> edges;
  for (auto& w : failing_clauses(a, phi)) {
    if (w.empty()) {
      FaginReduction no;
      no.fixed_no = true;
      std::vector<std::vector<uint32_t>> singles;
      for (uint32_t i = 0; i <= k; ++i) singles.push_back({i});
      no.hypergraph = Hypergraph::make(std::max<uint32_t>(static_cast<uint32_t>(vertices), k + 1), d, singles);
      return no;
    }
    edges.push_back(std::move(w));
  }
  return FaginReduction{Hypergraph::make(static_cast<uint32_t>(vertices), d, std::move(edges)), false};
}

bool brute_force_fagin(const ArithStructure& a, const FaginFormula& phi, uint32_t k) {
  auto constraints = failing_clauses(a, phi);
  uint64_t total = tuple_count(a.size(), phi.r);
  if (k > total) return false;
  std::vector<uint32_t> s(k);
  for (uint32_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    bool ok = true;
    for (auto& w : constraints) {
      bool hit = false;
      for (uint32_t x : w) hit = hit || std::binary_search(s.begin(), s.end(), x);
      if (!hit) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && s[i] == total - k + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (uint32_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

ArithStructure with_second_order(const ArithStructure& a, uint32_t r, const std::vector<std::vector<uint32_t>>& s) {
  ArithStructure b(a.size());
  for (auto& d : a.declared()) {
    if (d.rel.builtin())
      b.override_builtin(d.rel);
    else
      b.declare(d.rel, d.arity);
    auto* rel = a.relation(d.rel);
    for (size_t i = 0; i < rel->size(); ++i) b.add(d.rel, rel->tuple(i));
  }
  b.declare(kX, r);
  for (auto& t : s) b.add(kX, t);
  return b;
}

FaginFormula vc_fagin_formula() {
  FaginFormula phi;
  phi.l = 2;
  phi.r = 1;
  Var y1 = fagin_var(0), y2 = fagin_var(1);
  phi.clauses.push_back({FaginDisjunct{{}, neg(atom("E", {Term::var(y1), Term::var(y2)}))},
                         FaginDisjunct{{0}, nullptr}, FaginDisjunct{{1}, nullptr}});
  return phi;
}

MatrixInstance matrix_domination_instance(const Matrix& m, uint32_t l) {
  uint32_t n = static_cast<uint32_t>(m.size());
  for (auto& row : m)
    if (row.size() != n) throw std::invalid_argument("matrix must be square");
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t rc = 0, cc = 0;
    for (uint32_t j = 0; j < n; ++j) rc += m[i][j] != 0, cc += m[j][i] != 0;
    if (rc > l || cc > l) throw std::invalid_argument("row or column with more than l ones");
  }
  if (n == 0) throw std::invalid_argument("empty matrix");
  ArithStructure a(n);
  a.declare("One", 2);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      if (m[i][j]) a.add("One", {i, j});

  // Variables: x, y, then y_1..y_l (row x), then x_1..x_l (column y).
  FaginFormula phi;
  phi.l = 2 + 2 * l;
  phi.r = 2;
  auto v = [](uint32_t i) { return Term::var(fagin_var(i)); };
  Var z = Var::named("z");
  std::vector<Formula> row_eq, col_eq;
  for (uint32_t i = 0; i < l; ++i) {
    row_eq.push_back(eq(Term::var(z), v(2 + i)));
    col_eq.push_back(eq(Term::var(z), v(2 + l + i)));
  }
  auto row = forall(z, iff(atom("One", {v(0), Term::var(z)}), disj(row_eq)));
  auto col = forall(z, iff(atom("One", {Term::var(z), v(1)}), disj(col_eq)));
  std::vector<FaginDisjunct> clause{FaginDisjunct{{}, neg(atom("One", {v(0), v(1)}))},
                                    FaginDisjunct{{}, neg(conj({row, col}))}};
  for (uint32_t i = 0; i < l; ++i) {
    clause.push_back(FaginDisjunct{{0, 2 + i}, nullptr});
    clause.push_back(FaginDisjunct{{2 + l + i, 1}, nullptr});
  }
  phi.clauses.push_back(std::move(clause));
  return MatrixInstance{std::move(a), std::move(phi), l};
}

bool brute_force_matrix_domination(const Matrix& m, uint32_t k) {
  uint32_t n = static_cast<uint32_t>(m.size());
  uint32_t cells = n * n;
  if (k > cells) return false;
  std::vector<uint32_t> s(k);
  for (uint32_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    bool ok = true;
    for (uint32_t i = 0; i < n && ok; ++i)
      for (uint32_t j = 0; j < n && ok; ++j) {
        if (!m[i][j]) continue;
        bool dominated = false;
        for (uint32_t c : s) {
          uint32_t si = c / n, sj = c % n;
          dominated = dominated || (m[si][sj] && (si == i || sj == j));
        }
        ok = dominated;
      }
    if (ok) return true;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && s[i] == cells - k + i) --i;
    if (i < 0) return false;
    ++s[i];
    for (uint32_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

Matrix random_matrix(uint32_t n, uint32_t l, double density, std::mt19937_64& rng) {
  Matrix m(n, std::vector<uint8_t>(n, 0));
  std::vector<uint32_t> rows(n, 0), cols(n, 0);
  std::bernoulli_distribution coin(density);
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      if (coin(rng) && rows[i] < l && cols[j] < l) m[i][j] = 1, ++rows[i], ++cols[j];
  return m;
}

}  // namespace foarith
