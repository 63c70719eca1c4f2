#include "foarith/structure.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace foarith {

Vocabulary::Vocabulary(std::vector<RelationDecl> relations, uint32_t budget) : constant_budget(budget) {
  for (auto& d : relations) add(d.rel, d.arity);
}

void Vocabulary::add(Rel rel, uint32_t arity) {
  if (rel.builtin()) throw std::invalid_argument("relation name '" + rel.name() + "' is reserved");
  if (arity == 0) throw std::invalid_argument("relation '" + rel.name() + "' must have arity >= 1");
  for (auto& d : relations_)
    if (d.rel == rel) throw std::invalid_argument("duplicate relation '" + rel.name() + "'");
  relations_.push_back({rel, arity});
}

std::optional<uint32_t> Vocabulary::arity(Rel rel) const {
  if (rel == Rel::less()) return 2;
  if (rel.builtin()) return 3;
  for (auto& d : relations_)
    if (d.rel == rel) return d.arity;
  return std::nullopt;
}

namespace {

constexpr unsigned __int128 kDenseBits = 1u << 27;

unsigned __int128 power(uint32_t n, uint32_t e) {
  unsigned __int128 r = 1;
  for (uint32_t i = 0; i < e; ++i) {
    r *= n;
    if (r > (static_cast<unsigned __int128>(1) << 100)) break;
  }
  return r;
}

}  // namespace

RelationData::RelationData(uint32_t n, uint32_t arity) : n_(n), arity_(arity) {
  auto space = power(n, arity);
  if (space > static_cast<unsigned __int128>(UINT64_MAX))
    throw std::invalid_argument("relation too large to index");
  dense_ = space <= kDenseBits;
  if (dense_) bits_.assign(static_cast<size_t>((space + 63) / 64), 0);
  if (arity == 2) {
    out_.resize(n);
    in_.resize(n);
  }
}

uint64_t RelationData::key(std::span<const uint32_t> t) const {
  uint64_t k = 0;
  for (size_t i = t.size(); i-- > 0;) k = k * n_ + t[i];
  return k;
}

bool RelationData::contains(std::span<const uint32_t> t) const {
  for (auto v : t)
    if (v >= n_) return false;
  uint64_t k = key(t);
  if (dense_) return (bits_[k >> 6] >> (k & 63)) & 1;
  return sparse_.count(k) != 0;
}

bool RelationData::insert(std::span<const uint32_t> t) {
  if (t.size() != arity_) throw std::invalid_argument("tuple arity mismatch");
  for (auto v : t)
    if (v >= n_) throw std::invalid_argument("tuple component outside universe");
  uint64_t k = key(t);
  if (dense_) {
    uint64_t& word = bits_[k >> 6];
    uint64_t bit = uint64_t{1} << (k & 63);
    if (word & bit) return false;
    word |= bit;
  } else if (!sparse_.insert(k).second) {
    return false;
  }
  flat_.insert(flat_.end(), t.begin(), t.end());
  if (arity_ == 2) {
    out_[t[0]].push_back(t[1]);
    in_[t[1]].push_back(t[0]);
  }
  return true;
}

std::span<const uint32_t> RelationData::candidates(uint32_t free_pos, uint32_t other) const {
  if (arity_ == 1) return flat_;
  if (arity_ != 2 || other >= n_) return {};
  return free_pos == 1 ? std::span<const uint32_t>(out_[other]) : std::span<const uint32_t>(in_[other]);
}

bool builtin_holds(Rel rel, uint32_t n, std::span<const uint32_t> a) {
  switch (rel.id) {
    case 0:
      return a[0] < a[1];
    case 1:
      return static_cast<uint64_t>(a[0]) + a[1] == a[2] && a[2] < n;
    default:
      return static_cast<uint64_t>(a[0]) * a[1] == a[2] && a[2] < n;
  }
}

ArithStructure::ArithStructure(uint32_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("universe must be nonempty");
}

ArithStructure::ArithStructure(const ArithStructure& other) : n_(other.n_), decls_(other.decls_) {
  by_id_.reserve(other.by_id_.size());
  for (auto& r : other.by_id_) by_id_.push_back(r ? std::make_unique<RelationData>(*r) : nullptr);
}

ArithStructure& ArithStructure::operator=(const ArithStructure& other) {
  if (this != &other) *this = ArithStructure(other);
  return *this;
}

void ArithStructure::declare(Rel rel, uint32_t arity) {
  if (rel.builtin()) throw std::invalid_argument("built-in '" + rel.name() + "' cannot be declared");
  if (arity == 0) throw std::invalid_argument("relation arity must be >= 1");
  if (has(rel)) {
    if (relation(rel)->arity() != arity) throw std::invalid_argument("relation '" + rel.name() + "' redeclared");
    return;
  }
  if (by_id_.size() <= rel.id) by_id_.resize(rel.id + 1);
  by_id_[rel.id] = std::make_unique<RelationData>(n_, arity);
  decls_.push_back({rel, arity});
}

void ArithStructure::override_builtin(Rel rel) {
  if (!rel.builtin()) throw std::invalid_argument("not a built-in");
  if (has(rel)) return;
  if (by_id_.size() <= rel.id) by_id_.resize(rel.id + 1);
  by_id_[rel.id] = std::make_unique<RelationData>(n_, rel == Rel::less() ? 2 : 3);
  decls_.push_back({rel, rel == Rel::less() ? 2u : 3u});
}

bool ArithStructure::overridden(Rel rel) const { return rel.builtin() && has(rel); }

bool ArithStructure::has(Rel rel) const { return rel.id < by_id_.size() && by_id_[rel.id] != nullptr; }

const RelationData* ArithStructure::relation(Rel rel) const { return has(rel) ? by_id_[rel.id].get() : nullptr; }

void ArithStructure::add(Rel rel, std::span<const uint32_t> tuple) {
  if (!has(rel)) {
    if (rel.builtin()) throw std::invalid_argument("built-in tuples are not stored");
    declare(rel, static_cast<uint32_t>(tuple.size()));
  }
  by_id_[rel.id]->insert(tuple);
}

bool ArithStructure::holds(Rel rel, std::span<const uint32_t> args) const {
  if (rel.id < by_id_.size() && by_id_[rel.id]) return by_id_[rel.id]->contains(args);
  if (rel.builtin()) return builtin_holds(rel, n_, args);
  throw std::invalid_argument("relation '" + rel.name() + "' not interpreted in structure");
}

Vocabulary ArithStructure::vocabulary(uint32_t budget) const {
  Vocabulary v;
  for (auto& d : decls_)
    if (!d.rel.builtin()) v.add(d.rel, d.arity);
  v.constant_budget = budget;
  return v;
}

namespace {

std::vector<std::vector<uint32_t>> sorted_tuples(const RelationData& r) {
  std::vector<std::vector<uint32_t>> out;
  for (size_t i = 0; i < r.size(); ++i) {
    auto t = r.tuple(i);
    out.emplace_back(t.begin(), t.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool operator==(const ArithStructure& a, const ArithStructure& b) {
  if (a.size() != b.size() || a.declared().size() != b.declared().size()) return false;
  for (auto& d : a.declared()) {
    auto* rb = b.relation(d.rel);
    if (!rb || rb->arity() != d.arity) return false;
    if (sorted_tuples(*a.relation(d.rel)) != sorted_tuples(*rb)) return false;
  }
  return true;
}

namespace {

Rel file_relation(const std::string& name) {
  if (name == "\xC3\x97") return Rel::times();
  return Rel::named(name);
}

[[noreturn]] void bad_file(size_t line, const std::string& msg) {
  throw std::runtime_error("structure file line " + std::to_string(line) + ": " + msg);
}

}  // namespace

ArithStructure read_structure(std::istream& in) {
  std::string raw;
  size_t line_no = 0;
  auto next = [&](std::vector<std::string>& words) {
    while (std::getline(in, raw)) {
      ++line_no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.resize(hash);
      std::istringstream ss(raw);
      words.clear();
      for (std::string w; ss >> w;) words.push_back(w);
      if (!words.empty()) return true;
    }
    return false;
  };
  auto number = [&](const std::string& w) -> uint32_t {
    try {
      size_t used = 0;
      unsigned long v = std::stoul(w, &used);
      if (used != w.size() || v > UINT32_MAX) throw std::out_of_range(w);
      return static_cast<uint32_t>(v);
    } catch (const std::exception&) {
      bad_file(line_no, "expected a natural number, got '" + w + "'");
    }
  };

  std::vector<std::string> w;
  if (!next(w) || w.size() != 1 || w[0] != "structure") bad_file(line_no, "expected 'structure'");
  if (!next(w) || w.size() != 2 || w[0] != "universe") bad_file(line_no, "expected 'universe <n>'");
  uint32_t n = number(w[1]);
  if (n == 0) bad_file(line_no, "universe must be nonempty");
  ArithStructure a(n);
  std::optional<Rel> current;
  uint32_t arity = 0;
  std::vector<uint32_t> tuple;
  while (next(w)) {
    if (w[0] == "end") return a;
    if (w[0] == "relation") {
      if (w.size() != 3) bad_file(line_no, "expected 'relation <name> <arity>'");
      Rel rel = file_relation(w[1]);
      arity = number(w[2]);
      if (rel.builtin()) {
        if (arity != (rel == Rel::less() ? 2u : 3u)) bad_file(line_no, "wrong arity for built-in");
        a.override_builtin(rel);
      } else {
        if (a.has(rel)) bad_file(line_no, "duplicate relation '" + w[1] + "'");
        try {
          a.declare(rel, arity);
        } catch (const std::exception& e) {
          bad_file(line_no, e.what());
        }
      }
      current = rel;
      continue;
    }
    if (!current) bad_file(line_no, "tuple before any relation");
    if (w.size() != arity) bad_file(line_no, "tuple arity mismatch");
    tuple.clear();
    for (auto& x : w) {
      uint32_t v = number(x);
      if (v >= n) bad_file(line_no, "tuple component outside universe");
      tuple.push_back(v);
    }
    a.add(*current, tuple);
  }
  bad_file(line_no, "missing 'end'");
}

ArithStructure parse_structure(const std::string& text) {
  std::istringstream in(text);
  return read_structure(in);
}

void write_structure(std::ostream& out, const ArithStructure& a) {
  out << "structure\nuniverse " << a.size() << "\n";
  for (auto& d : a.declared()) {
    out << "relation " << d.rel.name() << " " << d.arity << "\n";
    for (auto& t : sorted_tuples(*a.relation(d.rel))) {
      for (size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
      out << "\n";
    }
  }
  out << "end\n";
}

std::string format_structure(const ArithStructure& a) {
  std::ostringstream out;
  write_structure(out, a);
  return out.str();
}

ArithStructure graph_structure(uint32_t n, const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                               std::string_view rel) {
  ArithStructure a(n);
  Rel e = Rel::named(rel);
  a.declare(e, 2);
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("self-loop in graph");
    a.add(e, {u, v});
    a.add(e, {v, u});
  }
  return a;
}

}  // namespace foarith
