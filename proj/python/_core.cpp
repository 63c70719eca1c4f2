#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <foarith/color_coding.hpp>
#include <foarith/eval.hpp>
#include <foarith/graph.hpp>
#include <foarith/suites.hpp>
#include <foarith/syntax.hpp>
#include <foarith/tuple_arith.hpp>
#include <foarith/vertex_cover.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace foarith;

namespace {

using Vocab = std::map<std::string, uint32_t>;
using Edges = std::vector<std::pair<uint32_t, uint32_t>>;
constexpr uint32_t kConstants = 1u << 20;

Vocabulary make_vocab(const Vocab& v) {
  Vocabulary out;
  for (auto& [name, arity] : v) out.add(name, arity);
  out.constant_budget = kConstants;
  return out;
}

EvalMode parse_mode(const std::string& m) {
  if (m == "naive") return EvalMode::Naive;
  if (m == "memo") return EvalMode::Memoized;
  if (m == "macro") return EvalMode::MacroSemantic;
  throw py::value_error("mode must be naive, memo or macro");
}

std::optional<std::vector<uint32_t>> digits(const std::optional<TupleNum>& t) {
  if (!t) return std::nullopt;
  return t->digits;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  const Vocab default_vocab{{"E", 2}, {"P", 1}};

  m.def("render", [](const std::string& phi, const Vocab& v) { return render_formula(parse_formula(phi, make_vocab(v))); },
        py::arg("phi"), py::arg("vocab") = default_vocab);
  m.def("quantifier_rank",
        [](const std::string& phi, const Vocab& v) { return quantifier_rank(parse_formula(phi, make_vocab(v))); },
        py::arg("phi"), py::arg("vocab") = default_vocab);
  m.def(
      "evaluate",
      [](const std::string& phi, const std::string& structure, const std::string& mode) {
        ArithStructure a = parse_structure(structure);
        Formula f = parse_formula(phi, a.vocabulary(kConstants));
        py::gil_scoped_release release;
        return evaluate(a, f, {}, parse_mode(mode));
      },
      py::arg("phi"), py::arg("structure"), py::arg("mode") = "memo",
      "Evaluate a sentence on a structure given in the text structure format.");
  m.def(
      "graph_structure",
      [](uint32_t n, const Edges& edges) { return format_structure(to_structure(Graph::make(n, edges))); },
      py::arg("n"), py::arg("edges"));

  m.def("build_chi",
        [](uint32_t k, const std::string& phi, const std::string& var, const Vocab& v) {
          return render_formula(build_chi(k, parse_formula(phi, make_vocab(v)), Var::named(var)));
        },
        py::arg("k"), py::arg("phi"), py::arg("var") = "y", py::arg("vocab") = default_vocab);
  m.def("threshold_n", &threshold_n, py::arg("k"));
  m.def("vc_threshold", &vc_threshold, py::arg("k"));

  m.def("brute_force_vc", [](uint32_t n, const Edges& e, uint32_t k) { return brute_force_vc(Graph::make(n, e), k); },
        py::arg("n"), py::arg("edges"), py::arg("k"));
  m.def("min_vertex_cover", [](uint32_t n, const Edges& e) { return min_vertex_cover(Graph::make(n, e)); },
        py::arg("n"), py::arg("edges"));
  m.def("brute_force_deg_is",
        [](uint32_t n, const Edges& e, uint32_t k) { return brute_force_deg_is(Graph::make(n, e), k); },
        py::arg("n"), py::arg("edges"), py::arg("k"));

  m.def("tuple_add",
        [](uint32_t n, const std::vector<uint32_t>& x, const std::vector<uint32_t>& y) {
          return digits(tuple_add(TupleNum::make(n, x), TupleNum::make(n, y)));
        },
        py::arg("n"), py::arg("x"), py::arg("y"), "Digits of x+y, or None when the sum does not fit.");
  m.def("tuple_mul",
        [](uint32_t n, const std::vector<uint32_t>& x, const std::vector<uint32_t>& y) {
          return digits(tuple_mul(TupleNum::make(n, x), TupleNum::make(n, y)));
        },
        py::arg("n"), py::arg("x"), py::arg("y"));

  m.def("suites", [] {
    std::vector<std::string> names;
    for (auto& s : suites()) names.push_back(s.name);
    return names;
  });
  m.def(
      "run_suite",
      [](const std::string& name, const std::string& params, uint64_t seed) {
        auto p = nlohmann::json::parse(params);
        py::gil_scoped_release release;
        return run_suite(name, p, seed).to_json(true).dump();
      },
      py::arg("name"), py::arg("params") = "{}", py::arg("seed") = 1);
}
