#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "foarith/circuits.hpp"
#include "foarith/color_coding.hpp"
#include "foarith/eval.hpp"
#include "foarith/eventual.hpp"
#include "foarith/fagin.hpp"
#include "foarith/graph.hpp"
#include "foarith/hitting_set.hpp"
#include "foarith/parafo.hpp"
#include "foarith/suites.hpp"
#include "foarith/syntax.hpp"
#include "foarith/transform.hpp"
#include "foarith/tuple_arith.hpp"
#include "foarith/vertex_cover.hpp"

using namespace foarith;
using json = nlohmann::json;

namespace {

constexpr int kPass = 0, kMismatch = 1, kUsage = 2;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

// "E/2,P/1"
Vocabulary parse_vocab(const std::string& spec, uint32_t constants) {
  Vocabulary v;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    auto slash = item.find('/');
    if (slash == std::string::npos) throw UsageError("vocabulary entry '" + item + "' is not NAME/ARITY");
    v.add(item.substr(0, slash), static_cast<uint32_t>(std::stoul(item.substr(slash + 1))));
  }
  v.constant_budget = constants;
  return v;
}

std::vector<uint32_t> parse_digits(const std::string& s) {
  std::vector<uint32_t> d;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) d.push_back(static_cast<uint32_t>(std::stoul(item)));
  return d;
}

json tuple_json(const std::optional<TupleNum>& t) {
  if (!t) return "absent";
  return t->digits;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order logic with arithmetic: sentence builders, kernels, circuits and verification suites"};
  app.require_subcommand(1);
  std::string vocab_spec = "E/2,P/1";
  uint32_t constants = 1u << 20;

  // gen
  auto* gen = app.add_subcommand("gen", "Build sentences, circuits and structures");
  gen->require_subcommand(1);
  uint32_t k = 0, d = 2, m = 2, n = 0, s = 2;
  std::string phi_file, out_file = "-", in_file, tau_file, var_name = "y";
  bool total = false, expand = false;
  auto* gen_chi = gen->add_subcommand("chi", "At least k witnesses of phi");
  gen_chi->add_option("--k", k)->required();
  gen_chi->add_option("--phi", phi_file, "formula file with free variable --var")->required();
  gen_chi->add_option("--var", var_name);
  gen_chi->add_option("--vocab", vocab_spec);
  gen_chi->add_option("--out", out_file);
  gen_chi->add_flag("--expand", expand, "expand macros");
  auto* gen_vc = gen->add_subcommand("vc", "Vertex-cover slice sentence");
  gen_vc->add_option("--k", k)->required();
  gen_vc->add_flag("--total", total, "wrap with the small-structure cases");
  gen_vc->add_flag("--expand", expand);
  gen_vc->add_option("--out", out_file);
  auto* gen_degis = gen->add_subcommand("degis", "deg-independent-set slice sentence");
  gen_degis->add_option("--k", k)->required();
  gen_degis->add_flag("--total", total);
  gen_degis->add_flag("--expand", expand);
  gen_degis->add_option("--out", out_file);
  bool want_struct = false, want_sentence = false;
  auto add_sipser = [&](CLI::App* sub) {
    sub->add_option("--d", d)->required();
    sub->add_option("--m", m)->required();
    sub->add_flag("--struct", want_struct, "circuit graph structure");
    sub->add_flag("--sentence", want_sentence, "the sentence over the circuit graph");
    sub->add_option("--out", out_file);
  };
  auto* gen_sipser = gen->add_subcommand("sipser", "Sipser circuit (JSON), its graph structure or sentence");
  add_sipser(gen_sipser);
  auto* gen_charstr = gen->add_subcommand("charstr", "Sentence characterizing a structure");
  gen_charstr->add_option("--in", in_file)->required();
  gen_charstr->add_option("--m", m, "constant budget, > |A|")->required();
  gen_charstr->add_option("--out", out_file);
  auto* sipser = app.add_subcommand("sipser", "Same as gen sipser");
  add_sipser(sipser);

  // compile
  auto* comp = app.add_subcommand("compile", "Sentence to circuit JSON over the encoding of size-n structures");
  bool fold = false;
  comp->add_option("--phi", phi_file)->required();
  comp->add_option("--n", n)->required();
  comp->add_option("--tau", tau_file, "structure file whose relations fix the encoding order")->required();
  comp->add_flag("--fold-arith", fold, "fold <, +, * into constants");
  comp->add_option("--out", out_file);

  // kernel
  auto* kernel = app.add_subcommand("kernel", "Kernelization");
  kernel->require_subcommand(1);
  auto* kernel_vc = kernel->add_subcommand("vc", "Buss kernel of a graph file");
  kernel_vc->add_option("--k", k)->required();
  kernel_vc->add_option("--in", in_file)->required();
  kernel_vc->add_option("--out", out_file);
  auto* kernel_hs = kernel->add_subcommand("hs", "Hitting-set kernel of a hypergraph file");
  kernel_hs->add_option("--d", d)->required();
  kernel_hs->add_option("--k", k)->required();
  kernel_hs->add_option("--in", in_file)->required();
  kernel_hs->add_option("--out", out_file);

  // fagin
  auto* fagin = app.add_subcommand("fagin", "Fagin-definable problems");
  fagin->require_subcommand(1);
  auto* fagin_reduce = fagin->add_subcommand("reduce", "Reduce (A, k) to a hitting-set instance");
  fagin_reduce->add_option("--phi", phi_file)->required();
  fagin_reduce->add_option("--in", in_file)->required();
  fagin_reduce->add_option("--k", k)->required();
  fagin_reduce->add_option("--out", out_file);

  // tuparith
  auto* tup = app.add_subcommand("tuparith", "Arithmetic on base-n tuples");
  std::string op, xs, ys;
  tup->add_option("--n", n)->required();
  tup->add_option("--s", s)->required();
  tup->add_option("--op", op)->required()->check(CLI::IsMember({"add", "mul"}));
  tup->add_option("--x", xs, "digits, most significant first")->required();
  tup->add_option("--y", ys)->required();

  // parafo
  auto* parafo = app.add_subcommand("parafo", "Parse-tree structures and structure unions");
  parafo->require_subcommand(1);
  auto* pf_encode = parafo->add_subcommand("encode", "Parse-tree structure of a sentence");
  pf_encode->add_option("--phi", phi_file)->required();
  pf_encode->add_option("--m", m)->required();
  pf_encode->add_option("--vocab", vocab_spec);
  pf_encode->add_option("--out", out_file);
  auto* pf_decode = parafo->add_subcommand("decode", "Sentence of a parse-tree structure");
  pf_decode->add_option("--in", in_file)->required();
  pf_decode->add_option("--out", out_file);
  std::string a_file, b_file, marker = "U";
  auto* pf_union = parafo->add_subcommand("union", "A followed by B");
  pf_union->add_option("A", a_file)->required();
  pf_union->add_option("B", b_file)->required();
  pf_union->add_option("--marker", marker);
  pf_union->add_option("--out", out_file);

  // ccc
  auto* ccc = app.add_subcommand("ccc", "Color-coding hashing lemma");
  ccc->require_subcommand(1);
  auto* ccc_verify = ccc->add_subcommand("verify", "Check every (or sampled) k-subset of {0..n-1}");
  uint64_t sample = 0, seed = 0;
  ccc_verify->add_option("--n", n)->required();
  ccc_verify->add_option("--k", k)->required();
  ccc_verify->add_option("--sample", sample);
  ccc_verify->add_option("--seed", seed);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite; extra --name value pairs set parameters");
  std::string suite;
  bool no_time = false, list = false;
  verify->add_option("suite", suite);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_file);
  verify->add_flag("--no-time", no_time, "omit the wall-time field");
  verify->add_flag("--list", list, "list suites and parameters");
  verify->allow_extras();

  // eval
  auto* ev = app.add_subcommand("eval", "Model-check a sentence on a structure");
  std::string mode = "memo";
  ev->add_option("--phi", phi_file)->required();
  ev->add_option("--in", in_file)->required();
  ev->add_option("--mode", mode)->check(CLI::IsMember({"naive", "memo", "macro"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kUsage;
  }

  try {
    auto read_formula = [&](const Vocabulary& v) { return parse_formula(slurp(phi_file), v); };
    auto read_struct = [&](const std::string& path) { return parse_structure(slurp(path)); };
    auto out_formula = [&](const Formula& f) { emit(out_file, render_formula(expand ? expand_macros(f) : f)); };

    if (gen_chi->parsed()) {
      Var y = Var::named(var_name);
      out_formula(build_chi(k, read_formula(parse_vocab(vocab_spec, constants)), y));
    } else if (gen_vc->parsed() || gen_degis->parsed()) {
      bool vc = gen_vc->parsed();
      SliceFamily fam = vc ? (total ? vc_total_family() : vc_family()) : (total ? deg_is_total_family() : deg_is_family());
      Slice sl = fam.slice(k);
      std::cerr << "constant budget " << sl.constant_budget << ", threshold " << sl.threshold << ", rank "
                << quantifier_rank(sl.sentence) << "\n";
      out_formula(sl.sentence);
    } else if (gen_sipser->parsed() || sipser->parsed()) {
      if (want_struct && want_sentence) throw UsageError("--struct and --sentence are exclusive");
      if (want_sentence)
        emit(out_file, render_formula(sipser_sentence(d)));
      else if (want_struct)
        emit(out_file, format_structure(circuit_graph_structure(sipser_standard(d, m)).structure));
      else
        emit(out_file, circuit_to_json(sipser_standard(d, m)));
    } else if (gen_charstr->parsed()) {
      emit(out_file, render_formula(characterize_structure(read_struct(in_file), m)));
    } else if (comp->parsed()) {
      auto tau = read_struct(tau_file);
      auto f = read_formula(tau.vocabulary(constants));
      auto res = compile(f, EncodingLayout(n, tau.declared()), CompileOptions{fold});
      std::cerr << "qr " << res.q << ", depth " << res.circuit.depth() << ", size " << res.circuit.size()
                << ", clause width " << res.clause_width << "\n";
      emit(out_file, circuit_to_json(res.circuit));
    } else if (kernel_vc->parsed()) {
      auto g = graph_of(read_struct(in_file));
      auto r = buss_kernelize(g, k);
      const char* verdicts[] = {"yes", "no", "reduced"};
      json j = {{"verdict", verdicts[static_cast<int>(r.verdict)]}, {"k_prime", r.k_prime}, {"kept", r.kept},
                {"removed_high", r.removed_high}, {"reduced", format_structure(to_structure(r.reduced))}};
      emit(out_file, j.dump(2));
    } else if (kernel_hs->parsed()) {
      auto g = parse_hypergraph(slurp(in_file));
      if (g.d > d) throw UsageError("hypergraph has edges larger than --d");
      g = Hypergraph::make(g.n, d, g.edges);
      auto r = kernelize(g, k);
      std::ostringstream ss;
      write_hypergraph(ss, r.reduced);
      std::cerr << "incidence_ok " << r.incidence_ok << ", edge_bound_ok " << r.edge_bound_ok
                << ", vertex_bound_ok " << r.vertex_bound_ok << "\n";
      emit(out_file, ss.str());
    } else if (fagin_reduce->parsed()) {
      auto a = read_struct(in_file);
      auto phi = parse_fagin(slurp(phi_file), a.vocabulary(constants));
      auto red = fagin_to_hypergraph(a, phi, k);
      if (red.fixed_no) std::cerr << "a clause without X fails: fixed no-instance\n";
      std::ostringstream ss;
      write_hypergraph(ss, red.hypergraph);
      emit(out_file, ss.str());
    } else if (tup->parsed()) {
      auto x = TupleNum::make(n, parse_digits(xs)), y = TupleNum::make(n, parse_digits(ys));
      if (x.width() != s || y.width() != s) throw UsageError("--x and --y need exactly s digits");
      TupleArith ar(n);
      auto r = op == "add" ? ar.add(x, y) : ar.mul(x, y);
      json j = {{"result", tuple_json(r)},
                {"audit", {{"max_intermediate", ar.audit().max_intermediate}, {"ops", ar.audit().ops}, {"violations", ar.audit().violations}}}};
      std::cout << j.dump() << "\n";
      return ar.audit().violations ? kMismatch : kPass;
    } else if (pf_encode->parsed()) {
      auto f = normalize_for_parse_tree(read_formula(parse_vocab(vocab_spec, constants)));
      auto pt = encode_parse_tree(f, m);
      std::cerr << pt.nodes << " nodes, q = " << pt.q << "\n";
      emit(out_file, format_structure(pt.structure));
    } else if (pf_decode->parsed()) {
      emit(out_file, render_formula(decode_parse_tree(read_struct(in_file))));
    } else if (pf_union->parsed()) {
      emit(out_file, format_structure(disjoint_union(read_struct(a_file), read_struct(b_file), marker)));
    } else if (ccc_verify->parsed()) {
      auto r = verify_ccc_lemma(n, k, sample ? std::optional<uint64_t>(sample) : std::nullopt, seed);
      json j = {{"n", r.n}, {"k", r.k}, {"checked", r.checked}, {"exhaustive", r.exhaustive}, {"failures", r.failures}};
      std::cout << j.dump() << "\n";
      return r.failures.empty() ? kPass : kMismatch;
    } else if (verify->parsed()) {
      if (list) {
        for (auto& info : suites()) std::cout << info.name << "  " << info.defaults.dump() << "\n    " << info.description << "\n";
        return kPass;
      }
      if (suite.empty()) throw UsageError("verify: missing suite name (see --list)");
      json params = json::object();
      auto extras = verify->remaining();
      for (size_t i = 0; i < extras.size(); ++i) {
        const std::string& key = extras[i];
        if (key.rfind("--", 0) != 0 || i + 1 >= extras.size()) throw UsageError("verify: expected --name value, got '" + key + "'");
        const std::string& val = extras[++i];
        size_t used = 0;
        unsigned long long v = 0;
        try {
          v = std::stoull(val, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != val.size() || val.empty() || val[0] == '-') throw UsageError("verify: '" + key + "' needs a nonnegative integer");
        params[key.substr(2)] = v;
      }
      auto rep = run_suite(suite, params, seed);
      emit(out_file, rep.to_json(!no_time).dump(2));
      return rep.pass() ? kPass : kMismatch;
    } else if (ev->parsed()) {
      auto a = read_struct(in_file);
      auto f = read_formula(a.vocabulary(constants));
      EvalMode em = mode == "naive" ? EvalMode::Naive : mode == "macro" ? EvalMode::MacroSemantic : EvalMode::Memoized;
      Evaluator e(a, em, env_timeout_seconds());
      std::cout << (e.evaluate(f) ? "true" : "false") << "\n";
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "foarith: skipped:budget: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "foarith: " << e.what() << "\n";
    return kUsage;
  }
  return kPass;
}
