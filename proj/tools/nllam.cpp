#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nllam/grammar.hpp"
#include "nllam/sequentialize.hpp"
#include "nllam/serialize.hpp"

using namespace nllam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoParse = 1;
constexpr int kExitError = 2;

struct CliConfig {
  std::string lexicon_path;
  std::string goal_override;
  std::optional<std::string> empty_antecedent;  // allow|forbid
  std::optional<std::string> unit_insertion;    // on|off
  std::optional<std::string> eta;               // on|off
  std::optional<long long> max_linkings;
  std::optional<long long> seed;
  std::string format = "text";
  long long max_solutions = 0;  // 0 = unlimited
  bool trace = false;
};

void add_engine_flags(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--empty-antecedent", c.empty_antecedent)
      ->check(CLI::IsMember({"allow", "forbid"}));
  cmd->add_option("--unit-insertion", c.unit_insertion)->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--eta", c.eta)->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--max-linkings", c.max_linkings);
  cmd->add_option("--seed", c.seed);
  cmd->add_option("--format", c.format)->check(CLI::IsMember({"text", "json", "dot"}));
  cmd->add_option("--max-solutions", c.max_solutions);
  cmd->add_flag("--trace", c.trace);
}

// Overlay the command-line engine flags (and the environment linking
// budget) onto options coming from a lexicon file or the defaults.
EngineOptions effective_options(const CliConfig& c, EngineOptions base) {
  if (c.empty_antecedent) base.allow_empty_antecedent = *c.empty_antecedent == "allow";
  if (c.unit_insertion) base.unit_insertion = *c.unit_insertion == "on";
  if (c.eta) base.eta = *c.eta == "on";
  if (const char* env = std::getenv("NLLAM_MAX_LINKINGS"))
    base.max_linkings = std::strtoull(env, nullptr, 10);
  if (c.max_linkings) base.max_linkings = static_cast<std::uint64_t>(*c.max_linkings);
  if (c.seed) base.seed = static_cast<unsigned>(*c.seed);
  return base;
}

Lexicon load_lexicon(const CliConfig& c) {
  if (c.lexicon_path.empty()) throw LexiconError("no lexicon given (use --lexicon)");
  std::ifstream in(c.lexicon_path);
  if (!in) throw LexiconError("cannot read lexicon file: " + c.lexicon_path);
  std::stringstream ss;
  ss << in.rdbuf();
  Lexicon lex = parse_lexicon(ss.str());
  if (!c.goal_override.empty()) {
    lex.goals.clear();
    lex.add_goal(parse_formula(c.goal_override));
  }
  lex.options = effective_options(c, lex.options);
  return lex;
}

std::vector<std::string> split_words(const std::vector<std::string>& args) {
  std::vector<std::string> words;
  for (const std::string& a : args) {
    std::istringstream is(a);
    std::string w;
    while (is >> w) words.push_back(w);
  }
  return words;
}

void print_trace(std::ostream& os, const Trace& t) {
  for (const Step& s : t)
    os << "    " << step_name(s.kind) << " (link " << s.a
       << (s.b >= 0 ? ", " + std::to_string(s.b) : "") << ") size " << s.size_before << " -> "
       << s.size_after << "\n";
}

json trace_summary_json(const Trace& t) {
  json j;
  j["steps"] = trace_to_json(t);
  j["length"] = t.size();
  return j;
}

int cmd_parse(const CliConfig& c, const std::vector<std::string>& args) {
  Lexicon lex = load_lexicon(c);
  std::vector<std::string> sentence = split_words(args);
  std::vector<ParseResult> results = parse(lex, sentence);
  size_t shown = results.size();
  if (c.max_solutions > 0 && static_cast<size_t>(c.max_solutions) < shown)
    shown = static_cast<size_t>(c.max_solutions);
  if (c.format == "json") {
    json out;
    out["sentence"] = sentence;
    out["count"] = results.size();
    out["results"] = json::array();
    for (size_t i = 0; i < shown; ++i) {
      json r;
      r["antecedent"] = format_structure(results[i].antecedent);
      r["goal"] = format_formula(results[i].goal);
      r["trace"] = trace_summary_json(results[i].trace);
      if (results[i].sequent_proof) r["proof"] = proof_to_json(results[i].sequent_proof);
      out["results"].push_back(r);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << results.size() << " parse(s)\n";
    for (size_t i = 0; i < shown; ++i) {
      std::cout << "  " << format_structure(results[i].antecedent) << " => "
                << format_formula(results[i].goal) << "  [" << results[i].trace.size()
                << " steps]\n";
      if (c.trace) print_trace(std::cout, results[i].trace);
    }
  }
  return results.empty() ? kExitNoParse : kExitOk;
}

// "f1, f2, ... => g": a flat hypothesis list; every derivable bracketing
// is reported.
std::pair<std::vector<FormulaPtr>, FormulaPtr> parse_prove_spec(const std::string& spec) {
  size_t arrow = spec.find("=>");
  if (arrow == std::string::npos) throw std::invalid_argument("expected '=>' in sequent");
  std::string lhs = spec.substr(0, arrow), rhs = spec.substr(arrow + 2);
  std::vector<FormulaPtr> hyps;
  int depth = 0;
  std::string cur;
  for (char ch : lhs) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      hyps.push_back(parse_formula(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (cur.find_first_not_of(" \t") != std::string::npos) hyps.push_back(parse_formula(cur));
  return {hyps, parse_formula(rhs)};
}

struct ProveResult {
  Sequent final;
  Trace trace;
};

std::vector<ProveResult> prove_flat(const std::vector<std::pair<std::string, FormulaPtr>>& hyps,
                                    const FormulaPtr& goal, const EngineOptions& opts) {
  Graph ps = unfold_sequent(hyps, goal);
  std::vector<ProveResult> out;
  std::vector<Linking> linkings;
  try {
    linkings = enumerate_linkings(ps, opts.max_linkings, !opts.unit_insertion);
  } catch (const ArityMismatch&) {
    return out;
  }
  for (const Linking& lk : linkings) {
    Graph lps = apply_linking(ps, lk);
    auto tr = is_proof_net(lps, opts);
    if (!tr) continue;
    out.push_back({to_structure(replay_trace(to_aps(lps), *tr)), *tr});
  }
  return out;
}

int report_prove(const CliConfig& c, const std::vector<ProveResult>& results,
                 const FormulaPtr& goal) {
  // Distinct result structures only.
  std::vector<ProveResult> distinct;
  for (const ProveResult& r : results) {
    bool dup = false;
    for (const ProveResult& d : distinct)
      dup = dup || alpha_equal(d.final.antecedent, r.final.antecedent);
    if (!dup) distinct.push_back(r);
  }
  if (c.format == "json") {
    json out;
    out["provable"] = !results.empty();
    out["goal"] = format_formula(goal);
    out["results"] = json::array();
    for (const ProveResult& r : distinct) {
      json jr;
      jr["antecedent"] = format_structure(r.final.antecedent);
      jr["trace"] = trace_summary_json(r.trace);
      out["results"].push_back(jr);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (results.empty() ? "not provable" : "provable") << "\n";
    for (const ProveResult& r : distinct) {
      std::cout << "  " << format_sequent(r.final) << "  [" << r.trace.size() << " steps]\n";
      if (c.trace) print_trace(std::cout, r.trace);
    }
  }
  return results.empty() ? kExitNoParse : kExitOk;
}

int cmd_prove(const CliConfig& c, const std::string& spec) {
  auto [formulas, goal] = parse_prove_spec(spec);
  if (formulas.empty()) throw std::invalid_argument("empty hypothesis list");
  EngineOptions opts = effective_options(c, {});
  std::vector<std::pair<std::string, FormulaPtr>> hyps;
  for (const FormulaPtr& f : formulas) hyps.push_back({"", f});
  return report_prove(c, prove_flat(hyps, goal, opts), goal);
}

void structure_leaves(const StructurePtr& s, std::vector<std::pair<std::string, FormulaPtr>>& out) {
  switch (s->kind) {
    case SKind::Leaf: out.push_back({s->word, s->formula}); break;
    case SKind::Comp:
    case SKind::CComp:
      structure_leaves(s->left, out);
      structure_leaves(s->right, out);
      break;
    case SKind::Lam: structure_leaves(s->body, out); break;
    default: break;  // One / Var contribute no hypotheses
  }
}

int cmd_prove_structure(const CliConfig& c, const std::string& spec) {
  size_t arrow = spec.find("=>");
  if (arrow == std::string::npos) throw std::invalid_argument("expected '=>' in sequent");
  StructurePtr ant = parse_structure(spec.substr(0, arrow));
  FormulaPtr goal = parse_formula(spec.substr(arrow + 2));
  EngineOptions opts = effective_options(c, {});
  std::vector<std::pair<std::string, FormulaPtr>> hyps;
  structure_leaves(ant, hyps);
  if (hyps.empty()) throw std::invalid_argument("antecedent has no formula leaves");
  std::vector<ProveResult> hits;
  for (const ProveResult& r : prove_flat(hyps, goal, opts))
    if (alpha_equal(r.final.antecedent, ant)) hits.push_back(r);
  return report_prove(c, hits, goal);
}

int cmd_oracle(const CliConfig& c, const std::string& atoms_csv, int max_conn, int max_leaves) {
  std::vector<std::string> atoms;
  std::string cur;
  for (char ch : atoms_csv + ",") {
    if (ch == ',') {
      if (!cur.empty()) atoms.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (atoms.empty()) throw std::invalid_argument("no atoms given");
  EngineOptions opts = effective_options(c, {});
  int total = 0, provable = 0, disagree = 0, inconclusive = 0;
  for (const Sequent& sq : enumerate_small_sequents(atoms, max_conn, max_leaves)) {
    ++total;
    std::vector<std::pair<std::string, FormulaPtr>> hyps;
    structure_leaves(sq.antecedent, hyps);
    bool net = false;
    for (const ProveResult& r : prove_flat(hyps, sq.succedent, opts))
      net = net || alpha_equal(r.final.antecedent, sq.antecedent);
    OracleResult orc = oracle_prove(sq);
    if (orc.status == OracleStatus::BudgetExceeded) {
      ++inconclusive;
      continue;
    }
    bool oracle = orc.status == OracleStatus::Proved;
    if (net) ++provable;
    if (net != oracle) {
      ++disagree;
      std::cout << "DISAGREE " << format_sequent(sq) << " net=" << net << " oracle=" << oracle
                << "\n";
    }
  }
  std::cout << "sequents=" << total << " provable=" << provable << " disagreements=" << disagree
            << " inconclusive=" << inconclusive << "\n";
  return disagree == 0 ? kExitOk : kExitNoParse;
}

int cmd_export(const CliConfig& c, const std::string& input) {
  json j;
  if (input.empty() || input == "-") {
    std::cin >> j;
  } else {
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("cannot read input file: " + input);
    in >> j;
  }
  Graph g = graph_from_json(j);
  if (c.format == "dot")
    std::cout << to_dot(g);
  else
    std::cout << graph_to_json(g).dump(2) << "\n";
  return kExitOk;
}

void print_lexicon(const Lexicon& lex) {
  for (const auto& [w, f] : lex.entries) std::cout << w << " : " << format_formula(f) << "\n";
  for (const FormulaPtr& g : lex.goals) std::cout << ":goal " << format_formula(g) << "\n";
  if (lex.options.allow_empty_antecedent) std::cout << ":option empty-antecedent allow\n";
  if (lex.options.unit_insertion) std::cout << ":option unit-insertion on\n";
  if (lex.options.eta) std::cout << ":option eta on\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof-net prover and parser for a type-logical grammar"};
  app.require_subcommand(1);
  CliConfig c;

  std::vector<std::string> sentence;
  CLI::App* cparse = app.add_subcommand("parse", "parse a sentence with a lexicon");
  cparse->add_option("--lexicon", c.lexicon_path);
  cparse->add_option("--goal", c.goal_override);
  add_engine_flags(cparse, c);
  cparse->add_option("sentence", sentence)->required();

  std::string sequent_spec;
  CLI::App* cprove = app.add_subcommand("prove", "derivable bracketings of a hypothesis list");
  add_engine_flags(cprove, c);
  cprove->add_option("sequent", sequent_spec)->required();

  std::string struct_spec;
  CLI::App* cps = app.add_subcommand("prove-structure", "derivability of a structured sequent");
  add_engine_flags(cps, c);
  cps->add_option("sequent", struct_spec)->required();

  std::string atoms = "a,b";
  int max_conn = 2, max_leaves = 3;
  CLI::App* corc = app.add_subcommand("oracle", "cross-check proof nets against backward search");
  corc->add_option("--atoms", atoms);
  corc->add_option("--max-connectives", max_conn);
  corc->add_option("--max-leaves", max_leaves);
  add_engine_flags(corc, c);

  std::string export_input;
  CLI::App* cexp = app.add_subcommand("export", "re-emit a graph as JSON or DOT");
  cexp->add_option("--input", export_input);
  add_engine_flags(cexp, c);

  CLI::App* cgram = app.add_subcommand("grammar", "lexicon transformations");
  cgram->require_subcommand(1);
  CLI::App* cperm = cgram->add_subcommand("permclose", "print the permutation closure");
  cperm->add_option("--lexicon", c.lexicon_path);
  int mix_k = 2;
  CLI::App* cmix = cgram->add_subcommand("mix", "print the MIX_k lexicon");
  cmix->add_option("--k", mix_k)->required();
  bool mix_close = false;
  cmix->add_flag("--close", mix_close);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cparse->parsed()) return cmd_parse(c, sentence);
    if (cprove->parsed()) return cmd_prove(c, sequent_spec);
    if (cps->parsed()) return cmd_prove_structure(c, struct_spec);
    if (corc->parsed()) return cmd_oracle(c, atoms, max_conn, max_leaves);
    if (cexp->parsed()) return cmd_export(c, export_input);
    if (cperm->parsed()) {
      print_lexicon(permutation_closure(load_lexicon(c)));
      return kExitOk;
    }
    if (cmix->parsed()) {
      Lexicon lex = mix_lexicon(mix_k);
      print_lexicon(mix_close ? permutation_closure(lex) : lex);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
