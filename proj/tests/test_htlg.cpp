#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "nllam/grammar.hpp"
#include "nllam/htlg.hpp"

using namespace nllam;

namespace {

// Lexical abstract proof structure of an entry, with the (unlinked,
// isolated) goal vertex removed: the graph of the entry on its own.
Graph entry_aps(const std::string& word, const std::string& formula) {
  Graph g = to_aps(unfold_sequent({{word, parse_formula(formula)}}, parse_formula("s")));
  g.remove_vertex(g.goal);
  g.goal = -1;
  return g;
}

// The structure assigned to "same": an adjective lifted over the verb
// phrase via the continuation mode, the adjective subformula kept as an
// unexpanded leaf.
Graph same_aps() {
  Graph g;
  int s_top = g.add_vertex();
  int np_a = g.add_vertex();
  int vpb = g.add_vertex();
  int nn = g.add_vertex();
  int nnnps = g.add_vertex();
  int same = g.add_vertex(nullptr, Polarity::Input, "same");
  int vpr = g.add_vertex();
  int np_subj = g.add_vertex();
  int s_bot = g.add_vertex();
  g.add_link(LinkShape::CUnderR, {s_top}, {np_a, vpb});
  g.add_link(LinkShape::CUnderR, {vpb}, {nn, nnnps});
  g.add_link(LinkShape::CComp, {same, nnnps}, {vpr});
  g.add_link(LinkShape::CComp, {np_subj, vpr}, {s_bot});
  g.hyp[s_top] = parse_formula("s");
  g.concl[np_a] = parse_formula("np");
  g.concl[nn] = parse_formula("n/n");
  g.hyp[np_subj] = parse_formula("np");
  g.concl[s_bot] = parse_formula("s");
  return g;
}

// Term graph of the Dutch crossed-dependency sentence, with the noun
// phrase "de nijlpaarden" abbreviated to a single leaf "dn".
Graph dutch_term_graph() {
  Graph g;
  auto word = [&](const char* w) { return g.add_vertex(nullptr, Polarity::Input, w); };
  int jan = word("Jan"), henk = word("Henk"), marie = word("Marie"), dn = word("dn");
  int zag = word("zag"), helpen = word("helpen"), voeren = word("voeren");
  int vpb = g.add_vertex(), helpnpj = g.add_vertex(), helpjinf = g.add_vertex();
  int jh = g.add_vertex(), j1 = g.add_vertex(), infc = g.add_vertex();
  int npbs = g.add_vertex(), ss = g.add_vertex(), goal = g.add_vertex();
  int vinf = g.add_vertex(), jh2 = g.add_vertex(), j2 = g.add_vertex();
  g.add_link(LinkShape::HtlgApp, {helpjinf, helpnpj}, {vpb});
  g.add_link(LinkShape::HtlgPlus, {marie, vpb}, {jh});
  g.add_link(LinkShape::HtlgPlus, {j1, helpen}, {helpnpj});
  g.add_link(LinkShape::HtlgLamT, {jh}, {infc, j1});
  g.add_link(LinkShape::HtlgApp, {infc, zag}, {npbs});
  g.add_link(LinkShape::HtlgPlus, {henk, npbs}, {ss});
  g.add_link(LinkShape::HtlgPlus, {jan, ss}, {goal});
  g.add_link(LinkShape::HtlgLamT, {vinf}, {helpjinf, j2});
  g.add_link(LinkShape::HtlgPlus, {dn, jh2}, {vinf});
  g.add_link(LinkShape::HtlgPlus, {j2, voeren}, {jh2});
  return g;
}

int strip_betainv(Graph& g) {
  int steps = 0;
  while (true) {
    std::vector<Step> reds = find_redexes(g, EngineOptions{});
    auto it = std::find_if(reds.begin(), reds.end(), [](const Step& s) {
      return s.kind == StepKind::BetaInvCUnder;
    });
    if (it == reds.end()) return steps;
    apply_step(g, *it);
    ++steps;
  }
}

}  // namespace

TEST_CASE("mirror translation of a pure Lambek tree is the identity on shape", "[htlg]") {
  Graph g;
  int a = g.add_vertex(nullptr, Polarity::Input, "a");
  int b = g.add_vertex(nullptr, Polarity::Input, "b");
  int c = g.add_vertex();
  int d = g.add_vertex(nullptr, Polarity::Input, "d");
  int e = g.add_vertex();
  g.add_link(LinkShape::Comp, {a, b}, {c});
  g.add_link(LinkShape::Comp, {c, d}, {e});

  Graph tg = mirror_translate(g);
  for (const auto& [id, l] : tg.links) {
    CHECK(l.shape == LinkShape::HtlgPlus);
    CHECK(l.premisses == g.links.at(id).premisses);
    CHECK(l.conclusions == g.links.at(id).conclusions);
  }
  CHECK(graphs_isomorphic(g, tg, IsoLabels::Full) == false);  // alphabets differ
  CHECK(graphs_isomorphic(g, mirror_translate(tg), IsoLabels::Full));
}

TEST_CASE("mirror translation is an involution on translatable graphs", "[htlg]") {
  Graph g = entry_aps("everyone", "s//(np\\\\s)");
  Graph back = mirror_translate(mirror_translate(g));
  CHECK(graphs_isomorphic(g, back, IsoLabels::Full));

  Graph d = dutch_term_graph();
  CHECK(graphs_isomorphic(d, mirror_translate(mirror_translate(d)), IsoLabels::Full));
}

TEST_CASE("untranslatable links are reported", "[htlg]") {
  // An input continuation product unfolds to its par link, which has no
  // term-graph counterpart.
  Graph g = entry_aps("w", "a**b");
  CHECK_THROWS_AS(mirror_translate(g), Untranslatable);
  CHECK(isomorphic_mirror(g, dutch_term_graph()) == false);

  Graph u = entry_aps("w", "1");  // an input unit produces a tL par
  CHECK_THROWS_AS(mirror_translate(u), Untranslatable);
}

TEST_CASE("quantifier entry reduces to the mirror of its own unfolding", "[htlg]") {
  Graph tg = unfold_htlg_entry("(np -o s) -o s", "lambda P. (P everyone)");
  TermGraphReduction red = beta_reduce_termgraph(tg);
  CHECK(red.steps == 1);

  Graph nl = entry_aps("everyone", "s//(np\\\\s)");
  CHECK(isomorphic_mirror(nl, red.graph));
  CHECK(isomorphic_mirror(nl, tg) == false);  // only after reduction

  FormulaPtr f = back_translate_formula(red.graph, "everyone");
  CHECK(formula_equal(f, parse_formula("s//(np\\\\s)")));
}

TEST_CASE("gapping entry reduces in three steps and back-translates", "[htlg]") {
  Graph tg = unfold_htlg_entry("(tv -o s) -o (tv -o s) -o tv -o s",
                               "lambda Q. lambda P. lambda v. (P v) + and + (Q eps)");
  TermGraphReduction red = beta_reduce_termgraph(tg);
  CHECK(red.steps == 3);

  FormulaPtr f = back_translate_formula(red.graph, "and");
  CHECK(formula_equal(f, parse_formula("((tv**(tv\\\\s))\\s)/(1**(tv\\\\s))")));
}

TEST_CASE("parasitic-scope entry reduces to the mirror of its structure", "[htlg]") {
  Graph tg = unfold_htlg_entry("((n\\n) -o np -o s) -o np -o s",
                               "lambda P. lambda x. ((P same) x)");
  TermGraphReduction red = beta_reduce_termgraph(tg);
  CHECK(red.steps == 2);

  // The adjective leaf carries differently-built labels on the two sides
  // (n/n vs n\n); only atomic labels and words are compared.
  CHECK(isomorphic_mirror(same_aps(), red.graph));
}

TEST_CASE("beta reduction strictly decreases link count", "[htlg]") {
  Graph tg = unfold_htlg_entry("(tv -o s) -o (tv -o s) -o tv -o s",
                               "lambda Q. lambda P. lambda v. (P v) + and + (Q eps)");
  TermGraphReduction red = beta_reduce_termgraph(tg);
  CHECK(red.graph.links.size() + 2 * red.steps == tg.links.size());
  CHECK(beta_reduce_termgraph(red.graph).steps == 0);  // normal form
}

TEST_CASE("Dutch verb clusters: binding emulation matches the term graph", "[htlg]") {
  // The insertion-point atom j emulates the lexicon-origin lambda links:
  // after replacing each continuation par by its lambda link, the parsed
  // structure mirrors the hand-built term graph exactly.
  Lexicon lex;
  std::vector<std::pair<std::string, std::string>> entries = {
      {"Jan", "np"},
      {"Henk", "np"},
      {"Marie", "np"},
      {"dn", "np"},
      {"zag", "(np\\(np\\s_sub))//(j\\\\inf)"},
      {"helpen", "j\\((np\\inf)//(j\\\\inf))"},
      {"voeren", "j\\(np\\inf)"}};
  for (const auto& [w, f] : entries) lex.add_entry(w, parse_formula(f));
  lex.add_goal(parse_formula("s_sub"));

  std::vector<std::string> sentence = {"Jan", "Henk", "Marie", "dn",
                                       "zag", "helpen", "voeren"};
  std::vector<ParseResult> results = parse(lex, sentence);
  REQUIRE(results.size() == 1);

  std::vector<std::pair<std::string, FormulaPtr>> hyps;
  for (const std::string& w : sentence)
    for (const auto& [ww, f] : entries)
      if (ww == w) hyps.push_back({w, parse_formula(f)});
  Graph ps = unfold_sequent(hyps, results[0].goal);
  Graph aps = to_aps(apply_linking(ps, results[0].linking));

  CHECK(strip_betainv(aps) == 2);
  CHECK(isomorphic_mirror(aps, dutch_term_graph()));
}

TEST_CASE("term and type parsing reject malformed input", "[htlg]") {
  CHECK_THROWS_AS(parse_htlg_type(""), std::invalid_argument);
  CHECK_THROWS_AS(unfold_htlg_entry("np -o s", "lambda x. (x"), std::invalid_argument);
  CHECK_THROWS_AS(unfold_htlg_entry("np -o s", "x y) z"), std::invalid_argument);
  CHECK_THROWS_AS(back_translate_formula(dutch_term_graph(), "absent"),
                  std::invalid_argument);
}
