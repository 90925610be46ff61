#include <catch2/catch_amalgamated.hpp>

#include "nllam/proofnet.hpp"

using namespace nllam;

static Graph unfold_seq(const std::vector<std::pair<std::string, std::string>>& hyps,
                        const std::string& goal) {
  std::vector<std::pair<std::string, FormulaPtr>> h;
  for (const auto& [w, f] : hyps) h.emplace_back(w, parse_formula(f));
  return unfold_sequent(h, parse_formula(goal));
}

TEST_CASE("unfolding an atomic sequent") {
  Graph g = unfold_seq({{"x", "a"}}, "a");
  REQUIRE(g.links.empty());
  REQUIRE(g.vertices.size() == 2);
  REQUIRE(count_linkings(g) == 1);
  auto ls = enumerate_linkings(g);
  REQUIRE(ls.size() == 1);
  Graph linked = apply_linking(g, ls[0]);
  REQUIRE(linked.vertices.size() == 1);
  linked.check_wellformed();
}

TEST_CASE("unfolding opens the main connective with the right link kind") {
  // hypothesis (a\b)/c : one /L tensor and one \L tensor after full unfolding
  Graph g = unfold_seq({{"x", "(a\\b)/c"}, {"y", "c"}, {"z", "a"}}, "b");
  int tensors = 0, pars = 0;
  for (const auto& [id, l] : g.links) (l.is_par() ? pars : tensors)++;
  REQUIRE(tensors == 2);
  REQUIRE(pars == 0);
  bool saw_over = false, saw_under = false;
  for (const auto& [id, l] : g.links) {
    if (l.shape == LinkShape::OverL) saw_over = true;
    if (l.shape == LinkShape::UnderL) saw_under = true;
  }
  REQUIRE(saw_over);
  REQUIRE(saw_under);
}

TEST_CASE("output divisions unfold to par links") {
  Graph g = unfold_seq({{"x", "b"}}, "a\\(b*a)");
  int pars = 0;
  for (const auto& [id, l] : g.links)
    if (l.is_par()) pars++;
  REQUIRE(pars == 1);  // \R par; *R is a tensor
  REQUIRE(count_linkings(g) == 1);  // a and b each occur once per polarity
}

TEST_CASE("linking counts are products of factorials per atom") {
  // john saw everyone, with a continuation-style quantifier
  Graph g = unfold_seq(
      {{"john", "np"}, {"saw", "(np\\s)/np"}, {"everyone", "s//(np\\\\s)"}}, "s");
  // np: two inputs, two outputs; s: two inputs, two outputs
  REQUIRE(count_linkings(g) == 4);
  REQUIRE(enumerate_linkings(g).size() == 4);
  for (const Linking& l : enumerate_linkings(g)) {
    Graph linked = apply_linking(g, l);
    linked.check_wellformed();
  }
}

TEST_CASE("atom mismatches are rejected") {
  REQUIRE_THROWS_AS(count_linkings(unfold_seq({{"x", "a"}}, "b")), ArityMismatch);
  REQUIRE_THROWS_AS(count_linkings(unfold_seq({{"x", "a"}, {"y", "a"}}, "a")), ArityMismatch);
}

TEST_CASE("unit occurrences: tL links need a tR partner by default") {
  // a => a/1 has one tL and no tR
  Graph g = unfold_seq({{"x", "a"}}, "a/1");
  REQUIRE_THROWS_AS(count_linkings(g, true), ArityMismatch);
  REQUIRE(count_linkings(g, false) == 1);  // unpaired mode: only the atom link
  // a/1 => a has one tR and no tL: extra units on the tensor side are fine
  Graph h = unfold_seq({{"x", "a/1"}}, "a");
  REQUIRE(count_linkings(h, true) == 1);
  // two tRs, one tL: the tL may attach to either
  Graph k = unfold_seq({{"x", "a/1"}, {"y", "b/1"}}, "(a*b)/1");
  REQUIRE(count_linkings(k, true) == 2);
  REQUIRE(enumerate_linkings(k).size() == 2);
}

TEST_CASE("enumeration respects the cap") {
  std::vector<std::pair<std::string, FormulaPtr>> h;
  for (int i = 0; i < 4; i++) h.emplace_back("w", parse_formula("a"));
  h.emplace_back("v", parse_formula("((((b/a)/a)/a)/a)"));
  Graph g = unfold_sequent(h, parse_formula("b"));
  REQUIRE(count_linkings(g) == 24);
  REQUIRE_THROWS_AS(enumerate_linkings(g, 10), LimitExceeded);
  REQUIRE(enumerate_linkings(g, 24).size() == 24);
}

TEST_CASE("the goal vertex and word order survive unfolding") {
  Graph g = unfold_seq({{"john", "np"}, {"sleeps", "np\\s"}}, "s");
  REQUIRE(g.goal >= 0);
  REQUIRE(g.vertices.at(g.goal).polarity == Polarity::Output);
  REQUIRE(g.word_order.size() == 2);
  REQUIRE(g.vertices.at(g.word_order[0]).word == "john");
  REQUIRE(g.vertices.at(g.word_order[1]).word == "sleeps");
}
