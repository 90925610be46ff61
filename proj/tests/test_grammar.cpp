#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "nllam/grammar.hpp"

using namespace nllam;

namespace {

using Words = std::vector<std::string>;

Lexicon quantifier_lexicon() {
  return parse_lexicon(R"(
john : np
saw : (np\s)/np
everyone : s//(np\\s)
:goal s
)");
}

Lexicon adjective_lexicon() {
  return parse_lexicon(R"(
very : (n/n)/(n/n)
interesting : n/n
book : n
:goal n
)");
}

bool result_ok(const ParseResult& p) {
  return yield_of(p.antecedent) == p.word_sequence && is_lambek_tree(p.antecedent) &&
         check_proof(p.sequent_proof) &&
         alpha_equal(p.sequent_proof->conclusion.antecedent, p.antecedent) &&
         formula_equal(p.sequent_proof->conclusion.succedent, p.goal);
}

}  // namespace

TEST_CASE("lexicon files parse into entries, goals and options", "[grammar]") {
  Lexicon lex = parse_lexicon(
      "# adjectives\n"
      "very : (n/n)/(n/n)   # modifier\n"
      "book : n\n"
      ":goal n\n"
      ":option empty-antecedent allow\n"
      ":option max-linkings 5000\n");
  CHECK(lex.entries.size() == 2);
  REQUIRE(lex.goals.size() == 1);
  CHECK(formula_equal(lex.goals[0], Formula::mk_atom("n")));
  CHECK(lex.options.allow_empty_antecedent);
  CHECK(lex.options.max_linkings == 5000);

  SECTION("duplicate entries and goals are deduplicated") {
    Lexicon dup = parse_lexicon("a : s\na : s\n:goal s\n:goal s\n");
    CHECK(dup.entries.size() == 1);
    CHECK(dup.goals.size() == 1);
  }
  SECTION("syntax errors are reported with the line") {
    CHECK_THROWS_AS(parse_lexicon("word-without-formula\n:goal s\n"), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("a : s\n:option frobnicate on\n:goal s\n"), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("a : s((\n:goal s\n"), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("a : s\n"), LexiconError);  // no goal
  }
}

TEST_CASE("quantifier in object position parses once, with a checked proof", "[grammar]") {
  Lexicon lex = quantifier_lexicon();
  auto results = parse(lex, {"john", "saw", "everyone"});
  REQUIRE(results.size() == 1);
  const ParseResult& p = results[0];
  CHECK(result_ok(p));
  StructurePtr want = Structure::mk_comp(
      Structure::mk_leaf(parse_formula("np")),
      Structure::mk_comp(Structure::mk_leaf(parse_formula("(np\\s)/np")),
                         Structure::mk_leaf(parse_formula("s//(np\\\\s)"))));
  CHECK(alpha_equal(p.antecedent, want));

  SECTION("the four linkings admit exactly two nets across both word orders") {
    std::vector<std::pair<std::string, FormulaPtr>> hyps = {
        {"john", parse_formula("np")},
        {"saw", parse_formula("(np\\s)/np")},
        {"everyone", parse_formula("s//(np\\\\s)")}};
    Graph g = unfold_sequent(hyps, parse_formula("s"));
    auto linkings = enumerate_linkings(g);
    REQUIRE(linkings.size() == 4);
    int nets = 0;
    for (const Linking& l : linkings)
      if (is_proof_net(apply_linking(g, l))) ++nets;
    CHECK(nets == 2);
  }
  SECTION("parse is deterministic") {
    auto again = parse(lex, {"john", "saw", "everyone"});
    REQUIRE(again.size() == results.size());
    CHECK(alpha_equal(again[0].antecedent, results[0].antecedent));
    CHECK(again[0].linking.atom_pairs == results[0].linking.atom_pairs);
  }
}

TEST_CASE("NL-style quantifier works only from the leftmost position", "[grammar]") {
  Lexicon lex = parse_lexicon(R"(
john : np
saw : (np\s)/np
everyone : s/(np\s)
:goal s
)");
  CHECK_FALSE(derivable(lex, {"john", "saw", "everyone"}));
  CHECK(derivable(lex, {"everyone", "saw", "john"}));
}

TEST_CASE("empty antecedent option gates \"very book\"", "[grammar]") {
  Lexicon lex = adjective_lexicon();
  CHECK(derivable(lex, {"very", "interesting", "book"}));
  CHECK_FALSE(derivable(lex, {"very", "book"}));
  lex.options.allow_empty_antecedent = true;
  CHECK(derivable(lex, {"very", "book"}));
}

TEST_CASE("\"everyone read the same book\" parses with the parasitic-scope lexicon", "[grammar]") {
  Lexicon lex = parse_lexicon(R"(
everyone : s//(np\\s)
read : (np\s)/np
the : np/n
same : (np\\s)//((n/n)\\(np\\s))
book : n
:goal s
)");
  Words sentence = {"everyone", "read", "the", "same", "book"};
  auto results = parse(lex, sentence);
  REQUIRE(results.size() >= 1);
  for (const ParseResult& p : results) CHECK(result_ok(p));
}

TEST_CASE("Dutch crossed dependencies parse with the expected conversions", "[grammar]") {
  Lexicon lex = parse_lexicon(R"(
dat : s_that/s_sub
jan : np
henk : np
marie : np
de : np/n
nijlpaarden : n
zag : (np\(np\s_sub))//(j\\inf)
helpen : j\((np\inf)//(j\\inf))
voeren : j\(np\inf)
:goal s_that
)");
  Words sentence = {"dat",         "jan", "henk",   "marie", "de",
                    "nijlpaarden", "zag", "helpen", "voeren"};
  auto results = parse(lex, sentence);
  REQUIRE(results.size() >= 1);
  bool found = false;
  for (const ParseResult& p : results) {
    CHECK(result_ok(p));
    int lam_intro = 0, beta = 0;
    for (const Step& s : p.trace) {
      if (s.kind == StepKind::BetaInvCUnder) ++lam_intro;
      if (s.kind == StepKind::Beta) ++beta;
    }
    if (lam_intro == 2 && beta == 2) found = true;
  }
  CHECK(found);
}

TEST_CASE("unknown words and linking limits fail loudly", "[grammar]") {
  Lexicon lex = quantifier_lexicon();
  CHECK_THROWS_AS(parse(lex, {"john", "snores"}), UnknownWord);
  lex.options.max_linkings = 1;
  CHECK_THROWS_AS(parse(lex, {"john", "saw", "everyone"}), LimitExceeded);
}

TEST_CASE("permutation closure derives all word orders", "[grammar]") {
  Lexicon base = parse_lexicon("a : s/t2\nb : t2\n:goal s\n");
  CHECK(derivable(base, {"a", "b"}));
  CHECK_FALSE(derivable(base, {"b", "a"}));

  Lexicon closed = permutation_closure(base);
  CHECK(derivable(closed, {"a", "b"}));  // original entries are retained
  CHECK(derivable(closed, {"b", "a"}));

  SECTION("closure entries have the topicalisation shape") {
    auto [lo, hi] = closed.entries.equal_range("b");
    FormulaPtr want = parse_formula("s/(1**(t2\\\\s))");
    bool found = false;
    for (auto it = lo; it != hi; ++it)
      if (formula_equal(it->second, want)) found = true;
    CHECK(found);
  }
  SECTION("closure requires a single goal") {
    Lexicon two = base;
    two.add_goal(Formula::mk_atom("t2"));
    CHECK_THROWS_AS(permutation_closure(two), LexiconError);
  }
}

TEST_CASE("permutation closure accepts exactly the permuted base language", "[grammar]") {
  // Base language {ab, abab, ...}: the closure must accept a string iff it
  // is a permutation of some base string (brute-force comparison).
  Lexicon base = parse_lexicon("a : s/t2\na : (s/s)/t2\nb : t2\n:goal s\n");
  Lexicon closed = permutation_closure(base);
  for (int n = 1; n <= 4; ++n) {
    std::vector<Words> all;
    Words cur(n);
    std::function<void(int)> gen = [&](int i) {
      if (i == n) {
        all.push_back(cur);
        return;
      }
      for (const char* w : {"a", "b"}) {
        cur[i] = w;
        gen(i + 1);
      }
    };
    gen(0);
    for (const Words& w : all) {
      int as = (int)std::count(w.begin(), w.end(), "a");
      int bs = n - as;
      bool in_closure = as == bs && as >= 1;  // permutations of (ab)^k
      CAPTURE(w);
      CHECK(derivable(closed, w) == in_closure);
    }
  }
}

TEST_CASE("MIX lexicon membership", "[grammar]") {
  Lexicon mix = mix_lexicon(3);
  CHECK(derivable(mix, {"a1", "a2", "a3"}));
  CHECK(derivable(mix, {"a1", "a2", "a3", "a1", "a2", "a3"}));
  CHECK_FALSE(derivable(mix, {"a1", "a2"}));
  CHECK_THROWS_AS(mix_lexicon(1), std::invalid_argument);

  SECTION("the closure of MIX3 accepts all six permutations") {
    Lexicon closed = permutation_closure(mix);
    Words w = {"a1", "a2", "a3"};
    std::sort(w.begin(), w.end());
    do {
      CAPTURE(w);
      CHECK(derivable(closed, w));
    } while (std::next_permutation(w.begin(), w.end()));
    CHECK_FALSE(derivable(closed, {"a1", "a2"}));
  }
  SECTION("k=2 generates (a1 a2)+") {
    Lexicon two = mix_lexicon(2);
    CHECK(derivable(two, {"a1", "a2"}));
    CHECK(derivable(two, {"a1", "a2", "a1", "a2"}));
    CHECK_FALSE(derivable(two, {"a2", "a1"}));
  }
}
