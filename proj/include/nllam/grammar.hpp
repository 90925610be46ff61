#ifndef NLLAM_GRAMMAR_HPP
#define NLLAM_GRAMMAR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nllam/aps.hpp"
#include "nllam/formula.hpp"
#include "nllam/proofnet.hpp"
#include "nllam/rewrite.hpp"
#include "nllam/sequent.hpp"
#include "nllam/sequentialize.hpp"
#include "nllam/structure.hpp"

namespace nllam {

class UnknownWord : public std::runtime_error {
 public:
  explicit UnknownWord(const std::string& w) : std::runtime_error("unknown word: " + w) {}
};

class LexiconError : public std::runtime_error {
 public:
  explicit LexiconError(const std::string& m) : std::runtime_error(m) {}
};

// A lexicon assigns one or more formulas to each word and fixes the goal
// formulas and engine options used when parsing with it.
struct Lexicon {
  std::multimap<std::string, FormulaPtr> entries;
  std::vector<FormulaPtr> goals;  // kept in insertion order, deduplicated
  EngineOptions options;

  void add_entry(const std::string& word, const FormulaPtr& f) {
    auto [lo, hi] = entries.equal_range(word);
    for (auto it = lo; it != hi; ++it)
      if (formula_equal(it->second, f)) return;
    entries.emplace(word, f);
  }

  void add_goal(const FormulaPtr& f) {
    for (const FormulaPtr& g : goals)
      if (formula_equal(g, f)) return;
    goals.push_back(f);
  }
};

// One successful parse: a proof net over a chosen lexical assignment plus
// the antecedent structure it computes and the sequent proof extracted
// from its rewrite trace.
struct ParseResult {
  std::vector<std::string> word_sequence;
  FormulaPtr goal;
  Linking linking;
  Trace trace;
  StructurePtr antecedent;
  ProofPtr sequent_proof;
};

// Forward-chaining parser.  For every choice of a goal formula, of one
// lexical formula per word, and of an axiom linking, normalise the
// abstract proof structure; keep the nets whose normal form is a Lambek
// tree reading the words back in sentence order.  The antecedent
// bracketing is an output, not an input.  Result order is fixed by the
// goal / lexical-choice / linking enumeration order, so identical inputs
// give identical result lists.
inline std::vector<ParseResult> parse(const Lexicon& lex,
                                      const std::vector<std::string>& sentence,
                                      std::size_t max_results = SIZE_MAX) {
  std::vector<ParseResult> out;
  if (sentence.empty()) return out;
  if (lex.goals.empty()) throw LexiconError("lexicon has no goal formula");
  const EngineOptions& opts = lex.options;

  std::vector<std::vector<FormulaPtr>> choices;
  for (const std::string& w : sentence) {
    auto [lo, hi] = lex.entries.equal_range(w);
    if (lo == hi) throw UnknownWord(w);
    std::vector<FormulaPtr> fs;
    for (auto it = lo; it != hi; ++it) fs.push_back(it->second);
    choices.push_back(std::move(fs));
  }

  // Enumerate every lexical choice for every goal, then search the cheap
  // ones first: combinations whose atom occurrences cannot balance are
  // dropped immediately and the rest are ordered by exact linking count,
  // so a derivable sentence is usually confirmed long before the most
  // ambiguous combinations would be reached.
  struct Combo {
    FormulaPtr goal;
    std::vector<std::pair<std::string, FormulaPtr>> hyps;
    std::uint64_t linkings;
  };
  std::vector<Combo> combos;
  for (const FormulaPtr& goal : lex.goals) {
    std::vector<size_t> idx(sentence.size(), 0);
    while (true) {
      std::vector<std::pair<std::string, FormulaPtr>> hyps;
      for (size_t i = 0; i < sentence.size(); ++i)
        hyps.emplace_back(sentence[i], choices[i][idx[i]]);
      try {
        Graph ps = unfold_sequent(hyps, goal);
        std::uint64_t n = count_linkings(ps, !opts.unit_insertion);
        combos.push_back({goal, std::move(hyps), n});
      } catch (const ArityMismatch&) {
        // This lexical choice cannot balance the atom occurrences; skip it.
      }
      // Odometer over the per-word lexical choices.
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < choices[i].size()) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  std::stable_sort(combos.begin(), combos.end(),
                   [](const Combo& a, const Combo& b) { return a.linkings < b.linkings; });

  for (const Combo& c : combos) {
    if (out.size() >= max_results) break;
    Graph ps = unfold_sequent(c.hyps, c.goal);
    std::vector<Linking> linkings =
        enumerate_linkings(ps, opts.max_linkings, !opts.unit_insertion);
    for (const Linking& l : linkings) {
      if (out.size() >= max_results) break;
      Graph lps = apply_linking(ps, l);
      Graph aps = to_aps(lps);
      std::vector<RewriteResult> candidates;
      if (opts.unit_insertion) {
        candidates = normalize_exhaustive(aps, opts);
      } else {
        candidates.push_back(normalize_eager(aps, opts));
      }
      for (const RewriteResult& r : candidates) {
        if (out.size() >= max_results) break;
        if (classify(r.final) != ApsClass::TensorTree) continue;
        StructurePtr ant = to_structure(r.final).antecedent;
        if (!is_lambek_tree(ant)) continue;
        if (yield_of(ant) != sentence) continue;
        ProofPtr proof = sequentialize(lps, r.trace);
        out.push_back({sentence, c.goal, l, r.trace, ant, proof});
      }
    }
  }
  return out;
}

inline bool derivable(const Lexicon& lex, const std::vector<std::string>& sentence) {
  return !parse(lex, sentence, 1).empty();
}

// Topicalisation closure: with a single goal formula s, every entry w : A
// gains a companion entry w : s/(1**(A\\s)), which lets w derive its usual
// role from the sentence-initial position.  The resulting grammar accepts
// exactly the permutations of the original language.
inline Lexicon permutation_closure(const Lexicon& lex) {
  if (lex.goals.size() != 1)
    throw LexiconError("permutation closure requires a single goal formula");
  const FormulaPtr& s = lex.goals[0];
  Lexicon out = lex;
  for (const auto& [w, a] : lex.entries) {
    FormulaPtr extra =
        Formula::mk(Conn::Over, s,
                    Formula::mk(Conn::CProd, Formula::mk_unit(),
                                Formula::mk(Conn::CUnder, a, s)));
    out.add_entry(w, extra);
  }
  return out;
}

// Lexicon over words a1..ak generating (a1 a2 ... ak)+ up to letter
// counts; its permutation closure accepts the generalised MIX_k language.
inline Lexicon mix_lexicon(int k) {
  if (k < 2) throw std::invalid_argument("mix_lexicon: k must be at least 2");
  Lexicon lex;
  FormulaPtr s = Formula::mk_atom("s");
  auto chain_over = [&](FormulaPtr head) {
    for (int i = k; i >= 2; --i)
      head = Formula::mk(Conn::Over, head, Formula::mk_atom("t" + std::to_string(i)));
    return head;
  };
  // The first entry closes the final a1..ak group; the second turns a
  // group into an s/s modifier of the remaining groups, so the language
  // iterates.
  lex.add_entry("a1", chain_over(s));
  lex.add_entry("a1", chain_over(Formula::mk(Conn::Over, s, s)));
  for (int i = 2; i <= k; ++i)
    lex.add_entry("a" + std::to_string(i), Formula::mk_atom("t" + std::to_string(i)));
  lex.add_goal(s);
  return lex;
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_on_off(const std::string& v, const std::string& name) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw LexiconError("option " + name + ": expected on/off, got '" + v + "'");
}

inline void set_lexicon_option(EngineOptions& o, const std::string& name,
                               const std::string& value) {
  try {
    if (name == "empty-antecedent") {
      if (value == "allow") o.allow_empty_antecedent = true;
      else if (value == "forbid") o.allow_empty_antecedent = false;
      else throw LexiconError("option empty-antecedent: expected allow/forbid");
    } else if (name == "unit-insertion") {
      o.unit_insertion = parse_on_off(value, name);
    } else if (name == "eta") {
      o.eta = parse_on_off(value, name);
    } else if (name == "max-linkings") {
      o.max_linkings = std::stoull(value);
    } else if (name == "max-states") {
      o.max_states = std::stoull(value);
    } else if (name == "seed") {
      o.seed = std::stoull(value);
    } else {
      throw LexiconError("unknown option: " + name);
    }
  } catch (const std::invalid_argument&) {
    throw LexiconError("option " + name + ": expected a number, got '" + value + "'");
  }
}

}  // namespace detail

// Lexicon file format: one "word : formula" entry per line, "#" starts a
// comment, ":goal formula" adds a goal, ":option name value" sets an
// engine option (empty-antecedent allow|forbid, unit-insertion on|off,
// eta on|off, max-linkings N, max-states N, seed N).
inline Lexicon parse_lexicon(const std::string& text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    auto oops = [&](const std::string& m) {
      throw LexiconError("line " + std::to_string(lineno) + ": " + m);
    };
    try {
      if (line[0] == ':') {
        std::istringstream ls(line);
        std::string directive;
        ls >> directive;
        if (directive == ":goal") {
          std::string rest = detail::trim(line.substr(directive.size()));
          if (rest.empty()) oops("':goal' needs a formula");
          lex.add_goal(parse_formula(rest));
        } else if (directive == ":option") {
          std::string name, value;
          ls >> name >> value;
          if (name.empty() || value.empty()) oops("':option' needs a name and a value");
          detail::set_lexicon_option(lex.options, name, value);
        } else {
          oops("unknown directive '" + directive + "'");
        }
        continue;
      }
      size_t colon = line.find(':');
      if (colon == std::string::npos) oops("expected 'word : formula'");
      std::string word = detail::trim(line.substr(0, colon));
      std::string formula = detail::trim(line.substr(colon + 1));
      if (word.empty() || formula.empty()) oops("expected 'word : formula'");
      lex.add_entry(word, parse_formula(formula));
    } catch (const LexiconError&) {
      throw;
    } catch (const std::exception& e) {
      oops(e.what());
    }
  }
  if (lex.goals.empty() && !lex.entries.empty())
    throw LexiconError("lexicon declares no goal formula");
  return lex;
}

}  // namespace nllam

#endif  // NLLAM_GRAMMAR_HPP
