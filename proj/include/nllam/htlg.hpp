#ifndef NLLAM_HTLG_HPP
#define NLLAM_HTLG_HPP

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nllam/formula.hpp"
#include "nllam/graph.hpp"
#include "nllam/rewrite.hpp"

namespace nllam {

// Raised when a graph contains a link with no counterpart on the other
// side of the mirror: the //, ** and tL par links (plus their logical
// sources) have no term-graph analogue, and conversely.
class Untranslatable : public std::runtime_error {
 public:
  int link_id;
  Untranslatable(int id, const std::string& shape)
      : std::runtime_error("link " + std::to_string(id) + " (" + shape +
                           ") has no mirror translation"),
        link_id(id) {}
};

// Link-by-link translation between the two abstract link alphabets.  The
// Lambek links are shared; the continuation links swap their function and
// argument sides: the functor of an application sits on the right of an
// NLlam tensor and on the left of a term-graph application, and likewise
// for the two conclusions of the lambda links.  Applying the translation
// twice is the identity.
inline Graph mirror_translate(const Graph& g) {
  Graph out = g;
  for (auto& [id, l] : out.links) {
    auto swap_premisses = [&l]() {
      std::swap(l.premisses[0], l.premisses[1]);
      std::swap(l.premiss_formulas[0], l.premiss_formulas[1]);
    };
    auto swap_conclusions = [&l]() {
      std::swap(l.conclusions[0], l.conclusions[1]);
      std::swap(l.conclusion_formulas[0], l.conclusion_formulas[1]);
    };
    switch (l.shape) {
      case LinkShape::Comp: l.shape = LinkShape::HtlgPlus; break;
      case LinkShape::HtlgPlus: l.shape = LinkShape::Comp; break;
      case LinkShape::CComp:
        l.shape = LinkShape::HtlgApp;
        swap_premisses();
        break;
      case LinkShape::HtlgApp:
        l.shape = LinkShape::CComp;
        swap_premisses();
        break;
      case LinkShape::Lambda:
        l.shape = LinkShape::HtlgLamT;
        swap_conclusions();
        break;
      case LinkShape::HtlgLamT:
        l.shape = LinkShape::Lambda;
        swap_conclusions();
        break;
      case LinkShape::CUnderR:
        l.shape = LinkShape::HtlgLamP;
        swap_conclusions();
        break;
      case LinkShape::HtlgLamP:
        l.shape = LinkShape::CUnderR;
        swap_conclusions();
        break;
      case LinkShape::One: l.shape = LinkShape::HtlgEps; break;
      case LinkShape::HtlgEps: l.shape = LinkShape::One; break;
      case LinkShape::OverR:
      case LinkShape::UnderR:
        break;  // Lambek pars are their own mirror image
      default:
        throw Untranslatable(id, shape_name(l.shape));
    }
  }
  return out;
}

struct TermGraphReduction {
  Graph graph;
  int steps = 0;
};

// Contract every application/lambda-tensor redex of a term graph.  The
// mechanics are exactly the beta rewrite of the rewrite module, so the
// reduction is transported through the mirror and back.
inline TermGraphReduction beta_reduce_termgraph(const Graph& tg) {
  Graph g = mirror_translate(tg);
  int steps = 0;
  int budget = static_cast<int>(g.links.size()) + 1;
  while (true) {
    std::vector<Step> redexes = find_redexes(g, EngineOptions{});
    auto it = std::find_if(redexes.begin(), redexes.end(),
                           [](const Step& s) { return s.kind == StepKind::Beta; });
    if (it == redexes.end()) break;
    apply_step(g, *it);
    if (++steps > budget) throw RewriteError("beta reduction exceeded the link budget");
  }
  return {mirror_translate(g), steps};
}

// Isomorphism of an NLlam abstract proof structure and a term graph,
// modulo the mirror.  Words must match; only atomic end labels are
// compared, since complex labels live in different formula languages.
// An untranslatable link on the NLlam side simply means the structures
// do not correspond.
inline bool isomorphic_mirror(const Graph& nl_aps, const Graph& term_graph) {
  try {
    return graphs_isomorphic(mirror_translate(nl_aps), term_graph, IsoLabels::AtomsWords);
  } catch (const Untranslatable&) {
    return false;
  }
}

// Compute the NLlam formula a reduced term graph assigns to the given
// lexical leaf: mirror the graph, then read every link as the logical
// link whose main formula is the vertex nearest the leaf, taking end
// labels as given.
inline FormulaPtr back_translate_formula(const Graph& tg, const std::string& word) {
  Graph g = mirror_translate(tg);
  int v0 = -1;
  for (const auto& [id, v] : g.vertices)
    if (v.word == word) v0 = id;
  if (v0 < 0) throw std::invalid_argument("back_translate_formula: no leaf for '" + word + "'");
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  std::function<FormulaPtr(int, int)> formula_at = [&](int v, int from) -> FormulaPtr {
    if (v != v0) {
      auto h = g.hyp.find(v);
      if (h != g.hyp.end()) return h->second;
      auto c = g.concl.find(v);
      if (c != g.concl.end()) return c->second;
    }
    int next = -1;
    if (pof.count(v) && pof.at(v) != from) next = pof.at(v);
    if (cof.count(v) && cof.at(v) != from) {
      if (next >= 0) throw std::invalid_argument("back_translate_formula: ambiguous direction");
      next = cof.at(v);
    }
    if (next < 0)
      throw std::invalid_argument("back_translate_formula: unlabelled leaf blocks the computation");
    const Link& l = g.links.at(next);
    auto sub = [&](int w) { return formula_at(w, next); };
    bool cont = l.shape == LinkShape::CComp;
    if (l.shape == LinkShape::Comp || cont) {
      if (v == l.conclusions[0])
        return Formula::mk(cont ? Conn::CProd : Conn::Prod, sub(l.premisses[0]),
                           sub(l.premisses[1]));
      if (v == l.premisses[0])
        return Formula::mk(cont ? Conn::COver : Conn::Over, sub(l.conclusions[0]),
                           sub(l.premisses[1]));
      return Formula::mk(cont ? Conn::CUnder : Conn::Under, sub(l.premisses[0]),
                         sub(l.conclusions[0]));
    }
    if (l.shape == LinkShape::One) return Formula::mk_unit();
    if (l.shape == LinkShape::CUnderR && v == l.conclusions[1])
      return Formula::mk(Conn::CUnder, sub(l.conclusions[0]), sub(l.premisses[0]));
    throw std::invalid_argument(std::string("back_translate_formula: cannot read a ") +
                                shape_name(l.shape) + " link as a formula");
  };
  return formula_at(v0, -1);
}

// ---------------------------------------------------------------------------
// Fixture authoring: a minimal syntax for linear types and prosodic terms,
// and the unfolding of a lexical entry into its (unreduced) term graph.

// Linear types: "A -o B" (right associative) over leaves which are plain
// formulas; only -o unfolds, a parenthesised slash formula stays opaque.
struct HtlgType;
using HtlgTypePtr = std::shared_ptr<const HtlgType>;
struct HtlgType {
  FormulaPtr leaf;  // set for leaves
  HtlgTypePtr arg, res;
};

inline HtlgTypePtr parse_htlg_type(const std::string& src) {
  std::string s = src;
  auto trim = [](std::string& t) {
    size_t b = t.find_first_not_of(" \t");
    size_t e = t.find_last_not_of(" \t");
    t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("parse_htlg_type: empty type");
  // Split at the first top-level "-o".
  int depth = 0;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && s[i] == '-' && s[i + 1] == 'o') {
      auto t = std::make_shared<HtlgType>();
      t->arg = parse_htlg_type(s.substr(0, i));
      t->res = parse_htlg_type(s.substr(i + 2));
      return t;
    }
  }
  if (s.front() == '(' && s.back() == ')') {
    // Strip the parentheses if they match each other.
    depth = 0;
    bool wraps = true;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (depth == 0 && i + 1 < s.size()) wraps = false;
    }
    if (wraps) return parse_htlg_type(s.substr(1, s.size() - 2));
  }
  auto t = std::make_shared<HtlgType>();
  t->leaf = parse_formula(s);
  return t;
}

// Prosodic terms: lambda v. t | t + t (right associative) | t t
// (application, left associative) | (t) | eps | word-or-variable.
struct PTerm;
using PTermPtr = std::shared_ptr<const PTerm>;
struct PTerm {
  enum Kind { Var, Word, Eps, Plus, App, Lam } kind;
  std::string name;
  PTermPtr a, b;
};

namespace detail {

struct PTermParser {
  std::vector<std::string> toks;
  size_t pos = 0;

  explicit PTermParser(const std::string& src) {
    size_t i = 0;
    while (i < src.size()) {
      char c = src[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '(' || c == ')' || c == '+' || c == '.') {
        toks.push_back(std::string(1, c));
        ++i;
      } else {
        size_t j = i;
        while (j < src.size() && !std::isspace(static_cast<unsigned char>(src[j])) &&
               std::string("()+.").find(src[j]) == std::string::npos)
          ++j;
        toks.push_back(src.substr(i, j - i));
        i = j;
      }
    }
  }

  bool at(const std::string& t) const { return pos < toks.size() && toks[pos] == t; }
  std::string take() {
    if (pos >= toks.size()) throw std::invalid_argument("prosodic term: unexpected end");
    return toks[pos++];
  }

  PTermPtr term() {
    if (at("lambda")) {
      ++pos;
      auto t = std::make_shared<PTerm>();
      t->kind = PTerm::Lam;
      t->name = take();
      if (take() != ".") throw std::invalid_argument("prosodic term: expected '.'");
      t->b = term();
      return t;
    }
    return concat();
  }
  PTermPtr concat() {
    PTermPtr l = app();
    if (at("+")) {
      ++pos;
      auto t = std::make_shared<PTerm>();
      t->kind = PTerm::Plus;
      t->a = l;
      t->b = concat();
      return t;
    }
    return l;
  }
  PTermPtr app() {
    PTermPtr f = atom();
    while (pos < toks.size() && !at(")") && !at("+") && !at(".")) {
      auto t = std::make_shared<PTerm>();
      t->kind = PTerm::App;
      t->a = f;
      t->b = atom();
      f = t;
    }
    return f;
  }
  PTermPtr atom() {
    if (at("(")) {
      ++pos;
      PTermPtr t = term();
      if (take() != ")") throw std::invalid_argument("prosodic term: expected ')'");
      return t;
    }
    auto t = std::make_shared<PTerm>();
    std::string n = take();
    if (n == "eps") {
      t->kind = PTerm::Eps;
    } else {
      t->kind = PTerm::Var;  // resolved against the binder environment later
      t->name = n;
    }
    return t;
  }
};

inline int build_pterm(Graph& g, const PTermPtr& t, std::map<std::string, int>& env) {
  switch (t->kind) {
    case PTerm::Var: {
      auto it = env.find(t->name);
      if (it != env.end()) return it->second;
      return g.add_vertex(nullptr, Polarity::Input, t->name);  // free name: a word
    }
    case PTerm::Word:
      return g.add_vertex(nullptr, Polarity::Input, t->name);
    case PTerm::Eps: {
      int u = g.add_vertex();
      g.add_link(LinkShape::HtlgEps, {}, {u});
      return u;
    }
    case PTerm::Plus: {
      int l = build_pterm(g, t->a, env);
      int r = build_pterm(g, t->b, env);
      int c = g.add_vertex();
      g.add_link(LinkShape::HtlgPlus, {l, r}, {c});
      return c;
    }
    case PTerm::App: {
      int f = build_pterm(g, t->a, env);
      int a = build_pterm(g, t->b, env);
      int c = g.add_vertex();
      g.add_link(LinkShape::HtlgApp, {f, a}, {c});
      return c;
    }
    case PTerm::Lam: {
      int binder = g.add_vertex();
      env[t->name] = binder;
      int body = build_pterm(g, t->b, env);
      env.erase(t->name);
      int attach = g.add_vertex();
      g.add_link(LinkShape::HtlgLamT, {body}, {attach, binder});
      return attach;
    }
  }
  throw std::logic_error("build_pterm: unreachable");
}

// Hypothesis-side unfolding of a linear type: an input A -o B is an
// application link consuming an output A, an output A -o B is a lambda
// par link binding an input A.
inline void unfold_htlg_type(Graph& g, const HtlgTypePtr& t, int v, bool input) {
  if (t->leaf) {
    g.vertices.at(v).formula = t->leaf;
    return;
  }
  int va = g.add_vertex();
  int vb = g.add_vertex();
  if (input) {
    g.add_link(LinkShape::HtlgApp, {v, va}, {vb});
  } else {
    g.add_link(LinkShape::HtlgLamP, {vb}, {v, va});
  }
  unfold_htlg_type(g, t->arg, va, !input);
  unfold_htlg_type(g, t->res, vb, input);
}

}  // namespace detail

// Unfold one HTLG lexical entry into its unreduced term graph: the
// prosodic term supplies the lambda/application/concatenation skeleton,
// whose root is then consumed as a hypothesis of the linear type.  Leaf
// types become end labels, exactly as in abstraction of a proof
// structure.
inline Graph unfold_htlg_entry(const std::string& type, const std::string& term) {
  Graph g;
  detail::PTermParser p(term);
  PTermPtr t = p.term();
  if (p.pos != p.toks.size()) throw std::invalid_argument("prosodic term: trailing input");
  std::map<std::string, int> env;
  int root = detail::build_pterm(g, t, env);
  detail::unfold_htlg_type(g, parse_htlg_type(type), root, true);
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  for (auto& [id, v] : g.vertices) {
    if (!v.formula) continue;
    if (!cof.count(id)) g.hyp[id] = v.formula;
    if (!pof.count(id)) g.concl[id] = v.formula;
    v.formula = nullptr;
  }
  return g;
}

}  // namespace nllam

#endif  // NLLAM_HTLG_HPP
