#ifndef NLLAM_SEQUENT_HPP
#define NLLAM_SEQUENT_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nllam/structure.hpp"

namespace nllam {

// A node of a sequent proof.  Rule names (ASCII):
//   ax, cut, tL, tR,
//   /L, /R, \L, \R, *L, *R          (Lambek family, over o)
//   //L, //R, \\L, \\R, **L, **R    (continuation family, over @)
//   1o, o1       : remove a structural unit going downward
//   1oinv, o1inv : insert a structural unit going downward
//   beta         : premiss (Delta @ \x.Gamma[x]), conclusion Gamma[Delta]
//   betainv      : the reverse
struct SequentProof;
using ProofPtr = std::shared_ptr<const SequentProof>;

struct SequentProof {
  std::string rule;
  Sequent conclusion;
  std::vector<ProofPtr> premisses;
  std::optional<Position> focus;  // active position, informational only
};

inline ProofPtr mk_proof(std::string rule, Sequent concl, std::vector<ProofPtr> prems = {},
                         std::optional<Position> focus = std::nullopt) {
  auto p = std::make_shared<SequentProof>();
  p->rule = std::move(rule);
  p->conclusion = std::move(concl);
  p->premisses = std::move(prems);
  p->focus = std::move(focus);
  return p;
}

namespace detail {

inline StructurePtr leaf(const FormulaPtr& f) { return Structure::mk_leaf(f); }

// Does replacing position p of `whole` by `repl` give `target`?
inline bool replaced_equals(const StructurePtr& whole, const Position& p,
                            const StructurePtr& repl, const StructurePtr& target) {
  StructurePtr r = replace_at(whole, p, repl);
  return r && alpha_equal(r, target);
}

// All fresh-variable names not bound anywhere in s.
inline void bound_vars(const StructurePtr& s, std::set<std::string>& out) {
  switch (s->kind) {
    case SKind::Comp:
    case SKind::CComp:
      bound_vars(s->left, out);
      bound_vars(s->right, out);
      break;
    case SKind::Lam:
      out.insert(s->var);
      bound_vars(s->body, out);
      break;
    default: break;
  }
}

inline std::string fresh_var(const StructurePtr& s) {
  std::set<std::string> used;
  bound_vars(s, used);
  for (int i = 0;; i++) {
    std::string v = "x" + std::to_string(i);
    if (!used.count(v)) return v;
  }
}

// Canonical serialization for memoization: bound variables renamed in
// traversal order, leaf words dropped.
inline void canon(const StructurePtr& s, std::map<std::string, std::string>& env, int& next,
                  std::ostringstream& os) {
  switch (s->kind) {
    case SKind::Leaf: os << "F" << format_formula(s->formula) << ";"; break;
    case SKind::One: os << "1;"; break;
    case SKind::Var: os << "V" << (env.count(s->var) ? env[s->var] : s->var) << ";"; break;
    case SKind::Comp:
    case SKind::CComp:
      os << (s->kind == SKind::Comp ? "(o" : "(@");
      canon(s->left, env, next, os);
      canon(s->right, env, next, os);
      os << ")";
      break;
    case SKind::Lam: {
      std::string name = "v" + std::to_string(next++);
      auto saved = env.count(s->var) ? std::optional<std::string>(env[s->var]) : std::nullopt;
      env[s->var] = name;
      os << "(L" << name << ".";
      canon(s->body, env, next, os);
      os << ")";
      if (saved) env[s->var] = *saved; else env.erase(s->var);
      break;
    }
  }
}

inline std::string canonical_sequent(const Sequent& s) {
  std::ostringstream os;
  std::map<std::string, std::string> env;
  int next = 0;
  canon(s.antecedent, env, next, os);
  os << "=>" << format_formula(s.succedent);
  return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Proof checking.  Each rule schema is verified by searching for a position
// that makes the conclusion match the premisses; explicit focus annotations
// are not required.
// ---------------------------------------------------------------------------
inline bool check_node(const SequentProof& n, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = "rule " + n.rule + ": " + msg + " (at " + format_sequent(n.conclusion) + ")";
    return false;
  };
  const Sequent& c = n.conclusion;
  const auto& ps = n.premisses;
  auto unary = [&]() { return ps.size() == 1; };
  auto binary = [&]() { return ps.size() == 2; };
  auto same_succ = [&](const ProofPtr& p) { return formula_equal(p->conclusion.succedent, c.succedent); };

  if (n.rule == "ax") {
    if (!ps.empty()) return fail("expects no premisses");
    if (c.antecedent->kind != SKind::Leaf) return fail("antecedent must be a single formula");
    if (!formula_equal(c.antecedent->formula, c.succedent)) return fail("formulas differ");
    return true;
  }
  if (n.rule == "tR") {
    if (!ps.empty()) return fail("expects no premisses");
    if (c.antecedent->kind != SKind::One) return fail("antecedent must be the structural unit");
    if (c.succedent->tag != Conn::Unit) return fail("succedent must be the unit formula");
    return true;
  }
  if (n.rule == "cut") {
    if (!binary()) return fail("expects two premisses");
    const Sequent& d = ps[0]->conclusion;  // Delta => A
    const Sequent& g = ps[1]->conclusion;  // Gamma[A] => D
    if (!formula_equal(g.succedent, c.succedent)) return fail("succedent mismatch");
    for (const Position& p : all_positions(c.antecedent)) {
      StructurePtr sub = subterm_at(c.antecedent, p);
      if (!sub || !alpha_equal(sub, d.antecedent)) continue;
      if (detail::replaced_equals(c.antecedent, p, detail::leaf(d.succedent), g.antecedent))
        return true;
    }
    return fail("no cut position matches");
  }
  if (n.rule == "tL") {
    if (!unary() || !same_succ(ps[0])) return fail("expects one premiss with the same succedent");
    const StructurePtr& prem = ps[0]->conclusion.antecedent;
    for (const Position& p : all_positions(c.antecedent)) {
      StructurePtr sub = subterm_at(c.antecedent, p);
      if (sub && sub->kind == SKind::Leaf && sub->formula->tag == Conn::Unit &&
          detail::replaced_equals(c.antecedent, p, Structure::mk_one(), prem))
        return true;
    }
    return fail("no unit-formula leaf matches");
  }
  // right rules
  auto right_rule = [&](Conn conn, bool arg_left, bool continuation) {
    if (!unary()) return fail("expects one premiss");
    if (c.succedent->tag != conn) return fail("succedent has the wrong main connective");
    FormulaPtr arg = arg_left ? c.succedent->left : c.succedent->right;
    FormulaPtr res = arg_left ? c.succedent->right : c.succedent->left;
    StructurePtr want =
        arg_left
            ? (continuation ? Structure::mk_ccomp(detail::leaf(arg), c.antecedent)
                            : Structure::mk_comp(detail::leaf(arg), c.antecedent))
            : (continuation ? Structure::mk_ccomp(c.antecedent, detail::leaf(arg))
                            : Structure::mk_comp(c.antecedent, detail::leaf(arg)));
    if (!alpha_equal(ps[0]->conclusion.antecedent, want)) return fail("premiss antecedent mismatch");
    if (!formula_equal(ps[0]->conclusion.succedent, res)) return fail("premiss succedent mismatch");
    return true;
  };
  if (n.rule == "/R") return right_rule(Conn::Over, false, false);
  if (n.rule == "\\R") return right_rule(Conn::Under, true, false);
  if (n.rule == "//R") return right_rule(Conn::COver, false, true);
  if (n.rule == "\\\\R") return right_rule(Conn::CUnder, true, true);
  auto prod_right = [&](Conn conn, SKind root) {
    if (!binary()) return fail("expects two premisses");
    if (c.succedent->tag != conn) return fail("succedent has the wrong main connective");
    if (c.antecedent->kind != root) return fail("antecedent root has the wrong shape");
    if (!alpha_equal(ps[0]->conclusion.antecedent, c.antecedent->left) ||
        !formula_equal(ps[0]->conclusion.succedent, c.succedent->left))
      return fail("left premiss mismatch");
    if (!alpha_equal(ps[1]->conclusion.antecedent, c.antecedent->right) ||
        !formula_equal(ps[1]->conclusion.succedent, c.succedent->right))
      return fail("right premiss mismatch");
    return true;
  };
  if (n.rule == "*R") return prod_right(Conn::Prod, SKind::Comp);
  if (n.rule == "**R") return prod_right(Conn::CProd, SKind::CComp);
  // left rules for the divisions: Gamma[(A/B) o Delta] etc.
  auto div_left = [&](Conn conn, bool fun_left, SKind comp) {
    if (!binary()) return fail("expects two premisses");
    const Sequent& dprem = ps[0]->conclusion;  // Delta => arg
    const Sequent& gprem = ps[1]->conclusion;  // Gamma[res] => D
    if (!formula_equal(gprem.succedent, c.succedent)) return fail("succedent mismatch");
    for (const Position& p : all_positions(c.antecedent)) {
      StructurePtr sub = subterm_at(c.antecedent, p);
      if (!sub || sub->kind != comp) continue;
      StructurePtr fun = fun_left ? sub->left : sub->right;
      StructurePtr del = fun_left ? sub->right : sub->left;
      if (fun->kind != SKind::Leaf || fun->formula->tag != conn) continue;
      FormulaPtr arg = fun_left ? fun->formula->right : fun->formula->left;
      FormulaPtr res = fun_left ? fun->formula->left : fun->formula->right;
      if (!formula_equal(dprem.succedent, arg)) continue;
      if (!alpha_equal(dprem.antecedent, del)) continue;
      if (detail::replaced_equals(c.antecedent, p, detail::leaf(res), gprem.antecedent))
        return true;
    }
    return fail("no matching division leaf");
  };
  if (n.rule == "/L") return div_left(Conn::Over, true, SKind::Comp);
  if (n.rule == "\\L") return div_left(Conn::Under, false, SKind::Comp);
  if (n.rule == "//L") return div_left(Conn::COver, true, SKind::CComp);
  if (n.rule == "\\\\L") return div_left(Conn::CUnder, false, SKind::CComp);
  auto prod_left = [&](Conn conn, SKind comp) {
    if (!unary() || !same_succ(ps[0])) return fail("expects one premiss with the same succedent");
    const StructurePtr& prem = ps[0]->conclusion.antecedent;
    for (const Position& p : all_positions(c.antecedent)) {
      StructurePtr sub = subterm_at(c.antecedent, p);
      if (!sub || sub->kind != SKind::Leaf || sub->formula->tag != conn) continue;
      StructurePtr split = comp == SKind::Comp
                               ? Structure::mk_comp(detail::leaf(sub->formula->left),
                                                    detail::leaf(sub->formula->right))
                               : Structure::mk_ccomp(detail::leaf(sub->formula->left),
                                                     detail::leaf(sub->formula->right));
      if (detail::replaced_equals(c.antecedent, p, split, prem)) return true;
    }
    return fail("no matching product leaf");
  };
  if (n.rule == "*L") return prod_left(Conn::Prod, SKind::Comp);
  if (n.rule == "**L") return prod_left(Conn::CProd, SKind::CComp);
  // structural unit rules
  auto unit_rule = [&](bool unit_left, bool premiss_has_unit) {
    if (!unary() || !same_succ(ps[0])) return fail("expects one premiss with the same succedent");
    const StructurePtr& with = premiss_has_unit ? ps[0]->conclusion.antecedent : c.antecedent;
    const StructurePtr& without = premiss_has_unit ? c.antecedent : ps[0]->conclusion.antecedent;
    for (const Position& p : all_positions(with)) {
      StructurePtr sub = subterm_at(with, p);
      if (!sub || sub->kind != SKind::Comp) continue;
      StructurePtr unit = unit_left ? sub->left : sub->right;
      StructurePtr rest = unit_left ? sub->right : sub->left;
      if (unit->kind != SKind::One) continue;
      if (detail::replaced_equals(with, p, rest, without)) return true;
    }
    return fail("no matching structural unit");
  };
  if (n.rule == "1o") return unit_rule(true, true);
  if (n.rule == "o1") return unit_rule(false, true);
  if (n.rule == "1oinv") return unit_rule(true, false);
  if (n.rule == "o1inv") return unit_rule(false, false);
  // beta / betainv
  auto beta_rule = [&](bool premiss_has_redex) {
    if (!unary() || !same_succ(ps[0])) return fail("expects one premiss with the same succedent");
    const StructurePtr& with = premiss_has_redex ? ps[0]->conclusion.antecedent : c.antecedent;
    const StructurePtr& without = premiss_has_redex ? c.antecedent : ps[0]->conclusion.antecedent;
    for (const Position& p : all_positions(with)) {
      StructurePtr sub = subterm_at(with, p);
      if (!sub || sub->kind != SKind::CComp || sub->right->kind != SKind::Lam) continue;
      if (var_occurrences(sub->right->body, sub->right->var) != 1) continue;
      StructurePtr contracted = substitute(sub->right->body, sub->right->var, sub->left);
      if (detail::replaced_equals(with, p, contracted, without)) return true;
    }
    return fail("no matching lambda redex");
  };
  if (n.rule == "beta") return beta_rule(true);
  if (n.rule == "betainv") return beta_rule(false);
  return fail("unknown rule");
}

inline bool check_proof(const ProofPtr& p, std::string* why = nullptr) {
  if (!p) {
    if (why) *why = "null proof";
    return false;
  }
  if (!check_node(*p, why)) return false;
  for (const ProofPtr& q : p->premisses)
    if (!check_proof(q, why)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Backward-chaining oracle.
// ---------------------------------------------------------------------------
struct CalculusOptions {
  bool allow_empty_antecedent = false;  // enables the 1oinv / o1inv rules
};

struct OracleBudget {
  int max_depth = 16;
  int max_structure_size = 0;  // 0: derived from the goal sequent
};

enum class OracleStatus { Proved, NotProvable, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::NotProvable;
  ProofPtr proof;
  bool provable() const { return status == OracleStatus::Proved; }
};

namespace detail {

inline bool formula_has(const FormulaPtr& f, std::initializer_list<Conn> tags) {
  if (!f) return false;
  for (Conn t : tags)
    if (f->tag == t) return true;
  return formula_has(f->left, tags) || formula_has(f->right, tags);
}

inline bool structure_has(const StructurePtr& s, std::initializer_list<SKind> kinds,
                          std::initializer_list<Conn> tags) {
  if (!s) return false;
  for (SKind k : kinds)
    if (s->kind == k) return true;
  if (s->kind == SKind::Leaf) return formula_has(s->formula, tags);
  return structure_has(s->left, kinds, tags) || structure_has(s->right, kinds, tags) ||
         structure_has(s->body, kinds, tags);
}

struct OracleState {
  CalculusOptions opts;
  int max_size = 0;
  // expansion gates: backward beta is useless unless a continuation
  // connective can consume the lambda, and 1o/o1 are useless unless a unit
  // can absorb the structural One
  bool allow_beta_exp = true;
  bool allow_unit_exp = true;
  bool hit_budget = false;
  std::map<std::string, ProofPtr> proved;
  // deepest remaining-depth at which this sequent already failed; INT_MAX
  // marks an unconditional failure
  std::map<std::string, int> failed_at;
  // sequents on the current search path with their path index: revisiting
  // one is a loop
  std::map<std::string, int> on_path;
  // shallowest path index a loop prune in the current subtree anchored to;
  // a failure is unconditional only if no prune reached above its own node
  int prune_anchor = std::numeric_limits<int>::max();
  bool subtree_hit = false;
  long loop_prunes = 0;
};

inline std::optional<ProofPtr> prove_rec(const Sequent& goal, int depth, OracleState& st);

inline std::optional<ProofPtr> try_sub(const std::string& rule, const Sequent& concl,
                                       const std::vector<Sequent>& subgoals, int depth,
                                       OracleState& st,
                                       std::optional<Position> focus = std::nullopt) {
  std::vector<ProofPtr> prems;
  for (const Sequent& s : subgoals) {
    auto p = prove_rec(s, depth - 1, st);
    if (!p) return std::nullopt;
    prems.push_back(*p);
  }
  return mk_proof(rule, concl, std::move(prems), std::move(focus));
}

inline std::optional<ProofPtr> prove_rec(const Sequent& goal, int depth, OracleState& st) {
  const StructurePtr& ant = goal.antecedent;
  const FormulaPtr& succ = goal.succedent;

  // axioms
  if (ant->kind == SKind::Leaf && formula_equal(ant->formula, succ))
    return mk_proof("ax", goal);
  if (ant->kind == SKind::One && succ->tag == Conn::Unit) return mk_proof("tR", goal);

  std::string key = canonical_sequent(goal);
  if (auto it = st.proved.find(key); it != st.proved.end()) return it->second;
  if (auto it = st.failed_at.find(key); it != st.failed_at.end() && it->second >= depth)
    return std::nullopt;
  if (auto it = st.on_path.find(key); it != st.on_path.end()) {
    st.loop_prunes++;
    st.prune_anchor = std::min(st.prune_anchor, it->second);
    return std::nullopt;
  }
  if (depth <= 0) {
    st.hit_budget = true;
    st.subtree_hit = true;
    return std::nullopt;
  }
  int my_index = static_cast<int>(st.on_path.size());
  st.on_path.emplace(key, my_index);
  int outer_anchor = st.prune_anchor;
  bool outer_hit = st.subtree_hit;
  st.prune_anchor = std::numeric_limits<int>::max();
  st.subtree_hit = false;
  struct PathGuard {
    OracleState& st;
    const std::string& key;
    int outer_anchor;
    bool outer_hit;
    ~PathGuard() {
      st.on_path.erase(key);
      st.prune_anchor = std::min(outer_anchor, st.prune_anchor);
      st.subtree_hit = outer_hit || st.subtree_hit;
    }
  } guard{st, key, outer_anchor, outer_hit};

  auto done = [&](ProofPtr p) {
    st.proved[key] = p;
    return std::optional<ProofPtr>(p);
  };

  // right logical rules
  switch (succ->tag) {
    case Conn::Over:
      if (auto p = try_sub("/R", goal,
                           {{Structure::mk_comp(ant, leaf(succ->right)), succ->left}}, depth, st))
        return done(*p);
      break;
    case Conn::Under:
      if (auto p = try_sub("\\R", goal,
                           {{Structure::mk_comp(leaf(succ->left), ant), succ->right}}, depth, st))
        return done(*p);
      break;
    case Conn::COver:
      if (auto p = try_sub("//R", goal,
                           {{Structure::mk_ccomp(ant, leaf(succ->right)), succ->left}}, depth, st))
        return done(*p);
      break;
    case Conn::CUnder:
      if (auto p = try_sub("\\\\R", goal,
                           {{Structure::mk_ccomp(leaf(succ->left), ant), succ->right}}, depth, st))
        return done(*p);
      break;
    case Conn::Prod:
      if (ant->kind == SKind::Comp)
        if (auto p = try_sub("*R", goal,
                             {{ant->left, succ->left}, {ant->right, succ->right}}, depth, st))
          return done(*p);
      break;
    case Conn::CProd:
      if (ant->kind == SKind::CComp)
        if (auto p = try_sub("**R", goal,
                             {{ant->left, succ->left}, {ant->right, succ->right}}, depth, st))
          return done(*p);
      break;
    default: break;
  }

  // left logical rules, searched by position
  for (const Position& pos : all_positions(ant)) {
    StructurePtr sub = subterm_at(ant, pos);
    if (!sub) continue;
    if (sub->kind == SKind::Leaf) {
      const FormulaPtr& f = sub->formula;
      if (f->tag == Conn::Unit) {
        if (auto p = try_sub("tL", goal, {{replace_at(ant, pos, Structure::mk_one()), succ}},
                             depth, st, pos))
          return done(*p);
      } else if (f->tag == Conn::Prod) {
        StructurePtr split = Structure::mk_comp(leaf(f->left), leaf(f->right));
        if (auto p = try_sub("*L", goal, {{replace_at(ant, pos, split), succ}}, depth, st, pos))
          return done(*p);
      } else if (f->tag == Conn::CProd) {
        StructurePtr split = Structure::mk_ccomp(leaf(f->left), leaf(f->right));
        if (auto p = try_sub("**L", goal, {{replace_at(ant, pos, split), succ}}, depth, st, pos))
          return done(*p);
      }
    }
    if (sub->kind == SKind::Comp || sub->kind == SKind::CComp) {
      bool cont = sub->kind == SKind::CComp;
      // function on the left: (A/B) o Delta   /   (A//B) @ Delta
      if (sub->left->kind == SKind::Leaf) {
        const FormulaPtr& f = sub->left->formula;
        if ((!cont && f->tag == Conn::Over) || (cont && f->tag == Conn::COver)) {
          Sequent arg{sub->right, f->right};
          Sequent rest{replace_at(ant, pos, leaf(f->left)), succ};
          if (auto p = try_sub(cont ? "//L" : "/L", goal, {arg, rest}, depth, st, pos))
            return done(*p);
        }
      }
      // function on the right: Delta o (A\C)   /   Delta @ (A\\C)
      if (sub->right->kind == SKind::Leaf) {
        const FormulaPtr& f = sub->right->formula;
        if ((!cont && f->tag == Conn::Under) || (cont && f->tag == Conn::CUnder)) {
          Sequent arg{sub->left, f->left};
          Sequent rest{replace_at(ant, pos, leaf(f->right)), succ};
          if (auto p = try_sub(cont ? "\\\\L" : "\\L", goal, {arg, rest}, depth, st, pos))
            return done(*p);
        }
      }
    }
  }

  // structural rules, reducing first
  for (const Position& pos : all_positions(ant)) {
    StructurePtr sub = subterm_at(ant, pos);
    if (!sub) continue;
    if (sub->kind == SKind::Comp && st.opts.allow_empty_antecedent) {
      if (sub->left->kind == SKind::One)
        if (auto p = try_sub("1oinv", goal, {{replace_at(ant, pos, sub->right), succ}}, depth,
                             st, pos))
          return done(*p);
      if (sub->right->kind == SKind::One)
        if (auto p = try_sub("o1inv", goal, {{replace_at(ant, pos, sub->left), succ}}, depth,
                             st, pos))
          return done(*p);
    }
    if (sub->kind == SKind::CComp && sub->right->kind == SKind::Lam &&
        var_occurrences(sub->right->body, sub->right->var) == 1) {
      StructurePtr contracted = substitute(sub->right->body, sub->right->var, sub->left);
      if (auto p = try_sub("betainv", goal, {{replace_at(ant, pos, contracted), succ}}, depth,
                           st, pos))
        return done(*p);
    }
  }

  // expanding structural rules, bounded by the size budget
  if (st.allow_unit_exp && structure_size(ant) + 2 <= st.max_size) {
    for (const Position& pos : all_positions(ant)) {
      StructurePtr sub = subterm_at(ant, pos);
      if (!sub) continue;
      StructurePtr l = Structure::mk_comp(Structure::mk_one(), sub);
      if (auto p = try_sub("1o", goal, {{replace_at(ant, pos, l), succ}}, depth, st, pos))
        return done(*p);
      StructurePtr r = Structure::mk_comp(sub, Structure::mk_one());
      if (auto p = try_sub("o1", goal, {{replace_at(ant, pos, r), succ}}, depth, st, pos))
        return done(*p);
    }
  }
  if (st.allow_beta_exp && structure_size(ant) + 3 <= st.max_size) {
    // beta backward: pick an outer context position o and an inner position
    // q inside it; the subterm at q becomes Delta, the material between o
    // and q becomes the lambda body.
    std::string x = fresh_var(ant);
    for (const Position& outer : all_positions(ant)) {
      StructurePtr ctx = subterm_at(ant, outer);
      if (!ctx) continue;
      for (const Position& inner : all_positions(ctx)) {
        StructurePtr delta = subterm_at(ctx, inner);
        if (!delta) continue;
        if (delta->kind == SKind::Var) continue;  // moving a bare variable is a no-op
        // Delta must be closed: moving it outside a binder would unbind it.
        if (!validate_structure(delta)) continue;
        StructurePtr body = replace_at(ctx, inner, Structure::mk_var(x));
        StructurePtr redex = Structure::mk_ccomp(delta, Structure::mk_lam(x, body));
        if (auto p = try_sub("beta", goal, {{replace_at(ant, outer, redex), succ}}, depth, st,
                             outer))
          return done(*p);
      }
    }
  }

  // at this point st.subtree_hit / st.prune_anchor still describe only the
  // subtree below this node (the guard merges them on exit)
  bool absolute = !st.subtree_hit && st.prune_anchor >= my_index;
  int& rec = st.failed_at[key];
  rec = std::max(rec, absolute ? std::numeric_limits<int>::max() : depth);
  return std::nullopt;
}

}  // namespace detail

inline OracleResult oracle_prove(const Sequent& goal, OracleBudget budget = {},
                                 CalculusOptions opts = {}) {
  detail::OracleState st;
  st.opts = opts;
  st.max_size = budget.max_structure_size > 0
                    ? budget.max_structure_size
                    : structure_size(goal.antecedent) + connective_count(goal.succedent) * 2 + 4;
  st.allow_beta_exp =
      detail::formula_has(goal.succedent, {Conn::COver, Conn::CUnder, Conn::CProd}) ||
      detail::structure_has(goal.antecedent, {SKind::CComp, SKind::Lam},
                            {Conn::COver, Conn::CUnder, Conn::CProd});
  st.allow_unit_exp = goal.succedent->tag == Conn::Unit ||
                      detail::formula_has(goal.succedent, {Conn::Unit}) ||
                      detail::structure_has(goal.antecedent, {SKind::One}, {Conn::Unit});
  auto p = detail::prove_rec(goal, budget.max_depth, st);
  if (p) return {OracleStatus::Proved, *p};
  return {st.hit_budget ? OracleStatus::BudgetExceeded : OracleStatus::NotProvable, nullptr};
}

// ---------------------------------------------------------------------------
// Enumeration of small sequents for oracle cross-checks.
// ---------------------------------------------------------------------------

namespace detail {

inline void all_formulas(const std::vector<std::string>& atoms, int max_conn,
                         std::vector<std::vector<FormulaPtr>>& by_count) {
  by_count.assign(max_conn + 1, {});
  for (const std::string& a : atoms) by_count[0].push_back(Formula::mk_atom(a));
  if (max_conn >= 1) by_count[1].push_back(Formula::mk_unit());
  static const Conn ops[] = {Conn::Under, Conn::Over,  Conn::Prod,
                             Conn::CUnder, Conn::COver, Conn::CProd};
  for (int n = 1; n <= max_conn; n++)
    for (int lc = 0; lc <= n - 1; lc++)
      for (Conn op : ops)
        for (const FormulaPtr& l : by_count[lc])
          for (const FormulaPtr& r : by_count[n - 1 - lc])
            by_count[n].push_back(Formula::mk(op, l, r));
}

// Count atom occurrences by unfolding polarity, and unit occurrences by
// side (input units become tL par links, output units tR links).
inline void polarity_counts(const FormulaPtr& f, bool input,
                            std::map<std::string, std::pair<int, int>>& atoms, int& tl, int& tr) {
  switch (f->tag) {
    case Conn::Atom:
      (input ? atoms[f->atom].first : atoms[f->atom].second)++;
      break;
    case Conn::Unit:
      (input ? tl : tr)++;
      break;
    case Conn::Over:
    case Conn::COver:
      polarity_counts(f->left, input, atoms, tl, tr);
      polarity_counts(f->right, !input, atoms, tl, tr);
      break;
    case Conn::Under:
    case Conn::CUnder:
      polarity_counts(f->left, !input, atoms, tl, tr);
      polarity_counts(f->right, input, atoms, tl, tr);
      break;
    case Conn::Prod:
    case Conn::CProd:
      polarity_counts(f->left, input, atoms, tl, tr);
      polarity_counts(f->right, input, atoms, tl, tr);
      break;
  }
}

inline bool balanced(const std::vector<FormulaPtr>& hyps, const FormulaPtr& goal) {
  std::map<std::string, std::pair<int, int>> atoms;
  int tl = 0, tr = 0;
  for (const FormulaPtr& h : hyps) polarity_counts(h, true, atoms, tl, tr);
  polarity_counts(goal, false, atoms, tl, tr);
  for (const auto& [name, io] : atoms)
    if (io.first != io.second) return false;
  return tl <= tr;
}

inline std::vector<StructurePtr> all_trees(const std::vector<FormulaPtr>& leaves, int lo, int hi) {
  std::vector<StructurePtr> out;
  if (hi - lo == 1) {
    out.push_back(Structure::mk_leaf(leaves[lo]));
    return out;
  }
  for (int mid = lo + 1; mid < hi; mid++)
    for (const StructurePtr& l : all_trees(leaves, lo, mid))
      for (const StructurePtr& r : all_trees(leaves, mid, hi))
        out.push_back(Structure::mk_comp(l, r));
  return out;
}

}  // namespace detail

// All sequents whose antecedent is a Lambek tree of at most
// max_antecedent_leaves formula leaves, every formula having at most
// max_connectives connectives and the whole sequent at most
// max_total_connectives, restricted to sequents whose atom occurrences are
// balanced by unfolding polarity (others can never admit an axiom linking).
inline std::vector<Sequent> enumerate_small_sequents(const std::vector<std::string>& atom_pool,
                                                     int max_connectives,
                                                     int max_antecedent_leaves,
                                                     int max_total_connectives = 2) {
  std::vector<std::vector<FormulaPtr>> by_count;
  detail::all_formulas(atom_pool, max_connectives, by_count);
  std::vector<Sequent> out;
  std::vector<FormulaPtr> hyps;
  std::function<void(int, int)> rec = [&](int slots_left, int budget) {
    if (!hyps.empty()) {
      for (int gc = 0; gc <= std::min(max_connectives, budget); gc++)
        for (const FormulaPtr& goal : by_count[gc]) {
          if (!detail::balanced(hyps, goal)) continue;
          for (const StructurePtr& ant : detail::all_trees(hyps, 0, (int)hyps.size()))
            out.push_back({ant, goal});
        }
    }
    if (slots_left == 0) return;
    for (int hc = 0; hc <= std::min(max_connectives, budget); hc++)
      for (const FormulaPtr& h : by_count[hc]) {
        hyps.push_back(h);
        rec(slots_left - 1, budget - hc);
        hyps.pop_back();
      }
  };
  rec(max_antecedent_leaves, max_total_connectives);
  return out;
}

}  // namespace nllam

#endif  // NLLAM_SEQUENT_HPP
