#ifndef NLLAM_SEQUENTIALIZE_HPP
#define NLLAM_SEQUENTIALIZE_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nllam/aps.hpp"
#include "nllam/graph.hpp"
#include "nllam/rewrite.hpp"
#include "nllam/sequent.hpp"

namespace nllam {

// Thrown when a rewrite trace cannot be read back as a sequent proof: steps
// referring to missing links, contractions that fail to split the structure
// in two, eta steps (which have no sequent-rule counterpart), and the like.
class MalformedTrace : public std::runtime_error {
public:
  explicit MalformedTrace(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

// --- small union-find over int ids ----------------------------------------
struct IdUnion {
  std::map<int, int> parent;
  void add(int x) { parent.emplace(x, x); }
  int find(int x) {
    auto it = parent.find(x);
    if (it == parent.end()) throw MalformedTrace("step refers to an unknown vertex");
    while (it->second != it->first) {
      auto up = parent.find(it->second);
      it->second = up->second;  // path halving
      it = up;
    }
    return it->first;
  }
  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

// Vertices a step touches, read off the graph before the step is applied.
inline std::vector<int> step_vertices(const Graph& g, const Step& s) {
  std::vector<int> out;
  auto from_link = [&](int id) {
    if (id < 0) return;
    auto it = g.links.find(id);
    if (it == g.links.end()) throw MalformedTrace("step refers to a missing link");
    for (int v : it->second.all_vertices()) out.push_back(v);
  };
  from_link(s.a);
  from_link(s.b);
  if (s.u >= 0) out.push_back(s.u);
  if (s.w >= 0) out.push_back(s.w);
  return out;
}

// The vertex identifications a step performs, mirroring apply_step.
inline std::vector<std::pair<int, int>> step_merges(const Graph& g, const Step& s) {
  std::vector<std::pair<int, int>> out;
  switch (s.kind) {
    case StepKind::ContractOverR:
    case StepKind::ContractUnderR:
    case StepKind::ContractCOverR:
    case StepKind::ContractCUnderR: {
      const Link& P = g.links.at(s.a);
      const Link& T = g.links.at(s.b);
      bool slash = s.kind == StepKind::ContractOverR || s.kind == StepKind::ContractCOverR;
      out.push_back({slash ? T.premisses[0] : T.premisses[1],
                     slash ? P.conclusions[0] : P.conclusions[1]});
      break;
    }
    case StepKind::ContractProdL:
    case StepKind::ContractCProdL:
      out.push_back({g.links.at(s.a).premisses[0], g.links.at(s.b).conclusions[0]});
      break;
    case StepKind::ContractUnitL:
      out.push_back({g.links.at(s.a).premisses[0], g.links.at(s.b).conclusions[0]});
      break;
    case StepKind::Beta: {
      const Link& T = g.links.at(s.a);
      const Link& L = g.links.at(s.b);
      int p1 = T.premisses[0], c2 = T.conclusions[0];
      int c1 = L.conclusions[0], h2 = L.premisses[0];
      if (p1 != c1) {
        out.push_back({p1, c1});
        int keep = std::min(p1, c1), drop = std::max(p1, c1);
        if (h2 == drop) h2 = keep;
        if (c2 == drop) c2 = keep;
      }
      if (h2 != c2) out.push_back({h2, c2});
      break;
    }
    case StepKind::OneLeft:
    case StepKind::OneRight: {
      const Link& T = g.links.at(s.b);
      out.push_back({s.kind == StepKind::OneLeft ? T.premisses[1] : T.premisses[0],
                     T.conclusions[0]});
      break;
    }
    case StepKind::Eta: {
      const Link& T = g.links.at(s.a);
      const Link& L = g.links.at(s.b);
      out.push_back({T.premisses[1], L.conclusions[1]});
      break;
    }
    default:
      break;
  }
  return out;
}

inline Graph replay_checked(const Graph& aps, const Trace& trace) {
  try {
    return replay_trace(aps, trace);
  } catch (const std::exception& e) {
    throw MalformedTrace(std::string("trace does not replay: ") + e.what());
  }
}

inline Sequent structure_checked(const Graph& g) {
  try {
    return to_structure(g);
  } catch (const NotTensorGraph& e) {
    throw MalformedTrace(std::string("stage is not a tensor graph: ") + e.what());
  }
}

// Path, in the antecedent term read off by to_structure, of the subterm
// built at a given vertex or by a given link.
inline bool find_pos(const Graph& g, const std::map<int, int>& cof, int v, int target_vertex,
                     int target_link, Position& cur) {
  auto it = cof.find(v);
  int lid = it == cof.end() ? -1 : it->second;
  if (v == target_vertex || (target_link >= 0 && lid == target_link)) return true;
  if (lid < 0) return false;
  const Link& l = g.links.at(lid);
  switch (l.shape) {
    case LinkShape::Comp:
    case LinkShape::CComp:
      for (int i = 0; i < 2; i++) {
        cur.push_back(i);
        if (find_pos(g, cof, l.premisses[i], target_vertex, target_link, cur)) return true;
        cur.pop_back();
      }
      return false;
    case LinkShape::Lambda:
      if (v == l.conclusions[0]) return false;  // bound-variable occurrence
      cur.push_back(0);
      if (find_pos(g, cof, l.premisses[0], target_vertex, target_link, cur)) return true;
      cur.pop_back();
      return false;
    default:
      return false;  // One and leaves have no children
  }
}

inline Position pos_of(const Graph& g, int target_vertex, int target_link) {
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  int root = -1;
  for (const auto& [id, v] : g.vertices)
    if (!pof.count(id)) {
      if (root >= 0) throw MalformedTrace("stage does not have a unique root");
      root = id;
    }
  if (root < 0) throw MalformedTrace("stage has no root");
  Position cur;
  if (!find_pos(g, cof, root, target_vertex, target_link, cur))
    throw MalformedTrace("split point not found in the final structure");
  return cur;
}

inline ProofPtr seq_net(const Graph& A, Trace sigma);

// --- base case: a par-free, lambda-free stage with slot formulas ----------
inline ProofPtr seq_base(const Graph& A) {
  Sequent S = structure_checked(A);
  auto pof = A.premiss_of();
  auto cof = A.conclusion_of();
  int root = -1;
  for (const auto& [id, v] : A.vertices)
    if (!pof.count(id)) root = id;  // to_structure guarantees uniqueness
  auto it = cof.find(root);
  if (it == cof.end()) {
    if (!A.links.empty()) throw MalformedTrace("root leaf in a structure with links");
    if (!A.hyp.count(root) || !formula_equal(A.hyp.at(root), A.concl.at(root)))
      throw MalformedTrace("axiom vertex with mismatched end formulas");
    return mk_proof("ax", S);
  }
  const Link L = A.links.at(it->second);
  if (L.shape == LinkShape::One) return mk_proof("tR", S);
  if (L.shape != LinkShape::Comp && L.shape != LinkShape::CComp)
    throw MalformedTrace("unexpected root link in a reduced stage");
  bool cont = L.shape == LinkShape::CComp;
  if (L.premiss_formulas.size() != 2 || L.conclusion_formulas.size() != 1 ||
      !L.premiss_formulas[0] || !L.premiss_formulas[1] || !L.conclusion_formulas[0])
    throw MalformedTrace("root link carries no formula labels");
  const FormulaPtr& pf0 = L.premiss_formulas[0];
  const FormulaPtr& pf1 = L.premiss_formulas[1];
  const FormulaPtr& cf0 = L.conclusion_formulas[0];
  enum class Shape { Fun, Arg, Pair } shape;  // function-first, argument-first, product
  if (formula_equal(pf0, Formula::mk(cont ? Conn::COver : Conn::Over, cf0, pf1)))
    shape = Shape::Fun;
  else if (formula_equal(pf1, Formula::mk(cont ? Conn::CUnder : Conn::Under, pf0, cf0)))
    shape = Shape::Arg;
  else if (formula_equal(cf0, Formula::mk(cont ? Conn::CProd : Conn::Prod, pf0, pf1)))
    shape = Shape::Pair;
  else
    throw MalformedTrace("root link labels fit no logical link");
  // Detach the root link; each premiss heads its own sub-stage.
  IdUnion uf;
  for (const auto& [id, v] : A.vertices) uf.add(id);
  for (const auto& [id, l] : A.links) {
    if (id == L.id) continue;
    const auto vs = l.all_vertices();
    for (size_t i = 1; i < vs.size(); i++) uf.unite(vs[0], vs[i]);
  }
  int s1 = uf.find(L.premisses[0]);
  int s2 = uf.find(L.premisses[1]);
  if (s1 == s2 || s1 == uf.find(root) || s2 == uf.find(root))
    throw MalformedTrace("root link does not split the stage");
  auto restrict_to = [&](int side, int head, FormulaPtr goal_formula) {
    Graph N = A;
    N.remove_link(L.id);
    std::vector<int> drop_links, drop_vertices;
    for (const auto& [id, l] : N.links) {
      const auto vs = l.all_vertices();
      int cls = uf.find(vs[0]);
      for (int v : vs)
        if (uf.find(v) != cls) throw MalformedTrace("link spans a split boundary");
      if (cls != side) drop_links.push_back(id);
    }
    for (int id : drop_links) N.remove_link(id);
    for (const auto& [id, v] : N.vertices)
      if (uf.find(id) != side) drop_vertices.push_back(id);
    for (int id : drop_vertices) N.remove_vertex(id);
    N.concl[head] = goal_formula;
    N.goal = head;
    return N;
  };
  ProofPtr d1 = seq_base(restrict_to(s1, L.premisses[0], pf0));
  ProofPtr d2 = seq_base(restrict_to(s2, L.premisses[1], pf1));
  auto mk_pair = [&](StructurePtr l, StructurePtr r) {
    return cont ? Structure::mk_ccomp(std::move(l), std::move(r))
                : Structure::mk_comp(std::move(l), std::move(r));
  };
  ProofPtr ax = mk_proof("ax", Sequent{Structure::mk_leaf(cf0), cf0});
  switch (shape) {
    case Shape::Fun: {
      // pf0 = C/B applied to pf1 = B; d1 proves the function part.
      ProofPtr inner = mk_proof(cont ? "//L" : "/L",
                                Sequent{mk_pair(Structure::mk_leaf(pf0),
                                                d2->conclusion.antecedent),
                                        cf0},
                                {d2, ax});
      return mk_proof("cut", S, {d1, inner});
    }
    case Shape::Arg: {
      // pf1 = A\C applied to pf0 = A; d2 proves the function part.
      ProofPtr inner = mk_proof(cont ? "\\\\L" : "\\L",
                                Sequent{mk_pair(d1->conclusion.antecedent,
                                                Structure::mk_leaf(pf1)),
                                        cf0},
                                {d1, ax});
      return mk_proof("cut", S, {d2, inner});
    }
    case Shape::Pair:
      return mk_proof(cont ? "**R" : "*R", S, {d1, d2});
  }
  throw MalformedTrace("unreachable");
}

// --- splitting at the par link removed by the final contraction -----------
inline ProofPtr seq_split(const Graph& A, const Trace& rest, const Step& last) {
  auto pit = A.links.find(last.a);
  if (pit == A.links.end())
    throw MalformedTrace("contracted par link is not part of the initial structure");
  const Link P = pit->second;
  LinkShape want = LinkShape::OverR;
  switch (last.kind) {
    case StepKind::ContractOverR: want = LinkShape::OverR; break;
    case StepKind::ContractUnderR: want = LinkShape::UnderR; break;
    case StepKind::ContractCOverR: want = LinkShape::COverR; break;
    case StepKind::ContractCUnderR: want = LinkShape::CUnderR; break;
    case StepKind::ContractProdL: want = LinkShape::ProdL; break;
    case StepKind::ContractCProdL: want = LinkShape::CProdL; break;
    case StepKind::ContractUnitL: want = LinkShape::UnitL; break;
    case StepKind::BetaInvCUnder: want = LinkShape::CUnderR; break;
    default: throw MalformedTrace("unexpected step kind at a split");
  }
  if (P.shape != want) throw MalformedTrace("contraction does not match its par link");
  if (A.goal < 0) throw MalformedTrace("structure has no designated goal");

  // Sides: connected components of the structure without P, closed under
  // every identification the preceding steps perform.
  IdUnion uf;
  for (const auto& [id, v] : A.vertices) uf.add(id);
  for (const auto& [id, l] : A.links) {
    if (id == P.id) continue;
    const auto vs = l.all_vertices();
    for (size_t i = 1; i < vs.size(); i++) uf.unite(vs[0], vs[i]);
  }
  struct Rec {
    int cls;
    int v0, v1, l0, l1;  // fresh id ranges
  };
  std::vector<Rec> recs;
  {
    Graph g = A;
    for (const Step& s : rest) {
      std::vector<int> touched = step_vertices(g, s);
      if (touched.empty()) throw MalformedTrace("step touches no vertices");
      for (size_t i = 1; i < touched.size(); i++) uf.unite(touched[0], touched[i]);
      int v0 = g.next_vertex, l0 = g.next_link;
      try {
        apply_step(g, s);
      } catch (const std::exception& e) {
        throw MalformedTrace(std::string("trace does not replay: ") + e.what());
      }
      for (int v = v0; v < g.next_vertex; v++) {
        uf.add(v);
        uf.unite(touched[0], v);
      }
      recs.push_back({touched[0], v0, g.next_vertex, l0, g.next_link});
    }
    if (!g.links.count(P.id))
      throw MalformedTrace("par link is gone before its recorded contraction");
  }
  int lower = uf.find(A.goal);
  int upper = uf.find(P.premisses[0]);
  if (upper == lower) throw MalformedTrace("contraction does not split the structure");
  for (const auto& [id, v] : A.vertices) {
    int c = uf.find(id);
    if (c != lower && c != upper) throw MalformedTrace("structure falls into more than two parts");
  }

  // Side graphs with the marks the detached par slots contribute.
  auto make_side = [&](int side) {
    Graph N = A;
    N.remove_link(P.id);
    std::vector<int> drop_links, drop_vertices;
    for (const auto& [id, l] : N.links) {
      const auto vs = l.all_vertices();
      int cls = uf.find(vs[0]);
      for (int v : vs)
        if (uf.find(v) != cls) throw MalformedTrace("link spans a split boundary");
      if (cls != side) drop_links.push_back(id);
    }
    for (int id : drop_links) N.remove_link(id);
    for (const auto& [id, v] : N.vertices)
      if (uf.find(id) != side) drop_vertices.push_back(id);
    for (int id : drop_vertices) N.remove_vertex(id);
    if (side == upper) N.goal = -1;
    return N;
  };
  Graph A1 = make_side(upper);
  Graph A2 = make_side(lower);
  const FormulaPtr& pf0 = P.premiss_formulas.at(0);
  int main_vertex = -1;  // hypothesis slot of the detached formula, lower side
  switch (last.kind) {
    case StepKind::ContractOverR:
    case StepKind::ContractCOverR:
      main_vertex = P.conclusions[0];
      A1.concl[P.premisses[0]] = pf0;
      A1.goal = P.premisses[0];
      A1.hyp[P.conclusions[1]] = P.conclusion_formulas.at(1);
      A2.hyp[main_vertex] = P.conclusion_formulas.at(0);
      break;
    case StepKind::ContractUnderR:
    case StepKind::ContractCUnderR:
    case StepKind::BetaInvCUnder:
      main_vertex = P.conclusions[1];
      A1.concl[P.premisses[0]] = pf0;
      A1.goal = P.premisses[0];
      A1.hyp[P.conclusions[0]] = P.conclusion_formulas.at(0);
      A2.hyp[main_vertex] = P.conclusion_formulas.at(1);
      break;
    case StepKind::ContractProdL:
    case StepKind::ContractCProdL:
      A1.concl[P.premisses[0]] = pf0;
      A1.goal = P.premisses[0];
      A2.hyp[P.conclusions[0]] = P.conclusion_formulas.at(0);
      A2.hyp[P.conclusions[1]] = P.conclusion_formulas.at(1);
      break;
    case StepKind::ContractUnitL:
      A1.concl[P.premisses[0]] = pf0;
      A1.goal = P.premisses[0];
      break;
    default:
      break;
  }

  // Distribute the steps over the sides, renaming ids: fresh ids diverge
  // between the combined and the side-local replays, but they are allocated
  // in the same order, so ranges pair off positionally.
  std::map<int, int> vmap1, lmap1, vmap2, lmap2;
  for (const auto& [id, v] : A1.vertices) vmap1[id] = id;
  for (const auto& [id, l] : A1.links) lmap1[id] = id;
  for (const auto& [id, v] : A2.vertices) vmap2[id] = id;
  for (const auto& [id, l] : A2.links) lmap2[id] = id;
  Trace t1, t2;
  Graph r1 = A1, r2 = A2;
  // Per-side identifications, to locate the split slots after replay.
  IdUnion merges1, merges2;
  for (const auto& [id, v] : A1.vertices) merges1.add(id);
  for (const auto& [id, v] : A2.vertices) merges2.add(id);
  for (size_t i = 0; i < rest.size(); i++) {
    const Step& s = rest[i];
    bool on_upper = uf.find(recs[i].cls) == upper;
    Graph& R = on_upper ? r1 : r2;
    std::map<int, int>& vmap = on_upper ? vmap1 : vmap2;
    std::map<int, int>& lmap = on_upper ? lmap1 : lmap2;
    auto xl = [&](int id) {
      if (id < 0) return id;
      auto it = lmap.find(id);
      if (it == lmap.end()) throw MalformedTrace("step crosses the split boundary");
      return it->second;
    };
    auto xv = [&](int id) {
      if (id < 0) return id;
      auto it = vmap.find(id);
      if (it == vmap.end()) throw MalformedTrace("step crosses the split boundary");
      return it->second;
    };
    Step t = s;
    t.a = xl(s.a);
    t.b = xl(s.b);
    t.u = xv(s.u);
    t.w = xv(s.w);
    IdUnion& merges = on_upper ? merges1 : merges2;
    for (const auto& [x, y] : step_merges(R, t)) merges.unite(x, y);
    int v0 = R.next_vertex, l0 = R.next_link;
    try {
      apply_step(R, t);
    } catch (const std::exception& e) {
      throw MalformedTrace(std::string("split trace does not replay: ") + e.what());
    }
    if (R.next_vertex - v0 != recs[i].v1 - recs[i].v0 ||
        R.next_link - l0 != recs[i].l1 - recs[i].l0)
      throw MalformedTrace("split step allocates differently than the combined step");
    for (int k = 0; k < recs[i].v1 - recs[i].v0; k++) {
      vmap[recs[i].v0 + k] = v0 + k;
      merges.add(v0 + k);
    }
    for (int k = 0; k < recs[i].l1 - recs[i].l0; k++) lmap[recs[i].l0 + k] = l0 + k;
    (on_upper ? t1 : t2).push_back(t);
  }

  ProofPtr d1 = seq_net(A1, t1);
  ProofPtr d2 = seq_net(A2, t2);
  const Sequent& S2 = d2->conclusion;
  bool cont = last.kind == StepKind::ContractCOverR || last.kind == StepKind::ContractCUnderR ||
              last.kind == StepKind::ContractCProdL;
  switch (last.kind) {
    case StepKind::ContractOverR:
    case StepKind::ContractCOverR:
    case StepKind::ContractUnderR:
    case StepKind::ContractCUnderR: {
      bool slash =
          last.kind == StepKind::ContractOverR || last.kind == StepKind::ContractCOverR;
      const FormulaPtr& fun = P.conclusion_formulas.at(slash ? 0 : 1);
      const StructurePtr& ant1 = d1->conclusion.antecedent;
      if (ant1->kind != (cont ? SKind::CComp : SKind::Comp))
        throw MalformedTrace("function sub-proof does not end in a pair");
      StructurePtr delta = slash ? ant1->left : ant1->right;
      const char* rule = slash ? (cont ? "//R" : "/R") : (cont ? "\\\\R" : "\\R");
      ProofPtr inner = mk_proof(rule, Sequent{delta, fun}, {d1});
      Position pos = pos_of(r2, merges2.find(main_vertex), -1);
      return mk_proof("cut",
                      Sequent{replace_at(S2.antecedent, pos, delta), S2.succedent},
                      {inner, d2});
    }
    case StepKind::BetaInvCUnder: {
      // The par link becomes a lambda: the function sub-proof is abstracted
      // over the slot of the detached argument formula, then cut in.
      const FormulaPtr& arg = P.conclusion_formulas.at(0);
      const FormulaPtr& fun = P.conclusion_formulas.at(1);
      const StructurePtr& gamma1 = d1->conclusion.antecedent;
      Position slot = pos_of(r1, merges1.find(P.conclusions[0]), -1);
      std::string x = fresh_var(gamma1);
      StructurePtr lam = Structure::mk_lam(x, replace_at(gamma1, slot, Structure::mk_var(x)));
      ProofPtr conv = mk_proof(
          "betainv",
          Sequent{Structure::mk_ccomp(Structure::mk_leaf(arg), lam), d1->conclusion.succedent},
          {d1});
      ProofPtr inner = mk_proof("\\\\R", Sequent{lam, fun}, {conv});
      Position pos = pos_of(r2, merges2.find(main_vertex), -1);
      return mk_proof("cut",
                      Sequent{replace_at(S2.antecedent, pos, lam), S2.succedent},
                      {inner, d2});
    }
    case StepKind::ContractProdL:
    case StepKind::ContractCProdL: {
      auto tl = lmap2.find(last.b);
      if (tl == lmap2.end()) throw MalformedTrace("product partner is not on the goal side");
      Position pos = pos_of(r2, -1, tl->second);
      ProofPtr node = mk_proof(cont ? "**L" : "*L",
                               Sequent{replace_at(S2.antecedent, pos, Structure::mk_leaf(pf0)),
                                       S2.succedent},
                               {d2});
      return mk_proof("cut",
                      Sequent{replace_at(S2.antecedent, pos, d1->conclusion.antecedent),
                              S2.succedent},
                      {d1, node});
    }
    case StepKind::ContractUnitL: {
      auto ul = lmap2.find(last.b);
      if (ul == lmap2.end()) throw MalformedTrace("unit partner is not on the goal side");
      Position pos = pos_of(r2, -1, ul->second);
      ProofPtr node = mk_proof("tL",
                               Sequent{replace_at(S2.antecedent, pos, Structure::mk_leaf(pf0)),
                                       S2.succedent},
                               {d2});
      return mk_proof("cut",
                      Sequent{replace_at(S2.antecedent, pos, d1->conclusion.antecedent),
                              S2.succedent},
                      {d1, node});
    }
    default:
      throw MalformedTrace("unexpected step kind at a split");
  }
}

inline ProofPtr seq_net(const Graph& A, Trace sigma) {
  if (sigma.empty()) return seq_base(A);
  Step last = sigma.back();
  sigma.pop_back();
  switch (last.kind) {
    case StepKind::Beta:
    case StepKind::OneLeft:
    case StepKind::OneRight:
    case StepKind::PrimBetaInv:
    case StepKind::PrimOneInvLeft:
    case StepKind::PrimOneInvRight: {
      Graph g2 = replay_checked(A, sigma);
      try {
        apply_step(g2, last);
      } catch (const std::exception& e) {
        throw MalformedTrace(std::string("trace does not replay: ") + e.what());
      }
      const char* rule = nullptr;
      switch (last.kind) {
        case StepKind::Beta: rule = "beta"; break;
        case StepKind::OneLeft: rule = "1o"; break;
        case StepKind::OneRight: rule = "o1"; break;
        case StepKind::PrimBetaInv: rule = "betainv"; break;
        case StepKind::PrimOneInvLeft: rule = "1oinv"; break;
        case StepKind::PrimOneInvRight: rule = "o1inv"; break;
        default: break;
      }
      ProofPtr d = seq_net(A, sigma);
      return mk_proof(rule, structure_checked(g2), {d});
    }
    case StepKind::Eta:
      throw MalformedTrace("eta steps have no sequent-rule counterpart");
    // The remaining derived steps unfold into an expanding conversion
    // followed by a plain contraction; the fresh link ids below match
    // apply_step's allocation order for the expanding step.
    case StepKind::EmptyOver:
    case StepKind::EmptyUnder: {
      Graph g1 = replay_checked(A, sigma);
      auto it = g1.links.find(last.a);
      if (it == g1.links.end()) throw MalformedTrace("derived step refers to a missing link");
      bool over = last.kind == StepKind::EmptyOver;
      Step prim;
      prim.kind = over ? StepKind::PrimOneInvLeft : StepKind::PrimOneInvRight;
      prim.u = it->second.premisses[0];
      Step con;
      con.kind = over ? StepKind::ContractOverR : StepKind::ContractUnderR;
      con.a = last.a;
      con.b = g1.next_link + 1;  // unit link first, then the pair link
      sigma.push_back(prim);
      sigma.push_back(con);
      return seq_net(A, sigma);
    }
    case StepKind::UnitInsertLeft:
    case StepKind::UnitInsertRight: {
      Graph g1 = replay_checked(A, sigma);
      if (!g1.links.count(last.a))
        throw MalformedTrace("derived step refers to a missing link");
      Step prim;
      prim.kind = last.kind == StepKind::UnitInsertLeft ? StepKind::PrimOneInvLeft
                                                        : StepKind::PrimOneInvRight;
      prim.u = last.u;
      Step con;
      con.kind = StepKind::ContractUnitL;
      con.a = last.a;
      con.b = g1.next_link;  // the fresh unit link
      sigma.push_back(prim);
      sigma.push_back(con);
      return seq_net(A, sigma);
    }
    default:
      return seq_split(A, sigma, last);
  }
}

}  // namespace detail

// Turn a linked proof structure and a witnessing rewrite trace (as returned
// by is_proof_net) into a sequent proof of the structure's end sequent.
inline ProofPtr sequentialize(const Graph& linked_ps, const Trace& trace) {
  Graph aps = to_aps(linked_ps);
  if (aps.goal < 0) {
    // Fall back on the unique premiss-less vertex of the final stage.
    Graph fin = detail::replay_checked(aps, trace);
    auto pof = fin.premiss_of();
    for (const auto& [id, v] : fin.vertices)
      if (!pof.count(id)) aps.goal = id;
  }
  return detail::seq_net(aps, trace);
}

}  // namespace nllam

#endif  // NLLAM_SEQUENTIALIZE_HPP
