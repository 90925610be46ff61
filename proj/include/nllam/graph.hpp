#ifndef NLLAM_GRAPH_HPP
#define NLLAM_GRAPH_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nllam/formula.hpp"

namespace nllam {

enum class LinkKind { Tensor, Par };

// Link shapes.  The logical shapes label proof-structure links; after the
// move to abstract proof structures the tensor links collapse onto the
// structural shapes (Comp/CComp/One) while par links keep their identity.
// The Htlg* shapes form the link alphabet of the mirror-image term graphs.
enum class LinkShape {
  // logical tensor links
  OverL,    // C/B with its argument           -> Comp
  UnderL,   // A\C with its argument           -> Comp
  ProdR,    // A*B introduction                -> Comp
  COverL,   // C//B with its argument          -> CComp
  CUnderL,  // A\\C with its argument          -> CComp
  CProdR,   // A**B introduction               -> CComp
  UnitR,    // structural unit introduction    -> One
  // par links (shape preserved in abstract proof structures)
  OverR,   // premiss C, conclusions [C/B (main), B]
  UnderR,  // premiss C, conclusions [A, A\C (main)]
  ProdL,   // premiss A*B (main), conclusions [A, B]
  COverR,  // premiss C, conclusions [C//B (main), B]
  CUnderR, // premiss C, conclusions [A, A\\C (main)]
  CProdL,  // premiss A**B (main), conclusions [A, B]
  UnitL,   // premiss t (main), no conclusions
  // structural tensor links (abstract proof structures)
  Comp,    // o : two premisses, one conclusion
  CComp,   // @ : two premisses, one conclusion
  One,     // structural unit: no premisses, one conclusion
  Lambda,  // lambda: one premiss, conclusions [binder position, attachment]
  // mirror-image term-graph links
  HtlgPlus,  // string concatenation +: two premisses, one conclusion
  HtlgApp,   // application @: premisses [function, argument], one conclusion
  HtlgLamT,  // lambda tensor: one premiss, conclusions [attachment, binder]
  HtlgLamP,  // lambda par: premiss body, conclusions [main, variable]
  HtlgEps,   // empty string: no premisses, one conclusion
};

inline bool shape_is_par(LinkShape s) {
  switch (s) {
    case LinkShape::OverR:
    case LinkShape::UnderR:
    case LinkShape::ProdL:
    case LinkShape::COverR:
    case LinkShape::CUnderR:
    case LinkShape::CProdL:
    case LinkShape::UnitL:
    case LinkShape::HtlgLamP:
      return true;
    default:
      return false;
  }
}

inline const char* shape_name(LinkShape s) {
  switch (s) {
    case LinkShape::OverL: return "/L";
    case LinkShape::UnderL: return "\\L";
    case LinkShape::ProdR: return "*R";
    case LinkShape::COverL: return "//L";
    case LinkShape::CUnderL: return "\\\\L";
    case LinkShape::CProdR: return "**R";
    case LinkShape::UnitR: return "tR";
    case LinkShape::OverR: return "/R";
    case LinkShape::UnderR: return "\\R";
    case LinkShape::ProdL: return "*L";
    case LinkShape::COverR: return "//R";
    case LinkShape::CUnderR: return "\\\\R";
    case LinkShape::CProdL: return "**L";
    case LinkShape::UnitL: return "tL";
    case LinkShape::Comp: return "o";
    case LinkShape::CComp: return "@";
    case LinkShape::One: return "1";
    case LinkShape::Lambda: return "lambda";
    case LinkShape::HtlgPlus: return "+";
    case LinkShape::HtlgApp: return "app";
    case LinkShape::HtlgLamT: return "lam";
    case LinkShape::HtlgLamP: return "lam-par";
    case LinkShape::HtlgEps: return "eps";
  }
  return "?";
}

// Polarity of a formula occurrence during unfolding: Input for hypothesis
// occurrences, Output for conclusion occurrences.
enum class Polarity { Input, Output };

struct Vertex {
  int id = -1;
  // Proof-structure formula label; cleared for internal vertices when the
  // structure is abstracted.  Hypothesis/conclusion labels of the abstract
  // structure live in Graph::hyp / Graph::concl.
  FormulaPtr formula;
  Polarity polarity = Polarity::Input;
  std::string word;  // lexical origin, if any
};

struct Link {
  int id = -1;
  LinkShape shape;
  std::vector<int> premisses;
  std::vector<int> conclusions;
  // Formula labels of the slots at creation time; retained through merges
  // so that a proof-net trace can be turned back into a sequent proof.
  std::vector<FormulaPtr> premiss_formulas;
  std::vector<FormulaPtr> conclusion_formulas;
  // For UnitL/UnitR(One): index pairing a tL par with its tR partner
  // (-1 when unpaired).
  int unit_pair = -1;

  bool is_par() const { return shape_is_par(shape); }
  std::vector<int> all_vertices() const {
    std::vector<int> vs = premisses;
    vs.insert(vs.end(), conclusions.begin(), conclusions.end());
    return vs;
  }
};

class GraphError : public std::runtime_error {
public:
  explicit GraphError(const std::string& m) : std::runtime_error(m) {}
};

// A hypergraph of links over vertices.  Used for proof structures, abstract
// proof structures and term graphs alike.  The well-formedness discipline:
// every vertex is the premiss of at most one link and the conclusion of at
// most one link.
class Graph {
public:
  std::map<int, Vertex> vertices;
  std::map<int, Link> links;
  int next_vertex = 0;
  int next_link = 0;

  // Abstract-structure labelling: hypotheses (vertices that are no link's
  // conclusion) and conclusions (vertices that are no link's premiss).
  std::map<int, FormulaPtr> hyp;
  std::map<int, FormulaPtr> concl;
  std::vector<int> word_order;  // hypothesis vertices of lexical entries, in sentence order
  int goal = -1;                // designated goal conclusion vertex (-1 if unset)

  int add_vertex(FormulaPtr f = nullptr, Polarity pol = Polarity::Input, std::string word = "") {
    int id = next_vertex++;
    vertices[id] = Vertex{id, std::move(f), pol, std::move(word)};
    return id;
  }

  int add_link(LinkShape shape, std::vector<int> prem, std::vector<int> conc) {
    int id = next_link++;
    Link l;
    l.id = id;
    l.shape = shape;
    l.premisses = std::move(prem);
    l.conclusions = std::move(conc);
    for (int v : l.premisses) l.premiss_formulas.push_back(vertices.at(v).formula);
    for (int v : l.conclusions) l.conclusion_formulas.push_back(vertices.at(v).formula);
    links[id] = std::move(l);
    return id;
  }

  // Index maps, recomputed on demand: vertex -> link of which it is a
  // premiss / conclusion (at most one each).
  std::map<int, int> premiss_of() const {
    std::map<int, int> m;
    for (const auto& [id, l] : links)
      for (int v : l.premisses) {
        if (m.count(v)) throw GraphError("vertex is a premiss of two links");
        m[v] = id;
      }
    return m;
  }
  std::map<int, int> conclusion_of() const {
    std::map<int, int> m;
    for (const auto& [id, l] : links)
      for (int v : l.conclusions) {
        if (m.count(v)) throw GraphError("vertex is a conclusion of two links");
        m[v] = id;
      }
    return m;
  }

  void check_wellformed() const {
    premiss_of();
    conclusion_of();
    for (const auto& [id, l] : links)
      for (int v : l.all_vertices())
        if (!vertices.count(v)) throw GraphError("link refers to a missing vertex");
  }

  void remove_link(int id) { links.erase(id); }

  void remove_vertex(int v) {
    for (const auto& [id, l] : links)
      for (int u : l.all_vertices())
        if (u == v) throw GraphError("removing a vertex still attached to a link");
    vertices.erase(v);
    hyp.erase(v);
    concl.erase(v);
    word_order.erase(std::remove(word_order.begin(), word_order.end(), v), word_order.end());
  }

  // Identify vertices a and b.  The survivor is the smaller id, which keeps
  // replay of recorded rewrite steps deterministic.
  int merge_vertices(int a, int b) {
    if (a == b) return a;
    int keep = std::min(a, b), drop = std::max(a, b);
    for (auto& [id, l] : links) {
      for (int& v : l.premisses)
        if (v == drop) v = keep;
      for (int& v : l.conclusions)
        if (v == drop) v = keep;
    }
    Vertex& kv = vertices[keep];
    Vertex& dv = vertices[drop];
    if (kv.word.empty()) kv.word = dv.word;
    if (!kv.formula) kv.formula = dv.formula;
    if (hyp.count(drop)) {
      if (hyp.count(keep)) throw GraphError("merge would give a vertex two hypothesis labels");
      hyp[keep] = hyp[drop];
      hyp.erase(drop);
    }
    if (concl.count(drop)) {
      if (concl.count(keep)) throw GraphError("merge would give a vertex two conclusion labels");
      concl[keep] = concl[drop];
      concl.erase(drop);
    }
    for (int& v : word_order)
      if (v == drop) v = keep;
    if (goal == drop) goal = keep;
    vertices.erase(drop);
    // The discipline must survive the identification.
    premiss_of();
    conclusion_of();
    return keep;
  }

  size_t tensor_count() const {
    size_t n = 0;
    for (const auto& [id, l] : links)
      if (!l.is_par()) n++;
    return n;
  }
  size_t par_count() const { return links.size() - tensor_count(); }
};

// Directed reachability from one vertex to another following premiss ->
// conclusion edges and crossing tensor links only.  Used for the lambda
// side conditions of beta-type rewrites and the tensor-graph criterion.
inline bool tensor_path(const Graph& g, int from, int to) {
  if (from == to) return true;
  std::set<int> seen{from};
  std::vector<int> stack{from};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const auto& [id, l] : g.links) {
      if (l.is_par()) continue;
      bool is_prem = std::find(l.premisses.begin(), l.premisses.end(), v) != l.premisses.end();
      if (!is_prem) continue;
      for (int c : l.conclusions) {
        if (c == to) return true;
        if (seen.insert(c).second) stack.push_back(c);
      }
    }
  }
  return false;
}

// Structural isomorphism of two graphs: a bijection between links and
// between attached vertices preserving shapes and slot positions.  Labels
// are compared where meaningful: words always; hypothesis/conclusion
// formulas according to `labels`.
enum class IsoLabels {
  Full,        // hyp/concl formulas must match exactly
  AtomsWords,  // only words and atomic hyp/concl formula names must match
};

namespace detail {

inline bool iso_vertex_ok(const Graph& a, const Graph& b, int va, int vb, IsoLabels mode) {
  const Vertex& x = a.vertices.at(va);
  const Vertex& y = b.vertices.at(vb);
  if (x.word != y.word) return false;
  auto cmp = [&](const std::map<int, FormulaPtr>& ma, const std::map<int, FormulaPtr>& mb) {
    bool ha = ma.count(va), hb = mb.count(vb);
    if (mode == IsoLabels::Full) {
      if (ha != hb) return false;
      if (ha && !formula_equal(ma.at(va), mb.at(vb))) return false;
    } else {
      // Atomic labels must agree when both sides carry one; complex labels
      // (whose syntax differs between the two logics) are not compared.
      if (ha && hb) {
        const FormulaPtr& fa = ma.at(va);
        const FormulaPtr& fb = mb.at(vb);
        bool aa = fa->tag == Conn::Atom, ab = fb->tag == Conn::Atom;
        if (aa != ab) return false;
        if (aa && fa->atom != fb->atom) return false;
      }
    }
    return true;
  };
  return cmp(a.hyp, b.hyp) && cmp(a.concl, b.concl);
}

inline bool iso_search(const Graph& a, const Graph& b, std::vector<int>& la,
                       std::map<int, int>& linkmap, std::map<int, int>& vmap,
                       std::map<int, int>& vmap_rev, size_t idx, IsoLabels mode) {
  if (idx == la.size()) return true;
  int ida = la[idx];
  const Link& x = a.links.at(ida);
  for (const auto& [idb, y] : b.links) {
    bool used = false;
    for (const auto& [k, v] : linkmap)
      if (v == idb) used = true;
    if (used) continue;
    if (y.shape != x.shape) continue;
    if (y.premisses.size() != x.premisses.size() ||
        y.conclusions.size() != x.conclusions.size())
      continue;
    // Tentatively extend the vertex map slot by slot.
    std::vector<std::pair<int, int>> added;
    bool ok = true;
    auto try_pair = [&](int va, int vb) {
      auto it = vmap.find(va);
      auto it2 = vmap_rev.find(vb);
      if (it != vmap.end()) {
        if (it->second != vb) return false;
        return true;
      }
      if (it2 != vmap_rev.end()) return false;
      if (!iso_vertex_ok(a, b, va, vb, mode)) return false;
      vmap[va] = vb;
      vmap_rev[vb] = va;
      added.push_back({va, vb});
      return true;
    };
    for (size_t i = 0; ok && i < x.premisses.size(); i++)
      ok = try_pair(x.premisses[i], y.premisses[i]);
    for (size_t i = 0; ok && i < x.conclusions.size(); i++)
      ok = try_pair(x.conclusions[i], y.conclusions[i]);
    if (ok) {
      linkmap[ida] = idb;
      if (iso_search(a, b, la, linkmap, vmap, vmap_rev, idx + 1, mode)) return true;
      linkmap.erase(ida);
    }
    for (auto& [va, vb] : added) {
      vmap.erase(va);
      vmap_rev.erase(vb);
    }
  }
  return false;
}

}  // namespace detail

inline bool graphs_isomorphic(const Graph& a, const Graph& b,
                              IsoLabels mode = IsoLabels::Full) {
  if (a.links.size() != b.links.size()) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  std::vector<int> la;
  for (const auto& [id, l] : a.links) la.push_back(id);
  std::map<int, int> linkmap, vmap, vmap_rev;
  if (!detail::iso_search(a, b, la, linkmap, vmap, vmap_rev, 0, mode)) return false;
  // Extend the check to isolated vertices (a lone axiom vertex, say).
  std::vector<int> ia, ib;
  for (const auto& [v, vx] : a.vertices)
    if (!vmap.count(v)) ia.push_back(v);
  for (const auto& [v, vx] : b.vertices)
    if (!vmap_rev.count(v)) ib.push_back(v);
  if (ia.size() != ib.size()) return false;
  // Match leftover vertices greedily with backtracking (counts are tiny).
  std::function<bool(size_t, std::set<int>&)> match = [&](size_t i, std::set<int>& used) {
    if (i == ia.size()) return true;
    for (int vb : ib) {
      if (used.count(vb)) continue;
      if (!detail::iso_vertex_ok(a, b, ia[i], vb, mode)) continue;
      used.insert(vb);
      if (match(i + 1, used)) return true;
      used.erase(vb);
    }
    return false;
  };
  std::set<int> used;
  return match(0, used);
}

}  // namespace nllam

#endif  // NLLAM_GRAPH_HPP
