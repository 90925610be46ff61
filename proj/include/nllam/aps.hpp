#ifndef NLLAM_APS_HPP
#define NLLAM_APS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nllam/graph.hpp"
#include "nllam/structure.hpp"

namespace nllam {

// Abstract a (linked) proof structure: logical tensor links collapse onto
// their structural shape, internal formula labels are erased, and the
// hypothesis/conclusion maps record the remaining end labels.
inline Graph to_aps(const Graph& ps) {
  Graph g = ps;
  for (auto& [id, l] : g.links) {
    switch (l.shape) {
      case LinkShape::OverL:
      case LinkShape::UnderL:
      case LinkShape::ProdR:
        l.shape = LinkShape::Comp;
        break;
      case LinkShape::COverL:
      case LinkShape::CUnderL:
      case LinkShape::CProdR:
        l.shape = LinkShape::CComp;
        break;
      case LinkShape::UnitR:
        l.shape = LinkShape::One;
        break;
      default:
        break;  // par links keep their shape
    }
  }
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  g.hyp.clear();
  g.concl.clear();
  for (auto& [id, v] : g.vertices) {
    if (!cof.count(id) && v.formula) g.hyp[id] = v.formula;
    if (!pof.count(id) && v.formula) g.concl[id] = v.formula;
    v.formula = nullptr;  // internal labels are gone; ends live in hyp/concl
  }
  return g;
}

// Verdict of the correctness criterion on a rewritten structure.
enum class ApsClass { TensorTree, TensorGraph, HasParLinks, Cyclic, Disconnected };

inline const char* aps_class_name(ApsClass c) {
  switch (c) {
    case ApsClass::TensorTree: return "tensor-tree";
    case ApsClass::TensorGraph: return "tensor-graph";
    case ApsClass::HasParLinks: return "has-par-links";
    case ApsClass::Cyclic: return "cyclic";
    case ApsClass::Disconnected: return "disconnected";
  }
  return "?";
}

// Classify an abstract proof structure.  A tensor graph is a connected
// graph of tensor links whose underlying structure (obtained by detaching
// the binder conclusion of every lambda link) is a tree, and in which each
// lambda's binder conclusion is an ancestor of the lambda's premiss: there
// is a premiss-to-conclusion path from the binder position down to the
// premiss.  A tensor tree is a lambda-free tensor graph.
inline ApsClass classify(const Graph& g) {
  for (const auto& [id, l] : g.links)
    if (l.is_par()) return ApsClass::HasParLinks;
  // Bipartite incidence graph of vertices and links, with lambda binder
  // edges detached.
  std::map<int, std::vector<int>> adj;  // node -> nodes; links offset by a large stride
  const int kLinkBase = 1 << 20;
  size_t edges = 0;
  for (const auto& [id, l] : g.links) {
    int ln = kLinkBase + id;
    auto connect = [&](int v) {
      adj[ln].push_back(v);
      adj[v].push_back(ln);
      edges++;
    };
    for (int v : l.premisses) connect(v);
    for (size_t i = 0; i < l.conclusions.size(); i++) {
      if (l.shape == LinkShape::Lambda && i == 0) continue;  // detach binder
      connect(l.conclusions[i]);
    }
  }
  size_t nodes = g.vertices.size() + g.links.size();
  if (nodes == 0) return ApsClass::Disconnected;
  // Connectivity over all vertices and links.
  std::set<int> seen;
  std::vector<int> stack;
  int start = g.vertices.begin()->first;
  stack.push_back(start);
  seen.insert(start);
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (int m : adj[n])
      if (seen.insert(m).second) stack.push_back(m);
  }
  if (seen.size() != nodes) return ApsClass::Disconnected;
  if (edges != nodes - 1) return ApsClass::Cyclic;  // connected but not a tree
  bool has_lambda = false;
  for (const auto& [id, l] : g.links) {
    if (l.shape != LinkShape::Lambda) continue;
    has_lambda = true;
    if (!tensor_path(g, l.conclusions[0], l.premisses[0])) return ApsClass::Cyclic;
  }
  return has_lambda ? ApsClass::TensorGraph : ApsClass::TensorTree;
}

class NotTensorGraph : public std::runtime_error {
public:
  explicit NotTensorGraph(const std::string& m) : std::runtime_error(m) {}
};

// Read a tensor graph back as a sequent: the antecedent term described by
// the tree of tensor links, with the conclusion label of the root as
// succedent.
inline Sequent to_structure(const Graph& g) {
  ApsClass c = classify(g);
  if (c != ApsClass::TensorTree && c != ApsClass::TensorGraph)
    throw NotTensorGraph(std::string("structure is not a tensor graph (") + aps_class_name(c) +
                         ")");
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  std::vector<int> roots;
  for (const auto& [id, v] : g.vertices)
    if (!pof.count(id)) roots.push_back(id);
  if (roots.size() != 1) throw NotTensorGraph("structure does not have a unique root");
  int root = roots[0];
  if (!g.concl.count(root)) throw NotTensorGraph("root vertex carries no conclusion formula");
  // Assign variable names to lambda links.
  std::map<int, std::string> lam_var;
  int n = 0;
  for (const auto& [id, l] : g.links)
    if (l.shape == LinkShape::Lambda) lam_var[id] = "x" + std::to_string(n++);
  std::function<StructurePtr(int)> build = [&](int v) -> StructurePtr {
    auto it = cof.find(v);
    if (it == cof.end()) {
      auto hf = g.hyp.find(v);
      if (hf == g.hyp.end()) throw NotTensorGraph("leaf vertex carries no hypothesis formula");
      return Structure::mk_leaf(hf->second, g.vertices.at(v).word);
    }
    const Link& l = g.links.at(it->second);
    switch (l.shape) {
      case LinkShape::Comp:
        return Structure::mk_comp(build(l.premisses[0]), build(l.premisses[1]));
      case LinkShape::CComp:
        return Structure::mk_ccomp(build(l.premisses[0]), build(l.premisses[1]));
      case LinkShape::One:
        return Structure::mk_one();
      case LinkShape::Lambda:
        if (v == l.conclusions[0]) return Structure::mk_var(lam_var.at(l.id));
        return Structure::mk_lam(lam_var.at(l.id), build(l.premisses[0]));
      default:
        throw NotTensorGraph("unexpected link shape in a tensor graph");
    }
  };
  return Sequent{build(root), g.concl.at(root)};
}

}  // namespace nllam

#endif  // NLLAM_APS_HPP
