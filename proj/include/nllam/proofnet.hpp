#ifndef NLLAM_PROOFNET_HPP
#define NLLAM_PROOFNET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nllam/formula.hpp"
#include "nllam/graph.hpp"

namespace nllam {

class ArityMismatch : public std::runtime_error {
public:
  explicit ArityMismatch(const std::string& m) : std::runtime_error(m) {}
};

class LimitExceeded : public std::runtime_error {
public:
  explicit LimitExceeded(const std::string& m) : std::runtime_error(m) {}
};

// Unfold the formula at vertex v according to its polarity, adding one link
// per connective occurrence.  Input (hypothesis) occurrences of /,\,//,\\
// produce tensor links and those of *,**,1 produce par links; for Output
// (conclusion) occurrences it is the other way around.  Each link is
// up-down symmetric to its dual.
inline void unfold_vertex(Graph& g, int v) {
  const Vertex vx = g.vertices.at(v);
  const FormulaPtr f = vx.formula;
  Polarity pol = vx.polarity;
  auto sub = [&](FormulaPtr sf, Polarity p) {
    int u = g.add_vertex(sf, p);
    unfold_vertex(g, u);
    return u;
  };
  if (pol == Polarity::Input) {
    switch (f->tag) {
      case Conn::Atom: return;
      case Conn::Unit:
        g.add_link(LinkShape::UnitL, {v}, {});
        return;
      case Conn::Over: {  // C/B used with an argument to its right
        int b = sub(f->right, Polarity::Output);
        int c = sub(f->left, Polarity::Input);
        g.add_link(LinkShape::OverL, {v, b}, {c});
        return;
      }
      case Conn::Under: {  // A\C used with an argument to its left
        int a = sub(f->left, Polarity::Output);
        int c = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::UnderL, {a, v}, {c});
        return;
      }
      case Conn::Prod: {
        int a = sub(f->left, Polarity::Input);
        int b = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::ProdL, {v}, {a, b});
        return;
      }
      case Conn::COver: {
        int b = sub(f->right, Polarity::Output);
        int c = sub(f->left, Polarity::Input);
        g.add_link(LinkShape::COverL, {v, b}, {c});
        return;
      }
      case Conn::CUnder: {
        int a = sub(f->left, Polarity::Output);
        int c = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::CUnderL, {a, v}, {c});
        return;
      }
      case Conn::CProd: {
        int a = sub(f->left, Polarity::Input);
        int b = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::CProdL, {v}, {a, b});
        return;
      }
    }
  } else {
    switch (f->tag) {
      case Conn::Atom: return;
      case Conn::Unit:
        g.add_link(LinkShape::UnitR, {}, {v});
        return;
      case Conn::Over: {  // conclusion C/B: discharge B on the right
        int c = sub(f->left, Polarity::Output);
        int b = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::OverR, {c}, {v, b});
        return;
      }
      case Conn::Under: {
        int c = sub(f->right, Polarity::Output);
        int a = sub(f->left, Polarity::Input);
        g.add_link(LinkShape::UnderR, {c}, {a, v});
        return;
      }
      case Conn::Prod: {
        int a = sub(f->left, Polarity::Output);
        int b = sub(f->right, Polarity::Output);
        g.add_link(LinkShape::ProdR, {a, b}, {v});
        return;
      }
      case Conn::COver: {
        int c = sub(f->left, Polarity::Output);
        int b = sub(f->right, Polarity::Input);
        g.add_link(LinkShape::COverR, {c}, {v, b});
        return;
      }
      case Conn::CUnder: {
        int c = sub(f->right, Polarity::Output);
        int a = sub(f->left, Polarity::Input);
        g.add_link(LinkShape::CUnderR, {c}, {a, v});
        return;
      }
      case Conn::CProd: {
        int a = sub(f->left, Polarity::Output);
        int b = sub(f->right, Polarity::Output);
        g.add_link(LinkShape::CProdR, {a, b}, {v});
        return;
      }
    }
  }
}

// Unfold a single formula occurrence into a fresh proof structure.
inline Graph unfold(const FormulaPtr& f, Polarity pol) {
  Graph g;
  int v = g.add_vertex(f, pol);
  unfold_vertex(g, v);
  if (pol == Polarity::Output) g.goal = v;
  return g;
}

// Unfold a sequent: one Input occurrence per (word, formula) hypothesis, in
// sentence order, plus one Output occurrence of the goal formula.
inline Graph unfold_sequent(const std::vector<std::pair<std::string, FormulaPtr>>& hyps,
                            const FormulaPtr& goal) {
  if (hyps.empty()) throw std::invalid_argument("unfold_sequent: no hypotheses");
  Graph g;
  for (const auto& [word, f] : hyps) {
    int v = g.add_vertex(f, Polarity::Input, word);
    g.word_order.push_back(v);
    unfold_vertex(g, v);
  }
  int gv = g.add_vertex(goal, Polarity::Output);
  g.goal = gv;
  unfold_vertex(g, gv);
  return g;
}

// An extended axiom linking: a bijection between Input and Output atom
// occurrences of each atom name, together with a pairing of every tL par
// link with a distinct tR link.  tR links may remain unpaired (a spare
// structural unit disappears through the 1o/o1 conversions), but a tL link
// with no tR partner can never be contracted, so those are rejected here.
struct Linking {
  std::vector<std::pair<int, int>> atom_pairs;  // (Input vertex, Output vertex)
  std::vector<std::pair<int, int>> unit_pairs;  // (tL link id, tR link id)
};

namespace detail {

struct AtomOccs {
  std::map<std::string, std::vector<int>> inputs, outputs;
  std::vector<int> tl_links, tr_links;
};

inline AtomOccs collect_occurrences(const Graph& g) {
  AtomOccs occ;
  for (const auto& [id, v] : g.vertices) {
    if (v.formula && v.formula->tag == Conn::Atom) {
      if (v.polarity == Polarity::Input) occ.inputs[v.formula->atom].push_back(id);
      else occ.outputs[v.formula->atom].push_back(id);
    }
  }
  for (const auto& [id, l] : g.links) {
    if (l.shape == LinkShape::UnitL) occ.tl_links.push_back(id);
    if (l.shape == LinkShape::UnitR) occ.tr_links.push_back(id);
  }
  return occ;
}

}  // namespace detail

// Exact number of extended axiom linkings: the product over atom names of
// count! times the number of injections of tL links into tR links.
// Saturates instead of overflowing.
inline std::uint64_t count_linkings(const Graph& g, bool pair_units = true) {
  auto occ = detail::collect_occurrences(g);
  const std::uint64_t kMax = UINT64_MAX;
  std::uint64_t total = 1;
  auto mul = [&](std::uint64_t k) {
    if (k != 0 && total > kMax / k) total = kMax;
    else total *= k;
  };
  for (const auto& [name, ins] : occ.inputs) {
    auto it = occ.outputs.find(name);
    size_t outs = it == occ.outputs.end() ? 0 : it->second.size();
    if (ins.size() != outs)
      throw ArityMismatch("atom '" + name + "' has " + std::to_string(ins.size()) +
                          " hypothesis and " + std::to_string(outs) + " conclusion occurrences");
    for (std::uint64_t k = 2; k <= ins.size(); k++) mul(k);
  }
  for (const auto& [name, outs] : occ.outputs)
    if (!occ.inputs.count(name) && !outs.empty())
      throw ArityMismatch("atom '" + name + "' has 0 hypothesis and " +
                          std::to_string(outs.size()) + " conclusion occurrences");
  if (pair_units) {
    if (occ.tl_links.size() > occ.tr_links.size())
      throw ArityMismatch("structure has " + std::to_string(occ.tl_links.size()) +
                          " tL links but only " + std::to_string(occ.tr_links.size()) +
                          " tR links");
    size_t n = occ.tr_links.size();
    for (size_t i = 0; i < occ.tl_links.size(); i++) mul(n - i);
  }
  return total;
}

// All extended axiom linkings in a deterministic order.  Throws
// ArityMismatch when the occurrence counts make a linking impossible and
// LimitExceeded when more than max_linkings would be produced.
inline std::vector<Linking> enumerate_linkings(const Graph& g, std::uint64_t max_linkings = 1000000,
                                               bool pair_units = true) {
  std::uint64_t n = count_linkings(g, pair_units);
  if (n > max_linkings)
    throw LimitExceeded("structure admits " + std::to_string(n) + " linkings; limit is " +
                        std::to_string(max_linkings));
  auto occ = detail::collect_occurrences(g);
  std::vector<Linking> result;
  result.push_back(Linking{});
  auto extend_bijections = [&](const std::vector<int>& lhs, const std::vector<int>& rhs,
                               bool units) {
    std::vector<Linking> next;
    std::vector<int> perm(rhs.begin(), rhs.end());
    // Enumerate injections lhs -> rhs as ordered selections.
    std::vector<int> sel(lhs.size(), -1);
    std::vector<bool> used(rhs.size(), false);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == lhs.size()) {
        for (const Linking& base : result) {
          Linking l = base;
          for (size_t k = 0; k < lhs.size(); k++) {
            if (units) l.unit_pairs.push_back({lhs[k], rhs[sel[k]]});
            else l.atom_pairs.push_back({lhs[k], rhs[sel[k]]});
          }
          next.push_back(std::move(l));
        }
        return;
      }
      for (size_t j = 0; j < rhs.size(); j++) {
        if (used[j]) continue;
        used[j] = true;
        sel[i] = static_cast<int>(j);
        rec(i + 1);
        used[j] = false;
      }
    };
    rec(0);
    result = std::move(next);
  };
  for (const auto& [name, ins] : occ.inputs)
    extend_bijections(ins, occ.outputs[name], false);
  if (pair_units && !occ.tl_links.empty())
    extend_bijections(occ.tl_links, occ.tr_links, true);
  return result;
}

// Identify the linked atom occurrences and record the tL/tR pairing.  The
// result is still a proof structure (a linked one); abstraction to an
// abstract proof structure happens separately.
inline Graph apply_linking(const Graph& g, const Linking& l) {
  Graph out = g;
  for (const auto& [i_link, r_link] : l.unit_pairs) {
    out.links.at(i_link).unit_pair = r_link;
    out.links.at(r_link).unit_pair = i_link;
  }
  // Pairs may chain through vertices that are both hypothesis and
  // conclusion of the whole structure, so resolve ids through merges.
  std::map<int, int> canon;
  auto find = [&](int v) {
    while (canon.count(v)) v = canon[v];
    return v;
  };
  for (const auto& [hv, cv] : l.atom_pairs) {
    const Vertex& a = g.vertices.at(hv);
    const Vertex& b = g.vertices.at(cv);
    if (!a.formula || !b.formula || a.formula->tag != Conn::Atom ||
        b.formula->tag != Conn::Atom || a.formula->atom != b.formula->atom)
      throw GraphError("linking joins occurrences of different atoms");
    if (a.polarity != Polarity::Input || b.polarity != Polarity::Output)
      throw GraphError("linking must join an Input occurrence to an Output occurrence");
    int x = find(hv), y = find(cv);
    if (x == y) throw GraphError("linking identifies a vertex with itself");
    int keep = out.merge_vertices(x, y);
    int drop = x == keep ? y : x;
    canon[drop] = keep;
  }
  return out;
}

}  // namespace nllam

#endif  // NLLAM_PROOFNET_HPP
