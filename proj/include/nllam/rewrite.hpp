#ifndef NLLAM_REWRITE_HPP
#define NLLAM_REWRITE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nllam/aps.hpp"
#include "nllam/graph.hpp"
#include "nllam/proofnet.hpp"

namespace nllam {

struct EngineOptions {
  bool allow_empty_antecedent = false;  // enables the 1o^-1/ and o1^-1\ rewrites
  bool unit_insertion = false;          // enables 1ot / o1t and frees tL pairing
  bool eta = false;                     // enables the eta rewrite
  std::optional<std::uint64_t> seed;    // randomised tie-breaking between equal redexes
  std::uint64_t max_linkings = 1000000;
  std::size_t max_states = 50000;       // state budget for exhaustive normalisation
};

// Rewrite step kinds.  The Contract* group removes a par link and a tensor
// link (size -3); Beta/OneLeft/OneRight/Eta remove two tensor links
// (size -2); the derived group trades a par link for a tensor link
// (size -1).  The Prim* kinds are expanding structural conversions: they
// never appear in engine traces, only in expanded traces used to build
// sequent proofs.
enum class StepKind {
  ContractOverR,
  ContractUnderR,
  ContractProdL,
  ContractCOverR,
  ContractCUnderR,
  ContractCProdL,
  ContractUnitL,
  Beta,
  OneLeft,   // 1o : remove a unit to the left of an o link
  OneRight,  // o1 : remove a unit to the right of an o link
  Eta,
  BetaInvCUnder,    // turn a \\R par link into a lambda tensor link
  EmptyOver,        // degenerate /R par link becomes a structural unit
  EmptyUnder,       // degenerate \R par link becomes a structural unit
  UnitInsertLeft,   // 1ot : tL par plus a vertex becomes t o v
  UnitInsertRight,  // o1t : tL par plus a vertex becomes v o t
  PrimBetaInv,
  PrimOneInvLeft,
  PrimOneInvRight,
};

inline int step_delta(StepKind k) {
  switch (k) {
    case StepKind::ContractOverR:
    case StepKind::ContractUnderR:
    case StepKind::ContractProdL:
    case StepKind::ContractCOverR:
    case StepKind::ContractCUnderR:
    case StepKind::ContractCProdL:
    case StepKind::ContractUnitL:
      return 3;
    case StepKind::Beta:
    case StepKind::OneLeft:
    case StepKind::OneRight:
    case StepKind::Eta:
      return 2;
    case StepKind::BetaInvCUnder:
    case StepKind::EmptyOver:
    case StepKind::EmptyUnder:
    case StepKind::UnitInsertLeft:
    case StepKind::UnitInsertRight:
      return 1;
    case StepKind::PrimBetaInv:
      return -2;
    case StepKind::PrimOneInvLeft:
    case StepKind::PrimOneInvRight:
      return -1;
  }
  return 0;
}

inline const char* step_name(StepKind k) {
  switch (k) {
    case StepKind::ContractOverR: return "/R";
    case StepKind::ContractUnderR: return "\\R";
    case StepKind::ContractProdL: return "*L";
    case StepKind::ContractCOverR: return "//R";
    case StepKind::ContractCUnderR: return "\\\\R";
    case StepKind::ContractCProdL: return "**L";
    case StepKind::ContractUnitL: return "tL";
    case StepKind::Beta: return "beta";
    case StepKind::OneLeft: return "1o";
    case StepKind::OneRight: return "o1";
    case StepKind::Eta: return "eta";
    case StepKind::BetaInvCUnder: return "betainv-\\\\";
    case StepKind::EmptyOver: return "1oinv-/";
    case StepKind::EmptyUnder: return "o1inv-\\";
    case StepKind::UnitInsertLeft: return "1ot";
    case StepKind::UnitInsertRight: return "o1t";
    case StepKind::PrimBetaInv: return "betainv";
    case StepKind::PrimOneInvLeft: return "1oinv";
    case StepKind::PrimOneInvRight: return "o1inv";
  }
  return "?";
}

struct Step {
  StepKind kind;
  int a = -1;  // par link for contractions/derived; One link for OneLeft/OneRight; CComp for Beta/Eta
  int b = -1;  // tensor partner for contractions; Comp for OneLeft/OneRight; Lambda for Beta/Eta
  int u = -1;  // vertex argument (unit insertion target; beta-inv split vertices)
  int w = -1;
  int size_before = 0;
  int size_after = 0;
};

using Trace = std::vector<Step>;

inline int aps_size(const Graph& g) {
  return static_cast<int>(2 * g.par_count() + g.tensor_count());
}

class RewriteError : public std::runtime_error {
public:
  explicit RewriteError(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

inline bool distinct(std::initializer_list<int> vs) {
  std::set<int> s(vs);
  return s.size() == vs.size();
}

// Move the "downward" half of vertex v (its role as a premiss of a link,
// its conclusion label, goal designation) onto a fresh vertex; v keeps the
// "upward" half (conclusion-of-link role, hypothesis label, word).
inline int split_vertex(Graph& g, int v) {
  int bot = g.add_vertex();
  for (auto& [id, l] : g.links)
    for (int& p : l.premisses)
      if (p == v) p = bot;
  if (g.concl.count(v)) {
    g.concl[bot] = g.concl[v];
    g.concl.erase(v);
  }
  if (g.goal == v) g.goal = bot;
  return bot;
}

}  // namespace detail

// Apply a step in place.  The step's link/vertex ids refer to the current
// graph; fresh ids are drawn from the graph's deterministic counters, so
// replaying a recorded trace reproduces the same graphs.
inline void apply_step(Graph& g, const Step& s) {
  auto pof = [&g]() { return g.premiss_of(); };
  auto merge2 = [&g](int x, int y, int x2, int y2) {
    // Merge (x,y) then (x2,y2), renaming through the first merge.
    if (x != y) {
      int keep = g.merge_vertices(x, y);
      int drop = x == keep ? y : x;
      if (x2 == drop) x2 = keep;
      if (y2 == drop) y2 = keep;
    }
    if (x2 != y2 && x2 >= 0) g.merge_vertices(x2, y2);
  };
  switch (s.kind) {
    case StepKind::ContractOverR:
    case StepKind::ContractUnderR:
    case StepKind::ContractCOverR:
    case StepKind::ContractCUnderR: {
      const Link P = g.links.at(s.a);
      const Link T = g.links.at(s.b);
      bool slash = s.kind == StepKind::ContractOverR || s.kind == StepKind::ContractCOverR;
      int m = P.premisses[0];
      int c = slash ? P.conclusions[0] : P.conclusions[1];
      int bv = slash ? P.conclusions[1] : P.conclusions[0];
      int h = slash ? T.premisses[0] : T.premisses[1];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.remove_vertex(m);
      g.remove_vertex(bv);
      g.merge_vertices(h, c);
      break;
    }
    case StepKind::ContractProdL:
    case StepKind::ContractCProdL: {
      const Link P = g.links.at(s.a);
      const Link T = g.links.at(s.b);
      int h = P.premisses[0];
      int c = T.conclusions[0];
      int av = P.conclusions[0];
      int bv = P.conclusions[1];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.remove_vertex(av);
      g.remove_vertex(bv);
      g.merge_vertices(h, c);
      break;
    }
    case StepKind::ContractUnitL: {
      const Link P = g.links.at(s.a);
      const Link U = g.links.at(s.b);
      int h = P.premisses[0];
      int c = U.conclusions[0];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.merge_vertices(h, c);
      break;
    }
    case StepKind::Beta: {
      const Link T = g.links.at(s.a);  // CComp
      const Link L = g.links.at(s.b);  // Lambda
      int p1 = T.premisses[0], rt = T.premisses[1], c2 = T.conclusions[0];
      int c1 = L.conclusions[0], h2 = L.premisses[0];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.remove_vertex(rt);
      merge2(p1, c1, h2, c2);
      break;
    }
    case StepKind::OneLeft:
    case StepKind::OneRight: {
      const Link U = g.links.at(s.a);
      const Link T = g.links.at(s.b);
      int u = U.conclusions[0];
      int h = s.kind == StepKind::OneLeft ? T.premisses[1] : T.premisses[0];
      int c = T.conclusions[0];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.remove_vertex(u);
      g.merge_vertices(h, c);
      break;
    }
    case StepKind::Eta: {
      const Link T = g.links.at(s.a);  // CComp
      const Link L = g.links.at(s.b);  // Lambda
      int bv = L.conclusions[0], m = L.premisses[0];
      int h = T.premisses[1], c = L.conclusions[1];
      g.remove_link(s.a);
      g.remove_link(s.b);
      g.remove_vertex(bv);
      g.remove_vertex(m);
      g.merge_vertices(h, c);
      break;
    }
    case StepKind::BetaInvCUnder: {
      const Link P = g.links.at(s.a);
      int h = P.premisses[0], c1 = P.conclusions[0], c2 = P.conclusions[1];
      g.remove_link(s.a);
      g.add_link(LinkShape::Lambda, {h}, {c1, c2});
      break;
    }
    case StepKind::EmptyOver:
    case StepKind::EmptyUnder: {
      const Link P = g.links.at(s.a);
      int m = P.premisses[0];
      int c = s.kind == StepKind::EmptyOver ? P.conclusions[0] : P.conclusions[1];
      g.remove_link(s.a);
      g.remove_vertex(m);
      g.add_link(LinkShape::One, {}, {c});
      break;
    }
    case StepKind::UnitInsertLeft:
    case StepKind::UnitInsertRight: {
      const Link P = g.links.at(s.a);  // tL par
      int h = P.premisses[0];
      g.remove_link(s.a);
      int bot = detail::split_vertex(g, s.u);
      if (s.kind == StepKind::UnitInsertLeft) g.add_link(LinkShape::Comp, {h, s.u}, {bot});
      else g.add_link(LinkShape::Comp, {s.u, h}, {bot});
      break;
    }
    case StepKind::PrimBetaInv: {
      int u_bot = detail::split_vertex(g, s.u);
      int w_bot = detail::split_vertex(g, s.w);
      int rt = g.add_vertex();
      g.add_link(LinkShape::CComp, {s.u, rt}, {w_bot});
      g.add_link(LinkShape::Lambda, {s.w}, {u_bot, rt});
      break;
    }
    case StepKind::PrimOneInvLeft:
    case StepKind::PrimOneInvRight: {
      int bot = detail::split_vertex(g, s.u);
      int uv = g.add_vertex();
      g.add_link(LinkShape::One, {}, {uv});
      if (s.kind == StepKind::PrimOneInvLeft) g.add_link(LinkShape::Comp, {uv, s.u}, {bot});
      else g.add_link(LinkShape::Comp, {s.u, uv}, {bot});
      break;
    }
  }
  (void)pof;
}

// All redexes of the reducing rewrite relation, in a deterministic order.
inline std::vector<Step> find_redexes(const Graph& g, const EngineOptions& opts) {
  std::vector<Step> out;
  auto cof = g.conclusion_of();
  auto pof = g.premiss_of();
  auto tensor_at_concl = [&](int v) -> const Link* {
    auto it = cof.find(v);
    if (it == cof.end()) return nullptr;
    const Link& l = g.links.at(it->second);
    return l.is_par() ? nullptr : &l;
  };
  for (const auto& [id, P] : g.links) {
    switch (P.shape) {
      case LinkShape::OverR:
      case LinkShape::COverR: {
        int m = P.premisses[0], c = P.conclusions[0], bv = P.conclusions[1];
        LinkShape want = P.shape == LinkShape::OverR ? LinkShape::Comp : LinkShape::CComp;
        const Link* T = tensor_at_concl(m);
        if (T && T->shape == want && T->premisses.size() == 2 && T->premisses[1] == bv) {
          int h = T->premisses[0];
          if (detail::distinct({m, c, bv, h}))
            out.push_back({P.shape == LinkShape::OverR ? StepKind::ContractOverR
                                                       : StepKind::ContractCOverR,
                           id, T->id});
        }
        if (P.shape == LinkShape::OverR && opts.allow_empty_antecedent && m == bv)
          out.push_back({StepKind::EmptyOver, id});
        break;
      }
      case LinkShape::UnderR:
      case LinkShape::CUnderR: {
        int m = P.premisses[0], av = P.conclusions[0], c = P.conclusions[1];
        LinkShape want = P.shape == LinkShape::UnderR ? LinkShape::Comp : LinkShape::CComp;
        const Link* T = tensor_at_concl(m);
        if (T && T->shape == want && T->premisses.size() == 2 && T->premisses[0] == av) {
          int h = T->premisses[1];
          if (detail::distinct({m, c, av, h}))
            out.push_back({P.shape == LinkShape::UnderR ? StepKind::ContractUnderR
                                                        : StepKind::ContractCUnderR,
                           id, T->id});
        }
        if (P.shape == LinkShape::UnderR && opts.allow_empty_antecedent && m == av)
          out.push_back({StepKind::EmptyUnder, id});
        if (P.shape == LinkShape::CUnderR && tensor_path(g, av, m))
          out.push_back({StepKind::BetaInvCUnder, id});
        break;
      }
      case LinkShape::ProdL:
      case LinkShape::CProdL: {
        int h = P.premisses[0], av = P.conclusions[0], bv = P.conclusions[1];
        LinkShape want = P.shape == LinkShape::ProdL ? LinkShape::Comp : LinkShape::CComp;
        auto it = pof.find(av);
        if (it != pof.end()) {
          const Link& T = g.links.at(it->second);
          if (!T.is_par() && T.shape == want && T.premisses.size() == 2 &&
              T.premisses[0] == av && T.premisses[1] == bv) {
            int c = T.conclusions[0];
            if (detail::distinct({h, av, bv, c}))
              out.push_back({P.shape == LinkShape::ProdL ? StepKind::ContractProdL
                                                         : StepKind::ContractCProdL,
                             id, T.id});
          }
        }
        break;
      }
      case LinkShape::UnitL: {
        int h = P.premisses[0];
        if (opts.unit_insertion) {
          for (const auto& [uid, U] : g.links)
            if (U.shape == LinkShape::One && U.conclusions[0] != h)
              out.push_back({StepKind::ContractUnitL, id, uid});
          for (const auto& [vid, vx] : g.vertices)
            if (vid != h) {
              out.push_back({StepKind::UnitInsertLeft, id, -1, vid});
              out.push_back({StepKind::UnitInsertRight, id, -1, vid});
            }
        } else if (P.unit_pair >= 0 && g.links.count(P.unit_pair)) {
          const Link& U = g.links.at(P.unit_pair);
          if (U.shape == LinkShape::One && U.conclusions[0] != h)
            out.push_back({StepKind::ContractUnitL, id, P.unit_pair});
        }
        break;
      }
      case LinkShape::CComp: {
        // beta redex: right premiss is the attachment conclusion of a lambda
        int rt = P.premisses[1];
        auto it = cof.find(rt);
        if (it != cof.end()) {
          const Link& L = g.links.at(it->second);
          if (L.shape == LinkShape::Lambda && L.conclusions[1] == rt &&
              tensor_path(g, L.conclusions[0], L.premisses[0]))
            out.push_back({StepKind::Beta, id, L.id});
        }
        break;
      }
      case LinkShape::Comp: {
        for (int side = 0; side < 2; side++) {
          auto it = cof.find(P.premisses[side]);
          if (it == cof.end()) continue;
          const Link& U = g.links.at(it->second);
          if (U.shape == LinkShape::One)
            out.push_back({side == 0 ? StepKind::OneLeft : StepKind::OneRight, U.id, id});
        }
        break;
      }
      case LinkShape::Lambda: {
        if (!opts.eta) break;
        int m = P.premisses[0], bv = P.conclusions[0], c = P.conclusions[1];
        const Link* T = tensor_at_concl(m);
        if (T && T->shape == LinkShape::CComp && T->premisses[0] == bv) {
          int h = T->premisses[1];
          if (detail::distinct({m, bv, c, h}))
            out.push_back({StepKind::Eta, T->id, id});
        }
        break;
      }
      default:
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const Step& x, const Step& y) {
    return std::tie(x.kind, x.a, x.b, x.u, x.w) < std::tie(y.kind, y.a, y.b, y.u, y.w);
  });
  return out;
}

struct RewriteResult {
  Graph final;
  Trace trace;
};

// Greedy normalisation: always apply a redex of maximal size reduction.
// With the default options this strategy is confluent, so the normal form
// does not depend on the tie-break between equal-priority redexes; the
// optional seed randomises that tie-break for testing exactly this.
inline RewriteResult normalize_eager(const Graph& aps, const EngineOptions& opts = {}) {
  Graph g = aps;
  Trace trace;
  int budget = aps_size(g) + 1;
  std::optional<std::mt19937_64> rng;
  if (opts.seed) rng.emplace(*opts.seed);
  while (true) {
    std::vector<Step> redexes = find_redexes(g, opts);
    if (redexes.empty()) break;
    int best = 0;
    for (const Step& s : redexes) best = std::max(best, step_delta(s.kind));
    std::vector<Step> top;
    for (const Step& s : redexes)
      if (step_delta(s.kind) == best) top.push_back(s);
    Step chosen = top[0];
    if (rng && top.size() > 1)
      chosen = top[std::uniform_int_distribution<size_t>(0, top.size() - 1)(*rng)];
    chosen.size_before = aps_size(g);
    apply_step(g, chosen);
    chosen.size_after = aps_size(g);
    if (chosen.size_after >= chosen.size_before)
      throw RewriteError("rewrite step failed to decrease the size measure");
    trace.push_back(chosen);
    if (static_cast<int>(trace.size()) > budget)
      throw RewriteError("trace exceeded the size bound");
  }
  return {std::move(g), std::move(trace)};
}

namespace detail {

inline std::string graph_signature(const Graph& g) {
  std::ostringstream os;
  std::map<std::string, int> shapes;
  for (const auto& [id, l] : g.links) shapes[shape_name(l.shape)]++;
  for (const auto& [s, n] : shapes) os << s << ":" << n << ";";
  os << "v" << g.vertices.size() << ";";
  std::vector<std::string> labels;
  for (const auto& [v, f] : g.hyp) labels.push_back("h" + format_formula(f));
  for (const auto& [v, f] : g.concl) labels.push_back("c" + format_formula(f));
  for (const auto& [v, vx] : g.vertices)
    if (!vx.word.empty()) labels.push_back("w" + vx.word);
  std::sort(labels.begin(), labels.end());
  for (const auto& s : labels) os << s << ";";
  return os.str();
}

}  // namespace detail

// Explore every reduction order and collect the distinct normal forms
// (distinct up to isomorphism).  Required when unit insertion is on, since
// that system is not confluent.
inline std::vector<RewriteResult> normalize_exhaustive(const Graph& aps,
                                                       const EngineOptions& opts = {}) {
  std::vector<RewriteResult> normals;
  std::map<std::string, std::vector<Graph>> visited;
  std::map<std::string, std::vector<Graph>> normal_seen;
  std::size_t states = 0;
  auto remember = [](std::map<std::string, std::vector<Graph>>& store, const Graph& g) {
    std::string sig = detail::graph_signature(g);
    for (const Graph& old : store[sig])
      if (graphs_isomorphic(old, g)) return false;
    store[sig].push_back(g);
    return true;
  };
  std::function<void(const Graph&, const Trace&)> walk = [&](const Graph& g, const Trace& t) {
    if (!remember(visited, g)) return;
    if (++states > opts.max_states) throw LimitExceeded("exhaustive normalisation state budget");
    std::vector<Step> redexes = find_redexes(g, opts);
    if (redexes.empty()) {
      if (remember(normal_seen, g)) normals.push_back({g, t});
      return;
    }
    for (const Step& s : redexes) {
      Graph h = g;
      Step step = s;
      step.size_before = aps_size(h);
      apply_step(h, step);
      step.size_after = aps_size(h);
      Trace t2 = t;
      t2.push_back(step);
      walk(h, t2);
    }
  };
  walk(aps, {});
  return normals;
}

// Replay a recorded trace from an abstract proof structure.
inline Graph replay_trace(const Graph& aps, const Trace& trace) {
  Graph g = aps;
  for (const Step& s : trace) apply_step(g, s);
  return g;
}

// Proof net check: a (linked) proof structure is a proof net iff its
// abstraction rewrites to a tensor graph.  Returns the witnessing trace.
inline std::optional<Trace> is_proof_net(const Graph& linked_ps, const EngineOptions& opts = {}) {
  Graph aps = to_aps(linked_ps);
  if (opts.unit_insertion) {
    for (const RewriteResult& r : normalize_exhaustive(aps, opts)) {
      ApsClass c = classify(r.final);
      if (c == ApsClass::TensorTree || c == ApsClass::TensorGraph) return r.trace;
    }
    return std::nullopt;
  }
  RewriteResult r = normalize_eager(aps, opts);
  ApsClass c = classify(r.final);
  if (c == ApsClass::TensorTree || c == ApsClass::TensorGraph) return r.trace;
  return std::nullopt;
}

}  // namespace nllam

#endif  // NLLAM_REWRITE_HPP
