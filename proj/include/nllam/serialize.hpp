#ifndef NLLAM_SERIALIZE_HPP
#define NLLAM_SERIALIZE_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nllam/graph.hpp"
#include "nllam/rewrite.hpp"
#include "nllam/sequent.hpp"

namespace nllam {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Graph JSON: vertices with their labels and role, links by shape name.

namespace detail {

inline const std::map<std::string, LinkShape>& shape_by_name() {
  static const std::map<std::string, LinkShape> m = [] {
    std::map<std::string, LinkShape> r;
    for (int i = 0; i <= static_cast<int>(LinkShape::HtlgEps); ++i) {
      LinkShape s = static_cast<LinkShape>(i);
      r[shape_name(s)] = s;
    }
    return r;
  }();
  return m;
}

inline const std::map<std::string, StepKind>& step_by_name() {
  static const std::map<std::string, StepKind> m = [] {
    std::map<std::string, StepKind> r;
    for (int i = 0; i <= static_cast<int>(StepKind::PrimOneInvRight); ++i) {
      StepKind k = static_cast<StepKind>(i);
      r[step_name(k)] = k;
    }
    return r;
  }();
  return m;
}

inline bool shape_is_htlg(LinkShape s) { return static_cast<int>(s) >= static_cast<int>(LinkShape::HtlgPlus); }

}  // namespace detail

inline json graph_to_json(const Graph& g) {
  json out;
  bool htlg = false;
  for (const auto& [id, l] : g.links) htlg = htlg || detail::shape_is_htlg(l.shape);
  out["alphabet"] = htlg ? "htlg" : "nllam";
  out["vertices"] = json::array();
  for (const auto& [id, v] : g.vertices) {
    json jv;
    jv["id"] = id;
    if (!v.word.empty()) jv["word"] = v.word;
    if (v.formula) jv["formula"] = format_formula(v.formula);
    bool h = g.hyp.count(id), c = g.concl.count(id);
    jv["role"] = h && c ? "hyp+concl" : h ? "hyp" : c ? "concl" : "internal";
    if (h) jv["hyp"] = format_formula(g.hyp.at(id));
    if (c) jv["concl"] = format_formula(g.concl.at(id));
    out["vertices"].push_back(jv);
  }
  out["links"] = json::array();
  for (const auto& [id, l] : g.links) {
    json jl;
    jl["id"] = id;
    jl["shape"] = shape_name(l.shape);
    jl["premisses"] = l.premisses;
    jl["conclusions"] = l.conclusions;
    if (l.unit_pair >= 0) jl["unit_pair"] = l.unit_pair;
    out["links"].push_back(jl);
  }
  if (g.goal >= 0) out["goal"] = g.goal;
  if (!g.word_order.empty()) out["word_order"] = g.word_order;
  return out;
}

inline Graph graph_from_json(const json& j) {
  Graph g;
  for (const json& jv : j.at("vertices")) {
    int id = jv.at("id").get<int>();
    Vertex v;
    v.id = id;
    if (jv.contains("word")) v.word = jv.at("word").get<std::string>();
    if (jv.contains("formula")) v.formula = parse_formula(jv.at("formula").get<std::string>());
    g.vertices[id] = v;
    g.next_vertex = std::max(g.next_vertex, id + 1);
    if (jv.contains("hyp")) g.hyp[id] = parse_formula(jv.at("hyp").get<std::string>());
    if (jv.contains("concl")) g.concl[id] = parse_formula(jv.at("concl").get<std::string>());
  }
  for (const json& jl : j.at("links")) {
    int id = jl.at("id").get<int>();
    Link l;
    l.id = id;
    l.shape = detail::shape_by_name().at(jl.at("shape").get<std::string>());
    l.premisses = jl.at("premisses").get<std::vector<int>>();
    l.conclusions = jl.at("conclusions").get<std::vector<int>>();
    l.premiss_formulas.assign(l.premisses.size(), nullptr);
    l.conclusion_formulas.assign(l.conclusions.size(), nullptr);
    if (jl.contains("unit_pair")) l.unit_pair = jl.at("unit_pair").get<int>();
    g.links[id] = l;
    g.next_link = std::max(g.next_link, id + 1);
  }
  if (j.contains("goal")) g.goal = j.at("goal").get<int>();
  if (j.contains("word_order")) g.word_order = j.at("word_order").get<std::vector<int>>();
  return g;
}

// ---------------------------------------------------------------------------
// Trace JSON: ordered steps with their redex ids and the size ledger.

inline json trace_to_json(const Trace& t) {
  json out = json::array();
  for (const Step& s : t) {
    json js;
    js["name"] = step_name(s.kind);
    js["a"] = s.a;
    js["b"] = s.b;
    if (s.u >= 0) js["u"] = s.u;
    if (s.w >= 0) js["w"] = s.w;
    js["size_before"] = s.size_before;
    js["size_after"] = s.size_after;
    out.push_back(js);
  }
  return out;
}

inline Trace trace_from_json(const json& j) {
  Trace t;
  for (const json& js : j) {
    Step s;
    s.kind = detail::step_by_name().at(js.at("name").get<std::string>());
    s.a = js.at("a").get<int>();
    s.b = js.at("b").get<int>();
    if (js.contains("u")) s.u = js.at("u").get<int>();
    if (js.contains("w")) s.w = js.at("w").get<int>();
    s.size_before = js.at("size_before").get<int>();
    s.size_after = js.at("size_after").get<int>();
    t.push_back(s);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Sequent proof JSON.

inline json proof_to_json(const ProofPtr& p) {
  json out;
  out["rule"] = p->rule;
  out["sequent"] = format_sequent(p->conclusion);
  if (p->focus) out["focus"] = *p->focus;
  out["premisses"] = json::array();
  for (const ProofPtr& q : p->premisses) out["premisses"].push_back(proof_to_json(q));
  return out;
}

// ---------------------------------------------------------------------------
// DOT export.  Vertices are circles, dots when unlabelled; links are boxes:
// open for tensor links, filled for par links, doubled for the continuation
// family.  Formulas appear only on hypothesis/conclusion vertices.

namespace detail {

inline bool shape_is_continuation(LinkShape s) {
  switch (s) {
    case LinkShape::COverL:
    case LinkShape::CUnderL:
    case LinkShape::CProdR:
    case LinkShape::COverR:
    case LinkShape::CUnderR:
    case LinkShape::CProdL:
    case LinkShape::CComp:
    case LinkShape::HtlgApp:
    case LinkShape::HtlgLamP:
      return true;
    default:
      return false;
  }
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline std::string to_dot(const Graph& g) {
  std::ostringstream os;
  os << "digraph aps {\n  rankdir=BT;\n";
  auto pof = g.premiss_of();
  auto cof = g.conclusion_of();
  for (const auto& [id, v] : g.vertices) {
    std::string label;
    if (g.hyp.count(id)) label = format_formula(g.hyp.at(id));
    if (g.concl.count(id)) {
      if (!label.empty()) label += " | ";
      label += format_formula(g.concl.at(id));
    }
    // In an unabstracted structure the hypothesis/conclusion vertices are
    // the extremal ones; internal formulas stay hidden either way.
    if (label.empty() && v.formula && (!pof.count(id) || !cof.count(id)))
      label = format_formula(v.formula);
    if (!label.empty() && !v.word.empty()) label = v.word + " : " + label;
    else if (label.empty() && !v.word.empty()) label = v.word;
    os << "  v" << id << " [shape=circle";
    if (label.empty()) os << ",label=\"\",width=0.12,style=filled,fillcolor=black";
    else os << ",label=\"" << detail::dot_escape(label) << "\"";
    os << "];\n";
  }
  for (const auto& [id, l] : g.links) {
    os << "  l" << id << " [shape=circle,label=\"" << detail::dot_escape(shape_name(l.shape))
       << "\"";
    if (l.is_par()) os << ",style=filled,fillcolor=gray";
    if (detail::shape_is_continuation(l.shape)) os << ",peripheries=2";
    os << "];\n";
    for (int p : l.premisses) os << "  v" << p << " -> l" << id << ";\n";
    for (int c : l.conclusions) os << "  l" << id << " -> v" << c << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace nllam

#endif  // NLLAM_SERIALIZE_HPP
