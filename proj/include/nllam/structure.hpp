#ifndef NLLAM_STRUCTURE_HPP
#define NLLAM_STRUCTURE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nllam/formula.hpp"

namespace nllam {

// Structured antecedents.  End-sequent antecedents are built from formula
// leaves and "o" alone (Lambek trees); intermediate sequents may also use
// the structural connective "@", lambda binders and variables, and the
// structural unit "1".
enum class SKind { Leaf, One, Var, Comp, CComp, Lam };

class Structure;
using StructurePtr = std::shared_ptr<const Structure>;

class Structure {
public:
  SKind kind;
  FormulaPtr formula;          // Leaf
  std::string word;            // Leaf: originating lexical item ("" if none)
  std::string var;             // Var / Lam
  StructurePtr left, right;    // Comp / CComp
  StructurePtr body;           // Lam

  static StructurePtr mk_leaf(FormulaPtr f, std::string w = "") {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Leaf;
    s->formula = std::move(f);
    s->word = std::move(w);
    return s;
  }
  static StructurePtr mk_one() {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::One;
    return s;
  }
  static StructurePtr mk_var(std::string v) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Var;
    s->var = std::move(v);
    return s;
  }
  static StructurePtr mk_comp(StructurePtr l, StructurePtr r) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Comp;
    s->left = std::move(l);
    s->right = std::move(r);
    return s;
  }
  static StructurePtr mk_ccomp(StructurePtr l, StructurePtr r) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::CComp;
    s->left = std::move(l);
    s->right = std::move(r);
    return s;
  }
  static StructurePtr mk_lam(std::string v, StructurePtr b) {
    auto s = std::make_shared<Structure>();
    s->kind = SKind::Lam;
    s->var = std::move(v);
    s->body = std::move(b);
    return s;
  }
};

// Alpha equivalence: lambda-bound variable names are irrelevant, everything
// else (including bracketing and leaf formulas) must match.  Leaf words are
// ignored: they are bookkeeping, not part of the logical structure.
inline bool alpha_equal(const StructurePtr& a, const StructurePtr& b,
                        std::map<std::string, std::string>* env = nullptr) {
  std::map<std::string, std::string> local;
  if (!env) env = &local;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SKind::Leaf: return formula_equal(a->formula, b->formula);
    case SKind::One: return true;
    case SKind::Var: {
      auto it = env->find(a->var);
      if (it != env->end()) return it->second == b->var;
      return a->var == b->var;  // free variables compare by name
    }
    case SKind::Comp:
    case SKind::CComp:
      return alpha_equal(a->left, b->left, env) && alpha_equal(a->right, b->right, env);
    case SKind::Lam: {
      auto saved = env->find(a->var) != env->end()
                       ? std::optional<std::string>((*env)[a->var])
                       : std::nullopt;
      (*env)[a->var] = b->var;
      bool ok = alpha_equal(a->body, b->body, env);
      if (saved) (*env)[a->var] = *saved; else env->erase(a->var);
      return ok;
    }
  }
  return false;
}

// Left-to-right sequence of leaf words (empty string for leaves that did
// not come from a lexicon; variables and units contribute nothing).
inline void yield_of(const StructurePtr& s, std::vector<std::string>& out) {
  switch (s->kind) {
    case SKind::Leaf: out.push_back(s->word); break;
    case SKind::One:
    case SKind::Var: break;
    case SKind::Comp:
    case SKind::CComp:
      yield_of(s->left, out);
      yield_of(s->right, out);
      break;
    case SKind::Lam: yield_of(s->body, out); break;
  }
}

inline std::vector<std::string> yield_of(const StructurePtr& s) {
  std::vector<std::string> out;
  yield_of(s, out);
  return out;
}

// A Lambek tree is a structure built from formula leaves and "o" only.
// These are the only antecedents allowed in end-sequents (besides the bare
// unit "1", which is accepted only for the sequent 1 => t).
inline bool is_lambek_tree(const StructurePtr& s) {
  switch (s->kind) {
    case SKind::Leaf: return true;
    case SKind::Comp: return is_lambek_tree(s->left) && is_lambek_tree(s->right);
    default: return false;
  }
}

// Well-formedness for intermediate structures: every lambda binds a
// distinct fresh variable which occurs exactly once in its body, and no
// variable occurs free.
inline int var_occurrences(const StructurePtr& s, const std::string& v) {
  switch (s->kind) {
    case SKind::Var: return s->var == v ? 1 : 0;
    case SKind::Comp:
    case SKind::CComp: return var_occurrences(s->left, v) + var_occurrences(s->right, v);
    case SKind::Lam: return s->var == v ? 0 : var_occurrences(s->body, v);
    default: return 0;
  }
}

inline bool validate_structure(const StructurePtr& s, std::set<std::string> bound = {}) {
  switch (s->kind) {
    case SKind::Leaf:
    case SKind::One: return true;
    case SKind::Var: return bound.count(s->var) > 0;
    case SKind::Comp:
    case SKind::CComp:
      return validate_structure(s->left, bound) && validate_structure(s->right, bound);
    case SKind::Lam: {
      if (bound.count(s->var)) return false;  // shadowing
      if (var_occurrences(s->body, s->var) != 1) return false;
      bound.insert(s->var);
      return validate_structure(s->body, bound);
    }
  }
  return false;
}

// Capture-free substitution of a closed structure for a variable.  The
// linearity invariant (each variable occurs exactly once) makes this safe.
inline StructurePtr substitute(const StructurePtr& s, const std::string& v,
                               const StructurePtr& repl) {
  switch (s->kind) {
    case SKind::Var: return s->var == v ? repl : s;
    case SKind::Comp:
      return Structure::mk_comp(substitute(s->left, v, repl), substitute(s->right, v, repl));
    case SKind::CComp:
      return Structure::mk_ccomp(substitute(s->left, v, repl), substitute(s->right, v, repl));
    case SKind::Lam:
      if (s->var == v) return s;
      return Structure::mk_lam(s->var, substitute(s->body, v, repl));
    default: return s;
  }
}

// Positions are paths of child indices: 0 = left child (or lambda body),
// 1 = right child.
using Position = std::vector<int>;

inline StructurePtr subterm_at(const StructurePtr& s, const Position& p, size_t i = 0) {
  if (i == p.size()) return s;
  switch (s->kind) {
    case SKind::Comp:
    case SKind::CComp:
      return subterm_at(p[i] == 0 ? s->left : s->right, p, i + 1);
    case SKind::Lam:
      if (p[i] != 0) return nullptr;
      return subterm_at(s->body, p, i + 1);
    default: return nullptr;
  }
}

inline StructurePtr replace_at(const StructurePtr& s, const Position& p,
                               const StructurePtr& repl, size_t i = 0) {
  if (i == p.size()) return repl;
  switch (s->kind) {
    case SKind::Comp:
      return p[i] == 0 ? Structure::mk_comp(replace_at(s->left, p, repl, i + 1), s->right)
                       : Structure::mk_comp(s->left, replace_at(s->right, p, repl, i + 1));
    case SKind::CComp:
      return p[i] == 0 ? Structure::mk_ccomp(replace_at(s->left, p, repl, i + 1), s->right)
                       : Structure::mk_ccomp(s->left, replace_at(s->right, p, repl, i + 1));
    case SKind::Lam:
      return Structure::mk_lam(s->var, replace_at(s->body, p, repl, i + 1));
    default: return nullptr;  // path descends into a leaf
  }
}

inline void all_positions(const StructurePtr& s, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  switch (s->kind) {
    case SKind::Comp:
    case SKind::CComp:
      cur.push_back(0);
      all_positions(s->left, cur, out);
      cur.back() = 1;
      all_positions(s->right, cur, out);
      cur.pop_back();
      break;
    case SKind::Lam:
      cur.push_back(0);
      all_positions(s->body, cur, out);
      cur.pop_back();
      break;
    default: break;
  }
}

inline std::vector<Position> all_positions(const StructurePtr& s) {
  std::vector<Position> out;
  Position cur;
  all_positions(s, cur, out);
  return out;
}

inline int structure_size(const StructurePtr& s) {
  switch (s->kind) {
    case SKind::Comp:
    case SKind::CComp: return 1 + structure_size(s->left) + structure_size(s->right);
    case SKind::Lam: return 1 + structure_size(s->body);
    default: return 1;
  }
}

inline std::string format_structure(const StructurePtr& s) {
  switch (s->kind) {
    case SKind::Leaf:
      if (!s->word.empty()) return s->word + " : " + format_formula(s->formula);
      return format_formula(s->formula, false);
    case SKind::One: return "1";
    case SKind::Var: return s->var;
    case SKind::Comp:
      return "(" + format_structure(s->left) + " o " + format_structure(s->right) + ")";
    case SKind::CComp:
      return "(" + format_structure(s->left) + " @ " + format_structure(s->right) + ")";
    case SKind::Lam: return "\\" + s->var + "." + format_structure(s->body);
  }
  return "?";
}

// Sequents pair a structured antecedent with a succedent formula.
struct Sequent {
  StructurePtr antecedent;
  FormulaPtr succedent;
};

inline bool sequent_equal(const Sequent& a, const Sequent& b) {
  return alpha_equal(a.antecedent, b.antecedent) && formula_equal(a.succedent, b.succedent);
}

inline std::string format_sequent(const Sequent& s) {
  return format_structure(s.antecedent) + " => " + format_formula(s.succedent);
}

// Parser for the structure term language:
//   s ::= word ":" formula | "1" | "(" s "o" s ")" | "(" s "@" s ")"
//       | "\" var "." s | var
// A bare formula leaf (without a word prefix) is also accepted, written as
// a parenthesised formula or a lone atom; ambiguity between a variable and
// an atomic formula leaf is resolved in favour of the formula leaf unless
// the name is bound by an enclosing lambda.
class StructureParser {
public:
  explicit StructureParser(std::string src) : src_(std::move(src)) {}

  StructurePtr parse() {
    StructurePtr s = parse_structure();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return s;
  }

private:
  std::string src_;
  size_t pos_ = 0;
  std::set<std::string> bound_;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) pos_++;
  }

  std::string parse_name() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < src_.size()) {
      char d = src_[pos_];
      if ((d >= 'a' && d <= 'z') || (d >= 'A' && d <= 'Z') || (d >= '0' && d <= '9') ||
          d == '_' || d == '\'')
        pos_++;
      else
        break;
    }
    if (pos_ == start) throw SyntaxError("expected a name", pos_);
    return src_.substr(start, pos_ - start);
  }

  StructurePtr parse_structure() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '1') {
      pos_++;
      return Structure::mk_one();
    }
    if (c == '\\') {
      pos_++;
      std::string v = parse_name();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '.') throw SyntaxError("expected '.'", pos_);
      pos_++;
      bool fresh = bound_.insert(v).second;
      if (!fresh) throw SyntaxError("rebinding of variable " + v, pos_);
      StructurePtr b = parse_structure();
      return Structure::mk_lam(v, b);
    }
    if (c == '(') {
      // Either a bracketed pair "(s o s)" / "(s @ s)" or a parenthesised
      // formula leaf.  Try the pair reading first, then fall back.
      size_t save = pos_;
      auto saved_bound = bound_;
      try {
        pos_++;
        StructurePtr l = parse_structure();
        skip_ws();
        SKind k;
        if (pos_ < src_.size() && src_[pos_] == 'o' &&
            (pos_ + 1 >= src_.size() || !is_name_char(src_[pos_ + 1]))) {
          k = SKind::Comp;
          pos_++;
        } else if (pos_ < src_.size() && src_[pos_] == '@') {
          k = SKind::CComp;
          pos_++;
        } else {
          throw SyntaxError("expected 'o' or '@'", pos_);
        }
        StructurePtr r = parse_structure();
        skip_ws();
        if (pos_ >= src_.size() || src_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
        pos_++;
        return k == SKind::Comp ? Structure::mk_comp(l, r) : Structure::mk_ccomp(l, r);
      } catch (const SyntaxError&) {
        pos_ = save;
        bound_ = saved_bound;
        return parse_formula_leaf();
      }
    }
    // Name: a word-prefixed leaf, a bound variable or a bare formula leaf.
    size_t save = pos_;
    std::string name = parse_name();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == ':') {
      pos_++;
      FormulaPtr f = parse_embedded_formula();
      return Structure::mk_leaf(f, name);
    }
    if (bound_.count(name)) return Structure::mk_var(name);
    pos_ = save;
    return parse_formula_leaf();
  }

  static bool is_name_char(char d) {
    return (d >= 'a' && d <= 'z') || (d >= 'A' && d <= 'Z') || (d >= '0' && d <= '9') ||
           d == '_' || d == '\'';
  }

  // Parse a formula starting at the current position, consuming as much of
  // the input as the formula grammar allows.
  FormulaPtr parse_embedded_formula() {
    skip_ws();
    size_t start = pos_;
    int depth = 0;
    size_t end = pos_;
    while (end < src_.size()) {
      char d = src_[end];
      if (d == '(') depth++;
      else if (d == ')') {
        if (depth == 0) break;
        depth--;
      } else if ((d == 'o' && depth == 0 && end + 1 < src_.size() && !is_name_char(src_[end + 1]) &&
                  end > start && !is_name_char(src_[end - 1])) ||
                 d == '@') {
        break;
      } else if (std::isspace(static_cast<unsigned char>(d)) && depth == 0) {
        // A space at formula depth 0 ends the leaf unless what follows is a
        // connective continuation; formulas here never contain spaces.
        break;
      }
      end++;
    }
    std::string text = src_.substr(start, end - start);
    try {
      FormulaPtr f = parse_formula(text);
      pos_ = end;
      return f;
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.what(), start + e.position);
    }
  }

  StructurePtr parse_formula_leaf() { return Structure::mk_leaf(parse_embedded_formula()); }
};

inline StructurePtr parse_structure(const std::string& src) {
  return StructureParser(src).parse();
}

}  // namespace nllam

#endif  // NLLAM_STRUCTURE_HPP
