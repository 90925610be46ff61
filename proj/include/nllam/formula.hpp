#ifndef NLLAM_FORMULA_HPP
#define NLLAM_FORMULA_HPP

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace nllam {

// Binary connectives come in two families: the Lambek family (written
// \, /, * over the structural connective o) and the continuation family
// (written \\, //, ** over the structural connective @).  The 0-ary
// connective "1" (unit) completes the language.
enum class Conn {
  Atom,
  Unit,
  Under,   // A \ B
  Over,    // A / B
  Prod,    // A * B
  CUnder,  // A \\ B
  COver,   // A // B
  CProd,   // A ** B
};

inline bool conn_is_binary(Conn c) { return c != Conn::Atom && c != Conn::Unit; }

inline bool conn_is_continuation(Conn c) {
  return c == Conn::CUnder || c == Conn::COver || c == Conn::CProd;
}

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula tree.  Shared pointers keep copies cheap; equality is
// structural.
class Formula {
public:
  Conn tag;
  std::string atom;  // valid when tag == Atom
  FormulaPtr left, right;

  static FormulaPtr mk_atom(std::string name) {
    auto f = std::make_shared<Formula>();
    f->tag = Conn::Atom;
    f->atom = std::move(name);
    return f;
  }
  static FormulaPtr mk_unit() {
    auto f = std::make_shared<Formula>();
    f->tag = Conn::Unit;
    return f;
  }
  static FormulaPtr mk(Conn c, FormulaPtr l, FormulaPtr r) {
    if (!conn_is_binary(c)) throw std::invalid_argument("mk: connective is not binary");
    auto f = std::make_shared<Formula>();
    f->tag = c;
    f->left = std::move(l);
    f->right = std::move(r);
    return f;
  }
};

inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Conn::Atom: return a->atom == b->atom;
    case Conn::Unit: return true;
    default: return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
  }
}

inline int connective_count(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::Atom: return 0;
    case Conn::Unit: return 1;
    default: return 1 + connective_count(f->left) + connective_count(f->right);
  }
}

inline const char* conn_symbol(Conn c) {
  switch (c) {
    case Conn::Under: return "\\";
    case Conn::Over: return "/";
    case Conn::Prod: return "*";
    case Conn::CUnder: return "\\\\";
    case Conn::COver: return "//";
    case Conn::CProd: return "**";
    default: return "";
  }
}

// All binary connectives share one precedence level, so every binary
// subformula is printed with explicit parentheses and only the outermost
// pair is dropped.
inline std::string format_formula(const FormulaPtr& f, bool outer = true) {
  switch (f->tag) {
    case Conn::Atom: return f->atom;
    case Conn::Unit: return "1";
    default: {
      std::string s = format_formula(f->left, false);
      s += conn_symbol(f->tag);
      s += format_formula(f->right, false);
      if (!outer) s = "(" + s + ")";
      return s;
    }
  }
}

// Thrown for any syntax error in formulas, structures or lexicon files.
// Carries a byte offset into the input for error reporting.
class SyntaxError : public std::runtime_error {
public:
  size_t position;
  SyntaxError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Recursive descent parser for the ASCII formula grammar:
//   formula ::= atom | "1" | "(" formula ")" | formula OP formula
//   atom    ::= [a-z][a-z0-9_]*
//   OP      ::= "\" | "/" | "*" | "\\" | "//" | "**"
// All operators have equal precedence and no associativity: nested binary
// formulas require explicit parentheses.
class FormulaParser {
public:
  explicit FormulaParser(std::string src) : src_(std::move(src)) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_formula();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return f;
  }

private:
  std::string src_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) pos_++;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= src_.size();
  }
  char peek() { return src_[pos_]; }

  FormulaPtr parse_formula() {
    FormulaPtr lhs = parse_primary();
    skip_ws();
    if (pos_ < src_.size()) {
      Conn op;
      if (try_op(op)) {
        FormulaPtr rhs = parse_primary();
        return Formula::mk(op, lhs, rhs);
      }
    }
    return lhs;
  }

  bool try_op(Conn& op) {
    skip_ws();
    if (pos_ >= src_.size()) return false;
    char c = src_[pos_];
    char c2 = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    if (c == '\\') {
      op = (c2 == '\\') ? Conn::CUnder : Conn::Under;
    } else if (c == '/') {
      op = (c2 == '/') ? Conn::COver : Conn::Over;
    } else if (c == '*') {
      op = (c2 == '*') ? Conn::CProd : Conn::Prod;
    } else {
      return false;
    }
    pos_ += (op == Conn::CUnder || op == Conn::COver || op == Conn::CProd) ? 2 : 1;
    return true;
  }

  FormulaPtr parse_primary() {
    if (at_end()) throw SyntaxError("unexpected end of input", pos_);
    char c = peek();
    if (c == '(') {
      pos_++;
      FormulaPtr f = parse_formula();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
      pos_++;
      return f;
    }
    if (c == '1') {
      pos_++;
      return Formula::mk_unit();
    }
    if (c >= 'a' && c <= 'z') {
      size_t start = pos_;
      pos_++;
      while (pos_ < src_.size()) {
        char d = src_[pos_];
        if ((d >= 'a' && d <= 'z') || (d >= '0' && d <= '9') || d == '_') pos_++;
        else break;
      }
      return Formula::mk_atom(src_.substr(start, pos_ - start));
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }
};

inline FormulaPtr parse_formula(const std::string& src) { return FormulaParser(src).parse(); }

}  // namespace nllam

#endif  // NLLAM_FORMULA_HPP
