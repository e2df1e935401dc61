#ifndef POLITE_PARSE_HPP
#define POLITE_PARSE_HPP

// Reader for the s-expression formula syntax.
//
//   (declare-sort S) (declare-fun s (S) S) (declare-const x S)
//   (assert f) or a bare f; several formulas are conjoined.
//
// Sorts are numbered by declaration order except that the argument sort of
// the function symbol, when there is one, always becomes sort 0.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "logic.hpp"

namespace polite {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}
};

struct Vocabulary {
  std::vector<std::string> sorts{"S", "S2"};
  std::string fun = "s";
};

struct ParsedInput {
  Formula formula;
  Signature sig;
  Vocabulary vocab;
  std::vector<Var> declared;
};

namespace detail {

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> items;
  int line = 1, col = 1;
  bool is_atom() const { return !atom.empty(); }
};

class Reader {
 public:
  explicit Reader(std::string_view text) : t_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    for (skip(); pos_ < t_.size(); skip()) out.push_back(read());
    return out;
  }

 private:
  std::string_view t_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  void bump() {
    if (t_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < t_.size()) {
      char c = t_[pos_];
      if (c == ';') {
        while (pos_ < t_.size() && t_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }
  Sexp read() {
    Sexp e;
    e.line = line_;
    e.col = col_;
    char c = t_[pos_];
    if (c == ')') throw ParseError(line_, col_, "unexpected ')'");
    if (c == '(') {
      bump();
      for (;;) {
        skip();
        if (pos_ >= t_.size()) throw ParseError(e.line, e.col, "unclosed '('");
        if (t_[pos_] == ')') {
          bump();
          return e;
        }
        e.items.push_back(read());
      }
    }
    while (pos_ < t_.size()) {
      char d = t_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      if (static_cast<unsigned char>(d) >= 0x80) throw ParseError(line_, col_, "non-ASCII character");
      e.atom.push_back(d);
      bump();
    }
    return e;
  }
};

inline bool valid_ident(const std::string& s) {
  if (s.empty() || s[0] == '@') return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '-' ||
          c == '!' || c == '$' || c == '?' || c == '*' || c == '+' || c == '<' || c == '>'))
      return false;
  return !std::isdigit(static_cast<unsigned char>(s[0]));
}

class Builder {
 public:
  bool lenient = true;

  ParsedInput run(const std::vector<Sexp>& forms) {
    std::vector<const Sexp*> bodies;
    std::vector<const Sexp*> consts;
    // sort and function declarations first, so the function sort can be placed at 0
    std::vector<std::string> sort_order;
    std::string fun_sort;
    for (auto& f : forms) {
      auto head = head_of(f);
      if (head == "declare-sort") {
        if (f.items.size() < 2 || f.items.size() > 3 || !f.items[1].is_atom())
          throw ParseError(f.line, f.col, "expected (declare-sort NAME)");
        auto& n = f.items[1].atom;
        if (!valid_ident(n)) throw ParseError(f.items[1].line, f.items[1].col, "bad sort name '" + n + "'");
        if (std::find(sort_order.begin(), sort_order.end(), n) != sort_order.end())
          throw ParseError(f.line, f.col, "sort '" + n + "' declared twice");
        sort_order.push_back(n);
      } else if (head == "declare-fun") {
        if (f.items.size() != 4 || !f.items[1].is_atom() || f.items[2].is_atom() || !f.items[3].is_atom())
          throw ParseError(f.line, f.col, "expected (declare-fun NAME (SORT) SORT)");
        if (has_fun_) throw ParseError(f.line, f.col, "only one function symbol is supported");
        auto& args = f.items[2].items;
        if (args.size() != 1 || !args[0].is_atom())
          throw ParseError(f.items[2].line, f.items[2].col, "only unary function symbols are supported");
        if (args[0].atom != f.items[3].atom)
          throw ParseError(f.items[3].line, f.items[3].col, "function must map a sort to itself");
        if (!valid_ident(f.items[1].atom))
          throw ParseError(f.items[1].line, f.items[1].col, "bad function name '" + f.items[1].atom + "'");
        has_fun_ = true;
        out_.vocab.fun = f.items[1].atom;
        fun_sort = args[0].atom;
        if (std::find(sort_order.begin(), sort_order.end(), fun_sort) == sort_order.end()) {
          if (!lenient) throw ParseError(args[0].line, args[0].col, "undeclared sort '" + fun_sort + "'");
          sort_order.push_back(fun_sort);
        }
      } else if (head == "declare-const") {
        consts.push_back(&f);
      } else if (head == "assert") {
        if (f.items.size() != 2) throw ParseError(f.line, f.col, "expected (assert FORMULA)");
        bodies.push_back(&f.items[1]);
      } else if (head == "check-sat" || head == "set-logic" || head == "set-info" || head == "exit") {
        // tolerated and ignored
      } else {
        bodies.push_back(&f);
      }
    }
    for (auto* c : consts) {
      if (c->items.size() != 3 || !c->items[2].is_atom()) continue;
      auto& n = c->items[2].atom;
      if (std::find(sort_order.begin(), sort_order.end(), n) == sort_order.end()) {
        if (!lenient) throw ParseError(c->items[2].line, c->items[2].col, "undeclared sort '" + n + "'");
        sort_order.push_back(n);
      }
    }
    if (!fun_sort.empty()) {
      auto it = std::find(sort_order.begin(), sort_order.end(), fun_sort);
      std::rotate(sort_order.begin(), it, it + 1);
    }
    if (sort_order.size() > 2) throw ParseError(1, 1, "at most two sorts are supported");
    for (std::size_t i = 0; i < sort_order.size(); ++i) {
      sort_ids_[sort_order[i]] = static_cast<SortId>(i);
      out_.vocab.sorts[i] = sort_order[i];
    }
    if (sort_order.empty()) sort_ids_[out_.vocab.sorts[0]] = 0;
    for (auto* c : consts) declare_const(*c);

    std::vector<Formula> parts;
    for (auto* b : bodies) parts.push_back(formula(*b));
    out_.formula = conj(std::move(parts));
    out_.sig.has_s = has_fun_;
    out_.sig.num_sorts = static_cast<int>(std::max<std::size_t>(1, sort_order.size()));
    for (auto& x : vars_of(out_.formula))
      out_.sig.num_sorts = std::max(out_.sig.num_sorts, x.sort + 1);
    return std::move(out_);
  }

 private:
  ParsedInput out_;
  bool has_fun_ = false;
  std::map<std::string, SortId> sort_ids_;
  std::map<std::string, SortId> consts_;
  std::vector<Var> bound_;

  static std::string head_of(const Sexp& e) {
    if (e.is_atom() || e.items.empty() || !e.items[0].is_atom()) return {};
    return e.items[0].atom;
  }

  SortId sort_of_name(const Sexp& e) {
    if (!e.is_atom()) throw ParseError(e.line, e.col, "expected a sort name");
    auto it = sort_ids_.find(e.atom);
    if (it != sort_ids_.end()) return it->second;
    if (lenient && sort_ids_.size() < 2 && valid_ident(e.atom)) {
      SortId id = static_cast<SortId>(sort_ids_.size());
      sort_ids_[e.atom] = id;
      out_.vocab.sorts[id] = e.atom;
      return id;
    }
    throw ParseError(e.line, e.col, "unknown sort '" + e.atom + "'");
  }

  void declare_const(const Sexp& c) {
    if (c.items.size() != 3 || !c.items[1].is_atom())
      throw ParseError(c.line, c.col, "expected (declare-const NAME SORT)");
    auto& n = c.items[1].atom;
    if (!valid_ident(n)) throw ParseError(c.items[1].line, c.items[1].col, "bad variable name '" + n + "'");
    if (consts_.count(n)) throw ParseError(c.line, c.col, "variable '" + n + "' declared twice");
    SortId s = sort_of_name(c.items[2]);
    consts_[n] = s;
    out_.declared.push_back(Var{n, s});
  }

  Var lookup(const Sexp& e) {
    auto& n = e.atom;
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->name == n) return *it;
    if (!valid_ident(n)) throw ParseError(e.line, e.col, "bad identifier '" + n + "'");
    if (n == out_.vocab.fun && has_fun_) throw ParseError(e.line, e.col, "function symbol used as a variable");
    auto it = consts_.find(n);
    if (it != consts_.end()) return Var{n, it->second};
    if (!lenient) throw ParseError(e.line, e.col, "undeclared variable '" + n + "'");
    consts_[n] = 0;
    return Var{n, 0};
  }

  Term term(const Sexp& e) {
    if (e.is_atom()) return tv(lookup(e));
    if (e.items.size() != 2 || !e.items[0].is_atom())
      throw ParseError(e.line, e.col, "expected a term: a variable or (" + out_.vocab.fun + " t)");
    auto& f = e.items[0].atom;
    if (f != out_.vocab.fun || (!has_fun_ && !lenient))
      throw ParseError(e.items[0].line, e.items[0].col, "unknown function symbol '" + f + "'");
    has_fun_ = true;
    Term t = term(e.items[1]);
    if (t.sort() != 0) throw ParseError(e.line, e.col, "function applied to a term of the wrong sort");
    if (t.depth + 1 > kMaxDepth) throw ParseError(e.line, e.col, "term depth exceeds " + std::to_string(kMaxDepth));
    return s(t);
  }

  Formula formula(const Sexp& e) {
    if (e.is_atom()) {
      if (e.atom == "true") return top();
      if (e.atom == "false") return bot();
      throw ParseError(e.line, e.col, "expected a formula, found '" + e.atom + "'");
    }
    auto head = head_of(e);
    auto arity = e.items.size() - 1;
    auto need = [&](std::size_t n) {
      if (arity != n)
        throw ParseError(e.line, e.col, "'" + head + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (head == "=") {
      need(2);
      Term a = term(e.items[1]), b = term(e.items[2]);
      if (a.sort() != b.sort()) throw ParseError(e.line, e.col, "equality between terms of different sorts");
      return eq(a, b);
    }
    if (head == "distinct") {
      if (arity < 2) throw ParseError(e.line, e.col, "'distinct' expects at least 2 arguments");
      std::vector<Term> ts;
      for (std::size_t i = 1; i < e.items.size(); ++i) ts.push_back(term(e.items[i]));
      std::vector<Formula> ks;
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
          if (ts[i].sort() != ts[j].sort()) throw ParseError(e.line, e.col, "'distinct' over terms of different sorts");
          ks.push_back(neq(ts[i], ts[j]));
        }
      return conj(std::move(ks));
    }
    if (head == "not") {
      need(1);
      return neg(formula(e.items[1]));
    }
    if (head == "and" || head == "or") {
      std::vector<Formula> ks;
      for (std::size_t i = 1; i < e.items.size(); ++i) ks.push_back(formula(e.items[i]));
      return head == "and" ? conj(std::move(ks)) : disj(std::move(ks));
    }
    if (head == "=>") {
      need(2);
      return implies(formula(e.items[1]), formula(e.items[2]));
    }
    if (head == "exists" || head == "forall") {
      need(2);
      auto& bs = e.items[1];
      if (bs.is_atom() || bs.items.empty()) throw ParseError(bs.line, bs.col, "expected a binder list");
      std::vector<Var> vs;
      for (auto& b : bs.items) {
        if (b.is_atom() || b.items.size() != 2 || !b.items[0].is_atom())
          throw ParseError(b.line, b.col, "expected (NAME SORT)");
        if (!valid_ident(b.items[0].atom))
          throw ParseError(b.items[0].line, b.items[0].col, "bad identifier '" + b.items[0].atom + "'");
        vs.push_back(Var{b.items[0].atom, sort_of_name(b.items[1])});
      }
      auto n = bound_.size();
      bound_.insert(bound_.end(), vs.begin(), vs.end());
      auto body = formula(e.items[2]);
      bound_.resize(n);
      return quant(head == "exists" ? Kind::Exists : Kind::Forall, std::move(vs), body);
    }
    throw ParseError(e.line, e.col, head.empty() ? "expected a formula" : "unknown connective '" + head + "'");
  }
};

}  // namespace detail

inline ParsedInput parse_input(std::string_view text, bool lenient = true) {
  detail::Reader r(text);
  auto forms = r.read_all();
  detail::Builder b;
  b.lenient = lenient;
  return b.run(forms);
}

inline Formula parse_formula(std::string_view text) { return parse_input(text).formula; }

// Declarations for the variables of f, in the same syntax the reader accepts.
inline std::string to_script(const Formula& f, const Signature& sig, const Vocabulary& vocab = {}) {
  std::ostringstream os;
  for (int i = 0; i < sig.num_sorts; ++i) os << "(declare-sort " << vocab.sorts[i] << ")\n";
  if (sig.has_s) os << "(declare-fun " << vocab.fun << " (" << vocab.sorts[0] << ") " << vocab.sorts[0] << ")\n";
  for (auto& x : vars_of(f)) os << "(declare-const " << x.name << " " << vocab.sorts[x.sort] << ")\n";
  os << "(assert " << to_string(f) << ")\n";
  return os.str();
}

}  // namespace polite

#endif  // POLITE_PARSE_HPP
