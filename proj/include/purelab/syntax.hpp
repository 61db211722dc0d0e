#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace purelab {

// Two-point lattice shared by effects and abilities: Bot < Top.
enum class Mark : std::uint8_t { Bot, Top };

constexpr Mark lub(Mark a, Mark b) { return (a == Mark::Top || b == Mark::Top) ? Mark::Top : Mark::Bot; }
constexpr bool leq(Mark a, Mark b) { return a == Mark::Bot || b == Mark::Top; }
constexpr bool truthy(Mark m) { return m == Mark::Top; }
constexpr Mark mark_of(bool b) { return b ? Mark::Top : Mark::Bot; }
inline const char* to_string(Mark m) { return m == Mark::Top ? "top" : "bot"; }

// Surface qualifier annotation: a single mark or a <fresh,stored> pair.
struct PairQual {
  Mark fresh;
  Mark stored;
  friend bool operator==(const PairQual&, const PairQual&) = default;
};
using QualAnnot = std::variant<Mark, PairQual>;

// Surface type annotations as written in source; each checker interprets
// (and validates) the qualifier slots it needs.
struct SType;
using STypePtr = std::shared_ptr<const SType>;

struct SType {
  enum class Kind { Bool, Ref, Fun };
  Kind kind = Kind::Bool;
  std::optional<QualAnnot> qual;  // on Ref
  // Fun
  STypePtr param, result;
  std::optional<QualAnnot> param_qual, result_qual;
  std::optional<Mark> latent;
};

inline STypePtr stype_bool() {
  static const STypePtr t = std::make_shared<SType>(SType{SType::Kind::Bool});
  return t;
}
inline STypePtr stype_ref(std::optional<QualAnnot> q = std::nullopt) {
  auto t = std::make_shared<SType>();
  t->kind = SType::Kind::Ref;
  t->qual = q;
  return t;
}
inline STypePtr stype_fun(STypePtr param, std::optional<QualAnnot> pq, std::optional<Mark> latent,
                          STypePtr result, std::optional<QualAnnot> rq) {
  auto t = std::make_shared<SType>();
  t->kind = SType::Kind::Fun;
  t->param = std::move(param);
  t->param_qual = pq;
  t->latent = latent;
  t->result = std::move(result);
  t->result_qual = rq;
  return t;
}

std::string print_stype(const STypePtr& t);

// Object-language terms. `let` is parsed as sugar and never appears here.
// Hole is used only by the purity oracle's contexts.
struct TermNode;
using Term = std::shared_ptr<const TermNode>;

enum class BinOp : std::uint8_t { And, Or };

struct TermNode {
  enum class Kind { Cst, Var, Abs, App, Ref, Get, Put, Bin, Hole };
  Kind kind;
  bool value = false;       // Cst
  std::string name;         // Var / Abs binder
  STypePtr annot;           // Abs (null = unannotated)
  Term a, b;                // children
  BinOp op = BinOp::And;    // Bin
  int line = 0, col = 0;    // source position, 0 when synthesized
};

inline Term mk(TermNode n) { return std::make_shared<TermNode>(std::move(n)); }
inline Term cst(bool v) { return mk({TermNode::Kind::Cst, v}); }
inline Term var(std::string x) { return mk({.kind = TermNode::Kind::Var, .name = std::move(x)}); }
inline Term abs(std::string x, STypePtr annot, Term body) {
  return mk({.kind = TermNode::Kind::Abs, .name = std::move(x), .annot = std::move(annot), .a = std::move(body)});
}
inline Term app(Term f, Term x) { return mk({.kind = TermNode::Kind::App, .a = std::move(f), .b = std::move(x)}); }
inline Term ref_(Term t) { return mk({.kind = TermNode::Kind::Ref, .a = std::move(t)}); }
inline Term get(Term t) { return mk({.kind = TermNode::Kind::Get, .a = std::move(t)}); }
inline Term put(Term t, Term v) { return mk({.kind = TermNode::Kind::Put, .a = std::move(t), .b = std::move(v)}); }
inline Term bin(BinOp op, Term l, Term r) {
  return mk({.kind = TermNode::Kind::Bin, .a = std::move(l), .b = std::move(r), .op = op});
}
inline Term hole() { return mk({TermNode::Kind::Hole}); }

// let x = bound in body  ~>  (fun (x) => body) bound
inline Term desugar_let(const std::string& x, Term bound, Term body) {
  return app(abs(x, nullptr, std::move(body)), std::move(bound));
}

inline void free_vars_into(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
    case TermNode::Kind::Hole:
      return;
    case TermNode::Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case TermNode::Kind::Abs: {
      bool was = bound.count(t->name) > 0;
      bound.insert(t->name);
      free_vars_into(t->a, bound, out);
      if (!was) bound.erase(t->name);
      return;
    }
    case TermNode::Kind::Ref:
    case TermNode::Kind::Get:
      free_vars_into(t->a, bound, out);
      return;
    case TermNode::Kind::App:
    case TermNode::Kind::Put:
    case TermNode::Kind::Bin:
      free_vars_into(t->a, bound, out);
      free_vars_into(t->b, bound, out);
      return;
  }
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  free_vars_into(t, bound, out);
  return out;
}

inline bool qual_eq(const std::optional<QualAnnot>& a, const std::optional<QualAnnot>& b) {
  return a == b;
}

inline bool stype_eq(const STypePtr& a, const STypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case SType::Kind::Bool:
      return true;
    case SType::Kind::Ref:
      return qual_eq(a->qual, b->qual);
    case SType::Kind::Fun:
      return qual_eq(a->param_qual, b->param_qual) && qual_eq(a->result_qual, b->result_qual) &&
             a->latent == b->latent && stype_eq(a->param, b->param) && stype_eq(a->result, b->result);
  }
  return false;
}

inline bool term_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case TermNode::Kind::Cst: return a->value == b->value;
    case TermNode::Kind::Var: return a->name == b->name;
    case TermNode::Kind::Hole: return true;
    case TermNode::Kind::Abs:
      return a->name == b->name && stype_eq(a->annot, b->annot) && term_eq(a->a, b->a);
    case TermNode::Kind::Ref:
    case TermNode::Kind::Get:
      return term_eq(a->a, b->a);
    case TermNode::Kind::Bin:
      if (a->op != b->op) return false;
      [[fallthrough]];
    case TermNode::Kind::App:
    case TermNode::Kind::Put:
      return term_eq(a->a, b->a) && term_eq(a->b, b->b);
  }
  return false;
}

// All nodes, holes included.
inline std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  if (t->a) n += term_size(t->a);
  if (t->b) n += term_size(t->b);
  return n;
}

inline std::size_t hole_count(const Term& t) {
  if (t->kind == TermNode::Kind::Hole) return 1;
  std::size_t n = 0;
  if (t->a) n += hole_count(t->a);
  if (t->b) n += hole_count(t->b);
  return n;
}

// Context size: holes are free, every other node costs one.
inline std::size_t ctx_size(const Term& t) { return term_size(t) - hole_count(t); }

inline std::string print_qual(const QualAnnot& q) {
  if (std::holds_alternative<Mark>(q)) return std::string("^") + to_string(std::get<Mark>(q));
  const auto& p = std::get<PairQual>(q);
  return std::string("<") + to_string(p.fresh) + "," + to_string(p.stored) + ">";
}

inline std::string print_stype(const STypePtr& t) {
  switch (t->kind) {
    case SType::Kind::Bool:
      return "Bool";
    case SType::Kind::Ref:
      return t->qual ? "Ref" + print_qual(*t->qual) : "Ref";
    case SType::Kind::Fun: {
      std::string s = "(" + print_stype(t->param);
      if (t->param_qual) s += print_qual(*t->param_qual);
      s += " -> ";
      if (t->latent) s += std::string("[") + to_string(*t->latent) + "] ";
      s += print_stype(t->result);
      if (t->result_qual) s += print_qual(*t->result_qual);
      s += ")";
      return s;
    }
  }
  return "?";
}

// Printing precedence, loosest binds last: atoms(0) < application(1) <
// ref/!(2) < :=(3) < &&,||(4) < fun(5). Matches the parser.
inline int print_level(const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
    case TermNode::Kind::Var:
    case TermNode::Kind::Hole: return 0;
    case TermNode::Kind::App: return 1;
    case TermNode::Kind::Ref:
    case TermNode::Kind::Get: return 2;
    case TermNode::Kind::Put: return 3;
    case TermNode::Kind::Bin: return 4;
    case TermNode::Kind::Abs: return 5;
  }
  return 5;
}

inline void print_into(const Term& t, int max_level, std::string& out) {
  if (print_level(t) > max_level) {
    out += "(";
    print_into(t, 5, out);
    out += ")";
    return;
  }
  switch (t->kind) {
    case TermNode::Kind::Cst:
      out += t->value ? "true" : "false";
      return;
    case TermNode::Kind::Var:
      out += t->name;
      return;
    case TermNode::Kind::Hole:
      out += "[]";
      return;
    case TermNode::Kind::App:
      print_into(t->a, 1, out);
      out += " ";
      print_into(t->b, 0, out);
      return;
    case TermNode::Kind::Ref:
      out += "ref ";
      print_into(t->a, 0, out);
      return;
    case TermNode::Kind::Get:
      out += "!";
      print_into(t->a, 0, out);
      return;
    case TermNode::Kind::Put:
      print_into(t->a, 2, out);
      out += " := ";
      print_into(t->b, 2, out);
      return;
    case TermNode::Kind::Bin:
      print_into(t->a, 4, out);
      out += t->op == BinOp::And ? " && " : " || ";
      print_into(t->b, 3, out);
      return;
    case TermNode::Kind::Abs:
      out += "fun (" + t->name;
      if (t->annot) out += ": " + print_stype(t->annot);
      out += ") => ";
      print_into(t->a, 5, out);
      return;
  }
}

inline std::string print(const Term& t) {
  std::string out;
  print_into(t, 5, out);
  return out;
}

}  // namespace purelab
