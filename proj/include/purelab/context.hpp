#pragma once

#include <map>
#include <string>
#include <vector>

#include "purelab/sys_effect.hpp"  // TypeError
#include "purelab/syntax.hpp"

namespace purelab {

// ---- Qualifier-free simple types: the baseline discipline the purity
// ---- oracle enumerates contexts in.

struct SimpleType;
using SimplePtr = std::shared_ptr<const SimpleType>;

struct SimpleType {
  enum class Kind { Bool, Ref, Fun };
  Kind kind = Kind::Bool;
  SimplePtr param, result;
};

inline SimplePtr simple_bool() {
  static const SimplePtr t = std::make_shared<SimpleType>(SimpleType{SimpleType::Kind::Bool});
  return t;
}
inline SimplePtr simple_ref() {
  static const SimplePtr t = std::make_shared<SimpleType>(SimpleType{SimpleType::Kind::Ref});
  return t;
}
inline SimplePtr simple_fun(SimplePtr param, SimplePtr result) {
  return std::make_shared<SimpleType>(SimpleType{SimpleType::Kind::Fun, std::move(param), std::move(result)});
}

inline bool simple_eq(const SimplePtr& a, const SimplePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != SimpleType::Kind::Fun) return true;
  return simple_eq(a->param, b->param) && simple_eq(a->result, b->result);
}

inline std::string simple_key(const SimplePtr& t) {
  switch (t->kind) {
    case SimpleType::Kind::Bool: return "B";
    case SimpleType::Kind::Ref: return "R";
    case SimpleType::Kind::Fun: return "(" + simple_key(t->param) + ">" + simple_key(t->result) + ")";
  }
  return "?";
}

inline SimplePtr erase_annot(const STypePtr& s) {
  switch (s->kind) {
    case SType::Kind::Bool: return simple_bool();
    case SType::Kind::Ref: return simple_ref();
    case SType::Kind::Fun: return simple_fun(erase_annot(s->param), erase_annot(s->result));
  }
  return simple_bool();
}

using SimpleScope = std::vector<std::pair<std::string, SimplePtr>>;

inline const SimplePtr* scope_lookup(const SimpleScope& sc, const std::string& x) {
  for (auto it = sc.rbegin(); it != sc.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

// Simple typing; holes are allowed when `holeType` is given.
inline SimplePtr simple_typeof(const SimpleScope& sc, const Term& t,
                               const SimplePtr* holeType = nullptr) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
      return simple_bool();
    case TermNode::Kind::Var: {
      const SimplePtr* ty = scope_lookup(sc, t->name);
      if (!ty) throw TypeError("unbound variable: " + t->name);
      return *ty;
    }
    case TermNode::Kind::Abs: {
      if (!t->annot) throw TypeError("unannotated abstraction");
      SimplePtr p = erase_annot(t->annot);
      SimpleScope inner = sc;
      inner.emplace_back(t->name, p);
      return simple_fun(p, simple_typeof(inner, t->a, holeType));
    }
    case TermNode::Kind::App: {
      const Term& fn = t->a;
      if (fn->kind == TermNode::Kind::Abs && !fn->annot) {  // let
        SimplePtr ta = simple_typeof(sc, t->b, holeType);
        SimpleScope inner = sc;
        inner.emplace_back(fn->name, ta);
        return simple_typeof(inner, fn->a, holeType);
      }
      SimplePtr tf = simple_typeof(sc, fn, holeType);
      if (tf->kind != SimpleType::Kind::Fun) throw TypeError("applying a non-function");
      SimplePtr ta = simple_typeof(sc, t->b, holeType);
      if (!simple_eq(ta, tf->param)) throw TypeError("argument type mismatch");
      return tf->result;
    }
    case TermNode::Kind::Ref:
      if (simple_typeof(sc, t->a, holeType)->kind != SimpleType::Kind::Bool)
        throw TypeError("ref initializer must be Bool");
      return simple_ref();
    case TermNode::Kind::Get:
      if (simple_typeof(sc, t->a, holeType)->kind != SimpleType::Kind::Ref)
        throw TypeError("dereferencing a non-Ref");
      return simple_bool();
    case TermNode::Kind::Put:
      if (simple_typeof(sc, t->a, holeType)->kind != SimpleType::Kind::Ref)
        throw TypeError("assigning to a non-Ref");
      if (simple_typeof(sc, t->b, holeType)->kind != SimpleType::Kind::Bool)
        throw TypeError("stored value must be Bool");
      return simple_bool();
    case TermNode::Kind::Bin:
      if (simple_typeof(sc, t->a, holeType)->kind != SimpleType::Kind::Bool ||
          simple_typeof(sc, t->b, holeType)->kind != SimpleType::Kind::Bool)
        throw TypeError("boolean operator on non-Bool");
      return simple_bool();
    case TermNode::Kind::Hole:
      if (!holeType) throw TypeError("hole outside a context");
      return *holeType;
  }
  throw TypeError("bad term");
}

// ---- Ambient environment shape for the oracle. ----

enum class VarKind { BoolVal, RefCell };

struct EnvSpec {
  std::vector<std::pair<std::string, VarKind>> vars;
  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const auto& [_, k] : vars)
      if (k == VarKind::RefCell) ++n;
    return n;
  }
};

inline SimpleScope scope_of(const EnvSpec& env) {
  SimpleScope sc;
  for (const auto& [x, k] : env.vars)
    sc.emplace_back(x, k == VarKind::RefCell ? simple_ref() : simple_bool());
  return sc;
}

// ---- Context enumeration. ----
//
// Contexts are terms over the ambient scope that may mention the hole any
// number of times (including zero: the constant contexts that detect
// divergence). Order: nondecreasing size (holes are free), then by
// production — hole, leaves, application, abstraction, ref, get, put, bin —
// with left subterms enumerated major. Binder pool is {x0, x1} with
// annotations drawn from {Bool, Ref}.

namespace detail {

struct ContextEnum {
  SimplePtr hole_type;
  SimpleScope base;
  // memo: (size | type | binder-extension signature) -> terms
  std::map<std::string, std::shared_ptr<std::vector<Term>>> memo;

  static std::string scope_sig(const SimpleScope& sc, std::size_t base_len) {
    std::string s;
    for (std::size_t i = base_len; i < sc.size(); ++i)
      s += sc[i].first + ":" + simple_key(sc[i].second) + ";";
    return s;
  }

  const std::vector<Term>& gen(std::size_t size, const SimplePtr& want, const SimpleScope& sc) {
    std::string key = std::to_string(size) + "|" + simple_key(want) + "|" + scope_sig(sc, base.size());
    auto it = memo.find(key);
    if (it != memo.end()) return *it->second;
    auto out = std::make_shared<std::vector<Term>>();
    build(size, want, sc, *out);
    memo.emplace(std::move(key), out);
    return *out;
  }

  void build(std::size_t size, const SimplePtr& want, const SimpleScope& sc, std::vector<Term>& out) {
    if (size == 0) {
      if (simple_eq(want, hole_type)) out.push_back(hole());
      return;
    }
    if (size == 1) {
      if (want->kind == SimpleType::Kind::Bool) {
        out.push_back(cst(true));
        out.push_back(cst(false));
      }
      for (const auto& [x, ty] : sc)
        if (simple_eq(ty, want)) out.push_back(var(x));
    }
    // application: fn of type A -> want, arg of type A, A in {Bool, Ref}
    for (const SimplePtr& a : {simple_bool(), simple_ref()}) {
      SimplePtr fty = simple_fun(a, want);
      for (std::size_t i = 0; i + 1 <= size; ++i) {
        const auto& fns = gen(i, fty, sc);
        if (fns.empty()) continue;
        const auto& args = gen(size - 1 - i, a, sc);
        for (const Term& f : fns)
          for (const Term& x : args) out.push_back(app(f, x));
      }
    }
    // abstraction
    if (want->kind == SimpleType::Kind::Fun &&
        (want->param->kind == SimpleType::Kind::Bool || want->param->kind == SimpleType::Kind::Ref)) {
      std::string x = sc.size() > base.size() ? "x1" : "x0";
      STypePtr annot = want->param->kind == SimpleType::Kind::Bool ? stype_bool() : stype_ref();
      SimpleScope inner = sc;
      inner.emplace_back(x, want->param);
      for (const Term& body : gen(size - 1, want->result, inner))
        out.push_back(abs(x, annot, body));
    }
    if (want->kind == SimpleType::Kind::Ref) {
      for (const Term& t : gen(size - 1, simple_bool(), sc)) out.push_back(ref_(t));
    }
    if (want->kind == SimpleType::Kind::Bool) {
      for (const Term& t : gen(size - 1, simple_ref(), sc)) out.push_back(get(t));
      for (std::size_t i = 0; i + 1 <= size; ++i) {
        const auto& ls = gen(i, simple_ref(), sc);
        if (ls.empty()) continue;
        const auto& rs = gen(size - 1 - i, simple_bool(), sc);
        for (const Term& l : ls)
          for (const Term& r : rs) out.push_back(put(l, r));
      }
      for (BinOp op : {BinOp::And, BinOp::Or}) {
        for (std::size_t i = 0; i + 1 <= size; ++i) {
          const auto& ls = gen(i, simple_bool(), sc);
          if (ls.empty()) continue;
          const auto& rs = gen(size - 1 - i, simple_bool(), sc);
          for (const Term& l : ls)
            for (const Term& r : rs) out.push_back(bin(op, l, r));
        }
      }
    }
  }
};

}  // namespace detail

inline std::vector<Term> enumerate_contexts(const SimplePtr& holeType, const EnvSpec& env,
                                            std::size_t maxNodes) {
  detail::ContextEnum e{holeType, scope_of(env), {}};
  std::vector<Term> out;
  for (std::size_t s = 0; s <= maxNodes; ++s) {
    const auto& terms = e.gen(s, simple_bool(), e.base);
    out.insert(out.end(), terms.begin(), terms.end());
  }
  return out;
}

// Replace every hole with t.
inline Term plug(const Term& ctx, const Term& t) {
  switch (ctx->kind) {
    case TermNode::Kind::Hole:
      return t;
    case TermNode::Kind::Cst:
    case TermNode::Kind::Var:
      return ctx;
    default: {
      TermNode n = *ctx;
      if (n.a) n.a = plug(n.a, t);
      if (n.b) n.b = plug(n.b, t);
      return mk(std::move(n));
    }
  }
}

}  // namespace purelab
