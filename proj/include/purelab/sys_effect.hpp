#pragma once

#include <utility>
#include <vector>

#include "purelab/syntax.hpp"

namespace purelab {

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- Effect system: types are Bool | Ref | Fun with a latent effect. ----

struct EffType;
using EffTypePtr = std::shared_ptr<const EffType>;

struct EffType {
  enum class Kind { Bool, Ref, Fun };
  Kind kind = Kind::Bool;
  EffTypePtr param, result;
  Mark latent = Mark::Bot;
};

inline EffTypePtr eff_bool() {
  static const EffTypePtr t = std::make_shared<EffType>(EffType{EffType::Kind::Bool});
  return t;
}
inline EffTypePtr eff_ref() {
  static const EffTypePtr t = std::make_shared<EffType>(EffType{EffType::Kind::Ref});
  return t;
}
inline EffTypePtr eff_fun(EffTypePtr param, EffTypePtr result, Mark latent) {
  return std::make_shared<EffType>(EffType{EffType::Kind::Fun, std::move(param), std::move(result), latent});
}

using EffCtx = std::vector<std::pair<std::string, EffTypePtr>>;

inline Mark compose(Mark e1, Mark e2) { return lub(e1, e2); }

inline bool efftype_eq(const EffTypePtr& a, const EffTypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != EffType::Kind::Fun) return true;
  return a->latent == b->latent && efftype_eq(a->param, b->param) && efftype_eq(a->result, b->result);
}

// Contravariant parameter, covariant result and latent effect.
inline bool subtype_e(const EffTypePtr& a, const EffTypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != EffType::Kind::Fun) return true;
  return subtype_e(b->param, a->param) && subtype_e(a->result, b->result) && leq(a->latent, b->latent);
}

inline std::string print_efftype(const EffTypePtr& t) {
  switch (t->kind) {
    case EffType::Kind::Bool: return "Bool";
    case EffType::Kind::Ref: return "Ref";
    case EffType::Kind::Fun:
      return "(" + print_efftype(t->param) + " -> [" + to_string(t->latent) + "] " +
             print_efftype(t->result) + ")";
  }
  return "?";
}

// Interpret a surface annotation; qualifier slots belong to the other systems.
inline EffTypePtr efftype_of_annot(const STypePtr& s) {
  switch (s->kind) {
    case SType::Kind::Bool:
      return eff_bool();
    case SType::Kind::Ref:
      if (s->qual) throw TypeError("effect system: Ref annotation takes no qualifier");
      return eff_ref();
    case SType::Kind::Fun:
      if (s->param_qual || s->result_qual)
        throw TypeError("effect system: function annotation takes no qualifiers");
      if (!s->latent) throw TypeError("effect system: function annotation needs a latent effect");
      return eff_fun(efftype_of_annot(s->param), efftype_of_annot(s->result), *s->latent);
  }
  throw TypeError("bad annotation");
}

inline const EffTypePtr* ctx_lookup(const EffCtx& ctx, const std::string& x) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

inline std::pair<EffTypePtr, Mark> typecheck_e(const EffCtx& ctx, const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
      return {eff_bool(), Mark::Bot};
    case TermNode::Kind::Var: {
      const EffTypePtr* ty = ctx_lookup(ctx, t->name);
      if (!ty) throw TypeError("unbound variable: " + t->name);
      return {*ty, Mark::Bot};
    }
    case TermNode::Kind::Abs: {
      if (!t->annot) throw TypeError("effect system: unannotated abstraction");
      EffTypePtr t1 = efftype_of_annot(t->annot);
      EffCtx inner = ctx;
      inner.emplace_back(t->name, t1);
      auto [t2, e2] = typecheck_e(inner, t->a);
      return {eff_fun(t1, t2, e2), Mark::Bot};
    }
    case TermNode::Kind::App: {
      // An applied unannotated abstraction is `let`: the binder takes the
      // argument's synthesized type.
      const Term& fn = t->a;
      if (fn->kind == TermNode::Kind::Abs && !fn->annot) {
        auto [ta, ea] = typecheck_e(ctx, t->b);
        EffCtx inner = ctx;
        inner.emplace_back(fn->name, ta);
        auto [t2, e2] = typecheck_e(inner, fn->a);
        return {t2, compose(ea, e2)};
      }
      auto [tf, ef] = typecheck_e(ctx, fn);
      if (tf->kind != EffType::Kind::Fun) throw TypeError("applying a non-function");
      auto [ta, ea] = typecheck_e(ctx, t->b);
      if (!subtype_e(ta, tf->param)) throw TypeError("argument type mismatch");
      return {tf->result, compose(compose(ef, ea), tf->latent)};
    }
    case TermNode::Kind::Ref: {
      auto [ti, ei] = typecheck_e(ctx, t->a);
      (void)ei;
      if (ti->kind != EffType::Kind::Bool) throw TypeError("ref initializer must be Bool");
      return {eff_ref(), Mark::Top};
    }
    case TermNode::Kind::Get: {
      auto [ti, ei] = typecheck_e(ctx, t->a);
      (void)ei;
      if (ti->kind != EffType::Kind::Ref) throw TypeError("dereferencing a non-Ref");
      return {eff_bool(), Mark::Top};
    }
    case TermNode::Kind::Put: {
      auto [t1, e1] = typecheck_e(ctx, t->a);
      auto [t2, e2] = typecheck_e(ctx, t->b);
      (void)e1; (void)e2;
      if (t1->kind != EffType::Kind::Ref) throw TypeError("assigning to a non-Ref");
      if (t2->kind != EffType::Kind::Bool) throw TypeError("stored value must be Bool");
      return {eff_bool(), Mark::Top};
    }
    case TermNode::Kind::Bin: {
      auto [t1, e1] = typecheck_e(ctx, t->a);
      auto [t2, e2] = typecheck_e(ctx, t->b);
      if (t1->kind != EffType::Kind::Bool || t2->kind != EffType::Kind::Bool)
        throw TypeError("boolean operator on non-Bool");
      return {eff_bool(), compose(e1, e2)};
    }
    case TermNode::Kind::Hole:
      throw TypeError("hole outside a context");
  }
  throw TypeError("bad term");
}

inline bool is_pure_e(const EffCtx& ctx, const Term& t) {
  return typecheck_e(ctx, t).second == Mark::Bot;
}

}  // namespace purelab
