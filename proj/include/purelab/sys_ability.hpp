#pragma once

#include <utility>
#include <vector>

#include "purelab/sys_effect.hpp"  // TypeError
#include "purelab/syntax.hpp"

namespace purelab {

// ---- Ability system: bindings and function positions carry an ability. ----

struct AbilType;
using AbilTypePtr = std::shared_ptr<const AbilType>;

struct AbilType {
  enum class Kind { Bool, Ref, Fun };
  Kind kind = Kind::Bool;
  AbilTypePtr param, result;
  Mark param_abil = Mark::Bot;
  Mark result_abil = Mark::Bot;
};

inline AbilTypePtr abil_bool() {
  static const AbilTypePtr t = std::make_shared<AbilType>(AbilType{AbilType::Kind::Bool});
  return t;
}
inline AbilTypePtr abil_ref() {
  static const AbilTypePtr t = std::make_shared<AbilType>(AbilType{AbilType::Kind::Ref});
  return t;
}
inline AbilTypePtr abil_fun(AbilTypePtr param, Mark pa, AbilTypePtr result, Mark ra) {
  return std::make_shared<AbilType>(AbilType{AbilType::Kind::Fun, std::move(param), std::move(result), pa, ra});
}

// binding = (type, ability)
using AbilCtx = std::vector<std::pair<std::string, std::pair<AbilTypePtr, Mark>>>;

inline bool abiltype_eq(const AbilTypePtr& a, const AbilTypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != AbilType::Kind::Fun) return true;
  return a->param_abil == b->param_abil && a->result_abil == b->result_abil &&
         abiltype_eq(a->param, b->param) && abiltype_eq(a->result, b->result);
}

// Contravariant in the (type, ability) argument pair, covariant in the result pair.
inline bool subtype_a(const AbilTypePtr& a, const AbilTypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != AbilType::Kind::Fun) return true;
  return subtype_a(b->param, a->param) && leq(b->param_abil, a->param_abil) &&
         subtype_a(a->result, b->result) && leq(a->result_abil, b->result_abil);
}

inline std::string print_abiltype(const AbilTypePtr& t) {
  switch (t->kind) {
    case AbilType::Kind::Bool: return "Bool";
    case AbilType::Kind::Ref: return "Ref";
    case AbilType::Kind::Fun:
      return "(" + print_abiltype(t->param) + "^" + to_string(t->param_abil) + " -> " +
             print_abiltype(t->result) + "^" + to_string(t->result_abil) + ")";
  }
  return "?";
}

// Interpret a surface annotation as a (type, ability) binding. A qualifier on
// a Ref binder is the binding's ability; missing qualifiers default to bot.
inline std::pair<AbilTypePtr, Mark> abil_of_annot(const STypePtr& s) {
  auto mark_of_annot = [](const std::optional<QualAnnot>& q, const char* where) {
    if (!q) return Mark::Bot;
    if (!std::holds_alternative<Mark>(*q))
      throw TypeError(std::string("ability system: pair qualifier not allowed on ") + where);
    return std::get<Mark>(*q);
  };
  switch (s->kind) {
    case SType::Kind::Bool:
      return {abil_bool(), Mark::Bot};
    case SType::Kind::Ref:
      return {abil_ref(), mark_of_annot(s->qual, "Ref")};
    case SType::Kind::Fun: {
      if (s->latent) throw TypeError("ability system: function annotation takes no latent effect");
      auto [tp, ap] = abil_of_annot(s->param);
      auto [tr, ar] = abil_of_annot(s->result);
      Mark pa = lub(ap, mark_of_annot(s->param_qual, "function argument"));
      Mark ra = lub(ar, mark_of_annot(s->result_qual, "function result"));
      return {abil_fun(tp, pa, tr, ra), Mark::Bot};
    }
  }
  throw TypeError("bad annotation");
}

inline const std::pair<AbilTypePtr, Mark>* ctx_lookup(const AbilCtx& ctx, const std::string& x) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

inline Mark ambient(const AbilCtx& ctx, const std::set<std::string>& xs) {
  Mark m = Mark::Bot;
  for (const auto& x : xs) {
    const auto* b = ctx_lookup(ctx, x);
    if (!b) throw TypeError("unbound variable: " + x);
    m = lub(m, b->second);
  }
  return m;
}

inline std::pair<AbilTypePtr, Mark> typecheck_a(const AbilCtx& ctx, const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
      return {abil_bool(), Mark::Bot};
    case TermNode::Kind::Var: {
      const auto* b = ctx_lookup(ctx, t->name);
      if (!b) throw TypeError("unbound variable: " + t->name);
      return *b;
    }
    case TermNode::Kind::Abs: {
      if (!t->annot) throw TypeError("ability system: unannotated abstraction");
      auto [t1, a1] = abil_of_annot(t->annot);
      AbilCtx inner = ctx;
      inner.emplace_back(t->name, std::make_pair(t1, a1));
      auto [t2, a2] = typecheck_a(inner, t->a);
      // The function is a resource iff it captures one.
      auto captured = free_vars(t->a);
      captured.erase(t->name);
      Mark af = ambient(ctx, captured);
      return {abil_fun(t1, a1, t2, a2), af};
    }
    case TermNode::Kind::App: {
      const Term& fn = t->a;
      if (fn->kind == TermNode::Kind::Abs && !fn->annot) {  // let
        auto arg = typecheck_a(ctx, t->b);
        AbilCtx inner = ctx;
        inner.emplace_back(fn->name, arg);
        return typecheck_a(inner, fn->a);
      }
      auto [tf, af] = typecheck_a(ctx, fn);
      (void)af;
      if (tf->kind != AbilType::Kind::Fun) throw TypeError("applying a non-function");
      auto [ta, aa] = typecheck_a(ctx, t->b);
      if (!subtype_a(ta, tf->param) || !leq(aa, tf->param_abil))
        throw TypeError("argument mismatch (type or ability)");
      return {tf->result, tf->result_abil};
    }
    case TermNode::Kind::Ref: {
      auto [ti, ai] = typecheck_a(ctx, t->a);
      (void)ai;
      if (ti->kind != AbilType::Kind::Bool) throw TypeError("ref initializer must be Bool");
      return {abil_ref(), Mark::Top};
    }
    case TermNode::Kind::Get: {
      auto [ti, ai] = typecheck_a(ctx, t->a);
      (void)ai;
      if (ti->kind != AbilType::Kind::Ref) throw TypeError("dereferencing a non-Ref");
      return {abil_bool(), Mark::Bot};
    }
    case TermNode::Kind::Put: {
      auto [t1, a1] = typecheck_a(ctx, t->a);
      auto [t2, a2] = typecheck_a(ctx, t->b);
      (void)a1; (void)a2;
      if (t1->kind != AbilType::Kind::Ref) throw TypeError("assigning to a non-Ref");
      if (t2->kind != AbilType::Kind::Bool) throw TypeError("stored value must be Bool");
      return {abil_bool(), Mark::Bot};
    }
    case TermNode::Kind::Bin: {
      auto [t1, a1] = typecheck_a(ctx, t->a);
      auto [t2, a2] = typecheck_a(ctx, t->b);
      (void)a1; (void)a2;
      if (t1->kind != AbilType::Kind::Bool || t2->kind != AbilType::Kind::Bool)
        throw TypeError("boolean operator on non-Bool");
      return {abil_bool(), Mark::Bot};
    }
    case TermNode::Kind::Hole:
      throw TypeError("hole outside a context");
  }
  throw TypeError("bad term");
}

// Augmented judgment: result ability bot and ambient ability bot.
inline bool is_pure_a(const AbilCtx& ctx, const Term& t) {
  auto [ty, a] = typecheck_a(ctx, t);
  (void)ty;
  return a == Mark::Bot && ambient(ctx, free_vars(t)) == Mark::Bot;
}

}  // namespace purelab
