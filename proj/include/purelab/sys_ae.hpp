#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "purelab/sys_effect.hpp"  // TypeError, Mark helpers
#include "purelab/syntax.hpp"

namespace purelab {

// ---- Combined ability-and-effect system: <fresh,stored> pairs + effect. ----

struct AEQual {
  Mark fresh = Mark::Bot;
  Mark stored = Mark::Bot;
  friend bool operator==(const AEQual&, const AEQual&) = default;
};

inline AEQual qual_bot() { return {Mark::Bot, Mark::Bot}; }
inline AEQual qlub(AEQual a, AEQual b) { return {lub(a.fresh, b.fresh), lub(a.stored, b.stored)}; }
inline bool sub_qual(AEQual a, AEQual b) { return leq(a.fresh, b.fresh) && leq(a.stored, b.stored); }
inline bool sub_eff(Mark a, Mark b) { return leq(a, b); }
inline std::string print_aequal(AEQual a) {
  return std::string("<") + to_string(a.fresh) + "," + to_string(a.stored) + ">";
}

struct AEType;
using AETypePtr = std::shared_ptr<const AEType>;

struct AEType {
  enum class Kind { Bool, Ref, Fun };
  Kind kind = Kind::Bool;
  AETypePtr param, result;
  AEQual param_qual, result_qual;
  Mark latent = Mark::Bot;
};

inline AETypePtr ae_bool() {
  static const AETypePtr t = std::make_shared<AEType>(AEType{AEType::Kind::Bool});
  return t;
}
inline AETypePtr ae_ref() {
  static const AETypePtr t = std::make_shared<AEType>(AEType{AEType::Kind::Ref});
  return t;
}
inline AETypePtr ae_fun(AETypePtr param, AEQual pq, AETypePtr result, AEQual rq, Mark latent) {
  return std::make_shared<AEType>(
      AEType{AEType::Kind::Fun, std::move(param), std::move(result), pq, rq, latent});
}

using AECtx = std::vector<std::pair<std::string, std::pair<AETypePtr, AEQual>>>;

inline bool aetype_eq(const AETypePtr& a, const AETypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != AEType::Kind::Fun) return true;
  return a->param_qual == b->param_qual && a->result_qual == b->result_qual &&
         a->latent == b->latent && aetype_eq(a->param, b->param) && aetype_eq(a->result, b->result);
}

// Contravariant in the (param, qualifier) pair, covariant in the result pair
// and the latent effect.
inline bool subtype_ae(const AETypePtr& a, const AETypePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind != AEType::Kind::Fun) return true;
  return subtype_ae(b->param, a->param) && sub_qual(b->param_qual, a->param_qual) &&
         subtype_ae(a->result, b->result) && sub_qual(a->result_qual, b->result_qual) &&
         sub_eff(a->latent, b->latent);
}

inline std::string print_aetype(const AETypePtr& t) {
  switch (t->kind) {
    case AEType::Kind::Bool: return "Bool";
    case AEType::Kind::Ref: return "Ref";
    case AEType::Kind::Fun:
      return "(" + print_aetype(t->param) + print_aequal(t->param_qual) + " -> [" +
             to_string(t->latent) + "] " + print_aetype(t->result) + print_aequal(t->result_qual) +
             ")";
  }
  return "?";
}

// The two composite qualifier formulas; top/bot conflated with truth/falsity,
// conjunction binding tighter than disjunction.
inline AEQual abs_qualifier(AEQual a_f, AEQual a2, Mark e2) {
  bool stored = (truthy(a_f.fresh) || truthy(a_f.stored)) && (truthy(a2.stored) || truthy(e2));
  return {Mark::Bot, mark_of(stored)};
}

inline std::pair<AEQual, Mark> app_qualifier(AEQual a_f, Mark e_f, AEQual a1, Mark e1, AEQual a2,
                                             Mark e2) {
  bool reach = truthy(a_f.stored) || truthy(a1.stored);
  bool fresh = truthy(a2.fresh) || (truthy(a2.stored) && (truthy(a_f.fresh) || truthy(a1.fresh)));
  bool stored = truthy(a2.stored) && reach;
  bool eff = truthy(e_f) || truthy(e1) || (truthy(e2) && reach);
  return {{mark_of(fresh), mark_of(stored)}, mark_of(eff)};
}

// Interpret a surface annotation as a (type, qualifier) binding. A pair
// qualifier on a Ref binder is the binding's qualifier; missing defaults to
// <bot,bot>.
inline std::pair<AETypePtr, AEQual> ae_of_annot(const STypePtr& s) {
  auto pair_of = [](const std::optional<QualAnnot>& q, const char* where) -> AEQual {
    if (!q) return qual_bot();
    if (!std::holds_alternative<PairQual>(*q))
      throw TypeError(std::string("combined system: single qualifier not allowed on ") + where);
    const auto& p = std::get<PairQual>(*q);
    return {p.fresh, p.stored};
  };
  switch (s->kind) {
    case SType::Kind::Bool:
      return {ae_bool(), qual_bot()};
    case SType::Kind::Ref:
      return {ae_ref(), pair_of(s->qual, "Ref")};
    case SType::Kind::Fun: {
      if (!s->latent) throw TypeError("combined system: function annotation needs a latent effect");
      auto [tp, qp] = ae_of_annot(s->param);
      auto [tr, qr] = ae_of_annot(s->result);
      AEQual pq = qlub(qp, pair_of(s->param_qual, "function argument"));
      AEQual rq = qlub(qr, pair_of(s->result_qual, "function result"));
      return {ae_fun(tp, pq, tr, rq, *s->latent), qual_bot()};
    }
  }
  throw TypeError("bad annotation");
}

inline const std::pair<AETypePtr, AEQual>* ctx_lookup(const AECtx& ctx, const std::string& x) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

inline AEQual ambient_ae(const AECtx& ctx, const std::set<std::string>& xs) {
  AEQual q = qual_bot();
  for (const auto& x : xs) {
    const auto* b = ctx_lookup(ctx, x);
    if (!b) throw TypeError("unbound variable: " + x);
    q = qlub(q, b->second);
  }
  return q;
}

struct AEJudgment {
  AETypePtr type;
  AEQual qual;
  Mark eff;
};

// Optional per-Abs-node (type, qualifier) overrides let the encodings reuse
// this checker with translated annotations.
using AEAnnotOverrides = std::unordered_map<const TermNode*, std::pair<AETypePtr, AEQual>>;

inline AEJudgment typecheck_ae(const AECtx& ctx, const Term& t,
                               const AEAnnotOverrides* overrides = nullptr) {
  auto rec = [&](const AECtx& c, const Term& s) { return typecheck_ae(c, s, overrides); };
  switch (t->kind) {
    case TermNode::Kind::Cst:
      return {ae_bool(), qual_bot(), Mark::Bot};
    case TermNode::Kind::Var: {
      const auto* b = ctx_lookup(ctx, t->name);
      if (!b) throw TypeError("unbound variable: " + t->name);
      // Variables can never be fresh: fold fresh into stored.
      AEQual a = b->second;
      return {b->first, {Mark::Bot, lub(a.fresh, a.stored)}, Mark::Bot};
    }
    case TermNode::Kind::Abs: {
      std::pair<AETypePtr, AEQual> binding;
      if (overrides && overrides->count(t.get())) {
        binding = overrides->at(t.get());
      } else {
        if (!t->annot) throw TypeError("combined system: unannotated abstraction");
        binding = ae_of_annot(t->annot);
      }
      AECtx inner = ctx;
      inner.emplace_back(t->name, binding);
      AEJudgment body = rec(inner, t->a);
      auto captured = free_vars(t->a);
      captured.erase(t->name);
      AEQual a_f = ambient_ae(ctx, captured);
      return {ae_fun(binding.first, binding.second, body.type, body.qual, body.eff),
              abs_qualifier(a_f, body.qual, body.eff), Mark::Bot};
    }
    case TermNode::Kind::App: {
      const Term& fn = t->a;
      bool overridden = overrides && overrides->count(fn.get());
      if (fn->kind == TermNode::Kind::Abs && !fn->annot && !overridden) {  // let
        AEJudgment arg = rec(ctx, t->b);
        AECtx inner = ctx;
        inner.emplace_back(fn->name, std::make_pair(arg.type, arg.qual));
        AEJudgment body = rec(inner, fn->a);
        auto captured = free_vars(fn->a);
        captured.erase(fn->name);
        AEQual a_f = abs_qualifier(ambient_ae(ctx, captured), body.qual, body.eff);
        auto [q, e] = app_qualifier(a_f, Mark::Bot, arg.qual, arg.eff, body.qual, body.eff);
        return {body.type, q, e};
      }
      AEJudgment f = rec(ctx, fn);
      if (f.type->kind != AEType::Kind::Fun) throw TypeError("applying a non-function");
      AEJudgment arg = rec(ctx, t->b);
      if (!subtype_ae(arg.type, f.type->param) || !sub_qual(arg.qual, f.type->param_qual))
        throw TypeError("argument mismatch (type or qualifier)");
      auto [q, e] = app_qualifier(f.qual, f.eff, f.type->param_qual, arg.eff,
                                  f.type->result_qual, f.type->latent);
      return {f.type->result, q, e};
    }
    case TermNode::Kind::Ref: {
      AEJudgment init = rec(ctx, t->a);
      if (init.type->kind != AEType::Kind::Bool) throw TypeError("ref initializer must be Bool");
      return {ae_ref(), {Mark::Top, Mark::Bot}, init.eff};
    }
    case TermNode::Kind::Get: {
      AEJudgment tgt = rec(ctx, t->a);
      if (tgt.type->kind != AEType::Kind::Ref) throw TypeError("dereferencing a non-Ref");
      return {ae_bool(), qual_bot(), compose(tgt.eff, tgt.qual.stored)};
    }
    case TermNode::Kind::Put: {
      AEJudgment tgt = rec(ctx, t->a);
      AEJudgment val = rec(ctx, t->b);
      if (tgt.type->kind != AEType::Kind::Ref) throw TypeError("assigning to a non-Ref");
      if (val.type->kind != AEType::Kind::Bool) throw TypeError("stored value must be Bool");
      return {ae_bool(), qual_bot(), compose(compose(tgt.eff, val.eff), tgt.qual.stored)};
    }
    case TermNode::Kind::Bin: {
      AEJudgment l = rec(ctx, t->a);
      AEJudgment r = rec(ctx, t->b);
      if (l.type->kind != AEType::Kind::Bool || r.type->kind != AEType::Kind::Bool)
        throw TypeError("boolean operator on non-Bool");
      return {ae_bool(), qual_bot(), compose(l.eff, r.eff)};
    }
    case TermNode::Kind::Hole:
      throw TypeError("hole outside a context");
  }
  throw TypeError("bad term");
}

// Impure when evaluation has observable effects or the result reaches fresh
// locations. `strict` additionally demands an empty ambient ability.
inline bool is_pure_ae(const AECtx& ctx, const Term& t, bool strict = false) {
  AEJudgment j = typecheck_ae(ctx, t);
  bool ok = j.eff == Mark::Bot && j.qual.fresh == Mark::Bot;
  if (strict && ok && j.qual.stored == Mark::Top)
    ok = ambient_ae(ctx, free_vars(t)) == qual_bot();
  return ok;
}

inline std::string print_ae_judgment(const AEJudgment& j) {
  return print_aetype(j.type) + " ; " + print_aequal(j.qual) + " ; " + to_string(j.eff);
}

}  // namespace purelab
