#pragma once

#include <string>

#include "purelab/sys_ability.hpp"
#include "purelab/sys_ae.hpp"
#include "purelab/sys_effect.hpp"

namespace purelab {

// ---- Type/environment translations into the combined system, and the
// ---- executable soundness checks for both encoding theorems.

inline AETypePtr encode_type_e(const EffTypePtr& t) {
  switch (t->kind) {
    case EffType::Kind::Bool: return ae_bool();
    case EffType::Kind::Ref: return ae_ref();
    case EffType::Kind::Fun: {
      AEQual top{Mark::Top, Mark::Top};
      return ae_fun(encode_type_e(t->param), top, encode_type_e(t->result), top, t->latent);
    }
  }
  return ae_bool();
}

inline AETypePtr encode_type_a(const AbilTypePtr& t) {
  switch (t->kind) {
    case AbilType::Kind::Bool: return ae_bool();
    case AbilType::Kind::Ref: return ae_ref();
    case AbilType::Kind::Fun:
      return ae_fun(encode_type_a(t->param), {t->param_abil, t->param_abil},
                    encode_type_a(t->result), {t->result_abil, t->result_abil}, Mark::Top);
  }
  return ae_bool();
}

inline AECtx encode_env(const EffCtx& src) {
  AECtx out;
  for (const auto& [x, ty] : src)
    out.emplace_back(x, std::make_pair(encode_type_e(ty), AEQual{Mark::Top, Mark::Top}));
  return out;
}

inline AECtx encode_env(const AbilCtx& src) {
  AECtx out;
  for (const auto& [x, b] : src)
    out.emplace_back(x, std::make_pair(encode_type_a(b.first), AEQual{b.second, b.second}));
  return out;
}

namespace detail {

// Rewrite every annotated Abs binder through the type translation so the
// combined checker sees translated annotations.
inline void collect_overrides_e(const Term& t, AEAnnotOverrides& out) {
  if (t->kind == TermNode::Kind::Abs && t->annot) {
    EffTypePtr src = efftype_of_annot(t->annot);
    out.emplace(t.get(), std::make_pair(encode_type_e(src), AEQual{Mark::Top, Mark::Top}));
  }
  if (t->a) collect_overrides_e(t->a, out);
  if (t->b) collect_overrides_e(t->b, out);
}

inline void collect_overrides_a(const Term& t, AEAnnotOverrides& out) {
  if (t->kind == TermNode::Kind::Abs && t->annot) {
    auto [src, abil] = abil_of_annot(t->annot);
    out.emplace(t.get(), std::make_pair(encode_type_a(src), AEQual{abil, abil}));
  }
  if (t->a) collect_overrides_a(t->a, out);
  if (t->b) collect_overrides_a(t->b, out);
}

}  // namespace detail

enum class SourceSystem { Effect, Ability };

struct EncodingReport {
  SourceSystem source;
  Term term;
  bool source_ok = false;
  std::string error;               // when the source rejects the term
  std::string source_judgment;     // pretty-printed source judgment
  AEJudgment synthesized;          // minimal target judgment
  AETypePtr target_type;           // theorem-prescribed target
  AEQual target_qual;
  Mark target_eff = Mark::Bot;
  bool holds = false;              // synthesized <= prescribed
};

inline EncodingReport check_encoding_e(const EffCtx& ctx, const Term& t) {
  EncodingReport r;
  r.source = SourceSystem::Effect;
  r.term = t;
  EffTypePtr src_ty;
  Mark src_eff;
  try {
    std::tie(src_ty, src_eff) = typecheck_e(ctx, t);
  } catch (const TypeError& e) {
    r.error = e.what();
    return r;
  }
  r.source_ok = true;
  r.source_judgment = print_efftype(src_ty) + " ; " + to_string(src_eff);
  r.target_type = encode_type_e(src_ty);
  r.target_qual = {Mark::Top, Mark::Top};
  r.target_eff = src_eff;
  AEAnnotOverrides ov;
  detail::collect_overrides_e(t, ov);
  try {
    r.synthesized = typecheck_ae(encode_env(ctx), t, &ov);
  } catch (const TypeError& e) {
    r.error = e.what();
    return r;
  }
  r.holds = subtype_ae(r.synthesized.type, r.target_type) &&
            sub_qual(r.synthesized.qual, r.target_qual) && sub_eff(r.synthesized.eff, r.target_eff);
  return r;
}

inline EncodingReport check_encoding_a(const AbilCtx& ctx, const Term& t) {
  EncodingReport r;
  r.source = SourceSystem::Ability;
  r.term = t;
  AbilTypePtr src_ty;
  Mark src_abil;
  try {
    std::tie(src_ty, src_abil) = typecheck_a(ctx, t);
  } catch (const TypeError& e) {
    r.error = e.what();
    return r;
  }
  r.source_ok = true;
  r.source_judgment = print_abiltype(src_ty) + " ; " + to_string(src_abil);
  r.target_type = encode_type_a(src_ty);
  r.target_qual = {src_abil, src_abil};
  r.target_eff = Mark::Top;
  AEAnnotOverrides ov;
  detail::collect_overrides_a(t, ov);
  try {
    r.synthesized = typecheck_ae(encode_env(ctx), t, &ov);
  } catch (const TypeError& e) {
    r.error = e.what();
    return r;
  }
  r.holds = subtype_ae(r.synthesized.type, r.target_type) &&
            sub_qual(r.synthesized.qual, r.target_qual) && sub_eff(r.synthesized.eff, r.target_eff);
  return r;
}

}  // namespace purelab
