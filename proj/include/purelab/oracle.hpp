#pragma once

#include <map>
#include <string>
#include <vector>

#include "purelab/context.hpp"
#include "purelab/eval.hpp"
#include "purelab/sys_ability.hpp"
#include "purelab/sys_ae.hpp"
#include "purelab/sys_effect.hpp"

namespace purelab {

// ---- Semantic ground truth: operational equivalence over enumerated store
// ---- configurations, and observational purity over enumerated contexts.

struct Bounds {
  std::size_t max_nodes = 5;
  long fuel = 10000;
  std::size_t store_bound = 8;  // max store configurations per comparison
};

// Instantiate an EnvSpec: bool vars are true, the i-th cell is location i
// holding bit i of `config`.
inline void instantiate(const EnvSpec& env, std::size_t config, Env& out_env, Store& out_store) {
  out_env = nullptr;
  out_store.clear();
  std::size_t cell = 0;
  for (const auto& [x, k] : env.vars) {
    if (k == VarKind::RefCell) {
      out_env = env_bind(out_env, x, loc_v(cell));
      out_store.push_back(bool_v((config >> cell) & 1));
      ++cell;
    } else {
      out_env = env_bind(out_env, x, bool_v(true));
    }
  }
}

inline std::string observe(const Outcome& o) {
  switch (o.tag) {
    case Outcome::Tag::Timeout:
      return "timeout";
    case Outcome::Tag::Err:
      return std::string("err:") + to_string(o.err);
    case Outcome::Tag::Done:
      if (o.value.is_bool()) return o.value.as_bool() ? "done:true" : "done:false";
      return o.value.is_loc() ? "done:loc" : "done:closure";
  }
  return "?";
}

struct OpEquivResult {
  enum class Verdict { Equiv, Distinguished, Inconclusive };
  Verdict verdict = Verdict::Equiv;
  std::size_t config = 0;       // first distinguishing configuration
  std::string left_obs, right_obs;
  bool err_alarm = false;       // both sides erred identically somewhere
  bool saw_timeout = false;
};

// Two Done outcomes agree unless both are Booleans that differ; termination
// behavior (Done vs Timeout) always counts.
inline OpEquivResult op_equiv(const Term& t1, const Term& t2, const EnvSpec& env, long fuel,
                              std::size_t store_bound) {
  OpEquivResult r;
  std::size_t cells = env.cell_count();
  std::size_t configs = cells >= 16 ? store_bound : std::size_t(1) << cells;
  if (configs > store_bound) configs = store_bound;
  if (configs == 0) configs = 1;
  for (std::size_t cfg = 0; cfg < configs; ++cfg) {
    Env e;
    Store s;
    instantiate(env, cfg, e, s);
    Outcome o1 = eval(e, s, t1, fuel);
    instantiate(env, cfg, e, s);
    Outcome o2 = eval(e, s, t2, fuel);
    bool disagree = false;
    if (o1.tag != o2.tag) {
      disagree = true;
    } else if (o1.done()) {
      disagree = o1.value.is_bool() && o2.value.is_bool() && o1.value.as_bool() != o2.value.as_bool();
    } else if (o1.errored()) {
      disagree = o1.err != o2.err;
      if (!disagree) r.err_alarm = true;
    }
    if (o1.timeout() || o2.timeout()) r.saw_timeout = true;
    if (disagree) {
      r.verdict = OpEquivResult::Verdict::Distinguished;
      r.config = cfg;
      r.left_obs = observe(o1);
      r.right_obs = observe(o2);
      return r;
    }
  }
  r.verdict = r.saw_timeout ? OpEquivResult::Verdict::Inconclusive : OpEquivResult::Verdict::Equiv;
  return r;
}

struct PurityVerdict {
  enum class Status { PureUpToBounds, Impure };
  Status status = Status::PureUpToBounds;
  Term witness;                 // distinguishing context, present iff impure
  std::size_t config = 0;
  std::string left_obs, right_obs;
  Bounds bounds;
  std::size_t contexts_checked = 0;
  std::size_t inconclusive = 0;  // contexts whose comparison timed out
  bool pure() const { return status == Status::PureUpToBounds; }
};

// Cached context enumeration, keyed by hole type / environment / size bound.
inline const std::vector<Term>& cached_contexts(const SimplePtr& holeType, const EnvSpec& env,
                                                std::size_t maxNodes) {
  static std::map<std::string, std::vector<Term>> cache;
  std::string key = simple_key(holeType) + "|" + std::to_string(maxNodes) + "|";
  for (const auto& [x, k] : env.vars) key += x + (k == VarKind::RefCell ? ":R;" : ":B;");
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, enumerate_contexts(holeType, env, maxNodes)).first;
  return it->second;
}

// Observational purity: binding the result once must be indistinguishable
// from re-evaluating the term in place, for every enumerated context.
inline PurityVerdict obs_purity(const Term& t, const EnvSpec& env, const Bounds& bounds = {}) {
  PurityVerdict v;
  v.bounds = bounds;
  SimplePtr ty = simple_typeof(scope_of(env), t);  // throws TypeError when ill-typed
  const std::string fresh = "_x";
  Term xvar = var(fresh);
  for (const Term& ctx : cached_contexts(ty, env, bounds.max_nodes)) {
    ++v.contexts_checked;
    Term left = desugar_let(fresh, t, plug(ctx, xvar));
    Term right = plug(ctx, t);
    OpEquivResult r = op_equiv(left, right, env, bounds.fuel, bounds.store_bound);
    if (r.verdict == OpEquivResult::Verdict::Distinguished) {
      v.status = PurityVerdict::Status::Impure;
      v.witness = ctx;
      v.config = r.config;
      v.left_obs = r.left_obs;
      v.right_obs = r.right_obs;
      return v;
    }
    if (r.verdict == OpEquivResult::Verdict::Inconclusive) ++v.inconclusive;
  }
  return v;
}

// Like obs_purity, but terms outside the simply-typed fragment (e.g. a
// self-application that never terminates) are classified by the constant
// contexts alone: `let x = t in true` vs `true`. A fuel-saturated timeout on
// one side only counts as a distinguishing observation.
inline PurityVerdict classify_purity(const Term& t, const EnvSpec& env, const Bounds& bounds = {}) {
  try {
    return obs_purity(t, env, bounds);
  } catch (const TypeError&) {
    PurityVerdict v;
    v.bounds = bounds;
    Term ctx = cst(true);
    ++v.contexts_checked;
    OpEquivResult r = op_equiv(desugar_let("_x", t, ctx), ctx, env, bounds.fuel, bounds.store_bound);
    if (r.verdict != OpEquivResult::Verdict::Equiv) {
      v.status = PurityVerdict::Status::Impure;
      v.witness = ctx;
      v.config = r.config;
      v.left_obs = r.left_obs.empty() ? "timeout" : r.left_obs;
      v.right_obs = r.right_obs.empty() ? "done:true" : r.right_obs;
    }
    return v;
  }
}

// ---- Typing contexts induced by an EnvSpec, one per system. ----

inline EffCtx eff_ctx_of(const EnvSpec& env) {
  EffCtx c;
  for (const auto& [x, k] : env.vars)
    c.emplace_back(x, k == VarKind::RefCell ? eff_ref() : eff_bool());
  return c;
}

inline AbilCtx abil_ctx_of(const EnvSpec& env) {
  AbilCtx c;
  for (const auto& [x, k] : env.vars)
    c.emplace_back(x, k == VarKind::RefCell ? std::make_pair(abil_ref(), Mark::Top)
                                            : std::make_pair(abil_bool(), Mark::Bot));
  return c;
}

inline AECtx ae_ctx_of(const EnvSpec& env) {
  AECtx c;
  for (const auto& [x, k] : env.vars)
    c.emplace_back(x, k == VarKind::RefCell
                          ? std::make_pair(ae_ref(), AEQual{Mark::Top, Mark::Bot})
                          : std::make_pair(ae_bool(), AEQual{Mark::Bot, Mark::Bot}));
  return c;
}

enum class System { Effect, Ability, AE };
inline const char* to_string(System s) {
  switch (s) {
    case System::Effect: return "effect";
    case System::Ability: return "ability";
    case System::AE: return "ae";
  }
  return "?";
}

// Purity according to a chosen system; throws TypeError if ill-typed.
inline bool system_pure(System sys, const EnvSpec& env, const Term& t) {
  switch (sys) {
    case System::Effect: return is_pure_e(eff_ctx_of(env), t);
    case System::Ability: return is_pure_a(abil_ctx_of(env), t);
    case System::AE: return is_pure_ae(ae_ctx_of(env), t);
  }
  return false;
}

// ---- Theorem checks. ----

struct SafetyReport {
  std::size_t total = 0;
  std::size_t pure_checked = 0;  // terms the system marked pure, oracle-checked
  std::size_t violations = 0;
  std::vector<std::string> violating_terms;
};

inline SafetyReport check_effect_safety(System sys, const EnvSpec& env,
                                        const std::vector<Term>& corpus, const Bounds& bounds = {}) {
  SafetyReport rep;
  for (const Term& t : corpus) {
    ++rep.total;
    if (!system_pure(sys, env, t)) continue;
    ++rep.pure_checked;
    PurityVerdict v = obs_purity(t, env, bounds);
    if (!v.pure()) {
      ++rep.violations;
      rep.violating_terms.push_back(print(t));
    }
  }
  return rep;
}

enum class TheoremVerdict { Holds, Fails, PrecondViolation };

inline TheoremVerdict check_reordering(const Term& t1, const Term& t2, BinOp op, System sys,
                                       const EnvSpec& env, long fuel, std::size_t store_bound) {
  Term comp = bin(op, t1, t2);
  switch (sys) {
    case System::Effect:
      if (!is_pure_e(eff_ctx_of(env), comp)) return TheoremVerdict::PrecondViolation;
      break;
    case System::Ability:
      if (!is_pure_a(abil_ctx_of(env), comp)) return TheoremVerdict::PrecondViolation;
      break;
    case System::AE: {
      AECtx ctx = ae_ctx_of(env);
      Mark e1 = typecheck_ae(ctx, t1).eff;
      Mark e2 = typecheck_ae(ctx, t2).eff;
      if (e1 == Mark::Top && e2 == Mark::Top) return TheoremVerdict::PrecondViolation;
      break;
    }
  }
  OpEquivResult r = op_equiv(comp, bin(op, t2, t1), env, fuel, store_bound);
  return r.verdict == OpEquivResult::Verdict::Equiv ? TheoremVerdict::Holds : TheoremVerdict::Fails;
}

// Capture-avoiding substitution t[r/x]; clashing binders are renamed into a
// reserved namespace.
inline Term subst(const Term& t, const std::string& x, const Term& r) {
  static int rename_counter = 0;
  switch (t->kind) {
    case TermNode::Kind::Cst:
    case TermNode::Kind::Hole:
      return t;
    case TermNode::Kind::Var:
      return t->name == x ? r : t;
    case TermNode::Kind::Abs: {
      if (t->name == x) return t;
      if (free_vars(r).count(t->name)) {
        std::string fresh = "_r" + std::to_string(rename_counter++);
        Term renamed_body = subst(t->a, t->name, var(fresh));
        return abs(fresh, t->annot, subst(renamed_body, x, r));
      }
      return abs(t->name, t->annot, subst(t->a, x, r));
    }
    default: {
      TermNode n = *t;
      if (n.a) n.a = subst(n.a, x, r);
      if (n.b) n.b = subst(n.b, x, r);
      return mk(std::move(n));
    }
  }
}

inline TheoremVerdict check_beta(const std::string& x, const Term& t2, const Term& t1,
                                 const EnvSpec& env, const Bounds& bounds = {}) {
  AEJudgment j1 = typecheck_ae(ae_ctx_of(env), t1);
  if (j1.eff != Mark::Bot || j1.qual.fresh != Mark::Bot) return TheoremVerdict::PrecondViolation;
  Term lhs = app(abs(x, nullptr, t2), t1);
  Term rhs = subst(t2, x, t1);
  OpEquivResult r = op_equiv(lhs, rhs, env, bounds.fuel, bounds.store_bound);
  return r.verdict == OpEquivResult::Verdict::Equiv ? TheoremVerdict::Holds : TheoremVerdict::Fails;
}

}  // namespace purelab
