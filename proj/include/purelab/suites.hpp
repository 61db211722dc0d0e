#pragma once

#include <string>
#include <vector>

#include "purelab/encode.hpp"
#include "purelab/gen.hpp"
#include "purelab/oracle.hpp"

namespace purelab {

struct SuiteResult {
  std::string name;
  unsigned seed = 0;
  std::size_t checked = 0;   // items that met the suite's precondition
  std::size_t skipped = 0;   // precondition violations / inconclusive items
  std::size_t violations = 0;
  std::vector<std::string> failures;
  bool ok() const { return violations == 0; }
};

// Every syntactically pure term must be observationally pure within bounds.
inline SuiteResult run_safety_suite(System sys, const EnvSpec& env, unsigned seed,
                                    std::size_t count, const Bounds& bounds = {},
                                    const std::vector<Term>& extra = {}) {
  SuiteResult r{std::string("safety-") + to_string(sys), seed};
  TermGen gen(seed);
  std::vector<Term> corpus = gen.well_typed(sys, env, count);
  corpus.insert(corpus.end(), extra.begin(), extra.end());
  for (const Term& t : corpus) {
    bool pure;
    try {
      pure = system_pure(sys, env, t);
    } catch (const TypeError&) {
      ++r.skipped;  // extra corpus entries need not typecheck in every system
      continue;
    }
    if (!pure) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    PurityVerdict v = obs_purity(t, env, bounds);
    if (!v.pure()) {
      ++r.violations;
      r.failures.push_back(print(t) + "  ~>  " + print(v.witness));
    }
  }
  return r;
}

// Every well-typed source term's translation must typecheck at (or below) the
// prescribed target type, qualifier, and effect.
inline SuiteResult run_encode_suite(SourceSystem src, const EnvSpec& env, unsigned seed,
                                    std::size_t count) {
  SuiteResult r{std::string("encode-") + (src == SourceSystem::Effect ? "effect" : "ability"),
                seed};
  TermGen gen(seed);
  System sys = src == SourceSystem::Effect ? System::Effect : System::Ability;
  for (const Term& t : gen.well_typed(sys, env, count)) {
    ++r.checked;
    EncodingReport rep = src == SourceSystem::Effect ? check_encoding_e(eff_ctx_of(env), t)
                                                     : check_encoding_a(abil_ctx_of(env), t);
    if (!rep.source_ok || !rep.holds) {
      ++r.violations;
      r.failures.push_back(print(t) + (rep.error.empty() ? "" : "  !  " + rep.error));
    }
  }
  return r;
}

// Operands that satisfy a system's purity premise commute under && and ||.
inline SuiteResult run_reorder_suite(System sys, const EnvSpec& env, unsigned seed,
                                     std::size_t need_pairs, long fuel = 10000,
                                     std::size_t store_bound = 8) {
  SuiteResult r{std::string("reorder-") + to_string(sys), seed};
  TermGen gen(seed);
  std::vector<Term> pool = gen.well_typed(sys, env, need_pairs * 4);
  std::mt19937& rng = gen.engine();
  std::size_t attempts = 0, budget = need_pairs * 400;
  while (r.checked < need_pairs && ++attempts < budget && pool.size() >= 2) {
    const Term& t1 = pool[rng() % pool.size()];
    const Term& t2 = pool[rng() % pool.size()];
    BinOp op = rng() % 2 ? BinOp::And : BinOp::Or;
    TheoremVerdict v;
    try {
      v = check_reordering(t1, t2, op, sys, env, fuel, store_bound);
    } catch (const TypeError&) {
      ++r.skipped;  // the composite may fall outside the system
      continue;
    }
    if (v == TheoremVerdict::PrecondViolation) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    if (v == TheoremVerdict::Fails) {
      ++r.violations;
      r.failures.push_back(print(t1) + "  <~>  " + print(t2));
    }
  }
  return r;
}

// Call-by-value beta: (fun (x) => t2) t1  ==  t2[t1/x] whenever t1 is
// effect-free and allocation-free.
inline SuiteResult run_beta_suite(const EnvSpec& env, unsigned seed, std::size_t need,
                                  const Bounds& bounds = {}) {
  SuiteResult r{"beta", seed};
  TermGen gen(seed);
  // candidate bound terms: pure, non-fresh, of ground simple type
  std::vector<std::pair<Term, VarKind>> bounds_pool;
  for (const Term& t : gen.well_typed(System::AE, env, need * 2)) {
    AEJudgment j = typecheck_ae(ae_ctx_of(env), t);
    if (j.eff != Mark::Bot || j.qual.fresh != Mark::Bot) continue;
    SimplePtr ty = simple_typeof(scope_of(env), t);
    if (ty->kind == SimpleType::Kind::Fun) continue;
    bounds_pool.emplace_back(t, ty->kind == SimpleType::Kind::Ref ? VarKind::RefCell
                                                                  : VarKind::BoolVal);
  }
  std::mt19937& rng = gen.engine();
  std::size_t attempts = 0, budget = need * 400;
  while (r.checked < need && ++attempts < budget && !bounds_pool.empty()) {
    const auto& [t1, kind] = bounds_pool[rng() % bounds_pool.size()];
    EnvSpec inner = env;
    inner.vars.emplace_back("x", kind);
    Term t2 = gen.raw(System::AE, inner, 3);
    if (term_size(t2) > 8) continue;
    try {
      simple_typeof(scope_of(inner), t2);
    } catch (const TypeError&) {
      continue;
    }
    TheoremVerdict v = check_beta("x", t2, t1, env, bounds);
    if (v == TheoremVerdict::PrecondViolation) {
      ++r.skipped;
      continue;
    }
    ++r.checked;
    if (v == TheoremVerdict::Fails) {
      ++r.violations;
      r.failures.push_back("x := " + print(t1) + "  in  " + print(t2));
    }
  }
  return r;
}

// Evaluator algebra over closed simply-typed terms: deterministic, monotone
// in fuel, and free of dynamic errors.
inline SuiteResult run_eval_algebra_suite(unsigned seed, std::size_t samples, long fuel = 1000) {
  SuiteResult r{"eval-algebra", seed};
  TermGen gen(seed);
  for (const Term& t : gen.closed_simply_typed(samples)) {
    ++r.checked;
    Outcome o1 = eval(nullptr, {}, t, fuel);
    Outcome o2 = eval(nullptr, {}, t, fuel);
    bool bad = o1.tag == Outcome::Tag::Err;
    bad = bad || observe(o1) != observe(o2) || o1.store.size() != o2.store.size();
    if (o1.tag == Outcome::Tag::Done) {
      Outcome o3 = eval(nullptr, {}, t, fuel * 2);
      bad = bad || observe(o3) != observe(o1);
    }
    if (bad) {
      ++r.violations;
      r.failures.push_back(print(t) + "  =>  " + observe(o1));
    }
  }
  return r;
}

// Exhaustive laws of the two-point lattice and the qualifier pairs, plus
// reflexivity/transitivity of all three subtype relations on generated types.
inline SuiteResult run_algebra_suite(unsigned seed = 0) {
  SuiteResult r{"algebra", seed};
  auto law = [&](bool cond, const std::string& what) {
    ++r.checked;
    if (!cond) {
      ++r.violations;
      r.failures.push_back(what);
    }
  };
  const Mark ms[2] = {Mark::Bot, Mark::Top};
  for (Mark a : ms)
    for (Mark b : ms) {
      law(lub(a, b) == lub(b, a), "lub commutative");
      law(lub(a, lub(a, b)) == lub(a, b), "lub idempotent-absorb");
      law(leq(a, b) == (lub(a, b) == b), "leq agrees with lub");
      for (Mark c : ms) law(lub(lub(a, b), c) == lub(a, lub(b, c)), "lub associative");
    }
  for (Mark a : ms) {
    law(lub(Mark::Bot, a) == a, "bot is identity");
    law(lub(Mark::Top, a) == Mark::Top, "top is absorbing");
  }
  std::vector<AEQual> quals;
  for (Mark f : ms)
    for (Mark s : ms) quals.push_back({f, s});
  for (const AEQual& a : quals)
    for (const AEQual& b : quals) {
      law(qlub(a, b) == qlub(b, a), "qlub commutative");
      law(sub_qual(a, b) == (qlub(a, b) == b), "sub_qual agrees with qlub");
      for (const AEQual& c : quals)
        law(qlub(qlub(a, b), c) == qlub(a, qlub(b, c)), "qlub associative");
    }
  // subtyping laws, one relation per system
  std::mt19937 rng(seed + 1);
  auto m = [&] { return rng() % 2 ? Mark::Top : Mark::Bot; };
  std::function<EffTypePtr(int)> ge = [&](int d) -> EffTypePtr {
    switch (rng() % (d <= 0 ? 2 : 3)) {
      case 0: return eff_bool();
      case 1: return eff_ref();
      default: return eff_fun(ge(d - 1), ge(d - 1), m());
    }
  };
  std::function<AbilTypePtr(int)> ga = [&](int d) -> AbilTypePtr {
    switch (rng() % (d <= 0 ? 2 : 3)) {
      case 0: return abil_bool();
      case 1: return abil_ref();
      default: return abil_fun(ga(d - 1), m(), ga(d - 1), m());
    }
  };
  std::function<AETypePtr(int)> gq = [&](int d) -> AETypePtr {
    switch (rng() % (d <= 0 ? 2 : 3)) {
      case 0: return ae_bool();
      case 1: return ae_ref();
      default: return ae_fun(gq(d - 1), {m(), m()}, gq(d - 1), {m(), m()}, m());
    }
  };
  auto check_rel = [&](auto rel, auto types, const char* what) {
    for (const auto& t : types) law(rel(t, t), std::string(what) + " reflexive");
    for (const auto& a : types)
      for (const auto& b : types)
        for (const auto& c : types)
          if (rel(a, b) && rel(b, c)) law(rel(a, c), std::string(what) + " transitive");
  };
  std::vector<EffTypePtr> ets;
  std::vector<AbilTypePtr> ats;
  std::vector<AETypePtr> qts;
  for (int i = 0; i < 40; ++i) {
    ets.push_back(ge(4));
    ats.push_back(ga(4));
    qts.push_back(gq(4));
  }
  check_rel([](const EffTypePtr& a, const EffTypePtr& b) { return subtype_e(a, b); }, ets,
            "subtype_e");
  check_rel([](const AbilTypePtr& a, const AbilTypePtr& b) { return subtype_a(a, b); }, ats,
            "subtype_a");
  check_rel([](const AETypePtr& a, const AETypePtr& b) { return subtype_ae(a, b); }, qts,
            "subtype_ae");
  return r;
}

}  // namespace purelab
