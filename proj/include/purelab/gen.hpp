#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "purelab/oracle.hpp"
#include "purelab/parse.hpp"

namespace purelab {

// ---- Seeded random term generation with rejection sampling through the
// ---- real checkers. All draws go through one engine, so a fixed seed fixes
// ---- the whole corpus.

class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  // A random raw term over env's variables, with binder annotations drawn
  // from the pool the given system accepts. May be ill-typed.
  Term raw(System sys, const EnvSpec& env, int depth) {
    std::vector<std::string> scope;
    for (const auto& [x, k] : env.vars) {
      (void)k;
      scope.push_back(x);
    }
    return gen_term(sys, scope, depth);
  }

  // `count` distinct well-typed terms for `sys` under env, each of at most
  // `max_size` nodes.
  std::vector<Term> well_typed(System sys, const EnvSpec& env, std::size_t count,
                               std::size_t max_size = 8) {
    std::vector<Term> out;
    std::set<std::string> seen;
    std::size_t attempts = 0, budget = count * 4000;
    while (out.size() < count && ++attempts < budget) {
      Term t = raw(sys, env, 3);
      if (term_size(t) > max_size) continue;
      if (!typechecks(sys, env, t)) continue;
      if (!seen.insert(print(t)).second) continue;
      out.push_back(t);
    }
    return out;
  }

  // Closed terms accepted by the qualifier-free simple discipline (for the
  // evaluator algebra: such terms may time out but never hit a dynamic error).
  std::vector<Term> closed_simply_typed(std::size_t count, std::size_t max_size = 8) {
    std::vector<Term> out;
    std::size_t attempts = 0, budget = count * 4000;
    while (out.size() < count && ++attempts < budget) {
      Term t = gen_term(System::AE, {}, 3);
      if (term_size(t) > max_size) continue;
      try {
        simple_typeof({}, t);
      } catch (const TypeError&) {
        continue;
      }
      out.push_back(t);
    }
    return out;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;

  bool flip() { return rng_() & 1; }
  Mark mark() { return flip() ? Mark::Top : Mark::Bot; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  static bool typechecks(System sys, const EnvSpec& env, const Term& t) {
    try {
      switch (sys) {
        case System::Effect: typecheck_e(eff_ctx_of(env), t); break;
        case System::Ability: typecheck_a(abil_ctx_of(env), t); break;
        case System::AE: typecheck_ae(ae_ctx_of(env), t); break;
      }
      return true;
    } catch (const TypeError&) {
      return false;
    }
  }

  STypePtr annot(System sys, int depth) {
    switch (sys) {
      case System::Effect:
        switch (pick(depth > 0 ? 4 : 2)) {
          case 0: return stype_bool();
          case 1: return stype_ref();
          case 2: return stype_fun(annot(sys, 0), std::nullopt, mark(), annot(sys, 0), std::nullopt);
          default:
            return stype_fun(annot(sys, depth - 1), std::nullopt, mark(), annot(sys, depth - 1),
                             std::nullopt);
        }
      case System::Ability:
        switch (pick(depth > 0 ? 4 : 3)) {
          case 0: return stype_bool();
          case 1: return stype_ref();
          case 2: return stype_ref(QualAnnot{mark()});
          default:
            return stype_fun(annot(sys, depth - 1), QualAnnot{mark()}, std::nullopt,
                             annot(sys, depth - 1), QualAnnot{mark()});
        }
      case System::AE:
        switch (pick(depth > 0 ? 4 : 3)) {
          case 0: return stype_bool();
          case 1: return stype_ref(QualAnnot{PairQual{Mark::Bot, mark()}});
          case 2: return stype_ref(QualAnnot{PairQual{mark(), mark()}});
          default:
            return stype_fun(annot(sys, depth - 1), QualAnnot{PairQual{mark(), mark()}}, mark(),
                             annot(sys, depth - 1), QualAnnot{PairQual{mark(), mark()}});
        }
    }
    return stype_bool();
  }

  Term gen_term(System sys, std::vector<std::string> scope, int depth) {
    std::size_t k = pick(depth <= 0 ? (scope.empty() ? 1 : 2) : 10);
    switch (k) {
      case 0: return cst(flip());
      case 1:
        if (scope.empty()) return cst(flip());
        return var(scope[pick(scope.size())]);
      case 2: {
        std::string x = "x" + std::to_string(pick(2));
        scope.push_back(x);
        return abs(x, annot(sys, 1), gen_term(sys, scope, depth - 1));
      }
      case 3: {  // let: application of an unannotated abstraction
        std::string x = "x" + std::to_string(pick(2));
        Term bound = gen_term(sys, scope, depth - 1);
        scope.push_back(x);
        return desugar_let(x, bound, gen_term(sys, scope, depth - 1));
      }
      case 4: return app(gen_term(sys, scope, depth - 1), gen_term(sys, scope, depth - 1));
      case 5: return ref_(gen_term(sys, scope, depth - 1));
      case 6: return get(gen_term(sys, scope, depth - 1));
      case 7: return put(gen_term(sys, scope, depth - 1), gen_term(sys, scope, depth - 1));
      default:
        return bin(flip() ? BinOp::And : BinOp::Or, gen_term(sys, scope, depth - 1),
                   gen_term(sys, scope, depth - 1));
    }
  }
};

}  // namespace purelab
