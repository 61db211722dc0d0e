#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "purelab/parse.hpp"
#include "purelab/sys_ability.hpp"

using namespace purelab;

namespace {
const AbilCtx kCtxA{{"a", {abil_ref(), Mark::Top}}};
}

TEST_CASE("ambient ability") {
  CHECK(ambient({}, {}) == Mark::Bot);
  CHECK(ambient(kCtxA, {"a"}) == Mark::Top);
  AbilCtx ctx{{"a", {abil_ref(), Mark::Top}}, {"y", {abil_bool(), Mark::Bot}}};
  CHECK(ambient(ctx, {"y"}) == Mark::Bot);
  CHECK(ambient(ctx, {"a", "y"}) == Mark::Top);
  CHECK_THROWS_AS(ambient(ctx, {"zzz"}), TypeError);
}

TEST_CASE("ambient is monotone in the variable set") {
  AbilCtx ctx{{"a", {abil_ref(), Mark::Top}}, {"y", {abil_bool(), Mark::Bot}},
              {"b", {abil_ref(), Mark::Top}}};
  std::vector<std::set<std::string>> sets{{}, {"y"}, {"a"}, {"a", "y"}, {"a", "b", "y"}};
  for (const auto& xs : sets)
    for (const auto& ys : sets) {
      bool subset = std::includes(ys.begin(), ys.end(), xs.begin(), xs.end());
      if (subset) CHECK(leq(ambient(ctx, xs), ambient(ctx, ys)));
    }
}

TEST_CASE("leak: capturing a resource makes the function a resource") {
  auto [ty, a] = typecheck_a(kCtxA, parse("fun (x: Bool) => a"));
  REQUIRE(ty->kind == AbilType::Kind::Fun);
  CHECK(ty->param->kind == AbilType::Kind::Bool);
  CHECK(ty->param_abil == Mark::Bot);
  CHECK(ty->result->kind == AbilType::Kind::Ref);
  CHECK(ty->result_abil == Mark::Top);
  CHECK(a == Mark::Top);
}

TEST_CASE("usearg: using only the argument keeps the function pure-ability") {
  auto [ty, a] = typecheck_a({}, parse("fun (x: Ref^top) => !x"));
  REQUIRE(ty->kind == AbilType::Kind::Fun);
  CHECK(ty->param_abil == Mark::Top);
  CHECK(ty->result->kind == AbilType::Kind::Bool);
  CHECK(ty->result_abil == Mark::Bot);
  CHECK(a == Mark::Bot);
}

TEST_CASE("mention: unused ambient resources do not taint the abstraction") {
  auto [ty, a] = typecheck_a(kCtxA, parse("fun (x: Ref^top) => true"));
  CHECK(ty->param_abil == Mark::Top);
  CHECK(ty->result_abil == Mark::Bot);
  CHECK(a == Mark::Bot);
}

TEST_CASE("allocation yields top ability, reads and writes bot") {
  CHECK(typecheck_a({}, parse("ref true")).second == Mark::Top);
  CHECK(typecheck_a(kCtxA, parse("!a")).second == Mark::Bot);
  CHECK(typecheck_a(kCtxA, parse("a := false")).second == Mark::Bot);
  CHECK(typecheck_a(kCtxA, parse("true && !a")).second == Mark::Bot);
}

TEST_CASE("application returns the declared result pair") {
  auto [ty, a] = typecheck_a(kCtxA, parse("(fun (x: Bool) => a) true"));
  CHECK(ty->kind == AbilType::Kind::Ref);
  CHECK(a == Mark::Top);
  // argument ability must fit the declared parameter ability
  CHECK_THROWS_AS(typecheck_a(kCtxA, parse("(fun (x: Ref) => true) a")), TypeError);
  CHECK(typecheck_a(kCtxA, parse("(fun (x: Ref^top) => true) a")).second == Mark::Bot);
}

TEST_CASE("subtype_a") {
  CHECK(subtype_a(abil_ref(), abil_ref()));
  CHECK(!subtype_a(abil_fun(abil_ref(), Mark::Bot, abil_bool(), Mark::Bot),
                   abil_fun(abil_ref(), Mark::Top, abil_bool(), Mark::Bot)));
  CHECK(subtype_a(abil_fun(abil_ref(), Mark::Top, abil_bool(), Mark::Bot),
                  abil_fun(abil_ref(), Mark::Bot, abil_bool(), Mark::Top)));
}

TEST_CASE("is_pure_a") {
  CHECK(is_pure_a({}, parse("let x = ref true in !x")));        // effect masking
  CHECK(!is_pure_a(kCtxA, var("a")));                           // resource result
  CHECK(!is_pure_a(kCtxA, parse("(fun (x: Bool) => a) true"))); // ambient is top
  CHECK(is_pure_a({}, parse("fun (x: Bool) => x")));
  CHECK(is_pure_a({}, parse("let x = ref true in x := false"))); // masked write
}

TEST_CASE("capture law: synthesized function ability equals ambient of captured vars") {
  AbilCtx ctx{{"a", {abil_ref(), Mark::Top}}, {"y", {abil_bool(), Mark::Bot}}};
  auto check_af = [&](const char* src) {
    Term t = parse(src);
    auto [ty, af] = typecheck_a(ctx, t);
    (void)ty;
    auto captured = free_vars(t->a);
    captured.erase(t->name);
    CHECK(af == ambient(ctx, captured));
  };
  check_af("fun (x: Bool) => x");
  check_af("fun (x: Bool) => a");
  check_af("fun (x: Bool) => y && true");
  check_af("fun (x: Bool) => !a && y");
  check_af("fun (a: Bool) => a");  // shadowing removes the capture
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(typecheck_a({}, parse("fun (x) => x")), TypeError);
  CHECK_THROWS_AS(typecheck_a({}, parse("fun (x: Ref<top,bot>) => x")), TypeError);  // pair qual
  CHECK_THROWS_AS(typecheck_a({}, parse("fun (f: (Bool -> [top] Bool)) => f")), TypeError);  // latent
  CHECK_THROWS_AS(typecheck_a(kCtxA, parse("a true")), TypeError);
}

namespace {

AbilTypePtr gen_type(std::mt19937& rng, int depth) {
  int k = rng() % (depth <= 0 ? 2 : 3);
  if (k == 0) return abil_bool();
  if (k == 1) return abil_ref();
  auto m = [&] { return rng() % 2 ? Mark::Top : Mark::Bot; };
  return abil_fun(gen_type(rng, depth - 1), m(), gen_type(rng, depth - 1), m());
}

}  // namespace

TEST_CASE("subtype_a reflexive and transitive on generated types") {
  std::mt19937 rng(6);
  std::vector<AbilTypePtr> types;
  for (int i = 0; i < 40; ++i) types.push_back(gen_type(rng, 4));
  for (const auto& t : types) CHECK(subtype_a(t, t));
  for (const auto& a : types)
    for (const auto& b : types)
      for (const auto& c : types)
        if (subtype_a(a, b) && subtype_a(b, c)) CHECK(subtype_a(a, c));
}
