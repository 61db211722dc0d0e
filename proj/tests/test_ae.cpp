#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "purelab/parse.hpp"
#include "purelab/sys_ae.hpp"

using namespace purelab;

namespace {
// y: Bool <bot,bot>, a: Ref <top,bot> — the worked-example environment
const AECtx kCtx{{"y", {ae_bool(), {Mark::Bot, Mark::Bot}}},
                 {"a", {ae_ref(), {Mark::Top, Mark::Bot}}}};

std::string judge(const AECtx& ctx, const char* src) {
  return print_ae_judgment(typecheck_ae(ctx, parse(src)));
}
}  // namespace

TEST_CASE("qualifier lattice and ambient") {
  CHECK(sub_qual({Mark::Bot, Mark::Bot}, {Mark::Top, Mark::Top}));
  CHECK(!sub_qual({Mark::Top, Mark::Bot}, {Mark::Bot, Mark::Top}));
  CHECK(ambient_ae({}, {}) == qual_bot());
  CHECK(ambient_ae(kCtx, {"a"}) == AEQual{Mark::Top, Mark::Bot});
  CHECK(ambient_ae(kCtx, {"a", "y"}) == AEQual{Mark::Top, Mark::Bot});
}

TEST_CASE("variables fold fresh into stored") {
  CHECK(judge(kCtx, "a") == "Ref ; <bot,top> ; bot");
  CHECK(judge(kCtx, "y") == "Bool ; <bot,bot> ; bot");
}

TEST_CASE("allocation is fresh, reads and writes track stored abilities") {
  CHECK(judge({}, "ref true") == "Ref ; <top,bot> ; bot");
  CHECK(judge(kCtx, "!a") == "Bool ; <bot,bot> ; top");
  CHECK(judge(kCtx, "a := false") == "Bool ; <bot,bot> ; top");
  CHECK(judge({}, "!(ref true)") == "Bool ; <bot,bot> ; bot");  // fresh effects masked
  CHECK(judge(kCtx, "y && true") == "Bool ; <bot,bot> ; bot");
}

TEST_CASE("worked examples: definitions") {
  CHECK(judge(kCtx, "fun (x: Bool) => x") ==
        "(Bool<bot,bot> -> [bot] Bool<bot,bot>) ; <bot,bot> ; bot");  // id
  CHECK(judge(kCtx, "fun (x: Ref<top,bot>) => x") ==
        "(Ref<top,bot> -> [bot] Ref<bot,top>) ; <bot,bot> ; bot");  // idr
  CHECK(judge(kCtx, "fun (x: Bool) => ref x") ==
        "(Bool<bot,bot> -> [bot] Ref<top,bot>) ; <bot,bot> ; bot");  // alloc
  CHECK(judge(kCtx, "fun (x: Bool) => a") ==
        "(Bool<bot,bot> -> [bot] Ref<bot,top>) ; <bot,top> ; bot");  // leak
  CHECK(judge(kCtx, "fun (x: Ref<top,bot>) => !a") ==
        "(Ref<top,bot> -> [top] Bool<bot,bot>) ; <bot,top> ; bot");  // use
  CHECK(judge(kCtx, "fun (x: Ref<bot,top>) => !x") ==
        "(Ref<bot,top> -> [top] Bool<bot,bot>) ; <bot,bot> ; bot");  // usearg
  CHECK(judge(kCtx, "fun (x: Ref<bot,top>) => true") ==
        "(Ref<bot,top> -> [bot] Bool<bot,bot>) ; <bot,bot> ; bot");  // mention
  CHECK(judge(kCtx, "fun (x: Ref<top,bot>) => fun (y: Ref<top,bot>) => !a") ==
        "(Ref<top,bot> -> [bot] (Ref<top,bot> -> [top] Bool<bot,bot>)<bot,top>) ; <bot,top> ; bot");  // capture
}

TEST_CASE("worked examples: applications") {
  CHECK(judge(kCtx, "(fun (x: Bool) => x) y") == "Bool ; <bot,bot> ; bot");          // id(y)
  CHECK(judge(kCtx, "(fun (x: Ref<bot,top>) => x) a") == "Ref ; <bot,top> ; bot");   // idr(a)*
}

TEST_CASE("use and usearg applications") {
  // use(y): a use-style body applied to a non-resource argument
  CHECK(judge(kCtx, "(fun (x: Bool) => !a) y") == "Bool ; <bot,bot> ; top");
  CHECK(judge(kCtx, "(fun (x: Ref<top,bot>) => !a) (ref false)") == "Bool ; <bot,bot> ; top");
  CHECK(judge(kCtx, "(fun (x: Ref<bot,top>) => !x) a") == "Bool ; <bot,bot> ; top");  // usearg(a)
  CHECK(judge(kCtx, "(fun (x: Ref<bot,top>) => true) a") == "Bool ; <bot,bot> ; bot"); // mention(a)
}

TEST_CASE("use(a) is untypable") {
  CHECK_THROWS_AS(typecheck_ae(kCtx, parse("(fun (x: Ref<top,bot>) => !a) a")), TypeError);
}

TEST_CASE("effect masking through let") {
  CHECK(judge({}, "let x = ref true in !x") == "Bool ; <bot,bot> ; bot");
  CHECK(is_pure_ae({}, parse("let x = ref true in !x")));
  CHECK(is_pure_ae({}, parse("let x = ref true in x := false")));
  CHECK(!is_pure_ae({}, parse("ref true")));      // fresh result
  CHECK(!is_pure_ae(kCtx, parse("!a")));          // top effect
  CHECK(is_pure_ae(kCtx, parse("(fun (x: Bool) => a) true")));  // pure mention
}

TEST_CASE("abs_qualifier formula") {
  CHECK(abs_qualifier({Mark::Bot, Mark::Bot}, {Mark::Top, Mark::Top}, Mark::Top) == qual_bot());
  CHECK(abs_qualifier({Mark::Bot, Mark::Top}, {Mark::Bot, Mark::Bot}, Mark::Top) ==
        AEQual{Mark::Bot, Mark::Top});
  CHECK(abs_qualifier({Mark::Bot, Mark::Top}, {Mark::Bot, Mark::Bot}, Mark::Bot) == qual_bot());
}

TEST_CASE("app_qualifier formula") {
  auto r = app_qualifier(qual_bot(), Mark::Bot, qual_bot(), Mark::Bot, qual_bot(), Mark::Top);
  CHECK(r.first == qual_bot());
  CHECK(r.second == Mark::Bot);  // latent effect masked
  auto id_y = app_qualifier(qual_bot(), Mark::Bot, qual_bot(), Mark::Bot, qual_bot(), Mark::Bot);
  CHECK(id_y.first == qual_bot());
  CHECK(id_y.second == Mark::Bot);
  auto usearg_a =
      app_qualifier(qual_bot(), Mark::Bot, {Mark::Bot, Mark::Top}, Mark::Bot, qual_bot(), Mark::Top);
  CHECK(usearg_a.first == qual_bot());
  CHECK(usearg_a.second == Mark::Top);
}

TEST_CASE("qualifier formulas match a bit-blasting recomputation") {
  auto bit = [](int w, int i) { return ((w >> i) & 1) ? Mark::Top : Mark::Bot; };
  auto b = [](Mark m) { return m == Mark::Top; };
  for (int w = 0; w < (1 << 5); ++w) {
    AEQual a_f{bit(w, 0), bit(w, 1)}, a2{bit(w, 2), bit(w, 3)};
    Mark e2 = bit(w, 4);
    AEQual got = abs_qualifier(a_f, a2, e2);
    bool stored = (b(a_f.fresh) | b(a_f.stored)) & (b(a2.stored) | b(e2));
    CHECK(got.fresh == Mark::Bot);
    CHECK(b(got.stored) == stored);
  }
  for (int w = 0; w < (1 << 9); ++w) {
    AEQual a_f{bit(w, 0), bit(w, 1)}, a1{bit(w, 2), bit(w, 3)}, a2{bit(w, 4), bit(w, 5)};
    Mark e_f = bit(w, 6), e1 = bit(w, 7), e2 = bit(w, 8);
    auto [q, e] = app_qualifier(a_f, e_f, a1, e1, a2, e2);
    bool fresh = b(a2.fresh) | (b(a2.stored) & (b(a_f.fresh) | b(a1.fresh)));
    bool stored = b(a2.stored) & (b(a_f.stored) | b(a1.stored));
    bool eff = b(e_f) | b(e1) | (b(e2) & (b(a_f.stored) | b(a1.stored)));
    CHECK(b(q.fresh) == fresh);
    CHECK(b(q.stored) == stored);
    CHECK(b(e) == eff);
  }
}

TEST_CASE("qualifier formulas are monotone") {
  std::vector<AEQual> quals{{Mark::Bot, Mark::Bot}, {Mark::Bot, Mark::Top},
                            {Mark::Top, Mark::Bot}, {Mark::Top, Mark::Top}};
  std::vector<Mark> effs{Mark::Bot, Mark::Top};
  for (auto af1 : quals)
    for (auto af2 : quals)
      if (sub_qual(af1, af2))
        for (auto a2 : quals)
          for (auto e2 : effs)
            CHECK(sub_qual(abs_qualifier(af1, a2, e2), abs_qualifier(af2, a2, e2)));
  for (auto a21 : quals)
    for (auto a22 : quals)
      if (sub_qual(a21, a22))
        for (auto af : quals)
          for (auto e2 : effs) {
            auto r1 = app_qualifier(af, Mark::Bot, qual_bot(), Mark::Bot, a21, e2);
            auto r2 = app_qualifier(af, Mark::Bot, qual_bot(), Mark::Bot, a22, e2);
            CHECK(sub_qual(r1.first, r2.first));
            CHECK(sub_eff(r1.second, r2.second));
          }
}

TEST_CASE("subtyping: componentwise quals, contra param, co result, co latent") {
  AEQual bb{Mark::Bot, Mark::Bot}, tt{Mark::Top, Mark::Top};
  CHECK(subtype_ae(ae_bool(), ae_bool()));
  CHECK(!subtype_ae(ae_bool(), ae_ref()));
  CHECK(subtype_ae(ae_fun(ae_bool(), bb, ae_bool(), bb, Mark::Bot),
                   ae_fun(ae_bool(), bb, ae_bool(), bb, Mark::Top)));
  CHECK(!subtype_ae(ae_fun(ae_bool(), bb, ae_bool(), bb, Mark::Top),
                    ae_fun(ae_bool(), bb, ae_bool(), bb, Mark::Bot)));
  CHECK(subtype_ae(ae_fun(ae_bool(), tt, ae_bool(), bb, Mark::Bot),
                   ae_fun(ae_bool(), bb, ae_bool(), tt, Mark::Bot)));
  CHECK(!subtype_ae(ae_fun(ae_bool(), bb, ae_bool(), bb, Mark::Bot),
                    ae_fun(ae_bool(), tt, ae_bool(), bb, Mark::Bot)));
}

TEST_CASE("subsumption coherence: weaker ascriptions re-check") {
  AEJudgment j = typecheck_ae(kCtx, parse("fun (x: Bool) => a"));
  // weaken the qualifier and effect; the judgment must still be acceptable
  CHECK(sub_qual(j.qual, {Mark::Top, Mark::Top}));
  CHECK(sub_eff(j.eff, Mark::Top));
  CHECK(subtype_ae(j.type, ae_fun(ae_bool(), qual_bot(), ae_ref(), {Mark::Top, Mark::Top}, Mark::Bot)));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(typecheck_ae({}, parse("fun (x) => x")), TypeError);
  CHECK_THROWS_AS(typecheck_ae({}, parse("fun (x: Ref^top) => x")), TypeError);  // single qual
  CHECK_THROWS_AS(typecheck_ae(kCtx, parse("a y")), TypeError);
  CHECK_THROWS_AS(typecheck_ae(kCtx, parse("(fun (x: Ref<bot,bot>) => true) a")), TypeError);
}

namespace {

AETypePtr gen_type(std::mt19937& rng, int depth) {
  int k = rng() % (depth <= 0 ? 2 : 3);
  if (k == 0) return ae_bool();
  if (k == 1) return ae_ref();
  auto m = [&] { return rng() % 2 ? Mark::Top : Mark::Bot; };
  return ae_fun(gen_type(rng, depth - 1), {m(), m()}, gen_type(rng, depth - 1), {m(), m()}, m());
}

}  // namespace

TEST_CASE("subtype_ae reflexive and transitive on generated types") {
  std::mt19937 rng(8);
  std::vector<AETypePtr> types;
  for (int i = 0; i < 40; ++i) types.push_back(gen_type(rng, 4));
  for (const auto& t : types) CHECK(subtype_ae(t, t));
  for (const auto& a : types)
    for (const auto& b : types)
      for (const auto& c : types)
        if (subtype_ae(a, b) && subtype_ae(b, c)) CHECK(subtype_ae(a, c));
}
