#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "purelab/suites.hpp"

using namespace purelab;

namespace {
const EnvSpec kEnvA{{{"a", VarKind::RefCell}, {"y", VarKind::BoolVal}}};
}

TEST_CASE("generation is deterministic for a fixed seed") {
  for (System sys : {System::Effect, System::Ability, System::AE}) {
    TermGen g1(11), g2(11);
    std::vector<Term> a = g1.well_typed(sys, kEnvA, 50);
    std::vector<Term> b = g2.well_typed(sys, kEnvA, 50);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(term_eq(a[i], b[i]));
  }
}

TEST_CASE("generated terms are well-typed, sized, and distinct") {
  for (System sys : {System::Effect, System::Ability, System::AE}) {
    TermGen gen(7);
    std::vector<Term> terms = gen.well_typed(sys, kEnvA, 200);
    CAPTURE(to_string(sys));
    REQUIRE(terms.size() == 200);
    std::set<std::string> seen;
    for (const Term& t : terms) {
      CHECK(term_size(t) <= 8);
      CHECK(seen.insert(print(t)).second);
      CHECK_NOTHROW(system_pure(sys, kEnvA, t));  // typechecks
    }
  }
}

TEST_CASE("closed simply-typed samples evaluate without dynamic errors") {
  TermGen gen(3);
  for (const Term& t : gen.closed_simply_typed(300)) {
    CHECK(free_vars(t).empty());
    Outcome o = run_closed(t, 1000);
    CAPTURE(print(t));
    CHECK(o.tag != Outcome::Tag::Err);
  }
}

TEST_CASE("small suite runs are clean") {
  for (System sys : {System::Effect, System::Ability, System::AE}) {
    SuiteResult s = run_safety_suite(sys, kEnvA, 1, 60);
    CAPTURE(s.name);
    for (const auto& f : s.failures) CAPTURE(f);
    CHECK(s.ok());
    CHECK(s.checked > 0);
  }
  SuiteResult ee = run_encode_suite(SourceSystem::Effect, kEnvA, 2, 80);
  CHECK(ee.ok());
  CHECK(ee.checked == 80);
  SuiteResult ea = run_encode_suite(SourceSystem::Ability, kEnvA, 2, 80);
  CHECK(ea.ok());
  CHECK(ea.checked == 80);
  for (System sys : {System::Effect, System::Ability, System::AE}) {
    SuiteResult rr = run_reorder_suite(sys, kEnvA, 4, 30);
    CAPTURE(rr.name);
    for (const auto& f : rr.failures) CAPTURE(f);
    CHECK(rr.ok());
    CHECK(rr.checked == 30);
  }
  SuiteResult bb = run_beta_suite(kEnvA, 5, 30);
  for (const auto& f : bb.failures) CAPTURE(f);
  CHECK(bb.ok());
  CHECK(bb.checked == 30);
  SuiteResult ev = run_eval_algebra_suite(6, 300);
  CHECK(ev.ok());
  CHECK(ev.checked == 300);
}

TEST_CASE("algebra suite is exhaustive and clean") {
  SuiteResult s = run_algebra_suite(0);
  for (const auto& f : s.failures) CAPTURE(f);
  CHECK(s.ok());
  CHECK(s.checked > 100);
}
