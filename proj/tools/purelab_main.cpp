// purelab — a workbench for three purity-tracking type disciplines over a
// Boolean lambda calculus with mutable references, plus a brute-force
// observational-purity oracle. See README.md for the command reference.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "purelab/corpus.hpp"
#include "purelab/encode.hpp"
#include "purelab/suites.hpp"

using json = nlohmann::ordered_json;
using namespace purelab;

namespace {

constexpr const char* kSchema = "purelab-report/1";

enum ExitCode { kPass = 0, kViolation = 1, kUsage = 2 };

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Clock() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cerr << "wallTime: " << ms << " ms\n";  // stderr only: reports stay byte-identical
  }
};

CorpusEntry load_input(const std::string& path) {
  return load_corpus_file(std::filesystem::path(path));
}

std::string purity_str(System sys, const EnvSpec& env, const Term& t) {
  try {
    return system_pure(sys, env, t) ? "pure" : "impure";
  } catch (const TypeError&) {
    return "ill-typed";
  }
}

std::string type_str(System sys, const EnvSpec& env, const Term& t) {
  switch (sys) {
    case System::Effect: {
      auto [ty, eff] = typecheck_e(eff_ctx_of(env), t);
      return print_efftype(ty) + " ; " + to_string(eff);
    }
    case System::Ability: {
      auto [ty, a] = typecheck_a(abil_ctx_of(env), t);
      return print_abiltype(ty) + " ; " + to_string(a);
    }
    case System::AE:
      return print_ae_judgment(typecheck_ae(ae_ctx_of(env), t));
  }
  return "?";
}

json bounds_json(const Bounds& b) {
  return json{{"maxNodes", b.max_nodes}, {"fuel", b.fuel}, {"storeBound", b.store_bound}};
}

json suite_json(const SuiteResult& r) {
  json j{{"name", r.name},       {"seed", r.seed},           {"checked", r.checked},
         {"skipped", r.skipped}, {"violations", r.violations}};
  if (!r.failures.empty()) j["failures"] = r.failures;
  return j;
}

void emit(const json& j, bool as_json) {
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return;
  }
}

std::vector<System> systems_of(const std::string& s) {
  if (s == "effect") return {System::Effect};
  if (s == "ability") return {System::Ability};
  if (s == "ae") return {System::AE};
  return {System::Effect, System::Ability, System::AE};
}

// ---- compare: classify every corpus entry in all systems plus the oracle,
// ---- and diff against any `#! expect` directives in the files.

json classify(const CorpusEntry& e, const Bounds& bounds, std::size_t& mismatches) {
  json row{{"name", e.name}, {"term", print(e.term)}};
  std::map<std::string, std::string> got;
  got["effect"] = purity_str(System::Effect, e.env, e.term);
  got["ability"] = purity_str(System::Ability, e.env, e.term);
  got["ae"] = purity_str(System::AE, e.env, e.term);
  PurityVerdict v = classify_purity(e.term, e.env, bounds);
  got["oracle"] = v.pure() ? "pure" : "impure";
  try {
    auto [ty, eff] = typecheck_e(eff_ctx_of(e.env), e.term);
    got["latent"] = ty->kind == EffType::Kind::Fun ? to_string(ty->latent) : "-";
    (void)eff;
  } catch (const TypeError&) {
    got["latent"] = "ill-typed";
  }
  try {
    got["fn-ability"] = to_string(typecheck_a(abil_ctx_of(e.env), e.term).second);
  } catch (const TypeError&) {
    got["fn-ability"] = "ill-typed";
  }
  try {
    got["ae-judgment"] = print_ae_judgment(typecheck_ae(ae_ctx_of(e.env), e.term));
  } catch (const TypeError&) {
    got["ae-judgment"] = "ill-typed";
  }
  for (const char* k : {"effect", "ability", "ae", "oracle"}) row[k] = got[k];
  if (!v.pure()) row["witness"] = print(v.witness);
  row["agreement"] = json{{"effect", got["effect"] == got["oracle"]},
                          {"ability", got["ability"] == got["oracle"]},
                          {"ae", got["ae"] == got["oracle"]}};
  json mism = json::array();
  for (const auto& [key, want] : e.expect) {
    auto it = got.find(key);
    std::string have = it == got.end() ? "<unknown key>" : it->second;
    if (have != want) {
      ++mismatches;
      mism.push_back(json{{"key", key}, {"expected", want}, {"got", have}});
    }
  }
  if (!mism.empty()) row["mismatches"] = mism;
  return row;
}

int cmd_compare(const std::string& dir, const Bounds& bounds, bool as_json) {
  std::vector<CorpusEntry> entries = load_corpus_dir(dir);
  json rows = json::array();
  std::size_t mismatches = 0, oracle_pure = 0;
  std::map<std::string, std::size_t> typed_pure{{"effect", 0}, {"ability", 0}, {"ae", 0}};
  for (const CorpusEntry& e : entries) {
    json row = classify(e, bounds, mismatches);
    if (row["oracle"] == "pure") {
      ++oracle_pure;
      for (const char* k : {"effect", "ability", "ae"})
        if (row[k] == "pure") ++typed_pure[k];
    }
    rows.push_back(std::move(row));
  }
  json rep{{"schema", kSchema},
           {"command", "compare"},
           {"corpus", dir},
           {"bounds", bounds_json(bounds)},
           {"perTerm", rows},
           {"completeness",
            json{{"oraclePure", oracle_pure},
                 {"effect", typed_pure["effect"]},
                 {"ability", typed_pure["ability"]},
                 {"ae", typed_pure["ae"]}}},
           {"mismatches", mismatches}};
  if (as_json) {
    emit(rep, true);
  } else {
    std::cout << "term                          effect    ability   ae        oracle\n";
    for (const auto& row : rep["perTerm"]) {
      std::ostringstream line;
      line << row["name"].get<std::string>();
      std::string s = line.str();
      s.resize(30, ' ');
      for (const char* k : {"effect", "ability", "ae", "oracle"}) {
        std::string v = row[k].get<std::string>();
        v.resize(10, ' ');
        s += v;
      }
      std::cout << s << "\n";
    }
    std::cout << "oracle-pure terms: " << oracle_pure << " (typed pure: effect "
              << typed_pure["effect"] << ", ability " << typed_pure["ability"] << ", ae "
              << typed_pure["ae"] << ")\n";
    if (mismatches) std::cout << "expectation mismatches: " << mismatches << "\n";
  }
  return mismatches == 0 ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  Clock clock;
  CLI::App app{"purelab: effect/ability purity workbench"};
  app.require_subcommand(1);

  std::string file, system = "all", dir, suite_name;
  long fuel = 10000;
  std::size_t max_nodes = 5, count = 200;
  unsigned seed = 1;
  bool as_json = false;
  auto add_common = [&](CLI::App* c) {
    c->add_flag("--json", as_json, "emit a JSON report on stdout");
  };

  CLI::App* tc = app.add_subcommand("typecheck", "typecheck a term in one or all systems");
  tc->add_option("file", file)->required();
  tc->add_option("--system", system)->check(CLI::IsMember({"effect", "ability", "ae", "all"}));
  add_common(tc);

  CLI::App* ev = app.add_subcommand("eval", "evaluate a term with bounded fuel");
  ev->add_option("file", file)->required();
  ev->add_option("--fuel", fuel);
  add_common(ev);

  CLI::App* pu = app.add_subcommand("purity", "syntactic purity per type system");
  pu->add_option("file", file)->required();
  pu->add_option("--system", system)->check(CLI::IsMember({"effect", "ability", "ae", "all"}));
  add_common(pu);

  CLI::App* en = app.add_subcommand("encode", "translate into the combined system and re-check");
  en->add_option("file", file)->required();
  en->add_option("--system", system)->required()->check(CLI::IsMember({"effect", "ability"}));
  add_common(en);

  CLI::App* orc = app.add_subcommand("oracle", "semantic ground truth");
  CLI::App* op = orc->add_subcommand("purity", "observational purity by context enumeration");
  op->add_option("file", file)->required();
  op->add_option("--max-nodes", max_nodes);
  op->add_option("--fuel", fuel);
  add_common(op);
  CLI::App* os = orc->add_subcommand("safety", "oracle-check all syntactically pure corpus terms");
  os->add_option("--system", system)->required()->check(CLI::IsMember({"effect", "ability", "ae"}));
  os->add_option("--corpus", dir)->required();
  os->add_option("--max-nodes", max_nodes);
  os->add_option("--fuel", fuel);
  add_common(os);
  orc->require_subcommand(1);

  CLI::App* co = app.add_subcommand("compare", "classify a corpus in all systems plus the oracle");
  co->add_option("dir", dir)->required();
  co->add_option("--max-nodes", max_nodes);
  co->add_option("--fuel", fuel);
  add_common(co);

  CLI::App* su = app.add_subcommand("suite", "run a property suite over generated terms");
  su->add_option("name", suite_name)
      ->required()
      ->check(CLI::IsMember({"safety", "reorder", "beta", "encode", "algebra", "eval"}));
  su->add_option("--seed", seed);
  su->add_option("--count", count);
  su->add_option("--max-nodes", max_nodes);
  su->add_option("--fuel", fuel);
  add_common(su);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  Bounds bounds{max_nodes, fuel, 8};
  const EnvSpec gen_env{{{"a", VarKind::RefCell}, {"y", VarKind::BoolVal}}};

  try {
    if (app.got_subcommand(tc) || app.got_subcommand(pu)) {
      bool purity_cmd = app.got_subcommand(pu);
      CorpusEntry e = load_input(file);
      json rows = json::array();
      bool bad = false;
      for (System sys : systems_of(system)) {
        json row{{"system", to_string(sys)}};
        try {
          row["type"] = type_str(sys, e.env, e.term);
          row["pure"] = system_pure(sys, e.env, e.term);
          if (purity_cmd && !row["pure"].get<bool>()) bad = true;
        } catch (const TypeError& err) {
          row["error"] = err.what();
          bad = true;
        }
        rows.push_back(std::move(row));
        if (!as_json) {
          const json& r = rows.back();
          std::cout << r["system"].get<std::string>() << ": "
                    << (r.contains("error")
                            ? "type error: " + r["error"].get<std::string>()
                            : r["type"].get<std::string>() +
                                  (r["pure"].get<bool>() ? "  [pure]" : "  [impure]"))
                    << "\n";
        }
      }
      emit(json{{"schema", kSchema},
                {"command", purity_cmd ? "purity" : "typecheck"},
                {"input", file},
                {"term", print(e.term)},
                {"perSystem", rows}},
           as_json);
      return bad ? kViolation : kPass;
    }

    if (app.got_subcommand(ev)) {
      CorpusEntry e = load_input(file);
      Env env;
      Store store;
      instantiate(e.env, 0, env, store);
      Outcome o = eval(env, store, e.term, fuel);
      std::string obs = observe(o);
      if (!as_json) std::cout << obs << "\n";
      json j{{"schema", kSchema}, {"command", "eval"}, {"input", file},
             {"fuel", fuel},      {"outcome", obs}};
      if (o.done()) j["storeSize"] = o.store.size();
      emit(j, as_json);
      return o.tag == Outcome::Tag::Done ? kPass : kViolation;
    }

    if (app.got_subcommand(en)) {
      CorpusEntry e = load_input(file);
      EncodingReport r = system == "effect" ? check_encoding_e(eff_ctx_of(e.env), e.term)
                                            : check_encoding_a(abil_ctx_of(e.env), e.term);
      json j{{"schema", kSchema},   {"command", "encode"},   {"input", file},
             {"system", system},    {"sourceOk", r.source_ok}, {"holds", r.holds}};
      if (!r.error.empty()) j["error"] = r.error;
      if (r.source_ok) {
        j["sourceJudgment"] = r.source_judgment;
        j["target"] = json{{"type", print_aetype(r.target_type)},
                           {"qual", print_aequal(r.target_qual)},
                           {"eff", to_string(r.target_eff)}};
        j["synthesized"] = json{{"type", print_aetype(r.synthesized.type)},
                                {"qual", print_aequal(r.synthesized.qual)},
                                {"eff", to_string(r.synthesized.eff)}};
      }
      if (!as_json)
        std::cout << (r.holds ? "encoding holds" : "encoding FAILS") << ": "
                  << (r.source_ok ? r.source_judgment : r.error) << "\n";
      emit(j, as_json);
      return r.holds ? kPass : kViolation;
    }

    if (app.got_subcommand(orc) && orc->got_subcommand(op)) {
      CorpusEntry e = load_input(file);
      PurityVerdict v = classify_purity(e.term, e.env, bounds);
      json j{{"schema", kSchema},
             {"command", "oracle purity"},
             {"input", file},
             {"status", v.pure() ? "pureUpToBounds" : "impure"}};
      if (!v.pure())
        j["witness"] = json{{"context", print(v.witness)},
                            {"config", v.config},
                            {"left", v.left_obs},
                            {"right", v.right_obs}};
      j["bounds"] = bounds_json(v.bounds);
      j["contextsChecked"] = v.contexts_checked;
      j["inconclusive"] = v.inconclusive;
      if (!as_json)
        std::cout << (v.pure() ? "pure (up to bounds)"
                               : "impure, witness: " + print(v.witness) + "  (" + v.left_obs +
                                     " vs " + v.right_obs + ")")
                  << "\n";
      emit(j, as_json);
      return v.pure() ? kPass : kViolation;
    }

    if (app.got_subcommand(orc) && orc->got_subcommand(os)) {
      System sys = systems_of(system)[0];
      std::vector<CorpusEntry> entries = load_corpus_dir(dir);
      SafetyReport total;
      json rows = json::array();
      for (const CorpusEntry& e : entries) {
        try {
          system_pure(sys, e.env, e.term);
        } catch (const TypeError&) {
          rows.push_back(json{{"name", e.name}, {"status", "skipped (ill-typed)"}});
          continue;
        }
        SafetyReport r = check_effect_safety(sys, e.env, {e.term}, bounds);
        total.total += r.total;
        total.pure_checked += r.pure_checked;
        total.violations += r.violations;
        rows.push_back(json{{"name", e.name},
                            {"status", r.pure_checked == 0   ? "not syntactically pure"
                                       : r.violations == 0   ? "ok"
                                                             : "VIOLATION"}});
      }
      if (!as_json)
        std::cout << "checked " << total.pure_checked << " syntactically pure terms, "
                  << total.violations << " violations\n";
      emit(json{{"schema", kSchema},
                {"command", "oracle safety"},
                {"system", to_string(sys)},
                {"corpus", dir},
                {"bounds", bounds_json(bounds)},
                {"perTerm", rows},
                {"pureChecked", total.pure_checked},
                {"violations", total.violations}},
           as_json);
      return total.violations == 0 ? kPass : kViolation;
    }

    if (app.got_subcommand(co)) return cmd_compare(dir, bounds, as_json);

    if (app.got_subcommand(su)) {
      std::vector<SuiteResult> results;
      if (suite_name == "safety") {
        for (System sys : {System::Effect, System::Ability, System::AE})
          results.push_back(run_safety_suite(sys, gen_env, seed, count, bounds));
      } else if (suite_name == "encode") {
        results.push_back(run_encode_suite(SourceSystem::Effect, gen_env, seed, count));
        results.push_back(run_encode_suite(SourceSystem::Ability, gen_env, seed, count));
      } else if (suite_name == "reorder") {
        for (System sys : {System::Effect, System::Ability, System::AE})
          results.push_back(run_reorder_suite(sys, gen_env, seed, count, fuel));
      } else if (suite_name == "beta") {
        results.push_back(run_beta_suite(gen_env, seed, count, bounds));
      } else if (suite_name == "eval") {
        results.push_back(run_eval_algebra_suite(seed, count, fuel));
      } else {
        results.push_back(run_algebra_suite(seed));
      }
      json rows = json::array();
      bool bad = false;
      for (const SuiteResult& r : results) {
        rows.push_back(suite_json(r));
        bad = bad || !r.ok();
        if (!as_json)
          std::cout << r.name << ": checked " << r.checked << ", skipped " << r.skipped
                    << ", violations " << r.violations << "\n";
      }
      emit(json{{"schema", kSchema},
                {"command", "suite"},
                {"suite", suite_name},
                {"seed", seed},
                {"count", count},
                {"bounds", bounds_json(bounds)},
                {"results", rows}},
           as_json);
      return bad ? kViolation : kPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
