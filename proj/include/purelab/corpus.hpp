#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "purelab/oracle.hpp"
#include "purelab/parse.hpp"

namespace purelab {

// Corpus files are ordinary source files; lines starting with `#!` carry
// directives (`#! key: value`) and are comments to the term parser:
//
//   #! env: a=ref, y=bool
//   #! expect effect: impure
//   #! expect oracle: pure
//   !a
//
// Recognized keys: name, env, expect effect / ability / ae / oracle
// (pure | impure | ill-typed), expect ae-judgment (exact printed judgment).

struct CorpusEntry {
  std::string path;
  std::string name;
  Term term;
  EnvSpec env;
  std::map<std::string, std::string> expect;  // "effect" -> "impure", ...
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline EnvSpec parse_env_spec(const std::string& spec) {
  EnvSpec env;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad env entry: " + item);
    std::string x = detail::trim(item.substr(0, eq));
    std::string kind = detail::trim(item.substr(eq + 1));
    if (kind == "ref")
      env.vars.emplace_back(x, VarKind::RefCell);
    else if (kind == "bool")
      env.vars.emplace_back(x, VarKind::BoolVal);
    else
      throw std::runtime_error("bad env kind (want ref|bool): " + kind);
  }
  return env;
}

inline CorpusEntry load_corpus_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream whole;
  whole << in.rdbuf();
  CorpusEntry e;
  e.path = p.string();
  e.name = p.stem().string();
  std::stringstream lines(whole.str());
  std::string line;
  while (std::getline(lines, line)) {
    std::string t = detail::trim(line);
    if (t.rfind("#!", 0) != 0) continue;
    t = detail::trim(t.substr(2));
    std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw std::runtime_error(p.string() + ": bad directive " + t);
    std::string key = detail::trim(t.substr(0, colon));
    std::string val = detail::trim(t.substr(colon + 1));
    if (key == "name")
      e.name = val;
    else if (key == "env")
      e.env = parse_env_spec(val);
    else if (key.rfind("expect ", 0) == 0)
      e.expect[detail::trim(key.substr(7))] = val;
    else
      throw std::runtime_error(p.string() + ": unknown directive key " + key);
  }
  e.term = parse(whole.str());  // `#!` lines are comments to the parser
  return e;
}

inline std::vector<CorpusEntry> load_corpus_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& de : std::filesystem::recursive_directory_iterator(dir))
    if (de.is_regular_file() && de.path().extension() == ".term") files.push_back(de.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_corpus_file(f));
  return out;
}

}  // namespace purelab
