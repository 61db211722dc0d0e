#pragma once

#include <cstddef>
#include <vector>

#include "purelab/syntax.hpp"

namespace purelab {

struct Value;
struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct ClosV {
  Env env;
  std::string param;
  Term body;
};

// BoolV | LocV | ClosV
struct Value {
  std::variant<bool, std::size_t, ClosV> v;
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_loc() const { return std::holds_alternative<std::size_t>(v); }
  bool is_clos() const { return std::holds_alternative<ClosV>(v); }
  bool as_bool() const { return std::get<bool>(v); }
  std::size_t as_loc() const { return std::get<std::size_t>(v); }
  const ClosV& as_clos() const { return std::get<ClosV>(v); }
};

inline Value bool_v(bool b) { return Value{b}; }
inline Value loc_v(std::size_t l) { return Value{l}; }
inline Value clos_v(Env env, std::string param, Term body) {
  return Value{ClosV{std::move(env), std::move(param), std::move(body)}};
}

struct EnvNode {
  std::string name;
  Value val;
  Env next;
};

inline Env env_bind(Env env, std::string name, Value val) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(val), std::move(env)});
}

inline const Value* env_lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (n->name == name) return &n->val;
  return nullptr;
}

using Store = std::vector<Value>;

enum class EvalErr { UnboundVar, NotAFunction, NotALocation, NotABool, DanglingLoc };

inline const char* to_string(EvalErr e) {
  switch (e) {
    case EvalErr::UnboundVar: return "unbound-var";
    case EvalErr::NotAFunction: return "not-a-function";
    case EvalErr::NotALocation: return "not-a-location";
    case EvalErr::NotABool: return "not-a-bool";
    case EvalErr::DanglingLoc: return "dangling-loc";
  }
  return "?";
}

struct Outcome {
  enum class Tag { Done, Timeout, Err };
  Tag tag;
  Store store;            // Done only
  Value value;            // Done only
  EvalErr err = EvalErr::UnboundVar;  // Err only
  bool done() const { return tag == Tag::Done; }
  bool timeout() const { return tag == Tag::Timeout; }
  bool errored() const { return tag == Tag::Err; }
};

struct TraceEntry {
  const char* rule;
  int line, col;
  std::size_t store_size;
};

namespace detail {

struct EvalCtx {
  Store store;
  long fuel;
  bool stopped = false;   // timeout or error
  bool timed_out = false;
  EvalErr err = EvalErr::UnboundVar;
  std::vector<TraceEntry>* trace = nullptr;
  std::vector<std::size_t>* writes = nullptr;  // locations written via :=

  bool tick(const char* rule, const TermNode& t) {
    if (fuel <= 0) {
      stopped = true;
      timed_out = true;
      return false;
    }
    --fuel;
    if (trace) trace->push_back({rule, t.line, t.col, store.size()});
    return true;
  }
  std::optional<Value> stop(EvalErr e) {
    stopped = true;
    timed_out = false;
    err = e;
    return std::nullopt;
  }
};

inline std::optional<Value> ev(EvalCtx& c, const Env& env, const Term& t) {
  switch (t->kind) {
    case TermNode::Kind::Cst:
      if (!c.tick("cst", *t)) return std::nullopt;
      return bool_v(t->value);
    case TermNode::Kind::Var: {
      if (!c.tick("var", *t)) return std::nullopt;
      const Value* v = env_lookup(env, t->name);
      if (!v) return c.stop(EvalErr::UnboundVar);
      return *v;
    }
    case TermNode::Kind::Abs:
      if (!c.tick("abs", *t)) return std::nullopt;
      return clos_v(env, t->name, t->a);
    case TermNode::Kind::App: {
      if (!c.tick("app", *t)) return std::nullopt;
      auto f = ev(c, env, t->a);
      if (!f) return std::nullopt;
      auto x = ev(c, env, t->b);
      if (!x) return std::nullopt;
      if (!f->is_clos()) return c.stop(EvalErr::NotAFunction);
      const ClosV& cl = f->as_clos();
      return ev(c, env_bind(cl.env, cl.param, *x), cl.body);
    }
    case TermNode::Kind::Ref: {
      if (!c.tick("ref", *t)) return std::nullopt;
      auto v = ev(c, env, t->a);
      if (!v) return std::nullopt;
      std::size_t loc = c.store.size();  // deterministic next-index allocation
      c.store.push_back(*v);
      return loc_v(loc);
    }
    case TermNode::Kind::Get: {
      if (!c.tick("get", *t)) return std::nullopt;
      auto v = ev(c, env, t->a);
      if (!v) return std::nullopt;
      if (!v->is_loc()) return c.stop(EvalErr::NotALocation);
      std::size_t loc = v->as_loc();
      if (loc >= c.store.size()) return c.stop(EvalErr::DanglingLoc);
      return c.store[loc];
    }
    case TermNode::Kind::Put: {
      if (!c.tick("put", *t)) return std::nullopt;
      auto l = ev(c, env, t->a);
      if (!l) return std::nullopt;
      auto v = ev(c, env, t->b);
      if (!v) return std::nullopt;
      if (!l->is_loc()) return c.stop(EvalErr::NotALocation);
      std::size_t loc = l->as_loc();
      if (loc >= c.store.size()) return c.stop(EvalErr::DanglingLoc);
      c.store[loc] = *v;
      if (c.writes) c.writes->push_back(loc);
      return bool_v(true);  // assignment evaluates to true
    }
    case TermNode::Kind::Bin: {
      if (!c.tick("bin", *t)) return std::nullopt;
      // Strict in both operands: no short-circuiting.
      auto l = ev(c, env, t->a);
      if (!l) return std::nullopt;
      auto r = ev(c, env, t->b);
      if (!r) return std::nullopt;
      if (!l->is_bool() || !r->is_bool()) return c.stop(EvalErr::NotABool);
      bool b = t->op == BinOp::And ? (l->as_bool() && r->as_bool())
                                   : (l->as_bool() || r->as_bool());
      return bool_v(b);
    }
    case TermNode::Kind::Hole:
      return c.stop(EvalErr::UnboundVar);  // holes never reach evaluation
  }
  return c.stop(EvalErr::UnboundVar);
}

}  // namespace detail

inline Outcome eval(const Env& env, Store store, const Term& t, long fuel,
                    std::vector<TraceEntry>* trace = nullptr,
                    std::vector<std::size_t>* writes = nullptr) {
  detail::EvalCtx c{std::move(store), fuel};
  c.trace = trace;
  c.writes = writes;
  auto v = detail::ev(c, env, t);
  if (v) return Outcome{Outcome::Tag::Done, std::move(c.store), *v};
  if (c.timed_out) return Outcome{Outcome::Tag::Timeout};
  Outcome o{Outcome::Tag::Err};
  o.err = c.err;
  return o;
}

inline Outcome run_closed(const Term& t, long fuel, std::vector<TraceEntry>* trace = nullptr) {
  if (!free_vars(t).empty()) throw std::invalid_argument("run_closed: term has free variables");
  return eval(nullptr, {}, t, fuel, trace);
}

}  // namespace purelab
