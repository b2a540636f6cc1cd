/*
 * Copyright (c) 2026, the linsmr authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LINSMR_SPECS_HPP_
#define LINSMR_SPECS_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/program.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

/// Atomic specification: each operation is one deterministic transition.
struct SequentialSpec {
  std::string name;
  SpecState initial_state;
  std::vector<std::string> op_names;
  // Pure: equal inputs yield equal outputs.
  std::function<std::pair<SpecState, Value>(const SpecState&, const std::string&, const Values&)>
      apply;

  bool has_op(const std::string& op) const {
    return std::find(op_names.begin(), op_names.end(), op) != op_names.end();
  }
};

/// One effect-step transition. `locals` is the operation's private carry
/// between its steps; an observation is a value read from shared state that
/// the return assembly may use.
struct EffectStepResult {
  SpecState state;
  std::vector<std::int64_t> locals;
  std::optional<Value> observation;
};

/// A step returns nullopt when it is disabled in the given shared state
/// (used by condition-guarded steps of program-derived specs).
using EffectStepFn =
    std::function<std::optional<EffectStepResult>(const SpecState&, const std::vector<std::int64_t>&)>;

/// The decomposition of one operation instance into ordered effect steps.
struct EffectDecomposition {
  std::vector<EffectStepFn> steps;  // non-empty
  std::vector<std::int64_t> initial_locals;
  std::function<Value(const std::vector<std::int64_t>&, const std::vector<Value>&)> return_of;
};

/// Specification with one or more effect points per operation. A one-step
/// decomposition is equivalent to a SequentialSpec entry.
struct EffectSpec {
  std::string name;
  SpecState initial_state;
  std::function<EffectDecomposition(const std::string&, const Values&)> decompose;
};

/// An operation instance as seen by joint (simultaneity) transitions.
struct OpInstance {
  std::string op_name;
  Values args;
};

/// Sequential specification extended with simultaneity classes: declared
/// sets of operations may linearize jointly at one instant with a joint
/// transition. Singleton sets are always admissible and take the base
/// transition; `admissible`/`joint_apply` are queried for sets of size >= 2
/// only.
struct SetSpec {
  SequentialSpec base;
  std::function<bool(const std::vector<OpInstance>&)> admissible;
  std::function<std::pair<SpecState, std::vector<Value>>(const SpecState&,
                                                         const std::vector<OpInstance>&)>
      joint_apply;
};

/// Concurrent specification as an automaton over interaction points. A
/// configuration is (shared state, open operations with their per-op
/// progress). Each interaction point consumes a set of invocations,
/// advances any number of open operations by internal transitions from
/// `decompose`, and emits a set of responses; an emitted response carries
/// return_of over the operation's locals and observations. The acceptance
/// condition is that every invocation is consumed and every response
/// emitted with its recorded value.
struct IntervalSpec {
  std::string name;
  SpecState initial_state;
  std::function<EffectDecomposition(const std::string&, const Values&)> decompose;
};

namespace detail {

inline std::int64_t arg_int(const Values& args, std::size_t i, const char* spec) {
  if (i >= args.size()) throw MalformedInput(std::string(spec) + ": missing argument");
  return args[i].as_int();
}

inline void need_args(const Values& args, std::size_t n, const char* what) {
  if (args.size() != n)
    throw MalformedInput(std::string(what) + ": expected " + std::to_string(n) + " argument(s), got " +
                         std::to_string(args.size()));
}

}  // namespace detail

/// Read/write register holding one integer, initially 0.
inline SequentialSpec register_spec() {
  SequentialSpec s;
  s.name = "register";
  s.initial_state = {0};
  s.op_names = {"write", "read"};
  s.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "write") {
      detail::need_args(args, 1, "register.write");
      return {{args[0].as_int()}, Value::unit()};
    }
    if (op == "read") {
      detail::need_args(args, 0, "register.read");
      return {st, Value::integer(st.at(0))};
    }
    throw MalformedInput("register: unknown operation '" + op + "'");
  };
  return s;
}

/// Increment/get counter from 0.
inline SequentialSpec counter_spec() {
  SequentialSpec s;
  s.name = "counter";
  s.initial_state = {0};
  s.op_names = {"inc", "get"};
  s.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "inc") {
      detail::need_args(args, 0, "counter.inc");
      return {{st.at(0) + 1}, Value::unit()};
    }
    if (op == "get") {
      detail::need_args(args, 0, "counter.get");
      return {st, Value::integer(st.at(0))};
    }
    throw MalformedInput("counter: unknown operation '" + op + "'");
  };
  return s;
}

/// FIFO queue of integers; deq on empty returns the empty marker. The
/// state vector is the queue contents front first.
inline SequentialSpec fifo_queue_spec() {
  SequentialSpec s;
  s.name = "fifo-queue";
  s.initial_state = {};
  s.op_names = {"enq", "deq"};
  s.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "enq") {
      detail::need_args(args, 1, "fifo-queue.enq");
      SpecState next = st;
      next.push_back(args[0].as_int());
      return {next, Value::unit()};
    }
    if (op == "deq") {
      detail::need_args(args, 0, "fifo-queue.deq");
      if (st.empty()) return {st, Value::empty()};
      SpecState next(st.begin() + 1, st.end());
      return {next, Value::integer(st.front())};
    }
    throw MalformedInput("fifo-queue: unknown operation '" + op + "'");
  };
  return s;
}

/// The two-operation lock-based object: D maps s to (s+1)*2 returning ok,
/// E returns s, initial s = 1. The effect form decomposes D into two
/// steps: step 1 stores s+1 and captures the written value, step 2 stores
/// twice the captured value. E is a single read step.
inline std::pair<SequentialSpec, EffectSpec> lock_object_spec() {
  SequentialSpec seq;
  seq.name = "lock-object";
  seq.initial_state = {1};
  seq.op_names = {"D", "E"};
  seq.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "D") {
      detail::need_args(args, 0, "lock-object.D");
      return {{(st.at(0) + 1) * 2}, Value::unit()};
    }
    if (op == "E") {
      detail::need_args(args, 0, "lock-object.E");
      return {st, Value::integer(st.at(0))};
    }
    throw MalformedInput("lock-object: unknown operation '" + op + "'");
  };

  EffectSpec eff;
  eff.name = "lock-object";
  eff.initial_state = {1};
  eff.decompose = [](const std::string& op, const Values& args) -> EffectDecomposition {
    EffectDecomposition d;
    if (op == "D") {
      detail::need_args(args, 0, "lock-object.D");
      d.initial_locals = {0};  // the value written at step 1
      d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>&)
                            -> std::optional<EffectStepResult> {
        std::int64_t w = st.at(0) + 1;
        return EffectStepResult{{w}, {w}, std::nullopt};
      });
      d.steps.push_back([](const SpecState&, const std::vector<std::int64_t>& locals)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{{2 * locals.at(0)}, locals, std::nullopt};
      });
      d.return_of = [](const std::vector<std::int64_t>&, const std::vector<Value>&) {
        return Value::unit();
      };
      return d;
    }
    if (op == "E") {
      detail::need_args(args, 0, "lock-object.E");
      d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>&)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{st, {}, Value::integer(st.at(0))};
      });
      d.return_of = [](const std::vector<std::int64_t>&, const std::vector<Value>& obs) {
        return obs.at(0);
      };
      return d;
    }
    throw MalformedInput("lock-object: unknown operation '" + op + "'");
  };
  return {seq, eff};
}

/// Exchanger: two overlapping exchange ops may linearize jointly and swap
/// their arguments; a lone exchange finds no partner and returns the empty
/// marker.
inline SetSpec exchanger_set_spec() {
  SetSpec s;
  s.base.name = "exchanger";
  s.base.initial_state = {0, 0, 0};  // matches the effect form's width
  s.base.op_names = {"exchange"};
  s.base.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op != "exchange") throw MalformedInput("exchanger: unknown operation '" + op + "'");
    detail::need_args(args, 1, "exchanger.exchange");
    return {st, Value::empty()};
  };
  s.admissible = [](const std::vector<OpInstance>& ops) {
    return ops.size() == 2 &&
           std::all_of(ops.begin(), ops.end(), [](const OpInstance& o) {
             return o.op_name == "exchange" && o.args.size() == 1;
           });
  };
  s.joint_apply = [](const SpecState& st, const std::vector<OpInstance>& ops)
      -> std::pair<SpecState, std::vector<Value>> {
    return {st, {ops.at(1).args.at(0), ops.at(0).args.at(0)}};
  };
  return s;
}

/// Effect form of the exchanger over state {stage, a, b}: the first
/// exchange posts its argument and waits (stage 1), a second exchange takes
/// the posted value and leaves its own (stage 2), the waiter collects and
/// resets to idle. A waiter whose post is still unclaimed at its second
/// step gives up and returns the empty marker, matching the sequential
/// behavior of a lone exchange.
inline EffectSpec exchanger_effect_spec() {
  EffectSpec e;
  e.name = "exchanger";
  e.initial_state = {0, 0, 0};
  e.decompose = [](const std::string& op, const Values& args) {
    if (op != "exchange") throw MalformedInput("exchanger: unknown operation '" + op + "'");
    detail::need_args(args, 1, "exchanger.exchange");
    std::int64_t x = args[0].as_int();
    EffectDecomposition d;
    d.initial_locals = {0};  // role: 0 = waiter, 1 = taker
    d.steps.push_back([x](const SpecState& st, const std::vector<std::int64_t>&)
                          -> std::optional<EffectStepResult> {
      if (st.at(0) == 0) return EffectStepResult{{1, x, 0}, {0}, std::nullopt};
      if (st.at(0) == 1)
        return EffectStepResult{{2, st.at(1), x}, {1}, Value::integer(st.at(1))};
      return std::nullopt;  // another pair's handoff is still in progress
    });
    d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>& locals)
                          -> std::optional<EffectStepResult> {
      if (locals.at(0) == 1) return EffectStepResult{st, locals, std::nullopt};  // taker is done
      if (st.at(0) == 2)
        return EffectStepResult{{0, 0, 0}, locals, Value::integer(st.at(2))};
      return EffectStepResult{{0, 0, 0}, locals, std::nullopt};  // unclaimed: give up
    });
    d.return_of = [](const std::vector<std::int64_t>&, const std::vector<Value>& obs) {
      return obs.empty() ? Value::empty() : obs.back();
    };
    return d;
  };
  return e;
}

/// One-step effect form of a sequential specification: the single step is
/// the atomic transition, its observation the return value.
inline EffectSpec effect_spec_of(const SequentialSpec& s) {
  EffectSpec e;
  e.name = s.name;
  e.initial_state = s.initial_state;
  e.decompose = [apply = s.apply](const std::string& op, const Values& args) {
    EffectDecomposition d;
    d.steps.push_back([apply, op, args](const SpecState& st, const std::vector<std::int64_t>&)
                          -> std::optional<EffectStepResult> {
      auto [next, ret] = apply(st, op, args);
      return EffectStepResult{next, {}, ret};
    });
    d.return_of = [](const std::vector<std::int64_t>&, const std::vector<Value>& obs) {
      return obs.at(0);
    };
    return d;
  };
  return e;
}

/// Set form with singleton classes only.
inline SetSpec singleton_set_spec_of(const SequentialSpec& s) {
  SetSpec out;
  out.base = s;
  out.admissible = [](const std::vector<OpInstance>&) { return false; };
  out.joint_apply = [](const SpecState&, const std::vector<OpInstance>&)
      -> std::pair<SpecState, std::vector<Value>> {
    throw MalformedInput("singleton set spec has no joint transitions");
  };
  return out;
}

/// Mechanical translation to the interval automaton: internal transitions
/// are the effect steps, consumption binds an operation's initial locals,
/// emission evaluates return_of.
inline IntervalSpec interval_spec_of(const EffectSpec& e) {
  IntervalSpec i;
  i.name = e.name;
  i.initial_state = e.initial_state;
  i.decompose = e.decompose;
  return i;
}

inline IntervalSpec interval_spec_of(const SequentialSpec& s) {
  return interval_spec_of(effect_spec_of(s));
}

/// Derives an operation's effect decomposition from its program: one step
/// per critical section, split again at each wait (the resumed part is
/// guarded by the condition latch). Instructions outside locks fold into
/// the following step; trailing local computation folds into the return
/// assembly. Programs with nested calls have no derivable effect form.
inline EffectDecomposition effect_decomposition_of(const ObjectDef& def, const Program& p,
                                                   const Values& args) {
  if (p.has_nested_call())
    throw UnsupportedProgram("program '" + p.name + "' performs nested calls");
  if (args.size() != p.params.size())
    throw MalformedInput("operation '" + p.name + "': expected " +
                         std::to_string(p.params.size()) + " argument(s)");

  const std::vector<std::string> locals = p.locals();
  // Captured by value below: the returned closures outlive this frame.
  auto local_index = [locals](const std::string& v) {
    auto it = std::find(locals.begin(), locals.end(), v);
    if (it == locals.end()) throw Error("unbound local '" + v + "'");
    return static_cast<std::size_t>(it - locals.begin());
  };

  auto env_of = [locals](const std::vector<std::int64_t>& vals) {
    std::map<std::string, std::int64_t> env;
    for (std::size_t i = 0; i < locals.size() && i < vals.size(); ++i) env[locals[i]] = vals[i];
    return env;
  };

  struct Segment {
    std::vector<Instr> instrs;
    std::optional<std::size_t> guard;  // condition latch index in the state vector
  };
  std::vector<Segment> segments;
  std::vector<Instr> pending;
  std::optional<std::size_t> guard;
  int depth = 0;
  for (const auto& instr : p.body) {
    if (instr.kind == Instr::Kind::wait) {
      segments.push_back({pending, guard});
      pending.clear();
      guard = def.cond_index(instr.target);
      continue;
    }
    pending.push_back(instr);
    if (instr.kind == Instr::Kind::lock) ++depth;
    if (instr.kind == Instr::Kind::unlock && --depth == 0) {
      segments.push_back({pending, guard});
      pending.clear();
      guard.reset();
    }
  }
  // `pending` now holds only local computation plus the return.
  std::vector<Instr> trailing = pending;

  auto run_segment = [def, local_index, env_of](const std::vector<Instr>& instrs, SpecState st,
                                                 std::vector<std::int64_t> vals)
      -> EffectStepResult {
    for (const auto& instr : instrs) {
      switch (instr.kind) {
        case Instr::Kind::read:
          vals[local_index(instr.target)] = st.at(def.shared_index(instr.source));
          break;
        case Instr::Kind::write:
          st.at(def.shared_index(instr.target)) = instr.expr.eval(env_of(vals));
          break;
        case Instr::Kind::compute:
          vals[local_index(instr.target)] = instr.expr.eval(env_of(vals));
          break;
        case Instr::Kind::signal:
          st.at(def.cond_index(instr.target)) = 1;
          break;
        case Instr::Kind::lock:
        case Instr::Kind::unlock:
        case Instr::Kind::ret:
          break;
        default:
          throw UnsupportedProgram("instruction not expressible as an effect step");
      }
    }
    return EffectStepResult{std::move(st), std::move(vals), std::nullopt};
  };

  EffectDecomposition d;
  d.initial_locals.assign(locals.size(), 0);
  for (std::size_t i = 0; i < p.params.size(); ++i)
    d.initial_locals[i] = args[i].as_int();

  if (segments.empty()) {
    // Lock-free program: a single identity step, everything in the return
    // assembly.
    d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>& vals)
                          -> std::optional<EffectStepResult> {
      return EffectStepResult{st, vals, std::nullopt};
    });
  }
  for (const auto& seg : segments) {
    d.steps.push_back([seg, run_segment](const SpecState& st, const std::vector<std::int64_t>& vals)
                          -> std::optional<EffectStepResult> {
      if (seg.guard && st.at(*seg.guard) == 0) return std::nullopt;
      return run_segment(seg.instrs, st, vals);
    });
  }

  d.return_of = [trailing, env_of, local_index](const std::vector<std::int64_t>& vals,
                                                const std::vector<Value>&) -> Value {
    std::vector<std::int64_t> v = vals;
    for (const auto& instr : trailing) {
      if (instr.kind == Instr::Kind::compute) {
        v[local_index(instr.target)] = instr.expr.eval(env_of(v));
      } else if (instr.kind == Instr::Kind::ret) {
        if (instr.returns_unit) return Value::unit();
        return Value::integer(instr.expr.eval(env_of(v)));
      }
    }
    throw Error("program ended without return");
  };
  return d;
}

/// Effect form of one program in its object context.
inline EffectSpec effect_spec_of_program(const Program& p, const ObjectDef& def) {
  EffectSpec e;
  e.name = def.name + "." + p.name;
  e.initial_state = def.initial_state();
  e.decompose = [p, def](const std::string& op, const Values& args) {
    if (op != p.name) throw MalformedInput("spec covers only operation '" + p.name + "'");
    return effect_decomposition_of(def, p, args);
  };
  return e;
}

/// Effect form covering every operation of a program object.
inline EffectSpec effect_spec_of_object(const ObjectDef& def) {
  if (def.is_builtin()) throw MalformedInput("builtin objects have no program-derived effect form");
  EffectSpec e;
  e.name = def.name;
  e.initial_state = def.initial_state();
  e.decompose = [def](const std::string& op, const Values& args) {
    return effect_decomposition_of(def, def.program(op), args);
  };
  return e;
}

/// Runs all of an operation's effect steps consecutively from a state; the
/// single-threaded execution every decomposition must agree with.
inline std::pair<SpecState, Value> run_effect_sequentially(const EffectSpec& e, const SpecState& s0,
                                                           const std::string& op,
                                                           const Values& args) {
  EffectDecomposition d = e.decompose(op, args);
  if (d.steps.empty()) throw MalformedInput("empty effect decomposition for '" + op + "'");
  SpecState st = s0;
  std::vector<std::int64_t> locals = d.initial_locals;
  std::vector<Value> obs;
  for (const auto& step : d.steps) {
    auto r = step(st, locals);
    if (!r) throw Error("effect step disabled in single-threaded replay of '" + op + "'");
    st = std::move(r->state);
    locals = std::move(r->locals);
    if (r->observation) obs.push_back(*r->observation);
  }
  return {st, d.return_of(locals, obs)};
}

/// Compatible specs across all hierarchy levels for one object.
struct SpecBundle {
  std::string name;
  SequentialSpec sequential;
  SetSpec set;
  EffectSpec effect;
  IntervalSpec interval;
};

/// Derives the degenerate bundle: singleton classes, one-step effects.
inline SpecBundle bundle_of(const SequentialSpec& s) {
  SpecBundle b;
  b.name = s.name;
  b.sequential = s;
  b.set = singleton_set_spec_of(s);
  b.effect = effect_spec_of(s);
  b.interval = interval_spec_of(b.effect);
  return b;
}

/// Bundle with the two-step effect form of D.
inline SpecBundle lock_object_bundle() {
  auto [seq, eff] = lock_object_spec();
  SpecBundle b;
  b.name = seq.name;
  b.sequential = seq;
  b.set = singleton_set_spec_of(seq);
  b.effect = eff;
  b.interval = interval_spec_of(eff);
  return b;
}

/// Horizontal composition: side-by-side product of fixed-width specs with
/// op names "part/op" routed to the owning part over its state slice. Parts
/// must keep their state width constant across transitions (register,
/// counter, lock-object do; fifo-queue does not).
inline SequentialSpec product_spec(const std::vector<std::pair<std::string, SequentialSpec>>& parts) {
  SequentialSpec s;
  s.name = "composite";
  std::vector<std::size_t> offset;
  std::vector<std::size_t> width;
  for (const auto& [prefix, part] : parts) {
    offset.push_back(s.initial_state.size());
    width.push_back(part.initial_state.size());
    s.initial_state.insert(s.initial_state.end(), part.initial_state.begin(),
                           part.initial_state.end());
    for (const auto& op : part.op_names) s.op_names.push_back(prefix + "/" + op);
  }
  s.apply = [parts, offset, width](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    auto slash = op.find('/');
    if (slash == std::string::npos) throw MalformedInput("composite op '" + op + "' lacks a part prefix");
    auto prefix = op.substr(0, slash);
    auto inner = op.substr(slash + 1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].first != prefix) continue;
      SpecState local(st.begin() + offset[i], st.begin() + offset[i] + width[i]);
      auto [next, ret] = parts[i].second.apply(local, inner, args);
      if (next.size() != width[i])
        throw MalformedInput("part '" + prefix + "' changed its state width");
      SpecState out = st;
      std::copy(next.begin(), next.end(), out.begin() + offset[i]);
      return {out, ret};
    }
    throw MalformedInput("composite has no part '" + prefix + "'");
  };
  return s;
}

/// Bundle whose set, effect and interval levels admit pairing; only the
/// sequential level forces every exchange to miss its partner.
inline SpecBundle exchanger_bundle() {
  SpecBundle b;
  auto set = exchanger_set_spec();
  b.name = "exchanger";
  b.sequential = set.base;
  b.set = std::move(set);
  b.effect = exchanger_effect_spec();
  b.interval = interval_spec_of(b.effect);
  return b;
}

/// Spec of a register viewed through a composite interface: F reads the
/// value a, writes a+1, reads again into b and returns 10a+b; set(v)
/// overwrites the value. Sequentially F maps s to s+1 returning 11s+1. The
/// effect form splits F at its three register accesses.
inline SpecBundle nested_composite_bundle() {
  SequentialSpec seq;
  seq.name = "nested-composite";
  seq.initial_state = {0};
  seq.op_names = {"F", "set"};
  seq.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "F") {
      detail::need_args(args, 0, "nested-composite.F");
      return {{st.at(0) + 1}, Value::integer(10 * st.at(0) + st.at(0) + 1)};
    }
    if (op == "set") {
      detail::need_args(args, 1, "nested-composite.set");
      return {{args[0].as_int()}, Value::unit()};
    }
    throw MalformedInput("nested-composite: unknown operation '" + op + "'");
  };

  EffectSpec eff;
  eff.name = seq.name;
  eff.initial_state = seq.initial_state;
  eff.decompose = [](const std::string& op, const Values& args) {
    EffectDecomposition d;
    if (op == "F") {
      detail::need_args(args, 0, "nested-composite.F");
      d.initial_locals = {0, 0};  // a, b
      d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>&)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{st, {st.at(0), 0}, std::nullopt};
      });
      d.steps.push_back([](const SpecState&, const std::vector<std::int64_t>& locals)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{{locals.at(0) + 1}, locals, std::nullopt};
      });
      d.steps.push_back([](const SpecState& st, const std::vector<std::int64_t>& locals)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{st, {locals.at(0), st.at(0)}, std::nullopt};
      });
      d.return_of = [](const std::vector<std::int64_t>& locals, const std::vector<Value>&) {
        return Value::integer(10 * locals.at(0) + locals.at(1));
      };
      return d;
    }
    if (op == "set") {
      detail::need_args(args, 1, "nested-composite.set");
      std::int64_t v = args[0].as_int();
      d.steps.push_back([v](const SpecState&, const std::vector<std::int64_t>&)
                            -> std::optional<EffectStepResult> {
        return EffectStepResult{{v}, {}, std::nullopt};
      });
      d.return_of = [](const std::vector<std::int64_t>&, const std::vector<Value>&) {
        return Value::unit();
      };
      return d;
    }
    throw MalformedInput("nested-composite: unknown operation '" + op + "'");
  };

  SpecBundle b;
  b.name = seq.name;
  b.sequential = seq;
  b.set = singleton_set_spec_of(seq);
  b.effect = std::move(eff);
  b.interval = interval_spec_of(b.effect);
  return b;
}

inline std::vector<std::string> builtin_spec_names() {
  return {"register", "lock-object", "counter", "fifo-queue"};
}

inline SpecBundle bundle_by_name(const std::string& name) {
  if (name == "register") return bundle_of(register_spec());
  if (name == "counter") return bundle_of(counter_spec());
  if (name == "fifo-queue") return bundle_of(fifo_queue_spec());
  if (name == "lock-object") return lock_object_bundle();
  if (name == "exchanger") return exchanger_bundle();
  if (name == "nested-composite") return nested_composite_bundle();
  throw MalformedInput("unknown spec '" + name + "'");
}

}  // namespace linsmr

#endif  // LINSMR_SPECS_HPP_
