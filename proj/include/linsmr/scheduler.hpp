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

#ifndef LINSMR_SCHEDULER_HPP_
#define LINSMR_SCHEDULER_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/program.hpp"
#include "linsmr/specs.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

enum class SchedulerKind { sequential, lock_level };

inline std::string to_string(SchedulerKind k) {
  return k == SchedulerKind::sequential ? "sequential" : "lock-level";
}

/// One request as delivered to a replica.
struct ExecRequest {
  std::uint64_t request_id = 0;
  std::string client;
  std::string object;
  std::string op_name;
  Values args;

  friend bool operator==(const ExecRequest&, const ExecRequest&) = default;
};

/// Replica-local outcome of one request. `completed` is false when the
/// replica crashed before the request returned.
struct ExecResult {
  std::uint64_t request_id = 0;
  bool completed = false;
  Value ret;
  Tick inner_inv = 0;
  Tick inner_resp = 0;

  friend bool operator==(const ExecResult&, const ExecResult&) = default;
};

/// One atomic application on a builtin object, either a direct request or
/// a nested call issued from a program.
struct BuiltinOpEvent {
  std::string client;
  std::string object;
  std::string op_name;
  Values args;
  Value ret;
  Tick inv = 0;
  Tick resp = 0;
};

using BuiltinOpSink = std::function<void(const BuiltinOpEvent&)>;

/// Named object instances of one replica: program objects carry shared
/// state plus condition latches, builtin objects a registry spec state.
class ObjectHeap {
 public:
  struct Entry {
    ObjectDef def;
    SequentialSpec builtin_spec;  // valid iff def.is_builtin()
    SpecState state;
  };

  void add(const ObjectDef& def) {
    if (index_.count(def.name)) throw ConfigInvalid("duplicate object '" + def.name + "'");
    Entry e;
    e.def = def;
    if (def.is_builtin()) {
      e.builtin_spec = bundle_by_name(def.builtin).sequential;
      e.state = e.builtin_spec.initial_state;
    } else {
      e.state = def.initial_state();
    }
    index_[def.name] = entries_.size();
    entries_.push_back(std::move(e));
  }

  bool has(const std::string& name) const { return index_.count(name) != 0; }

  Entry& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigInvalid("unknown object '" + name + "'");
    return entries_[it->second];
  }
  const Entry& at(const std::string& name) const {
    return const_cast<ObjectHeap*>(this)->at(name);
  }

  /// Final shared-variable valuation per object.
  std::map<std::string, SpecState> states() const {
    std::map<std::string, SpecState> out;
    for (const auto& e : entries_) out[e.def.name] = e.state;
    return out;
  }

  bool supports(const std::string& object, const std::string& op) const {
    if (!has(object)) return false;
    const Entry& e = at(object);
    return e.def.is_builtin() ? e.builtin_spec.has_op(op) : e.def.has_program(op);
  }

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
};

namespace detail {

/// Deterministic scheduling rotation: a pure function of the run seed, the
/// wave number and the round counter; never of anything replica-specific.
inline std::uint64_t sched_rot(std::uint64_t seed, std::uint64_t wave, std::uint64_t round) {
  return mix64(seed ^ mix64((wave << 32) ^ (round + 1)));
}

}  // namespace detail

/// Runs one delivered batch of requests to completion on a heap.
///
/// The lock-level scheduler is round-based and weakly deterministic: every
/// quantum runs one thread up to its next lock handover (a blocked
/// acquisition, an unlock, a nested call, a wait, or the return); which
/// runnable thread runs next is a pure function of (delivery order, seed,
/// wave, round). The sequential scheduler runs each request to completion
/// in delivery order and throws DeadlockDetected at any unsignaled wait,
/// since it never switches to the request that would signal.
///
/// `clock` is the replica-local tick counter, advanced by one per executed
/// instruction. With `crash_at` set the replica halts at that tick and
/// unfinished requests stay incomplete.
class WaveExecutor {
 public:
  WaveExecutor(ObjectHeap& heap, Tick& clock, SchedulerKind scheduler, std::uint64_t seed,
               std::uint64_t wave_index, std::optional<Tick> crash_at = std::nullopt,
               BuiltinOpSink sink = nullptr)
      : heap_(heap), clock_(clock), scheduler_(scheduler), seed_(seed), wave_(wave_index),
        crash_at_(crash_at), sink_(std::move(sink)) {}

  std::vector<ExecResult> run(const std::vector<ExecRequest>& wave) {
    threads_.clear();
    for (const auto& r : wave) threads_.push_back(make_thread(r));

    std::uint64_t round = 0;
    while (!halted_) {
      std::vector<std::size_t> runnable;
      bool unfinished = false;
      for (std::size_t i = 0; i < threads_.size(); ++i) {
        if (threads_[i].st == Thread::St::done) continue;
        unfinished = true;
        if (is_runnable(threads_[i])) runnable.push_back(i);
      }
      if (!unfinished) break;
      if (scheduler_ == SchedulerKind::sequential) {
        std::size_t first = 0;
        while (threads_[first].st == Thread::St::done) ++first;
        if (!is_runnable(threads_[first]))
          throw DeadlockDetected("request " + std::to_string(threads_[first].req.request_id) +
                                 " waits on an unsignaled condition under the sequential "
                                 "scheduler");
        run_quantum(first);
      } else {
        if (runnable.empty())
          throw DeadlockDetected("no runnable request; pending waits can never be signaled");
        run_quantum(runnable[detail::sched_rot(seed_, wave_, round) % runnable.size()]);
      }
      ++round;
    }

    std::vector<ExecResult> out;
    for (const auto& t : threads_) {
      ExecResult r;
      r.request_id = t.req.request_id;
      r.completed = t.st == Thread::St::done;
      r.ret = t.ret;
      r.inner_inv = t.inner_inv;
      r.inner_resp = t.inner_resp;
      out.push_back(std::move(r));
    }
    return out;
  }

  bool halted() const { return halted_; }

 private:
  struct Thread {
    enum class St { fresh, ready, lock_blocked, cond_blocked, done };

    ExecRequest req;
    const Program* prog = nullptr;  // null for builtin requests
    std::size_t pc = 0;
    std::map<std::string, std::int64_t> env;
    St st = St::fresh;
    std::string blocked_lock;  // lock_blocked: the lock to acquire
    std::string blocked_cond;  // cond_blocked: the awaited condition
    Tick inner_inv = 0;
    Tick inner_resp = 0;
    Value ret;
  };

  Thread make_thread(const ExecRequest& r) {
    Thread t;
    t.req = r;
    ObjectHeap::Entry& e = heap_.at(r.object);
    if (!e.def.is_builtin()) {
      t.prog = &e.def.program(r.op_name);
      if (r.args.size() != t.prog->params.size())
        throw ConfigInvalid("request " + std::to_string(r.request_id) + ": operation '" +
                            r.op_name + "' takes " + std::to_string(t.prog->params.size()) +
                            " argument(s)");
      for (std::size_t i = 0; i < r.args.size(); ++i)
        t.env[t.prog->params[i]] = r.args[i].as_int();
    }
    return t;
  }

  bool is_runnable(const Thread& t) const {
    switch (t.st) {
      case Thread::St::fresh:
      case Thread::St::ready:
        return true;
      case Thread::St::lock_blocked:
        return lock_owner_.count(lock_key(t, t.blocked_lock)) == 0;
      default:
        return false;
    }
  }

  static std::string lock_key(const Thread& t, const std::string& lock) {
    return t.req.object + "/" + lock;
  }
  static std::string cond_key(const Thread& t, const std::string& cond) {
    return t.req.object + "/" + cond;
  }

  /// True if the next tick may still execute; otherwise halts the replica.
  bool tick() {
    if (crash_at_ && clock_ + 1 >= *crash_at_) {
      halted_ = true;
      return false;
    }
    ++clock_;
    return true;
  }

  void run_quantum(std::size_t idx) {
    Thread& t = threads_[idx];
    if (t.st == Thread::St::fresh) {
      if (!tick()) return;
      t.inner_inv = clock_;
      t.st = Thread::St::ready;
      if (!t.prog) {
        run_builtin_request(t);
        return;
      }
    }
    if (t.st == Thread::St::lock_blocked) {
      lock_owner_[lock_key(t, t.blocked_lock)] = idx;
      t.st = Thread::St::ready;
      // pc still points at the acquiring `lock`, or at a `wait` being
      // re-entered after its signal; both re-execute and pass.
    }

    ObjectHeap::Entry& obj = heap_.at(t.req.object);
    while (true) {
      const Instr& instr = t.prog->body[t.pc];
      switch (instr.kind) {
        case Instr::Kind::lock: {
          auto key = lock_key(t, instr.target);
          auto it = lock_owner_.find(key);
          if (it != lock_owner_.end() && it->second != idx) {
            t.st = Thread::St::lock_blocked;
            t.blocked_lock = instr.target;
            return;
          }
          if (!tick()) return;
          lock_owner_[key] = idx;
          ++t.pc;
          break;
        }
        case Instr::Kind::unlock:
          if (!tick()) return;
          lock_owner_.erase(lock_key(t, instr.target));
          ++t.pc;
          return;  // lock handover point
        case Instr::Kind::read:
          if (!tick()) return;
          t.env[instr.target] = obj.state.at(obj.def.shared_index(instr.source));
          ++t.pc;
          break;
        case Instr::Kind::write:
          if (!tick()) return;
          obj.state.at(obj.def.shared_index(instr.target)) = instr.expr.eval(t.env);
          ++t.pc;
          break;
        case Instr::Kind::compute:
          if (!tick()) return;
          t.env[instr.target] = instr.expr.eval(t.env);
          ++t.pc;
          break;
        case Instr::Kind::wait: {
          std::size_t latch = obj.def.cond_index(instr.target);
          if (obj.state.at(latch) != 0) {
            // Sticky latch already set: the wait passes, the lock is kept.
            if (!tick()) return;
            ++t.pc;
            break;
          }
          if (!tick()) return;
          lock_owner_.erase(lock_key(t, instr.source));
          t.st = Thread::St::cond_blocked;
          t.blocked_cond = instr.target;
          t.blocked_lock = instr.source;  // reacquired on wakeup
          return;
        }
        case Instr::Kind::signal: {
          if (!tick()) return;
          obj.state.at(obj.def.cond_index(instr.target)) = 1;
          for (auto& other : threads_) {
            if (other.st == Thread::St::cond_blocked &&
                cond_key(other, other.blocked_cond) == cond_key(t, instr.target))
              other.st = Thread::St::lock_blocked;
          }
          ++t.pc;
          break;
        }
        case Instr::Kind::call: {
          Values args;
          for (const auto& a : instr.args) args.push_back(Value::integer(a.eval(t.env)));
          Value r = apply_builtin(t.req.client, instr.source, instr.op, args);
          if (halted_) return;
          if (instr.target != "_") {
            if (!r.is_int())
              throw UnsupportedProgram("nested call to '" + instr.source + "." + instr.op +
                                       "' returns no integer to bind");
            t.env[instr.target] = r.as_int();
          }
          ++t.pc;
          return;  // nested invocations are interleaving points
        }
        case Instr::Kind::ret: {
          if (!tick()) return;
          t.ret = instr.returns_unit ? Value::unit() : Value::integer(instr.expr.eval(t.env));
          t.inner_resp = clock_;
          t.st = Thread::St::done;
          return;
        }
      }
    }
  }

  void run_builtin_request(Thread& t) {
    t.ret = apply_builtin(t.req.client, t.req.object, t.req.op_name, t.req.args);
    if (halted_) return;
    if (!tick()) return;
    t.inner_resp = clock_;
    t.st = Thread::St::done;
  }

  Value apply_builtin(const std::string& client, const std::string& object,
                      const std::string& op, const Values& args) {
    ObjectHeap::Entry& e = heap_.at(object);
    if (!e.def.is_builtin())
      throw UnsupportedProgram("nested calls may only target builtin objects, not '" + object +
                               "'");
    if (!tick()) return Value::unit();
    Tick inv = clock_;
    auto [next, ret] = e.builtin_spec.apply(e.state, op, args);
    if (!tick()) return Value::unit();
    e.state = std::move(next);
    if (sink_) sink_({client, object, op, args, ret, inv, clock_});
    return ret;
  }

  ObjectHeap& heap_;
  Tick& clock_;
  SchedulerKind scheduler_;
  std::uint64_t seed_;
  std::uint64_t wave_;
  std::optional<Tick> crash_at_;
  BuiltinOpSink sink_;
  std::vector<Thread> threads_;
  std::map<std::string, std::size_t> lock_owner_;  // "object/lock" -> thread index
  bool halted_ = false;
};

}  // namespace linsmr

#endif  // LINSMR_SCHEDULER_HPP_
