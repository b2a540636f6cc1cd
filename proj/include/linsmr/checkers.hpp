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

#ifndef LINSMR_CHECKERS_HPP_
#define LINSMR_CHECKERS_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/specs.hpp"
#include "linsmr/value.hpp"
#include "linsmr/verdict.hpp"

namespace linsmr {

/// Caps for the exhaustive searches. Exceeding max_ops or max_nodes either
/// yields the distinguished budget-exhausted verdict (unknown) or throws,
/// per on_exhaustion.
struct SearchBudget {
  enum class OnExhaustion : std::uint8_t { reject_with_marker, error };

  std::size_t max_ops = 24;
  std::size_t max_nodes = 4000000;
  OnExhaustion on_exhaustion = OnExhaustion::reject_with_marker;
};

namespace detail {

// Ops in canonical (invocation_time, op_id) order with per-op data and the
// strict precedence relation as bitmasks over canonical indices.
struct CheckerInput {
  std::vector<OpId> ops;
  std::vector<std::string> names;
  std::vector<Values> args;
  std::vector<Value> returns;
  std::vector<Tick> inv_time;
  std::vector<Tick> resp_time;
  std::vector<std::uint64_t> preds;

  std::size_t size() const { return ops.size(); }
  std::uint64_t full_mask() const {
    return size() == 64 ? ~0ull : ((1ull << size()) - 1);
  }
};

inline CheckerInput prepare_input(const History& h) {
  if (!h.complete()) throw MalformedInput("history has pending operations");
  if (h.objects().size() > 1) throw MalformedInput("history spans more than one object");
  if (h.spans().size() > 64) throw MalformedInput("histories above 64 operations are unsupported");
  CheckerInput in;
  for (const auto& s : h.spans()) {
    in.ops.push_back(s.op_id);
    const auto& inv = h.invocation_of(s.op_id);
    in.names.push_back(inv.op_name);
    in.args.push_back(inv.payload);
    in.returns.push_back(h.return_of(s.op_id));
    in.inv_time.push_back(s.invocation_time);
    in.resp_time.push_back(*s.response_time);
  }
  in.preds.assign(in.size(), 0);
  for (std::size_t j = 0; j < in.size(); ++j)
    for (std::size_t i = 0; i < in.size(); ++i)
      if (i != j && in.resp_time[i] < in.inv_time[j]) in.preds[j] |= 1ull << i;
  return in;
}

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : v) hash_combine(h, static_cast<std::size_t>(x));
    return h;
  }
};

using KeySet = std::unordered_set<std::vector<std::int64_t>, VecHash>;

inline void append_value(std::vector<std::int64_t>& key, const Value& v) {
  key.push_back(static_cast<std::int64_t>(v.kind()));
  key.push_back(v.kind() == Value::Kind::integer ? v.as_int() : 0);
}

// Deepest-failure diagnosis collected while searching.
struct Diag {
  std::size_t depth = 0;
  bool present = false;
  Explanation expl;

  void note(std::size_t d, Explanation e) {
    if (!present || d >= depth) {
      depth = d;
      expl = std::move(e);
      present = true;
    }
  }

  Explanation finish(const CheckerInput& in) const {
    if (in.size() == 2 && present) {
      // Two operations with no accepting order: report the conflicting pair.
      return Explanation{Explanation::Kind::contradictory_order,
                         "no order of the two operations reproduces both recorded returns; " +
                             expl.detail,
                         {in.ops[0], in.ops[1]}};
    }
    if (present) return expl;
    return Explanation{Explanation::Kind::no_valid_placement, "no placement found", {}};
  }
};

class LinSearch {
 public:
  LinSearch(const CheckerInput& in, const SequentialSpec& spec, const SearchBudget& b)
      : in_(in), spec_(spec), budget_(b) {}

  bool run(const SpecState& initial) { return dfs(0, initial); }

  bool exhausted() const { return exhausted_; }
  const std::vector<std::size_t>& path() const { return path_; }
  const Diag& diag() const { return diag_; }

 private:
  bool dfs(std::uint64_t placed, const SpecState& state) {
    if (placed == in_.full_mask()) return true;
    std::vector<std::int64_t> key{static_cast<std::int64_t>(placed)};
    key.insert(key.end(), state.begin(), state.end());
    if (!visited_.insert(std::move(key)).second) return false;
    if (++nodes_ > budget_.max_nodes) {
      exhausted_ = true;
      return false;
    }
    std::size_t depth = static_cast<std::size_t>(std::popcount(placed));
    for (std::size_t j = 0; j < in_.size(); ++j) {
      if (placed & (1ull << j)) continue;
      if (in_.preds[j] & ~placed) continue;  // an op that precedes j is unplaced
      auto [next, ret] = spec_.apply(state, in_.names[j], in_.args[j]);
      if (ret != in_.returns[j]) {
        diag_.note(depth, Explanation{Explanation::Kind::return_mismatch,
                                      "after " + std::to_string(depth) + " linearized op(s), op " +
                                          std::to_string(in_.ops[j]) + " (" + in_.names[j] +
                                          ") recorded " + in_.returns[j].to_string() +
                                          " but the specification yields " + ret.to_string(),
                                      {in_.ops[j]}});
        continue;
      }
      path_.push_back(j);
      if (dfs(placed | (1ull << j), next)) return true;
      path_.pop_back();
      if (exhausted_) return false;
    }
    return false;
  }

  const CheckerInput& in_;
  const SequentialSpec& spec_;
  const SearchBudget& budget_;
  KeySet visited_;
  std::vector<std::size_t> path_;
  Diag diag_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
};

inline std::optional<Verdict> precheck(const CheckerInput& in, const SearchBudget& b, Level level) {
  if (b.max_ops < 1) throw MalformedInput("max_ops must be at least 1");
  if (in.size() > b.max_ops) {
    if (b.on_exhaustion == SearchBudget::OnExhaustion::error)
      throw BudgetExhausted("history exceeds max_ops=" + std::to_string(b.max_ops));
    return Verdict::exhausted(level, "history exceeds max_ops=" + std::to_string(b.max_ops));
  }
  if (in.size() == 0) return Verdict::accept(level, {});
  return std::nullopt;
}

inline Verdict exhausted_verdict(const SearchBudget& b, Level level) {
  if (b.on_exhaustion == SearchBudget::OnExhaustion::error)
    throw BudgetExhausted("node budget exceeded (max_nodes=" + std::to_string(b.max_nodes) + ")");
  return Verdict::exhausted(level, "node budget exceeded (max_nodes=" + std::to_string(b.max_nodes) +
                                       ")");
}

}  // namespace detail

/// Depth-first search over next-linearizable candidates, memoized on the
/// (linearized-set, state) pair. Accepts iff some total order of the ops
/// extending strict real-time precedence replays every recorded return.
inline Verdict check_linearizable(const History& h, const SequentialSpec& spec,
                                  const SearchBudget& budget = {}) {
  auto in = detail::prepare_input(h);
  for (const auto& n : in.names)
    if (!spec.has_op(n)) throw MalformedInput("operation '" + n + "' unknown to spec '" + spec.name + "'");
  if (auto v = detail::precheck(in, budget, Level::lin)) return *v;

  detail::LinSearch search(in, spec, budget);
  if (search.run(spec.initial_state)) {
    Witness w;
    for (auto j : search.path()) w.push_back(WitnessStep::point(in.ops[j]));
    return Verdict::accept(Level::lin, std::move(w));
  }
  if (search.exhausted()) return detail::exhausted_verdict(budget, Level::lin);
  return Verdict::reject(Level::lin, search.diag().finish(in));
}

/// All-permutations oracle for cross-validation; practical up to 8 ops.
/// Feasibility is checked pairwise: an order is admissible iff no earlier
/// placed op is strictly preceded by a later placed one.
inline bool naive_linearizable(const History& h, const SequentialSpec& spec) {
  auto in = detail::prepare_input(h);
  if (in.size() > 8) throw MalformedInput("naive oracle is limited to 8 operations");
  if (in.size() == 0) return true;
  std::vector<std::size_t> perm(in.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool feasible = true;
    for (std::size_t i = 0; i < perm.size() && feasible; ++i)
      for (std::size_t j = i + 1; j < perm.size() && feasible; ++j)
        if (in.preds[perm[i]] & (1ull << perm[j])) feasible = false;  // later op precedes earlier
    if (!feasible) continue;
    SpecState state = spec.initial_state;
    bool match = true;
    for (auto idx : perm) {
      auto [next, ret] = spec.apply(state, in.names[idx], in.args[idx]);
      if (ret != in.returns[idx]) {
        match = false;
        break;
      }
      state = std::move(next);
    }
    if (match) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Set linearizability: partitions ops into admissible simultaneity
/// classes, classes ordered extending precedence, each class placeable at
/// one instant common to all members' spans, joint transitions replaying
/// all returns.
inline Verdict check_set_linearizable(const History& h, const SetSpec& spec,
                                      const SearchBudget& budget = {}) {
  auto in = detail::prepare_input(h);
  for (const auto& n : in.names)
    if (!spec.base.has_op(n))
      throw MalformedInput("operation '" + n + "' unknown to spec '" + spec.base.name + "'");
  if (auto v = detail::precheck(in, budget, Level::set)) return *v;

  detail::KeySet visited;
  std::size_t nodes = 0;
  bool exhausted = false;
  std::vector<std::vector<std::size_t>> path;
  detail::Diag diag;

  // Candidate classes in (size, lexicographic) order so singleton-only
  // specs explore exactly like the linearizability search.
  std::function<bool(std::uint64_t, const SpecState&)> dfs =
      [&](std::uint64_t placed, const SpecState& state) -> bool {
    if (placed == in.full_mask()) return true;
    std::vector<std::int64_t> key{static_cast<std::int64_t>(placed)};
    key.insert(key.end(), state.begin(), state.end());
    if (!visited.insert(std::move(key)).second) return false;
    if (++nodes > budget.max_nodes) {
      exhausted = true;
      return false;
    }
    std::size_t depth = static_cast<std::size_t>(std::popcount(placed));
    std::vector<std::size_t> eligible;
    for (std::size_t j = 0; j < in.size(); ++j)
      if (!(placed & (1ull << j)) && !(in.preds[j] & ~placed)) eligible.push_back(j);

    std::vector<std::size_t> combo;
    std::function<bool(std::size_t, std::size_t)> try_combos =
        [&](std::size_t start, std::size_t want) -> bool {
      if (combo.size() == want) {
        if (want >= 2) {
          Tick lo = in.inv_time[combo[0]], hi = in.resp_time[combo[0]];
          for (auto j : combo) {
            lo = std::max(lo, in.inv_time[j]);
            hi = std::min(hi, in.resp_time[j]);
          }
          if (lo > hi) {
            diag.note(depth, Explanation{Explanation::Kind::no_common_instant,
                                         "candidate simultaneity set has no common instant",
                                         {}});
            return false;
          }
          std::vector<OpInstance> insts;
          for (auto j : combo) insts.push_back({in.names[j], in.args[j]});
          if (!spec.admissible(insts)) return false;
          auto [next, rets] = spec.joint_apply(state, insts);
          for (std::size_t k = 0; k < combo.size(); ++k)
            if (rets.at(k) != in.returns[combo[k]]) {
              diag.note(depth, Explanation{Explanation::Kind::return_mismatch,
                                           "joint transition yields " + rets.at(k).to_string() +
                                               " for op " + std::to_string(in.ops[combo[k]]) +
                                               " which recorded " +
                                               in.returns[combo[k]].to_string(),
                                           {in.ops[combo[k]]}});
              return false;
            }
          std::uint64_t mask = placed;
          for (auto j : combo) mask |= 1ull << j;
          path.push_back(combo);
          if (dfs(mask, next)) return true;
          path.pop_back();
          return false;
        }
        auto j = combo[0];
        auto [next, ret] = spec.base.apply(state, in.names[j], in.args[j]);
        if (ret != in.returns[j]) {
          diag.note(depth, Explanation{Explanation::Kind::return_mismatch,
                                       "op " + std::to_string(in.ops[j]) + " (" + in.names[j] +
                                           ") recorded " + in.returns[j].to_string() +
                                           " but the specification yields " + ret.to_string(),
                                       {in.ops[j]}});
        } else {
          path.push_back(combo);
          if (dfs(placed | (1ull << j), next)) return true;
          path.pop_back();
        }
        return false;
      }
      for (std::size_t i = start; i < eligible.size(); ++i) {
        combo.push_back(eligible[i]);
        bool ok = try_combos(i + 1, want);
        combo.pop_back();
        if (ok) return true;
        if (exhausted) return false;
      }
      return false;
    };

    for (std::size_t size = 1; size <= eligible.size(); ++size) {
      if (try_combos(0, size)) return true;
      if (exhausted) return false;
    }
    return false;
  };

  if (dfs(0, spec.base.initial_state)) {
    Witness w;
    for (const auto& cls : path) {
      std::vector<OpId> ids;
      for (auto j : cls) ids.push_back(in.ops[j]);
      w.push_back(WitnessStep::joint(std::move(ids)));
    }
    return Verdict::accept(Level::set, std::move(w));
  }
  if (exhausted) return detail::exhausted_verdict(budget, Level::set);
  return Verdict::reject(Level::set, diag.finish(in));
}

namespace detail {

// Shared machinery for multi-point and interval searching: per-op
// decompositions with progress, locals and observations.
struct MultiPointOps {
  std::vector<EffectDecomposition> decomp;
  std::vector<std::size_t> step_count;

  static MultiPointOps prepare(const CheckerInput& in,
                               const std::function<EffectDecomposition(const std::string&, const Values&)>& decompose) {
    MultiPointOps m;
    for (std::size_t i = 0; i < in.size(); ++i) {
      m.decomp.push_back(decompose(in.names[i], in.args[i]));
      if (m.decomp.back().steps.empty())
        throw MalformedInput("empty effect decomposition for operation '" + in.names[i] + "'");
      m.step_count.push_back(m.decomp.back().steps.size());
    }
    return m;
  }
};

struct OpRun {
  std::size_t progress = 0;
  std::vector<std::int64_t> locals;
  std::vector<Value> obs;
};

inline std::vector<std::int64_t> run_key(const std::vector<OpRun>& runs, const SpecState& state,
                                         std::uint64_t extra) {
  std::vector<std::int64_t> key{static_cast<std::int64_t>(extra)};
  key.insert(key.end(), state.begin(), state.end());
  for (const auto& r : runs) {
    key.push_back(static_cast<std::int64_t>(r.progress));
    key.push_back(static_cast<std::int64_t>(r.locals.size()));
    key.insert(key.end(), r.locals.begin(), r.locals.end());
    key.push_back(static_cast<std::int64_t>(r.obs.size()));
    for (const auto& v : r.obs) append_value(key, v);
  }
  return key;
}

}  // namespace detail

/// Multi-point linearizability: each op's effect steps are placed at
/// totally ordered points, per-op step order preserved, and whenever one
/// op strictly precedes another every step of the first comes before every
/// step of the second; global replay reproduces observations and returns.
inline Verdict check_mp_linearizable(const History& h, const EffectSpec& spec,
                                     const SearchBudget& budget = {}) {
  auto in = detail::prepare_input(h);
  if (auto v = detail::precheck(in, budget, Level::mp)) return *v;
  auto ops = detail::MultiPointOps::prepare(in, spec.decompose);

  std::vector<detail::OpRun> runs(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) runs[i].locals = ops.decomp[i].initial_locals;

  detail::KeySet visited;
  std::size_t nodes = 0;
  bool exhausted = false;
  std::vector<std::pair<std::size_t, std::size_t>> path;  // (op index, step index)
  detail::Diag diag;

  std::function<bool(std::uint64_t, const SpecState&)> dfs =
      [&](std::uint64_t completed, const SpecState& state) -> bool {
    if (completed == in.full_mask()) return true;
    auto key = detail::run_key(runs, state, completed);
    if (!visited.insert(std::move(key)).second) return false;
    if (++nodes > budget.max_nodes) {
      exhausted = true;
      return false;
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (runs[i].progress == ops.step_count[i]) continue;
      if (in.preds[i] & ~completed) continue;  // predecessors must have all steps placed
      auto result = ops.decomp[i].steps[runs[i].progress](state, runs[i].locals);
      if (!result) {
        diag.note(path.size(), Explanation{Explanation::Kind::no_valid_placement,
                                           "step " + std::to_string(runs[i].progress) + " of op " +
                                               std::to_string(in.ops[i]) +
                                               " is disabled in every reachable state",
                                           {in.ops[i]}});
        continue;
      }
      detail::OpRun saved = runs[i];
      runs[i].progress++;
      runs[i].locals = result->locals;
      if (result->observation) runs[i].obs.push_back(*result->observation);
      bool completes = runs[i].progress == ops.step_count[i];
      bool ok = true;
      if (completes) {
        Value ret = ops.decomp[i].return_of(runs[i].locals, runs[i].obs);
        if (ret != in.returns[i]) {
          diag.note(path.size(), Explanation{Explanation::Kind::return_mismatch,
                                             "op " + std::to_string(in.ops[i]) + " (" + in.names[i] +
                                                 ") recorded " + in.returns[i].to_string() +
                                                 " but the placement yields " + ret.to_string(),
                                             {in.ops[i]}});
          ok = false;
        }
      }
      if (ok) {
        path.emplace_back(i, saved.progress);
        std::uint64_t next_completed = completed | (completes ? (1ull << i) : 0);
        if (dfs(next_completed, result->state)) return true;
        path.pop_back();
      }
      runs[i] = std::move(saved);
      if (exhausted) return false;
    }
    return false;
  };

  if (dfs(0, spec.initial_state)) {
    Witness w;
    for (auto [i, s] : path) w.push_back(WitnessStep::step(in.ops[i], s));
    return Verdict::accept(Level::mp, std::move(w));
  }
  if (exhausted) return detail::exhausted_verdict(budget, Level::mp);
  return Verdict::reject(Level::mp, diag.finish(in));
}

/// Interval linearizability against the automaton reading of the spec: a
/// run consumes each invocation no earlier than its event, emits each
/// response no later than its event, with interaction points ordered
/// consistently (tracked as the running maximum L of consumed invocation
/// times; an emission needs its response time >= L).
inline Verdict check_interval_linearizable(const History& h, const IntervalSpec& spec,
                                           const SearchBudget& budget = {}) {
  auto in = detail::prepare_input(h);
  if (auto v = detail::precheck(in, budget, Level::interval)) return *v;
  auto ops = detail::MultiPointOps::prepare(in, spec.decompose);

  std::vector<detail::OpRun> runs(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) runs[i].locals = ops.decomp[i].initial_locals;

  detail::KeySet visited;
  std::size_t nodes = 0;
  bool exhausted = false;
  Witness path;
  detail::Diag diag;
  std::uint64_t emitted = 0;

  std::function<bool(Tick, const SpecState&)> dfs = [&](Tick lower, const SpecState& state) -> bool {
    if (emitted == in.full_mask()) return true;
    auto key = detail::run_key(runs, state, emitted);
    if (!visited.insert(std::move(key)).second) return false;
    if (++nodes > budget.max_nodes) {
      exhausted = true;
      return false;
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (emitted & (1ull << i)) continue;
      if (runs[i].progress < ops.step_count[i]) {
        // A predecessor's response event lies before this op's invocation,
        // so its emission point must come before this consumption point;
        // gating on it here prunes doomed orders early.
        if (runs[i].progress == 0 && (in.preds[i] & ~emitted)) continue;
        auto result = ops.decomp[i].steps[runs[i].progress](state, runs[i].locals);
        if (result) {
          detail::OpRun saved = runs[i];
          bool consumes = runs[i].progress == 0;
          runs[i].progress++;
          runs[i].locals = result->locals;
          if (result->observation) runs[i].obs.push_back(*result->observation);
          if (runs[i].progress == ops.step_count[i]) {
            // Locals and observations are final; a wrong return can never be
            // emitted, so cut the branch here instead of at emission time.
            Value ret = ops.decomp[i].return_of(runs[i].locals, runs[i].obs);
            if (ret != in.returns[i]) {
              diag.note(path.size(),
                        Explanation{Explanation::Kind::return_mismatch,
                                    "op " + std::to_string(in.ops[i]) + " (" + in.names[i] +
                                        ") recorded " + in.returns[i].to_string() +
                                        " but the run yields " + ret.to_string(),
                                    {in.ops[i]}});
              runs[i] = std::move(saved);
              continue;
            }
          }
          if (consumes) path.push_back(WitnessStep::consume(in.ops[i]));
          path.push_back(WitnessStep::step(in.ops[i], saved.progress));
          Tick next_lower = consumes ? std::max(lower, in.inv_time[i]) : lower;
          if (dfs(next_lower, result->state)) return true;
          path.pop_back();
          if (consumes) path.pop_back();
          runs[i] = std::move(saved);
          if (exhausted) return false;
        }
      } else {
        // All internal transitions done; try emitting the response.
        if (in.resp_time[i] < lower) {
          diag.note(path.size(),
                    Explanation{Explanation::Kind::contradictory_order,
                                "response of op " + std::to_string(in.ops[i]) +
                                    " would have to be emitted after a later-invoked op was consumed",
                                {in.ops[i]}});
          continue;
        }
        Value ret = ops.decomp[i].return_of(runs[i].locals, runs[i].obs);
        if (ret != in.returns[i]) {
          diag.note(path.size(), Explanation{Explanation::Kind::return_mismatch,
                                             "op " + std::to_string(in.ops[i]) + " (" + in.names[i] +
                                                 ") recorded " + in.returns[i].to_string() +
                                                 " but the run yields " + ret.to_string(),
                                             {in.ops[i]}});
          continue;
        }
        emitted |= 1ull << i;
        path.push_back(WitnessStep::emit(in.ops[i]));
        if (dfs(lower, state)) return true;
        path.pop_back();
        emitted &= ~(1ull << i);
        if (exhausted) return false;
      }
    }
    return false;
  };

  Tick start = std::numeric_limits<Tick>::min();
  if (dfs(start, spec.initial_state)) return Verdict::accept(Level::interval, path);
  if (exhausted) return detail::exhausted_verdict(budget, Level::interval);
  return Verdict::reject(Level::interval, diag.finish(in));
}

/// Processing-order obligations of the replication layer. `o1`: every
/// client's requests are processed in issue order. `o2`: every recorded
/// causal edge r -> r' is respected by the processing order.
struct SchneiderInput {
  std::vector<std::vector<std::uint64_t>> client_issue_order;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> causal_edges;
  std::vector<std::uint64_t> processing_order;
};

inline std::pair<bool, bool> check_schneider_properties(const SchneiderInput& in) {
  std::map<std::uint64_t, std::size_t> pos;
  for (std::size_t i = 0; i < in.processing_order.size(); ++i) {
    if (!pos.emplace(in.processing_order[i], i).second)
      throw MalformedInput("request processed twice");
  }
  auto position = [&pos](std::uint64_t r) {
    auto it = pos.find(r);
    if (it == pos.end()) throw MalformedInput("request " + std::to_string(r) + " never processed");
    return it->second;
  };
  bool o1 = true;
  for (const auto& client : in.client_issue_order)
    for (std::size_t i = 0; i + 1 < client.size(); ++i)
      if (position(client[i]) > position(client[i + 1])) o1 = false;
  bool o2 = true;
  for (const auto& [r, r2] : in.causal_edges)
    if (position(r) > position(r2)) o2 = false;
  return {o1, o2};
}

/// Runs every level of the bundle and flags containment violations: a
/// lower level accepting while a higher level definitely rejects.
inline HierarchyReport check_hierarchy(const History& h, const SpecBundle& bundle,
                                       const SearchBudget& budget = {}) {
  HierarchyReport r;
  r.lin = check_linearizable(h, bundle.sequential, budget);
  r.set = check_set_linearizable(h, bundle.set, budget);
  r.mp = check_mp_linearizable(h, bundle.effect, budget);
  r.interval = check_interval_linearizable(h, bundle.interval, budget);

  auto violates = [](const Verdict& lower, const Verdict& higher) {
    return lower.accepted && !higher.accepted && !higher.unknown();
  };
  auto flag = [&r](const char* pair) {
    r.containment_violation = true;
    if (!r.violation_detail.empty()) r.violation_detail += "; ";
    r.violation_detail += pair;
  };
  if (violates(r.lin, r.set)) flag("lin accepted but set rejected");
  if (violates(r.lin, r.mp)) flag("lin accepted but mp rejected");
  if (violates(r.lin, r.interval)) flag("lin accepted but interval rejected");
  if (violates(r.mp, r.interval)) flag("mp accepted but interval rejected");
  if (violates(r.set, r.interval)) flag("set accepted but interval rejected");
  return r;
}

inline Verdict check_level(const History& h, const SpecBundle& bundle, Level level,
                           const SearchBudget& budget = {}) {
  switch (level) {
    case Level::lin: return check_linearizable(h, bundle.sequential, budget);
    case Level::set: return check_set_linearizable(h, bundle.set, budget);
    case Level::mp: return check_mp_linearizable(h, bundle.effect, budget);
    case Level::interval: return check_interval_linearizable(h, bundle.interval, budget);
  }
  throw MalformedInput("unknown level");
}

// Witness replay validators: independent linear re-checks of accepted
// placements, used to uphold the replayability guarantee in tests.

inline bool replay_lin_witness(const History& h, const SequentialSpec& spec, const Witness& w) {
  auto in = detail::prepare_input(h);
  if (w.size() != in.size()) return false;
  std::uint64_t placed = 0;
  SpecState state = spec.initial_state;
  for (const auto& stepw : w) {
    if (stepw.kind != WitnessStep::Kind::point || stepw.ops.size() != 1) return false;
    auto it = std::find(in.ops.begin(), in.ops.end(), stepw.ops[0]);
    if (it == in.ops.end()) return false;
    std::size_t j = static_cast<std::size_t>(it - in.ops.begin());
    if (placed & (1ull << j)) return false;
    if (in.preds[j] & ~placed) return false;
    auto [next, ret] = spec.apply(state, in.names[j], in.args[j]);
    if (ret != in.returns[j]) return false;
    state = std::move(next);
    placed |= 1ull << j;
  }
  return placed == in.full_mask();
}

inline bool replay_set_witness(const History& h, const SetSpec& spec, const Witness& w) {
  auto in = detail::prepare_input(h);
  std::uint64_t placed = 0;
  SpecState state = spec.base.initial_state;
  for (const auto& cls : w) {
    if (cls.kind != WitnessStep::Kind::joint || cls.ops.empty()) return false;
    std::vector<std::size_t> idx;
    for (auto op : cls.ops) {
      auto it = std::find(in.ops.begin(), in.ops.end(), op);
      if (it == in.ops.end()) return false;
      idx.push_back(static_cast<std::size_t>(it - in.ops.begin()));
    }
    Tick lo = in.inv_time[idx[0]], hi = in.resp_time[idx[0]];
    for (auto j : idx) {
      if (placed & (1ull << j)) return false;
      if (in.preds[j] & ~placed) return false;
      lo = std::max(lo, in.inv_time[j]);
      hi = std::min(hi, in.resp_time[j]);
    }
    if (idx.size() == 1) {
      auto j = idx[0];
      auto [next, ret] = spec.base.apply(state, in.names[j], in.args[j]);
      if (ret != in.returns[j]) return false;
      state = std::move(next);
    } else {
      if (lo > hi) return false;
      std::vector<OpInstance> insts;
      for (auto j : idx) insts.push_back({in.names[j], in.args[j]});
      if (!spec.admissible(insts)) return false;
      auto [next, rets] = spec.joint_apply(state, insts);
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (rets.at(k) != in.returns[idx[k]]) return false;
      state = std::move(next);
    }
    for (auto j : idx) placed |= 1ull << j;
  }
  return placed == in.full_mask();
}

inline bool replay_mp_witness(const History& h, const EffectSpec& spec, const Witness& w) {
  auto in = detail::prepare_input(h);
  auto ops = detail::MultiPointOps::prepare(in, spec.decompose);
  std::vector<detail::OpRun> runs(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) runs[i].locals = ops.decomp[i].initial_locals;
  std::uint64_t completed = 0;
  SpecState state = spec.initial_state;
  for (const auto& stepw : w) {
    if (stepw.kind != WitnessStep::Kind::step || stepw.ops.size() != 1) return false;
    auto it = std::find(in.ops.begin(), in.ops.end(), stepw.ops[0]);
    if (it == in.ops.end()) return false;
    std::size_t i = static_cast<std::size_t>(it - in.ops.begin());
    if (stepw.step_index != runs[i].progress) return false;  // per-op order preserved
    if (runs[i].progress >= ops.step_count[i]) return false;
    if (in.preds[i] & ~completed) return false;  // predecessors fully placed
    auto result = ops.decomp[i].steps[runs[i].progress](state, runs[i].locals);
    if (!result) return false;
    runs[i].progress++;
    runs[i].locals = result->locals;
    if (result->observation) runs[i].obs.push_back(*result->observation);
    state = result->state;
    if (runs[i].progress == ops.step_count[i]) {
      if (ops.decomp[i].return_of(runs[i].locals, runs[i].obs) != in.returns[i]) return false;
      completed |= 1ull << i;
    }
  }
  return completed == in.full_mask();
}

inline bool replay_interval_witness(const History& h, const IntervalSpec& spec, const Witness& w) {
  auto in = detail::prepare_input(h);
  auto ops = detail::MultiPointOps::prepare(in, spec.decompose);
  std::vector<detail::OpRun> runs(in.size());
  std::vector<bool> consumed(in.size(), false);
  for (std::size_t i = 0; i < in.size(); ++i) runs[i].locals = ops.decomp[i].initial_locals;
  std::uint64_t emitted = 0;
  SpecState state = spec.initial_state;
  Tick lower = std::numeric_limits<Tick>::min();
  for (const auto& stepw : w) {
    if (stepw.ops.size() != 1) return false;
    auto it = std::find(in.ops.begin(), in.ops.end(), stepw.ops[0]);
    if (it == in.ops.end()) return false;
    std::size_t i = static_cast<std::size_t>(it - in.ops.begin());
    switch (stepw.kind) {
      case WitnessStep::Kind::consume:
        if (consumed[i]) return false;
        consumed[i] = true;
        lower = std::max(lower, in.inv_time[i]);
        break;
      case WitnessStep::Kind::step: {
        if (!consumed[i] || runs[i].progress >= ops.step_count[i]) return false;
        if (stepw.step_index != runs[i].progress) return false;
        auto result = ops.decomp[i].steps[runs[i].progress](state, runs[i].locals);
        if (!result) return false;
        runs[i].progress++;
        runs[i].locals = result->locals;
        if (result->observation) runs[i].obs.push_back(*result->observation);
        state = result->state;
        break;
      }
      case WitnessStep::Kind::emit:
        if (!consumed[i] || runs[i].progress != ops.step_count[i]) return false;
        if (emitted & (1ull << i)) return false;
        if (in.resp_time[i] < lower) return false;
        if (ops.decomp[i].return_of(runs[i].locals, runs[i].obs) != in.returns[i]) return false;
        emitted |= 1ull << i;
        break;
      default:
        return false;
    }
  }
  return emitted == in.full_mask();
}

/// Folds a multi-object history into a single composite object whose op
/// names are "object/op". Checked against product_spec this realizes
/// horizontal composition.
inline History flatten_objects(const History& h, const std::string& composite_name = "composite") {
  std::vector<EventRecord> events = h.events();
  for (auto& e : events) {
    e.op_name = e.object + "/" + e.op_name;
    e.object = composite_name;
  }
  return History::build(std::move(events));
}

}  // namespace linsmr

#endif  // LINSMR_CHECKERS_HPP_
