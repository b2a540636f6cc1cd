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

#ifndef LINSMR_SCENARIOS_HPP_
#define LINSMR_SCENARIOS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/program.hpp"
#include "linsmr/quorum.hpp"
#include "linsmr/simulator.hpp"
#include "linsmr/specs.hpp"

namespace linsmr {

/// The lock-based two-operation object: D adds one under the lock, then
/// doubles under a second critical section; E reads between or around
/// them.
inline const char* listing_object_source() {
  return R"(
object lockobj {
  shared s = 1
  lock m
  program D() {
    lock m
    read w s
    compute w w + 1
    write s w
    unlock m
    compute w w * 2
    lock m
    write s w
    unlock m
    return ok
  }
  program E() {
    lock m
    read v s
    unlock m
    return v
  }
}
)";
}

/// One-cell producer/consumer: take blocks on a condition until put has
/// stored a value and signaled.
inline const char* prodcons_object_source() {
  return R"(
object prodcons {
  shared data = 0
  lock m
  cond c
  program put(v) {
    lock m
    write data v
    signal c
    unlock m
    return ok
  }
  program take() {
    lock m
    wait c m
    read v data
    unlock m
    return v
  }
}
)";
}

/// Composite caller over a builtin register "agg": two reads around an
/// increment-by-one write, folded into one return value.
inline const char* nested_caller_source() {
  return R"(
object comp {
  program F() {
    call a agg.read()
    call _ agg.write(a + 1)
    call b agg.read()
    compute r a * 10 + b
    return r
  }
}
)";
}

/// Sequential view of the producer/consumer cell.
inline SequentialSpec prodcons_spec() {
  SequentialSpec s;
  s.name = "prodcons";
  s.initial_state = {0};
  s.op_names = {"put", "take"};
  s.apply = [](const SpecState& st, const std::string& op, const Values& args)
      -> std::pair<SpecState, Value> {
    if (op == "put") {
      detail::need_args(args, 1, "prodcons.put");
      return {{args[0].as_int()}, Value::unit()};
    }
    if (op == "take") {
      detail::need_args(args, 0, "prodcons.take");
      return {st, Value::integer(st.at(0))};
    }
    throw MalformedInput("prodcons: unknown operation '" + op + "'");
  };
  return s;
}

// Default seeds chosen so the interesting interleavings occur: the lock
// scheduler splits D around E, and the direct write lands between the
// caller's own write and its second read.
inline constexpr std::uint64_t kListingScenarioSeed = 1;
inline constexpr std::uint64_t kNestedScenarioSeed = 4;
inline constexpr std::uint64_t kConditionalWaitSeed = 1;

/// Runs D and E concurrently through full replication and returns the
/// client-side outcome.
inline SimOutput run_listing_scenario(std::uint64_t seed = kListingScenarioSeed) {
  SimConfig cfg;
  cfg.seed = seed;
  Workload w;
  w.clients.push_back({"cd", 1, 1, {{1, "lockobj", "D", {}}}});
  w.clients.push_back({"ce", 1, 1, {{2, "lockobj", "E", {}}}});
  return run_smr(cfg, w, {compile_object(listing_object_source())});
}

/// Runs take (first) and put concurrently; under the lock-level scheduler
/// take waits until put signals. The sequential scheduler deadlocks
/// instead, since take can never yield to put.
inline SimOutput run_conditional_wait_scenario(std::uint64_t seed = kConditionalWaitSeed,
                                               SchedulerKind scheduler = SchedulerKind::lock_level) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.scheduler = scheduler;
  Workload w;
  w.clients.push_back({"ca", 1, 1, {{1, "prodcons", "take", {}}}});
  w.clients.push_back({"cb", 2, 1, {{2, "prodcons", "put", {Value::integer(5)}}}});
  return run_smr(cfg, w, {compile_object(prodcons_object_source())});
}

struct NestedRun {
  History composite;   // F and the direct write, as composite operations
  History aggregated;  // every register access, as its own operation
  Value f_return;
};

/// One replica heap, one wave: the composite caller F races a direct
/// write(5) on its underlying register. The direct write is relabeled
/// "set" in the composite view.
inline NestedRun run_nested_scenario(std::uint64_t seed = kNestedScenarioSeed) {
  ObjectHeap heap;
  heap.add(compile_object(nested_caller_source()));
  ObjectDef agg;
  agg.name = "agg";
  agg.builtin = "register";
  heap.add(agg);

  HistoryBuilder inner;
  Tick clock = 0;
  WaveExecutor ex(heap, clock, SchedulerKind::lock_level, seed, 1, std::nullopt,
                  [&inner](const BuiltinOpEvent& e) {
                    inner.op(e.client, e.object, e.op_name, e.args, e.ret, e.inv, e.resp);
                  });
  auto results = ex.run({{1, "cf", "comp", "F", {}},
                         {2, "cj", "agg", "write", {Value::integer(5)}}});

  HistoryBuilder comp;
  comp.op("cf", "comp", "F", {}, results[0].ret, results[0].inner_inv, results[0].inner_resp);
  comp.op("cj", "comp", "set", {Value::integer(5)}, results[1].ret, results[1].inner_inv,
          results[1].inner_resp);
  return {comp.build(), inner.build(), results[0].ret};
}

struct ExpectedVerdicts {
  bool lin = false;
  bool set = false;
  bool mp = false;
  bool interval = false;

  friend bool operator==(const ExpectedVerdicts&, const ExpectedVerdicts&) = default;
};

/// One checkable view of a scenario: a single-object history plus the
/// bundle to check it against. Catalog scenarios carry the verdicts they
/// are expected to reproduce at their default seed.
struct ScenarioView {
  std::string name;
  History history;
  SpecBundle bundle;
  std::optional<ExpectedVerdicts> expected;
};

struct ScenarioRun {
  std::string name;
  std::string summary;
  std::vector<ScenarioView> views;  // views[0] is the primary history
  std::optional<SimOutput> output;
};

struct ScenarioOptions {
  std::optional<std::uint64_t> seed;  // overrides the scenario default
  bool read_repair = true;            // quorum scenario only
};

inline std::vector<std::string> scenario_names() {
  return {"listing1", "quorum", "nested", "conditional-wait", "exchanger"};
}

/// The catalog: every bundled counterexample or positive control, with the
/// verdicts it reproduces. This is the single source of expected verdicts;
/// tests and the command line both consult it.
inline ScenarioRun run_scenario(const std::string& name, const ScenarioOptions& opt = {}) {
  ScenarioRun run;
  run.name = name;
  if (name == "listing1") {
    auto out = run_listing_scenario(opt.seed.value_or(kListingScenarioSeed));
    run.summary = "lock-based object, D split by E: correct locking, not linearizable";
    run.views.push_back({"main", out.client_history, lock_object_bundle(),
                         ExpectedVerdicts{false, false, true, true}});
    run.output = std::move(out);
    return run;
  }
  if (name == "quorum") {
    auto h = run_quorum_register(opt.read_repair, anomaly_delay_plan(), anomaly_workload());
    run.summary = opt.read_repair
                      ? "quorum register with read repair: the new-old inversion disappears"
                      : "quorum register without read repair: new-old read inversion";
    bool ok = opt.read_repair;
    run.views.push_back({"main", std::move(h), bundle_by_name("register"),
                         ExpectedVerdicts{ok, ok, ok, ok}});
    return run;
  }
  if (name == "nested") {
    auto nested = run_nested_scenario(opt.seed.value_or(kNestedScenarioSeed));
    run.summary = "composite caller split by a direct write: rejected as one operation, "
                  "accepted with visible interleaving points";
    run.views.push_back({"composite", std::move(nested.composite),
                         bundle_by_name("nested-composite"),
                         ExpectedVerdicts{false, false, true, true}});
    run.views.push_back({"aggregated", std::move(nested.aggregated), bundle_by_name("register"),
                         ExpectedVerdicts{true, true, true, true}});
    return run;
  }
  if (name == "conditional-wait") {
    auto out = run_conditional_wait_scenario(opt.seed.value_or(kConditionalWaitSeed));
    run.summary = "producer/consumer handoff: needs the lock-level scheduler to complete";
    run.views.push_back({"main", out.client_history, bundle_of(prodcons_spec()),
                         ExpectedVerdicts{true, true, true, true}});
    run.output = std::move(out);
    return run;
  }
  if (name == "exchanger") {
    HistoryBuilder b;
    b.op("p", "xchg", "exchange", {Value::integer(1)}, Value::integer(2), 1, 10);
    b.op("q", "xchg", "exchange", {Value::integer(2)}, Value::integer(1), 2, 9);
    b.op("r", "xchg", "exchange", {Value::integer(3)}, Value::empty(), 12, 14);
    run.summary = "two exchanges pair up at one instant; no single order explains them";
    run.views.push_back({"main", b.build(), exchanger_bundle(),
                         ExpectedVerdicts{false, true, true, true}});
    return run;
  }
  throw MalformedInput("unknown scenario '" + name + "'; known: listing1, quorum, nested, "
                       "conditional-wait, exchanger");
}

/// Parsed form of a scenario file; see `parse_scenario_file` for the
/// line grammar.
struct ScenarioFile {
  SimConfig config;
  Workload workload;
  std::vector<ObjectDef> objects;
  std::vector<std::pair<std::string, std::string>> checks;  // (object, bundle name)
};

/// Line-oriented scenario description:
///
///   # comment
///   config n 3 | config f 1 | config model crash|byzantine
///   config ordering total|partial | config scheduler sequential|lock-level
///   config seed N | config allow-out-of-spec 0|1
///   object <name> builtin <spec>
///   object <name> { ... }              (multi-line block)
///   client <name> start <tick> think <tick>
///   request <id> <client> <object> <op> [int args...]
///   edge <from-id> <to-id>
///   crash <replica> at <tick>
///   byzantine <replica> flip|drop|wrong
///   check <object> <bundle>
inline ScenarioFile parse_scenario_file(const std::string& text) {
  ScenarioFile f;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&lineno](const std::string& msg) {
    throw ParseError("scenario line " + std::to_string(lineno) + ": " + msg);
  };
  std::map<std::string, std::size_t> client_index;
  std::set<std::uint64_t> request_ids;

  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;

    if (word == "config") {
      std::string key, value;
      if (!(ls >> key >> value)) fail("config needs a key and a value");
      auto number = [&fail, &key, &value]() -> long long {
        try {
          std::size_t used = 0;
          long long n = std::stoll(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
          return n;
        } catch (const std::exception&) {
          fail("config " + key + " needs an integer, got '" + value + "'");
          return 0;  // unreachable; fail throws
        }
      };
      if (key == "n")
        f.config.n = static_cast<int>(number());
      else if (key == "f")
        f.config.f = static_cast<int>(number());
      else if (key == "seed")
        f.config.seed = static_cast<std::uint64_t>(number());
      else if (key == "allow-out-of-spec")
        f.config.allow_out_of_spec = value == "1";
      else if (key == "model" && value == "crash")
        f.config.failure_model = FailureModel::crash;
      else if (key == "model" && value == "byzantine")
        f.config.failure_model = FailureModel::byzantine;
      else if (key == "ordering" && value == "total")
        f.config.ordering = OrderingMode::total_order;
      else if (key == "ordering" && value == "partial")
        f.config.ordering = OrderingMode::partial_order;
      else if (key == "scheduler" && value == "sequential")
        f.config.scheduler = SchedulerKind::sequential;
      else if (key == "scheduler" && value == "lock-level")
        f.config.scheduler = SchedulerKind::lock_level;
      else
        fail("unknown config '" + key + " " + value + "'");
    } else if (word == "object") {
      std::string name, tail;
      if (!(ls >> name >> tail)) fail("object needs a name and 'builtin <spec>' or '{'");
      if (tail == "builtin") {
        std::string spec;
        if (!(ls >> spec)) fail("builtin object needs a spec name");
        ObjectDef d;
        d.name = name;
        d.builtin = spec;
        f.objects.push_back(std::move(d));
      } else if (tail == "{") {
        std::string block = "object " + name + " {\n";
        int depth = 1;
        while (depth > 0 && std::getline(in, line)) {
          ++lineno;
          for (char c : line) {
            if (c == '{') ++depth;
            if (c == '}') --depth;
          }
          block += line;
          block += '\n';
        }
        if (depth > 0) fail("unterminated object block");
        f.objects.push_back(compile_object(block));
      } else {
        fail("object needs 'builtin <spec>' or '{'");
      }
    } else if (word == "client") {
      std::string name, kw1, kw2;
      Tick start = 1, think = 1;
      if (!(ls >> name >> kw1 >> start >> kw2 >> think) || kw1 != "start" || kw2 != "think")
        fail("expected: client <name> start <tick> think <tick>");
      if (client_index.count(name)) fail("client '" + name + "' declared twice");
      client_index[name] = f.workload.clients.size();
      f.workload.clients.push_back({name, start, think, {}});
    } else if (word == "request") {
      std::uint64_t id;
      std::string client, object, op;
      if (!(ls >> id >> client >> object >> op))
        fail("expected: request <id> <client> <object> <op> [args]");
      auto it = client_index.find(client);
      if (it == client_index.end()) fail("request names undeclared client '" + client + "'");
      if (!request_ids.insert(id).second) fail("request id " + std::to_string(id) + " reused");
      Values args;
      std::int64_t v;
      while (ls >> v) args.push_back(Value::integer(v));
      f.workload.clients[it->second].ops.push_back({id, object, op, std::move(args)});
    } else if (word == "edge") {
      std::uint64_t from, to;
      if (!(ls >> from >> to)) fail("expected: edge <from-id> <to-id>");
      f.workload.causal_edges.emplace_back(from, to);
    } else if (word == "crash") {
      int replica;
      std::string at;
      Tick t;
      if (!(ls >> replica >> at >> t) || at != "at") fail("expected: crash <replica> at <tick>");
      f.config.fault_plan.crashes.push_back({replica, t});
    } else if (word == "byzantine") {
      int replica;
      std::string kind;
      if (!(ls >> replica >> kind)) fail("expected: byzantine <replica> flip|drop|wrong");
      if (kind == "flip")
        f.config.fault_plan.byzantine[replica] = ByzantineBehavior::response_flip;
      else if (kind == "drop")
        f.config.fault_plan.byzantine[replica] = ByzantineBehavior::response_drop;
      else if (kind == "wrong")
        f.config.fault_plan.byzantine[replica] = ByzantineBehavior::wrong_value;
      else
        fail("unknown byzantine behavior '" + kind + "'");
    } else if (word == "check") {
      std::string object, bundle;
      if (!(ls >> object >> bundle)) fail("expected: check <object> <bundle>");
      f.checks.emplace_back(object, bundle);
    } else {
      fail("unknown directive '" + word + "'");
    }
  }

  for (const auto& [from, to] : f.workload.causal_edges)
    if (!request_ids.count(from) || !request_ids.count(to))
      throw ParseError("causal edge references an undeclared request id");
  return f;
}

/// Runs a parsed scenario file. Checked views are the object projections
/// named by `check` lines; without any, every builtin object is checked
/// against its own spec.
inline ScenarioRun run_scenario_file(const ScenarioFile& f, const ScenarioOptions& opt = {}) {
  SimConfig cfg = f.config;
  if (opt.seed) cfg.seed = *opt.seed;
  ScenarioRun run;
  run.name = "file";
  run.summary = "scenario file";
  auto out = run_smr(cfg, f.workload, f.objects);
  auto checks = f.checks;
  if (checks.empty())
    for (const auto& d : f.objects)
      if (d.is_builtin()) checks.emplace_back(d.name, d.builtin);
  for (const auto& [object, bundle] : checks)
    run.views.push_back({object, out.client_history.project_object(object),
                         bundle_by_name(bundle), std::nullopt});
  run.output = std::move(out);
  return run;
}

}  // namespace linsmr

#endif  // LINSMR_SCENARIOS_HPP_
