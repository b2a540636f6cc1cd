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

#ifndef LINSMR_SUITES_HPP_
#define LINSMR_SUITES_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linsmr/checkers.hpp"
#include "linsmr/generators.hpp"
#include "linsmr/quorum.hpp"
#include "linsmr/scenarios.hpp"
#include "linsmr/simulator.hpp"
#include "linsmr/trace.hpp"

namespace linsmr {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::optional<int> trials_cap;  // caps every trial count; full counts when unset
  SearchBudget budget;
  bool inject_fault = false;  // plant one corrupted extension in criterion 3
};

struct CriterionResult {
  int index = 0;
  std::string title;
  bool pass = false;
  bool unknown = false;  // a search budget ran out before a verdict
  std::string detail;    // failure explanation, possibly with a trace
};

namespace detail {

inline int capped(const SuiteOptions& opt, int full) {
  return opt.trials_cap ? std::min(full, *opt.trials_cap) : full;
}

inline std::uint64_t criterion_seed(const SuiteOptions& opt, int index) {
  return mix64(opt.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index)));
}

struct CriterionFailed {
  std::string detail;
};

struct CriterionUnknown {
  std::string detail;
};

inline void require(bool cond, const std::string& detail) {
  if (!cond) throw CriterionFailed{detail};
}

/// Accepted-or-throw wrapper: budget exhaustion surfaces as "unknown"
/// instead of silently counting as a rejection.
inline bool accepted(const Verdict& v, const std::string& what) {
  if (v.unknown()) throw CriterionUnknown{"search budget exhausted while checking " + what};
  return v.accepted;
}

inline ExpectedVerdicts observed_verdicts(const HierarchyReport& r, const std::string& what) {
  return {accepted(r.lin, what + " (lin)"), accepted(r.set, what + " (set)"),
          accepted(r.mp, what + " (mp)"), accepted(r.interval, what + " (interval)")};
}

inline std::string brief_trace(const History& h) {
  std::string t = trace_to_string(h);
  if (t.size() > 2000) t.resize(2000);
  return t;
}

inline std::vector<SpecBundle> mixed_bundles() {
  return {bundle_by_name("register"), bundle_by_name("counter"), bundle_by_name("fifo-queue"),
          bundle_by_name("lock-object"), bundle_by_name("exchanger")};
}

/// Shared generator for the determinism criteria: random workloads over
/// builtin objects under random scheduler/ordering choices.
template <typename Fn>
void for_each_replication_run(const SuiteOptions& opt, int trials, Fn&& fn) {
  Rng rng(criterion_seed(opt, 9));
  for (int t = 0; t < trials; ++t) {
    WorkloadGenOptions wopt;
    wopt.clients = 2 + rng.below(3);
    wopt.max_ops_per_client = 3;
    wopt.with_causal_edges = rng.percent(50);
    auto [workload, defs] = random_workload(rng, wopt);
    SimConfig cfg;
    cfg.n = 3;
    cfg.f = 1;
    cfg.seed = rng.next();
    cfg.scheduler = rng.percent(50) ? SchedulerKind::lock_level : SchedulerKind::sequential;
    cfg.ordering = rng.percent(50) ? OrderingMode::partial_order : OrderingMode::total_order;
    fn(t, cfg, workload, defs);
  }
}

/// Shared generator for the byzantine criteria: n=4, f=1, one faulty
/// replica per run cycling through the behavior menu.
template <typename Fn>
void for_each_byzantine_run(const SuiteOptions& opt, int trials_per_behavior, Fn&& fn) {
  Rng rng(criterion_seed(opt, 10));
  for (ByzantineBehavior b : {ByzantineBehavior::response_flip, ByzantineBehavior::response_drop,
                              ByzantineBehavior::wrong_value}) {
    for (int t = 0; t < trials_per_behavior; ++t) {
      WorkloadGenOptions wopt;
      wopt.clients = 2 + rng.below(2);
      wopt.max_ops_per_client = 3;
      auto [workload, defs] = random_workload(rng, wopt);
      SimConfig cfg;
      cfg.n = 4;
      cfg.f = 1;
      cfg.failure_model = FailureModel::byzantine;
      cfg.seed = rng.next();
      int faulty = static_cast<int>(rng.below(4));
      cfg.fault_plan.byzantine[faulty] = b;
      fn(b, t, cfg, workload, defs, faulty);
    }
  }
}

// --- criteria -------------------------------------------------------------

inline void criterion_1(const SuiteOptions& opt) {
  auto run = run_scenario("listing1");
  const auto& view = run.views.at(0);
  auto report = check_hierarchy(view.history, view.bundle, opt.budget);
  auto got = observed_verdicts(report, "the lock-based scenario");
  require(view.history.return_of(2) == Value::integer(2),
          "expected E to observe the intermediate value 2");
  require(got == *view.expected,
          "hierarchy verdicts differ from the catalog\n" + brief_trace(view.history));
  require(!report.containment_violation, "containment violated: " + report.violation_detail);
}

inline void criterion_2(const SuiteOptions& opt) {
  Rng rng(criterion_seed(opt, 2));
  int trials = capped(opt, 500);
  for (int t = 0; t < trials; ++t) {
    WorkloadGenOptions wopt;
    wopt.clients = 2 + rng.below(3);
    wopt.max_ops_per_client = 4;
    auto [workload, defs] = random_workload(rng, wopt);
    SimConfig cfg;
    cfg.seed = rng.next();
    cfg.scheduler = SchedulerKind::sequential;
    auto out = run_smr(cfg, workload, defs);
    require(out.client_history.complete(), "run " + std::to_string(t) + ": undecided requests");
    for (const auto& d : defs) {
      auto proj = out.client_history.project_object(d.name);
      if (proj.empty()) continue;
      auto v = check_linearizable(proj, bundle_by_name(d.builtin).sequential, opt.budget);
      require(accepted(v, "run " + std::to_string(t) + " object " + d.name),
              "run " + std::to_string(t) + ": object " + d.name +
                  " not linearizable\n" + brief_trace(proj));
    }
  }
}

inline void criterion_3(const SuiteOptions& opt) {
  int trials = capped(opt, 1000);
  auto bundles = mixed_bundles();
  bool fault_pending = opt.inject_fault;
  for (Level level : {Level::lin, Level::mp, Level::interval}) {
    Rng rng(criterion_seed(opt, 3) ^ static_cast<std::uint64_t>(level));
    int accepted_count = 0;
    for (int t = 0; t < trials; ++t) {
      const auto& bundle = bundles[rng.below(bundles.size() - 1)];  // exchanger excluded
      HistoryGenOptions hopt;
      hopt.max_ops = 6;
      hopt.mutate_percent = 30;
      auto h = random_history(rng, bundle.sequential, hopt);
      auto delta = random_delta(rng, h);
      auto before = check_level(h, bundle, level, opt.budget);
      if (!accepted(before, "the base history")) continue;
      ++accepted_count;
      auto extended = extend_timelines(h, delta);
      if (fault_pending) {
        // Injected corruption: overwrite one recorded return in the
        // extension with a value no bounded run can produce.
        fault_pending = false;
        std::vector<EventRecord> events = extended.events();
        for (auto& e : events)
          if (e.kind == EventKind::response) {
            e.payload = {Value::integer(1000000)};
            break;
          }
        extended = History::build(std::move(events));
      }
      auto after = check_level(extended, bundle, level, opt.budget);
      require(accepted(after, "the extended history"),
              "level " + to_string(level) + ", trial " + std::to_string(t) +
                  ": accepted history rejected after timeline extension\n" +
                  brief_trace(extended));
    }
    require(accepted_count > trials / 10,
            "level " + to_string(level) + ": too few accepted base histories (" +
                std::to_string(accepted_count) + ") for a meaningful check");
  }
}

inline void criterion_4(const SuiteOptions& opt) {
  Rng rng(criterion_seed(opt, 4));
  int trials = capped(opt, 500);
  auto bundles = mixed_bundles();
  for (int t = 0; t < trials; ++t) {
    const auto& bundle = bundles[rng.below(bundles.size())];
    HistoryGenOptions hopt;
    hopt.max_ops = 7;
    hopt.mutate_percent = 40;
    hopt.distinct_clients = rng.percent(30);
    auto h = random_history(rng, bundle.sequential, hopt);
    auto report = check_hierarchy(h, bundle, opt.budget);
    observed_verdicts(report, "trial " + std::to_string(t));
    require(!report.containment_violation,
            "trial " + std::to_string(t) + " (" + bundle.name + "): " + report.violation_detail +
                "\n" + brief_trace(h));
  }
}

inline void criterion_5(const SuiteOptions& opt) {
  Rng rng(criterion_seed(opt, 5));
  int trials = capped(opt, 1000);
  auto bundles = mixed_bundles();
  for (int t = 0; t < trials; ++t) {
    const auto& bundle = bundles[rng.below(bundles.size() - 1)];  // exchanger excluded
    HistoryGenOptions hopt;
    hopt.max_ops = 6;
    hopt.mutate_percent = 50;
    auto h = random_history(rng, bundle.sequential, hopt);
    bool oracle = naive_linearizable(h, bundle.sequential);
    auto v = check_linearizable(h, bundle.sequential, opt.budget);
    bool search = accepted(v, "trial " + std::to_string(t));
    require(search == oracle, "trial " + std::to_string(t) + " (" + bundle.name +
                                  "): search says " + (search ? "yes" : "no") +
                                  ", oracle says " + (oracle ? "yes" : "no") + "\n" +
                                  brief_trace(h));
  }
}

inline void criterion_6(const SuiteOptions& opt) {
  auto ops = anomaly_workload();
  auto seq = bundle_by_name("register").sequential;

  auto h = run_quorum_register(false, anomaly_delay_plan(), ops);
  auto v = check_linearizable(h, seq, opt.budget);
  require(!accepted(v, "the unrepaired anomaly"),
          "the unrepaired anomaly plan should not be linearizable\n" + brief_trace(h));

  // Bounded enumeration: every request delay in {1,100}, the first read's
  // repair delays in {1,100}, the second read's repair fixed fast.
  const Tick choices[2] = {1, 100};
  long planned = 0;
  int full = 1 << 12;  // 4096 delay plans
  int cap = capped(opt, full);
  for (int bits = 0; bits < full && planned < cap; ++bits, ++planned) {
    QuorumDelays plan;
    plan.request.resize(3);
    for (int i = 0; i < 9; ++i)
      plan.request[static_cast<std::size_t>(i / 3)][static_cast<std::size_t>(i % 3)] =
          choices[(bits >> i) & 1];
    plan.repair = {{{1, 1, 1}}, {{1, 1, 1}}, {{1, 1, 1}}};
    for (int i = 0; i < 3; ++i)
      plan.repair[1][static_cast<std::size_t>(i)] = choices[(bits >> (9 + i)) & 1];
    auto repaired = run_quorum_register(true, plan, ops);
    auto rv = check_linearizable(repaired, seq, opt.budget);
    require(accepted(rv, "repaired plan " + std::to_string(bits)),
            "repaired plan " + std::to_string(bits) + " not linearizable\n" +
                brief_trace(repaired));
  }
}

inline void criterion_7(const SuiteOptions& opt) {
  auto run = run_scenario("nested");
  for (const auto& view : run.views) {
    auto report = check_hierarchy(view.history, view.bundle, opt.budget);
    auto got = observed_verdicts(report, "nested view " + view.name);
    require(got == *view.expected, "view " + view.name + " differs from the catalog\n" +
                                       brief_trace(view.history));
  }
  int sweeps = capped(opt, 100);
  for (int s = 1; s <= sweeps; ++s) {
    auto nested = run_nested_scenario(static_cast<std::uint64_t>(s));
    auto v = check_linearizable(nested.aggregated, bundle_by_name("register").sequential,
                                opt.budget);
    require(accepted(v, "aggregated view, seed " + std::to_string(s)),
            "seed " + std::to_string(s) + ": aggregated register view not linearizable\n" +
                brief_trace(nested.aggregated));
  }
}

inline void criterion_8(const SuiteOptions& opt) {
  auto out = run_conditional_wait_scenario();
  require(out.client_history.complete(), "lock-level run left requests undecided");
  require(out.client_history.return_of(1) == Value::integer(5), "take should return 5");
  auto v = check_linearizable(out.client_history, prodcons_spec(), opt.budget);
  require(accepted(v, "the conditional-wait history"),
          "lock-level conditional-wait history not linearizable\n" +
              brief_trace(out.client_history));
  bool deadlocked = false;
  try {
    run_conditional_wait_scenario(kConditionalWaitSeed, SchedulerKind::sequential);
  } catch (const DeadlockDetected&) {
    deadlocked = true;
  }
  require(deadlocked, "the sequential scheduler should report a deadlock");
}

inline void criterion_9(const SuiteOptions& opt) {
  int trials = capped(opt, 100);
  for_each_replication_run(opt, trials, [](int t, const SimConfig& cfg, const Workload& w,
                                           const std::vector<ObjectDef>& defs) {
    auto a = run_smr(cfg, w, defs);
    auto b = run_smr(cfg, w, defs);
    require(a == b, "trial " + std::to_string(t) + ": two identical runs diverged");
    for (std::size_t i = 1; i < a.correct_replicas.size(); ++i)
      require(a.replica_states.at(a.correct_replicas[i]) ==
                  a.replica_states.at(a.correct_replicas[0]),
              "trial " + std::to_string(t) + ": replica states disagree");
    for (const auto& [id, records] : a.responses)
      for (const auto& rec : records)
        require(rec.value == records.front().value,
                "trial " + std::to_string(t) + ": request " + std::to_string(id) +
                    " got conflicting replica responses");
  });
}

inline void criterion_10(const SuiteOptions& opt) {
  int trials = capped(opt, 100);
  for_each_byzantine_run(opt, trials, [](ByzantineBehavior b, int t, const SimConfig& cfg,
                                         const Workload& w, const std::vector<ObjectDef>& defs,
                                         int faulty) {
    auto out = run_smr(cfg, w, defs);
    auto tag = "behavior " + std::to_string(static_cast<int>(b)) + ", trial " +
               std::to_string(t);
    require(out.client_history.complete(), tag + ": a request never decided");
    for (const auto& [id, records] : out.responses) {
      std::optional<Value> correct;
      for (const auto& rec : records)
        if (rec.replica != faulty) {
          if (correct)
            require(rec.value == *correct, tag + ": correct replicas disagree");
          else
            correct = rec.value;
        }
      require(correct.has_value(), tag + ": no correct replica answered");
      ResponseSet rs;
      rs.request_id = id;
      for (const auto& rec : records) rs.responses.push_back({rec.replica, rec.value, rec.arrival});
      auto d = vote(rs, cfg.f);
      require(d.decided && d.value == *correct,
              tag + ": request " + std::to_string(id) + " decided a corrupted value");
    }
  });

  // A duplicated request id, submitted by two colluding clients, executes
  // exactly once and both clients observe the single decision.
  Workload dup;
  dup.clients.push_back({"mal1", 1, 1, {{7, "reg", "write", {Value::integer(3)}}}});
  dup.clients.push_back({"mal2", 1, 1, {{7, "reg", "write", {Value::integer(3)}},
                                        {8, "reg", "read", {}}}});
  ObjectDef reg;
  reg.name = "reg";
  reg.builtin = "register";
  SimConfig cfg;
  cfg.n = 4;
  cfg.f = 1;
  cfg.failure_model = FailureModel::byzantine;
  cfg.seed = criterion_seed(opt, 10);
  auto out = run_smr(cfg, dup, {reg});
  require(std::count(out.processing_order.begin(), out.processing_order.end(), 7) == 1,
          "duplicated request id was sequenced more than once");
  for (const auto& [r, inner] : out.inner_histories) {
    long count = 0;
    for (const auto& s : inner.spans())
      if (inner.invocation_of(s.op_id).op_name == "write") ++count;
    require(count == 1, "replica " + std::to_string(r) + " executed the duplicate twice");
  }
  require(out.client_history.return_of(out.client_history.spans().back().op_id) ==
              Value::integer(3),
          "the read after the duplicate should observe the single write");
}

inline void criterion_11(const SuiteOptions& opt) {
  int trials = capped(opt, 100);
  auto check = [](const std::string& tag, const SimOutput& out) {
    auto [o1, o2] = check_schneider_properties(out.schneider());
    require(o1, tag + ": a client's requests were processed out of issue order");
    require(o2, tag + ": causally ordered requests were processed out of order");
  };
  for_each_replication_run(opt, trials, [&check](int t, const SimConfig& cfg, const Workload& w,
                                                 const std::vector<ObjectDef>& defs) {
    check("replication trial " + std::to_string(t), run_smr(cfg, w, defs));
  });
  for_each_byzantine_run(opt, trials, [&check](ByzantineBehavior, int t, const SimConfig& cfg,
                                               const Workload& w,
                                               const std::vector<ObjectDef>& defs, int) {
    check("byzantine trial " + std::to_string(t), run_smr(cfg, w, defs));
  });
}

inline void criterion_12(const SuiteOptions& opt) {
  // Exhaustive single-object families: up to three register operations
  // drawn from {read=0, read=1, write(1)=ok} in three span patterns.
  struct Shape {
    std::string op;
    Value ret;
  };
  const std::vector<Shape> shapes = {{"read", Value::integer(0)},
                                     {"read", Value::integer(1)},
                                     {"write", Value::unit()}};
  const std::vector<std::vector<std::pair<Tick, Tick>>> patterns = {
      {{1, 2}, {4, 5}, {7, 8}},   // sequential
      {{1, 10}, {2, 9}, {3, 8}},  // nested overlap
      {{1, 5}, {4, 8}, {7, 11}},  // staircase overlap
  };

  struct Family {
    std::vector<Shape> ops;
    std::vector<std::pair<Tick, Tick>> spans;
  };
  std::vector<Family> families;
  families.push_back({});  // empty object view
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::size_t> pick(k, 0);
    while (true) {
      for (std::size_t p = 0; p < (k == 1 ? std::size_t{1} : patterns.size()); ++p) {
        Family f;
        for (std::size_t i = 0; i < k; ++i) {
          f.ops.push_back(shapes[pick[i]]);
          f.spans.push_back(patterns[p][i]);
        }
        families.push_back(std::move(f));
      }
      std::size_t i = 0;
      while (i < k && ++pick[i] == shapes.size()) pick[i++] = 0;
      if (i == k) break;
    }
  }

  auto seq = register_spec();
  auto composite = product_spec({{"X", seq}, {"Y", seq}});
  const Tick offsets[] = {0, 2, 7};

  long cap = opt.trials_cap ? static_cast<long>(*opt.trials_cap) * 100 : -1;
  long done = 0;
  for (const auto& fx : families) {
    for (const auto& fy : families) {
      if (fx.ops.empty() && fy.ops.empty()) continue;
      for (Tick offset : offsets) {
        if (cap >= 0 && done >= cap) return;
        ++done;
        HistoryBuilder b;
        for (std::size_t i = 0; i < fx.ops.size(); ++i)
          b.op("x" + std::to_string(i), "X", fx.ops[i].op,
               fx.ops[i].op == "write" ? Values{Value::integer(1)} : Values{}, fx.ops[i].ret,
               fx.spans[i].first, fx.spans[i].second);
        for (std::size_t i = 0; i < fy.ops.size(); ++i)
          b.op("y" + std::to_string(i), "Y", fy.ops[i].op,
               fy.ops[i].op == "write" ? Values{Value::integer(1)} : Values{}, fy.ops[i].ret,
               fy.spans[i].first + offset, fy.spans[i].second + offset);
        auto h = b.build();
        bool whole = accepted(check_linearizable(fuse_objects(h), composite, opt.budget),
                              "a fused composition");
        bool parts =
            (fx.ops.empty() ||
             accepted(check_linearizable(h.project_object("X"), seq, opt.budget), "an X view")) &&
            (fy.ops.empty() ||
             accepted(check_linearizable(h.project_object("Y"), seq, opt.budget), "a Y view"));
        require(whole == parts,
                "locality mismatch (whole " + std::string(whole ? "yes" : "no") + ", parts " +
                    (parts ? "yes" : "no") + ")\n" + brief_trace(h));
      }
    }
  }
}

}  // namespace detail

inline const std::vector<std::pair<int, std::string>>& criterion_titles() {
  static const std::vector<std::pair<int, std::string>> titles = {
      {1, "lock-based counterexample separates the hierarchy"},
      {2, "replicated runs under the sequential scheduler linearize"},
      {3, "timeline extension preserves acceptance"},
      {4, "no containment violations on random histories"},
      {5, "search checker agrees with the enumeration oracle"},
      {6, "read repair removes the quorum anomaly"},
      {7, "composite caller splits only below linearizability"},
      {8, "conditional wait needs the lock-level scheduler"},
      {9, "identical runs are bit-identical and replicas agree"},
      {10, "byzantine responses are outvoted and duplicates collapse"},
      {11, "issue order and causal order are preserved"},
      {12, "linearizability is local over object compositions"},
  };
  return titles;
}

inline CriterionResult run_criterion(int index, const SuiteOptions& opt) {
  CriterionResult r;
  r.index = index;
  for (const auto& [i, title] : criterion_titles())
    if (i == index) r.title = title;
  if (r.title.empty()) throw MalformedInput("no criterion " + std::to_string(index));
  try {
    switch (index) {
      case 1: detail::criterion_1(opt); break;
      case 2: detail::criterion_2(opt); break;
      case 3: detail::criterion_3(opt); break;
      case 4: detail::criterion_4(opt); break;
      case 5: detail::criterion_5(opt); break;
      case 6: detail::criterion_6(opt); break;
      case 7: detail::criterion_7(opt); break;
      case 8: detail::criterion_8(opt); break;
      case 9: detail::criterion_9(opt); break;
      case 10: detail::criterion_10(opt); break;
      case 11: detail::criterion_11(opt); break;
      case 12: detail::criterion_12(opt); break;
    }
    r.pass = true;
  } catch (const detail::CriterionFailed& f) {
    r.pass = false;
    r.detail = f.detail;
  } catch (const detail::CriterionUnknown& u) {
    r.pass = false;
    r.unknown = true;
    r.detail = u.detail;
  } catch (const BudgetExhausted& b) {
    r.pass = false;
    r.unknown = true;
    r.detail = b.what();
  }
  return r;
}

/// Named criterion groups for the command line.
inline std::vector<int> suite_group(const std::string& name) {
  if (name == "lemmas") return {3};
  if (name == "hierarchy") return {1, 4, 5, 6, 7, 12};
  if (name == "determinism") return {2, 8, 9, 11};
  if (name == "voting") return {10};
  if (name == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw MalformedInput("unknown suite '" + name +
                       "'; known: lemmas, hierarchy, determinism, voting, all");
}

}  // namespace linsmr

#endif  // LINSMR_SUITES_HPP_
