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

#ifndef LINSMR_QUORUM_HPP_
#define LINSMR_QUORUM_HPP_

#include <array>
#include <cstdint>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

/// A single-register replication scheme that is weaker than full
/// state-machine replication: three replicas, reads and writes each talk
/// to a quorum of two. Without read repair overlapping traffic can expose
/// a new-old read inversion; with repair every read writes the value it
/// returns back to a quorum before responding.

inline constexpr int kQuorumReplicas = 3;
inline constexpr int kQuorumSize = 2;

struct QuorumOp {
  std::string client;
  bool is_write = false;
  std::int64_t value = 0;  // ignored for reads
  Tick issue = 1;
};

/// Per-operation message delays, indexed like the op list. `request[i][r]`
/// delays op i's request to replica r; `repair[i][r]` delays the write-back
/// a read issues when repair is on (ignored for writes).
struct QuorumDelays {
  std::vector<std::array<Tick, 3>> request;
  std::vector<std::array<Tick, 3>> repair;
};

namespace detail {

struct QuorumEvent {
  Tick time = 0;
  std::uint64_t seq = 0;  // scheduling order breaks ties deterministically
  std::size_t op = 0;
  int replica = 0;
  enum class Kind { request_arrives, reply_arrives, repair_arrives, ack_arrives } kind =
      Kind::request_arrives;
  std::int64_t value = 0;
  std::int64_t version = 0;

  bool operator>(const QuorumEvent& o) const {
    return std::tie(time, seq) > std::tie(o.time, o.seq);
  }
};

}  // namespace detail

/// Runs the op list against the three replicas under the given delay plan
/// and returns the client-side history. Writes carry globally unique,
/// list-ordered versions; replicas keep the highest-versioned value they
/// have seen. A read returns the max-version value among the first
/// `kQuorumSize` replies and, with `read_repair`, writes that value back
/// and waits for a quorum of acks before responding.
inline History run_quorum_register(bool read_repair, const QuorumDelays& plan,
                                   const std::vector<QuorumOp>& ops) {
  if (plan.request.size() != ops.size())
    throw ConfigInvalid("quorum plan: need one request delay triple per op");
  if (read_repair && plan.repair.size() != ops.size())
    throw ConfigInvalid("quorum plan: need one repair delay triple per op");
  for (const auto& d : plan.request)
    for (Tick t : d)
      if (t < 1) throw ConfigInvalid("quorum plan: delays must be >= 1");
  if (read_repair)
    for (const auto& d : plan.repair)
      for (Tick t : d)
        if (t < 1) throw ConfigInvalid("quorum plan: delays must be >= 1");
  for (const auto& op : ops)
    if (op.issue < 1) throw ConfigInvalid("quorum ops must issue at tick >= 1");

  using Ev = detail::QuorumEvent;
  std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> queue;
  std::uint64_t seq = 0;
  auto push = [&queue, &seq](Ev e) {
    e.seq = seq++;
    queue.push(e);
  };

  std::array<std::pair<std::int64_t, std::int64_t>, 3> replica{};  // (value, version)

  struct OpState {
    std::int64_t version = 0;               // writes: own version
    int acks = 0;                           // writes and repairs
    std::vector<std::pair<std::int64_t, std::int64_t>> replies;  // reads
    bool responded = false;
    Tick response_time = 0;
    std::int64_t result = 0;
  };
  std::vector<OpState> st(ops.size());

  std::int64_t next_version = 1;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].is_write) st[i].version = next_version++;
    for (int r = 0; r < kQuorumReplicas; ++r) {
      Ev e;
      e.time = ops[i].issue + plan.request[i][static_cast<std::size_t>(r)];
      e.op = i;
      e.replica = r;
      e.kind = Ev::Kind::request_arrives;
      push(e);
    }
  }

  while (!queue.empty()) {
    Ev e = queue.top();
    queue.pop();
    auto& s = st[e.op];
    auto ri = static_cast<std::size_t>(e.replica);
    switch (e.kind) {
      case Ev::Kind::request_arrives: {
        Ev reply = e;
        reply.time = e.time + 1;
        if (ops[e.op].is_write) {
          if (s.version > replica[ri].second) replica[ri] = {ops[e.op].value, s.version};
          reply.kind = Ev::Kind::ack_arrives;
        } else {
          reply.kind = Ev::Kind::reply_arrives;
          reply.value = replica[ri].first;
          reply.version = replica[ri].second;
        }
        push(reply);
        break;
      }
      case Ev::Kind::reply_arrives: {
        if (static_cast<int>(s.replies.size()) >= kQuorumSize) break;  // late reply ignored
        s.replies.emplace_back(e.value, e.version);
        if (static_cast<int>(s.replies.size()) < kQuorumSize) break;
        auto best = s.replies[0];
        for (const auto& rep : s.replies)
          if (rep.second > best.second) best = rep;
        s.result = best.first;
        s.version = best.second;
        if (!read_repair) {
          s.responded = true;
          s.response_time = e.time;
          break;
        }
        for (int r = 0; r < kQuorumReplicas; ++r) {
          Ev w;
          w.time = e.time + plan.repair[e.op][static_cast<std::size_t>(r)];
          w.op = e.op;
          w.replica = r;
          w.kind = Ev::Kind::repair_arrives;
          push(w);
        }
        break;
      }
      case Ev::Kind::repair_arrives: {
        if (s.version > replica[ri].second) replica[ri] = {s.result, s.version};
        Ev ack = e;
        ack.time = e.time + 1;
        ack.kind = Ev::Kind::ack_arrives;
        push(ack);
        break;
      }
      case Ev::Kind::ack_arrives: {
        if (s.responded) break;
        if (++s.acks == kQuorumSize) {
          s.responded = true;
          s.response_time = e.time;
        }
        break;
      }
    }
  }

  HistoryBuilder b;
  std::vector<OpId> ids;
  for (std::size_t i = 0; i < ops.size(); ++i)
    ids.push_back(b.invoke(ops[i].client, "qreg", ops[i].is_write ? "write" : "read",
                           ops[i].is_write ? Values{Value::integer(ops[i].value)} : Values{},
                           ops[i].issue));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!st[i].responded) continue;
    b.respond(ids[i], ops[i].is_write ? Value::unit() : Value::integer(st[i].result),
              st[i].response_time);
  }
  return b.build();
}

/// The probe workload: one write racing two later reads, all from
/// different clients so the spans may overlap freely.
inline std::vector<QuorumOp> anomaly_workload() {
  return {
      {"alice", true, 1, 1},
      {"bob", false, 0, 10},
      {"carol", false, 0, 30},
  };
}

/// Delays that expose the new-old inversion when repair is off: the write
/// reaches only the first replica quickly, the first read samples it there
/// and returns the new value, the second read samples the two replicas the
/// write has not reached yet and returns the old one.
inline QuorumDelays anomaly_delay_plan() {
  QuorumDelays plan;
  plan.request = {{{1, 100, 120}}, {{1, 2, 50}}, {{100, 1, 2}}};
  plan.repair = {{{1, 1, 1}}, {{1, 1, 1}}, {{1, 1, 1}}};
  return plan;
}

}  // namespace linsmr

#endif  // LINSMR_QUORUM_HPP_
