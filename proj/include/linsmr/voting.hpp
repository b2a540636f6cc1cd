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

#ifndef LINSMR_VOTING_HPP_
#define LINSMR_VOTING_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linsmr/errors.hpp"
#include "linsmr/history.hpp"
#include "linsmr/value.hpp"

namespace linsmr {

/// One replica's answer to a request, stamped with its arrival at the
/// client.
struct ReplicaResponse {
  int replica = 0;
  Value value;
  Tick arrival = 0;

  friend bool operator==(const ReplicaResponse&, const ReplicaResponse&) = default;
};

/// All responses a client collected for one request.
struct ResponseSet {
  std::uint64_t request_id = 0;
  std::vector<ReplicaResponse> responses;

  friend bool operator==(const ResponseSet&, const ResponseSet&) = default;
};

/// Outcome of voting: the decided value and the arrival tick of the
/// response that completed the quorum, or undecided when the set was
/// exhausted without one.
struct VoteDecision {
  bool decided = false;
  Value value;
  Tick time = 0;

  static VoteDecision undecided() { return {}; }
  static VoteDecision of(Value v, Tick t) { return {true, std::move(v), t}; }

  friend bool operator==(const VoteDecision&, const VoteDecision&) = default;
};

/// Accepts the first value that f+1 replicas returned identically,
/// processing responses in arrival order (ties broken by replica id).
/// Throws DuplicateReplicaResponse if one replica answered twice.
inline VoteDecision vote(const ResponseSet& rs, int f) {
  if (f < 0) throw MalformedInput("vote: f must be non-negative");
  std::vector<ReplicaResponse> ordered = rs.responses;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ReplicaResponse& a, const ReplicaResponse& b) {
                     if (a.arrival != b.arrival) return a.arrival < b.arrival;
                     return a.replica < b.replica;
                   });
  std::vector<int> seen;
  std::map<Value, int> tally;
  for (const auto& r : ordered) {
    if (std::find(seen.begin(), seen.end(), r.replica) != seen.end())
      throw DuplicateReplicaResponse("replica " + std::to_string(r.replica) +
                                     " answered request " + std::to_string(rs.request_id) +
                                     " twice");
    seen.push_back(r.replica);
    if (++tally[r.value] == f + 1) return VoteDecision::of(r.value, r.arrival);
  }
  return VoteDecision::undecided();
}

/// One client-visible request for outer-history assembly.
struct OuterRequest {
  std::uint64_t request_id = 0;
  std::string client;
  std::string object;
  std::string op_name;
  Values args;
  Tick issue = 0;
  VoteDecision outcome;  // undecided requests stay pending
};

/// Builds the client-visible history: one span [issue, decision] per
/// decided request, pending invocations for undecided ones. Throws
/// MalformedInput when a decision does not come strictly after its issue.
inline History assemble_outer_history(const std::vector<OuterRequest>& requests) {
  HistoryBuilder b;
  for (const auto& r : requests) {
    if (r.outcome.decided && r.outcome.time <= r.issue)
      throw MalformedInput("request " + std::to_string(r.request_id) +
                           " decided no later than it was issued");
    OpId op = b.invoke(r.client, r.object, r.op_name, r.args, r.issue);
    if (r.outcome.decided) b.respond(op, r.outcome.value, r.outcome.time);
  }
  return b.build();
}

}  // namespace linsmr

#endif  // LINSMR_VOTING_HPP_
