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

#ifndef LINSMR_ERRORS_HPP_
#define LINSMR_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace linsmr {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A history violates a structural invariant (orphan response, duplicate
/// op id, inverted span, overlapping operations of one client).
struct MalformedHistory : Error {
  MalformedHistory(std::string msg, std::uint64_t offending_event_id)
      : Error(std::move(msg) + " (event_id=" + std::to_string(offending_event_id) + ")"),
        event_id(offending_event_id) {}
  std::uint64_t event_id;
};

/// An operation id was looked up that the history does not contain, or the
/// operation is still pending where a complete one is required.
struct UnknownOp : Error {
  explicit UnknownOp(std::uint64_t op)
      : Error("unknown or incomplete operation (op_id=" + std::to_string(op) + ")"), op_id(op) {}
  std::uint64_t op_id;
};

/// A timeline extension made two operations of the same client overlap,
/// which would break the one-outstanding-request-per-client invariant.
struct ClientOverlapViolation : Error {
  using Error::Error;
};

/// A checker received input outside its contract (pending operations,
/// multiple objects, undeclared operation names, ...).
struct MalformedInput : Error {
  using Error::Error;
};

/// The search budget ran out and the budget is configured to raise.
struct BudgetExhausted : Error {
  using Error::Error;
};

/// Program source could not be parsed.
struct ParseError : Error {
  using Error::Error;
};

/// lock/unlock instructions are not properly nested and balanced.
struct UnbalancedLocks : Error {
  using Error::Error;
};

/// A wait instruction appears while its lock is not held.
struct WaitWithoutLock : Error {
  using Error::Error;
};

/// The program cannot be decomposed into effect steps (nested calls).
struct UnsupportedProgram : Error {
  using Error::Error;
};

/// Simulator configuration violates a fault-threshold or mode constraint.
struct ConfigInvalid : Error {
  using Error::Error;
};

/// The fault plan exceeds the configured tolerance f and strict mode is set.
struct OutOfSpecRun : Error {
  using Error::Error;
};

/// No runnable thread exists while conditional waits are pending.
struct DeadlockDetected : Error {
  using Error::Error;
};

/// A replica answered the same request twice.
struct DuplicateReplicaResponse : Error {
  using Error::Error;
};

}  // namespace linsmr

#endif  // LINSMR_ERRORS_HPP_
