#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathsep {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed JSON or a document violating the instance schema.
struct ParseError : Error {
  using Error::Error;
};

// Raised by operations that require an acyclic graph; carries one directed
// cycle (arc ids, head of each arc = tail of the next, wrapping around).
struct CyclicError : Error {
  std::vector<std::uint32_t> cycle;
  explicit CyclicError(std::vector<std::uint32_t> cyc)
      : Error("graph contains a directed cycle"), cycle(std::move(cyc)) {}
};

// Enumeration would produce more items than the caller's cap.
struct CapExceeded : Error {
  std::uint64_t cap;
  explicit CapExceeded(std::uint64_t c)
      : Error("enumeration cap of " + std::to_string(c) + " exceeded"), cap(c) {}
};

// No s-t path exists, so the requested object is undefined.
struct Disconnected : Error {
  Disconnected() : Error("target is not reachable from the source") {}
};

// A one-arc s-t path exists; no pair set can separate it.
struct Inseparable : Error {
  Inseparable() : Error("instance has a direct s->t arc and cannot be separated") {}
};

// A search exhausted its node budget before reaching a verdict.
struct BudgetExceeded : Error {
  std::uint64_t budget;
  explicit BudgetExceeded(std::uint64_t b)
      : Error("search budget of " + std::to_string(b) + " nodes exhausted"), budget(b) {}
};

// The vertex set handed to the reduction path builder is not independent.
struct NotIndependent : Error {
  NotIndependent() : Error("vertex set is not independent") {}
};

// The assignment handed to the witness builder satisfies the formula.
struct NotFalsifying : Error {
  NotFalsifying() : Error("assignment does not falsify the formula") {}
};

// Input exceeds the size this exact routine is willing to attempt.
struct TooLarge : Error {
  using Error::Error;
};

// A clause violates the three-literal format.
struct MalformedClause : Error {
  using Error::Error;
};

// A formula-level invariant needed by the reduction does not hold and
// cannot be restored by normalization.
struct MalformedFormula : Error {
  using Error::Error;
};

struct LpInfeasible : Error {
  LpInfeasible() : Error("linear program is infeasible") {}
};

struct LpUnbounded : Error {
  LpUnbounded() : Error("linear program is unbounded") {}
};

}  // namespace pathsep
