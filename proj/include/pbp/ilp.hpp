#pragma once

#include "pbp/linalg.hpp"

namespace pbp {

// Enumerate all integer x with M x + b >= 0 entrywise, up to a cap.
struct IlpProblem {
  IntMatrix M;          // rows = constraints, cols = dimension d
  std::vector<Int> b;   // one entry per row
  long cap = 1000;      // positive solution cap
};

struct IlpResult {
  enum class Status { Complete, Capped, Unbounded } status;
  std::vector<std::vector<Int>> solutions;  // lexicographically sorted
  std::vector<Int> certificate;  // nonzero recession direction if Unbounded
};

IlpResult ilp_enumerate(const IlpProblem& p);

}  // namespace pbp
