#pragma once

#include "digitlens/json_io.hpp"

#include <cstdint>
#include <string>

namespace digitlens {

// Defaults applied when an operation's parameters leave them out.
struct RunContext {
  double tol = 1e-4;
  int depth = -1;  // -1 = operation-specific default
  std::uint64_t seed = 20240611;
  bool parallel = true;
};

struct OperationResult {
  json result;
  std::string csv;  // empty when the operation has no table
  std::int64_t nodes = 0;
};

// Names: dim, l1bound, fourier, partialsum, count, scaling, sweep, lsearch,
// sharpness, distset, sumset, prodset, sqsumset, master.
OperationResult run_operation(const std::string& op, const json& params, const RunContext& ctx);

// Shortest round-trip text for a double, so CSV artifacts are reproducible.
std::string format_double(double v);

}  // namespace digitlens
