#pragma once

#include <stdexcept>
#include <string>

namespace nuca {

// Malformed or unsupported input.  The CLI maps this to exit code 2.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// A configured size or iteration cap was hit before the computation could
// finish.  The CLI maps this to exit code 3.  Caps never silently change a
// verdict: either the decision completes exactly, or this is thrown.
struct ResourceLimit : std::runtime_error {
  explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed (e.g. a window reduction whose
// preconditions do not hold).  Always a bug, never a verdict.
struct ReductionError : std::logic_error {
  explicit ReductionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nuca
