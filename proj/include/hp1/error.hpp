#pragma once

#include <stdexcept>
#include <string>

namespace hp1 {

// Raised when an internal mathematical invariant fails to hold.  These are
// hard errors: the caller is expected to abort the computation, not recover.
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on malformed user input (CLI arguments, config files).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw CheckError(msg); }

inline void check(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

}  // namespace hp1
