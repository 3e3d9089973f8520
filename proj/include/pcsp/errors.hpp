#ifndef PCSP_ERRORS_HPP
#define PCSP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcsp {

// Caller misuse: malformed input files, mismatched variable registries,
// out-of-range vertices or colors, options that make no sense together.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A work-size guard tripped: the request is well-formed but larger than the
// configured enumeration budget (brute force, split-and-list row counts).
class GuardError : public std::runtime_error {
public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// An internal consistency check failed: intermediate degree bound exceeded,
// pruning asked of a polynomial with negative coefficients, broken
// decomposition handed to the DP.
class InvariantError : public std::runtime_error {
public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pcsp

#endif
