#ifndef COBBLE_ERRORS_HPP_
#define COBBLE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cobble {

// Tactic-level failures are data (SessionOutcome), never exceptions.
// Exceptions are reserved for infrastructure faults and contract violations.

struct MalformedScriptError : std::runtime_error {
  explicit MalformedScriptError(const std::string& what) : std::runtime_error(what) {}
};

struct EnvironmentError : std::runtime_error {
  explicit EnvironmentError(const std::string& what) : std::runtime_error(what) {}
};

// The backend process/transcript is gone; nothing further can run on the session.
struct SessionDeadError : std::runtime_error {
  explicit SessionDeadError(const std::string& what) : std::runtime_error(what) {}
};

struct PromptOverflowError : std::runtime_error {
  explicit PromptOverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct UnparseableError : std::runtime_error {
  explicit UnparseableError(const std::string& what) : std::runtime_error(what) {}
};

struct BackendError : std::runtime_error {
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// An assembled proof failed its from-scratch re-verification. Signals an
// executor bug; never silently reported as success.
struct AssemblyVerificationError : std::runtime_error {
  explicit AssemblyVerificationError(const std::string& what) : std::runtime_error(what) {}
};

struct MissingReferenceProofError : std::runtime_error {
  explicit MissingReferenceProofError(const std::string& what) : std::runtime_error(what) {}
};

struct ManifestError : std::runtime_error {
  explicit ManifestError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyBenchmarkError : std::runtime_error {
  explicit EmptyBenchmarkError(const std::string& what) : std::runtime_error(what) {}
};

struct UndefinedBaselineError : std::runtime_error {
  explicit UndefinedBaselineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cobble

#endif  // COBBLE_ERRORS_HPP_
