#pragma once

#include <stdexcept>
#include <string>

namespace moonshine {

// Base for all engine errors.  `kind()` feeds the CLI exit-code mapping:
// input errors (unreadable or malformed requests) exit 2, everything else 1.
class EngineError : public std::runtime_error {
 public:
  EngineError(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Malformed textual input (series literals, JSON files, CLI values).
struct ParseError : EngineError {
  explicit ParseError(const std::string& m) : EngineError("parse error", m) {}
};

// Reference to a name or slot that does not exist.
struct LookupError : EngineError {
  explicit LookupError(const std::string& m) : EngineError("lookup error", m) {}
};

// Mathematical precondition violated (division by zero, non-root-of-unity
// substitution, wrong leading term, non-integral multiplicity, ...).
struct DomainError : EngineError {
  explicit DomainError(const std::string& m) : EngineError("domain error", m) {}
};

// Requested result lies beyond what the certified truncation supports.
struct TruncationError : EngineError {
  explicit TruncationError(const std::string& m) : EngineError("truncation error", m) {}
};

// The global cyclotomic modulus cap would be exceeded.
struct CapError : EngineError {
  explicit CapError(const std::string& m) : EngineError("modulus cap exceeded", m) {}
};

// Family extension cannot determine a coefficient from the available relations.
struct UnderdeterminedError : EngineError {
  explicit UnderdeterminedError(const std::string& m)
      : EngineError("underdetermined extension", m) {}
};

// Family extension derived contradictory constraints.
struct InconsistentError : EngineError {
  explicit InconsistentError(const std::string& m)
      : EngineError("inconsistent extension", m) {}
};

}  // namespace moonshine
