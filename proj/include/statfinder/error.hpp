#pragma once

#include <stdexcept>
#include <string>

namespace statfinder {

// Root of every error the library raises. `code()` is a stable machine
// string used by the HTTP layer and the CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define STATFINDER_DEFINE_ERROR(Name, Base, Code)                   \
  class Name : public Base {                                        \
   public:                                                          \
    explicit Name(const std::string& message) : Base(Code, message) {} \
                                                                    \
   protected:                                                       \
    Name(std::string code, const std::string& message)              \
        : Base(std::move(code), message) {}                         \
  };

// Object encodings.
STATFINDER_DEFINE_ERROR(InvalidObject, Error, "invalid_object")
STATFINDER_DEFINE_ERROR(SyntaxError, InvalidObject, "syntax_error")
STATFINDER_DEFINE_ERROR(ValidityError, InvalidObject, "validity_error")
STATFINDER_DEFINE_ERROR(UnknownCollection, Error, "unknown_collection")
STATFINDER_DEFINE_ERROR(CapExceeded, Error, "cap_exceeded")

// Statistics and maps.
STATFINDER_DEFINE_ERROR(InvalidIdentifier, Error, "invalid_identifier")
STATFINDER_DEFINE_ERROR(NotComputable, Error, "not_computable")
STATFINDER_DEFINE_ERROR(IncompleteStatistic, Error, "incomplete_statistic")
STATFINDER_DEFINE_ERROR(UnknownStatistic, Error, "unknown_statistic")
STATFINDER_DEFINE_ERROR(UnknownMap, Error, "unknown_map")
STATFINDER_DEFINE_ERROR(DomainMismatch, Error, "domain_mismatch")
STATFINDER_DEFINE_ERROR(DepthExceeded, Error, "depth_exceeded")
STATFINDER_DEFINE_ERROR(InvalidStatistic, Error, "invalid_statistic")

// Search.
STATFINDER_DEFINE_ERROR(EmptyQuery, Error, "empty_query")
STATFINDER_DEFINE_ERROR(InvalidQuery, Error, "invalid_query")
STATFINDER_DEFINE_ERROR(EmptyInput, Error, "empty_input")

// Store.
STATFINDER_DEFINE_ERROR(ParseError, Error, "parse_error")
STATFINDER_DEFINE_ERROR(DuplicateIdentifier, Error, "duplicate_identifier")
STATFINDER_DEFINE_ERROR(RuleValueConflict, Error, "rule_value_conflict")
STATFINDER_DEFINE_ERROR(IoError, Error, "io_error")
STATFINDER_DEFINE_ERROR(IdentifierOverflow, Error, "identifier_overflow")

#undef STATFINDER_DEFINE_ERROR

// Valid object spelled non-canonically; carries the canonical spelling.
class NonCanonicalError : public InvalidObject {
 public:
  NonCanonicalError(const std::string& message, std::string canonical)
      : InvalidObject("non_canonical", message), canonical_(std::move(canonical)) {}

  const std::string& canonical() const noexcept { return canonical_; }

 private:
  std::string canonical_;
};

}  // namespace statfinder
