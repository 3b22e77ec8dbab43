#pragma once

#include <stdexcept>
#include <string>

namespace cdturing {

/// Base of every error raised by the library. Each kind carries the process
/// exit code the CLI maps it to.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code, const char* kind)
      : std::runtime_error(what), exit_code_(exit_code), kind_(kind) {}

  int exit_code() const noexcept { return exit_code_; }
  const char* kind() const noexcept { return kind_; }

 private:
  int exit_code_;
  const char* kind_;
};

#define CDTURING_DEFINE_ERROR(Name, code)                      \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what)                     \
        : Error(what, code, #Name) {}                          \
  };

CDTURING_DEFINE_ERROR(ParseError, 2)
CDTURING_DEFINE_ERROR(ValidationError, 3)
CDTURING_DEFINE_ERROR(ConditionViolated, 4)
CDTURING_DEFINE_ERROR(DomainError, 5)
CDTURING_DEFINE_ERROR(StepSizeError, 6)
CDTURING_DEFINE_ERROR(BracketError, 7)
CDTURING_DEFINE_ERROR(BlowUpError, 8)
CDTURING_DEFINE_ERROR(IoError, 9)

#undef CDTURING_DEFINE_ERROR

}  // namespace cdturing
