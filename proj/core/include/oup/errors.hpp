#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oup {

// Base of every domain error raised by the library. `code()` is a stable,
// machine-parsable identifier used by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string_view code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define OUP_DECLARE_ERROR(Name, Code)                                     \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(Code, what) {}         \
  }

OUP_DECLARE_ERROR(StationarityViolation, "E_STATIONARITY");
OUP_DECLARE_ERROR(DegenerateRoots, "E_DEGENERATE_ROOTS");
OUP_DECLARE_ERROR(NotPositiveDefinite, "E_NOT_POSITIVE_DEFINITE");
OUP_DECLARE_ERROR(QuadratureNonConvergence, "E_QUADRATURE");
OUP_DECLARE_ERROR(NoAdmissibleStart, "E_NO_ADMISSIBLE_START");
OUP_DECLARE_ERROR(SingularSystem, "E_SINGULAR_SYSTEM");
OUP_DECLARE_ERROR(AdmissibilityViolation, "E_ADMISSIBILITY");
OUP_DECLARE_ERROR(ParseError, "E_PARSE");
OUP_DECLARE_ERROR(IrregularSpacing, "E_IRREGULAR_SPACING");
OUP_DECLARE_ERROR(InvalidArgument, "E_INVALID_ARGUMENT");

#undef OUP_DECLARE_ERROR

}  // namespace oup
