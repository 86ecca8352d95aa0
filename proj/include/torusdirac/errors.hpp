#ifndef TORUSDIRAC_ERRORS_HPP
#define TORUSDIRAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torusdirac {

// Domain errors are caller mistakes (bad lattice, forbidden spin structure,
// bad parameters). Numerical errors are failures of an algorithm on valid
// input. The CLI maps the two onto different exit codes.
enum class ErrorKind { domain, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(code) {}

  ErrorKind kind() const { return kind_; }
  // Short machine-readable tag, e.g. "invalid-lattice".
  const std::string& code() const { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

#define TORUSDIRAC_ERROR(Name, kind_value, tag)                  \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what)                        \
        : Error(ErrorKind::kind_value, tag, what) {}              \
  };

TORUSDIRAC_ERROR(InvalidLattice, domain, "invalid-lattice")
TORUSDIRAC_ERROR(UnsupportedSpin, domain, "unsupported-spin")
TORUSDIRAC_ERROR(ParityError, domain, "parity")
TORUSDIRAC_ERROR(SpinMismatch, domain, "spin")
TORUSDIRAC_ERROR(ResolutionError, domain, "resolution")
TORUSDIRAC_ERROR(SupportError, domain, "support")
TORUSDIRAC_ERROR(ParameterError, domain, "parameter")
TORUSDIRAC_ERROR(FormatError, domain, "format")
TORUSDIRAC_ERROR(ReductionFailed, numerical, "reduction-failed")
TORUSDIRAC_ERROR(EnumerationLimit, numerical, "enumeration-limit")
TORUSDIRAC_ERROR(DegeneratePairing, numerical, "degenerate-pairing")
TORUSDIRAC_ERROR(UnboundedRatio, numerical, "unbounded-ratio")
TORUSDIRAC_ERROR(OptimizationFailed, numerical, "optimization-failed")
TORUSDIRAC_ERROR(GradientMismatch, numerical, "gradient-bug")

#undef TORUSDIRAC_ERROR

}  // namespace torusdirac

#endif  // TORUSDIRAC_ERRORS_HPP
