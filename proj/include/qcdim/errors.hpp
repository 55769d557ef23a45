#ifndef QCDIM_ERRORS_HPP
#define QCDIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcdim {

enum class ErrorCode {
  Domain,
  BracketInvalid,
  NoConvergence,
  DegenerateInput,
  Hypothesis,
  Pairing,
  Resource,
  Io,
  Usage,
};

const char* to_string(ErrorCode code) noexcept;

/// Base of every exception thrown by the library. The code is what the C API
/// forwards across the shared-library boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define QCDIM_DEFINE_ERROR(Name, Code)                           \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(Code, what) {} \
  };

QCDIM_DEFINE_ERROR(DomainError, ErrorCode::Domain)
QCDIM_DEFINE_ERROR(BracketInvalid, ErrorCode::BracketInvalid)
QCDIM_DEFINE_ERROR(NoConvergence, ErrorCode::NoConvergence)
QCDIM_DEFINE_ERROR(DegenerateInput, ErrorCode::DegenerateInput)
QCDIM_DEFINE_ERROR(HypothesisError, ErrorCode::Hypothesis)
QCDIM_DEFINE_ERROR(PairingError, ErrorCode::Pairing)
QCDIM_DEFINE_ERROR(ResourceError, ErrorCode::Resource)
QCDIM_DEFINE_ERROR(IoError, ErrorCode::Io)
QCDIM_DEFINE_ERROR(UsageError, ErrorCode::Usage)

#undef QCDIM_DEFINE_ERROR

}  // namespace qcdim

#endif  // QCDIM_ERRORS_HPP
