#include "qcdim/errors.hpp"

namespace qcdim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::BracketInvalid: return "bracket_invalid";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::DegenerateInput: return "degenerate_input";
    case ErrorCode::Hypothesis: return "hypothesis";
    case ErrorCode::Pairing: return "pairing";
    case ErrorCode::Resource: return "resource";
    case ErrorCode::Io: return "io";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace qcdim
