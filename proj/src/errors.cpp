#include "stackop/errors.hpp"

namespace stackop {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::ZeroAnchor: return "ZeroAnchor";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidParam: return "InvalidParam";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RoleMismatch: return "RoleMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace stackop
