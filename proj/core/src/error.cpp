#include "auctag/error.hpp"

namespace auctag {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kShortfall: return "shortfall";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kUndefined: return "undefined";
  }
  return "unknown";
}

}  // namespace auctag
