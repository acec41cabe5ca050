#ifndef AUCTAG_ERROR_HPP_
#define AUCTAG_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace auctag {

enum class ErrorKind {
  kInvalidArgument,
  kParse,
  kValidation,
  kIo,
  kShortfall,
  kDivergence,
  kUndefined,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can emit a
// machine-parsable one-line error.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace auctag

#endif  // AUCTAG_ERROR_HPP_
