#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace npci {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kDegenerateBandwidth,
  kDegenerateNeighborhood,
  kInvalidConfig,
  kSingularDesign,
  kInsufficientData,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as npci::Error; kind() is stable and is what
// the command-line tool prints as its diagnostic tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace npci
