#include "npci/error.hpp"

namespace npci {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kDegenerateBandwidth: return "degenerate_bandwidth";
    case ErrorKind::kDegenerateNeighborhood: return "degenerate_neighborhood";
    case ErrorKind::kInvalidConfig: return "invalid_config";
    case ErrorKind::kSingularDesign: return "singular_design";
    case ErrorKind::kInsufficientData: return "insufficient_data";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

}  // namespace npci
