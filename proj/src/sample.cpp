#include "npci/sample.hpp"

#include <string>

#include "npci/error.hpp"

namespace npci {

void TimeSeriesSample::validate() const {
  const Index n = w.rows();
  if (y.rows() != n || z.rows() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "W, Y and Z must have the same number of rows (" +
                    std::to_string(n) + ", " + std::to_string(y.rows()) +
                    ", " + std::to_string(z.rows()) + ")");
  }
  if (n < 2) {
    throw Error(ErrorKind::kInsufficientData,
                "sample needs at least 2 observations, got " +
                    std::to_string(n));
  }
  if (w.cols() < 1 || y.cols() < 1 || z.cols() < 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "W, Y and Z must each have at least one column");
  }
  if (!w.allFinite() || !y.allFinite() || !z.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "sample contains non-finite values");
  }
}

TimeSeriesSample TimeSeriesSample::permuted(const Eigen::VectorXi& perm) const {
  if (perm.size() != size()) {
    throw Error(ErrorKind::kDimensionMismatch, "permutation length != n");
  }
  TimeSeriesSample out{RowMatrix(w.rows(), w.cols()),
                       RowMatrix(y.rows(), y.cols()),
                       RowMatrix(z.rows(), z.cols())};
  for (Index i = 0; i < perm.size(); ++i) {
    out.w.row(i) = w.row(perm[i]);
    out.y.row(i) = y.row(perm[i]);
    out.z.row(i) = z.row(perm[i]);
  }
  return out;
}

}  // namespace npci
