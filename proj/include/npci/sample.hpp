#pragma once

#include <Eigen/Dense>

namespace npci {

using Index = Eigen::Index;
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowRef =
    Eigen::Ref<const Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

// Time-aligned observation triplets (W_t, Y_t, Z_t), one row per t.
// W is the conditioning block, Y and Z the pair tested for conditional
// independence given W.
struct TimeSeriesSample {
  RowMatrix w;
  RowMatrix y;
  RowMatrix z;

  Index size() const { return w.rows(); }
  Index dim_w() const { return w.cols(); }
  Index dim_y() const { return y.cols(); }
  Index dim_z() const { return z.cols(); }

  // Throws Error unless n >= 2, row counts agree, every block has at least
  // one column and all entries are finite.
  void validate() const;

  // Returns a sample holding rows perm[0], perm[1], ... of this one.
  TimeSeriesSample permuted(const Eigen::VectorXi& perm) const;
};

// Componentwise weak inequality a <= b.
inline bool all_leq(const ConstRowRef& a, const ConstRowRef& b) {
  return (a.array() <= b.array()).all();
}

}  // namespace npci
