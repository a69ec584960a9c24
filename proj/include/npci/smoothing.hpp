#pragma once

#include <span>

#include <Eigen/Dense>

#include "npci/sample.hpp"

namespace npci {

enum class KernelFamily { kGaussian };

// Product kernel K(u) = prod_j k(u_j) over `dim` coordinates.
struct KernelSpec {
  KernelFamily family = KernelFamily::kGaussian;
  int dim = 1;
};

double kernel_eval(const KernelSpec& spec, std::span<const double> u);

// K(0) = (2 pi)^{-dim/2} for the Gaussian family.
double kernel_at_zero(const KernelSpec& spec);

struct BandwidthRule {
  enum class Kind { kFixedC, kDataDriven };

  Kind kind = Kind::kFixedC;
  double c = 1.0;

  static BandwidthRule fixed(double c) { return {Kind::kFixedC, c}; }
  static BandwidthRule data_driven() { return {Kind::kDataDriven, 0.0}; }
};

// h = c * n^{-1/3.5}, or 1.06 * sd(W) * n^{-1/3.5} for the data-driven rule.
// With more than one conditioning column the data-driven rule uses the mean
// of the column standard deviations, and rejects the sample if any column
// has zero spread.
double bandwidth(const BandwidthRule& rule, const TimeSeriesSample& sample);

// M(t, s) = K((W_t - W_s) / h). Exactly symmetric with K(0) on the diagonal.
Eigen::MatrixXd kernel_weight_matrix(const RowMatrix& w, double h,
                                     const KernelSpec& spec);

// Leave-one-out density estimate at W_t:
//   [(n-1) h^d]^{-1} sum_{s != t} M(t, s).
double loo_density(const Eigen::MatrixXd& weights, double h, int dim_w,
                   Index t);

// Leave-one-out Nadaraya-Watson estimate of P(V <= v | W_t), given the
// column of indicators 1(V_s <= v). Throws kDegenerateNeighborhood when the
// leave-one-out kernel mass at t is zero.
double loo_cond_cdf(const Eigen::MatrixXd& weights,
                    const Eigen::Ref<const Eigen::VectorXd>& indicator,
                    Index t);

// Batched leave-one-out smoothing over a fixed kernel matrix.
//
// numerators(values, points)(t, j) = sum_{s != t} M(t, s) 1(values_s <= points_j)
// where the inequality is componentwise. Single-column data goes through a
// sort-and-sweep in O(n (n + m)); wider data falls back to a dense product.
class LooSmoother {
 public:
  LooSmoother(Eigen::MatrixXd weights, double h, int dim_w);

  Index size() const { return weights_.rows(); }
  double bandwidth() const { return h_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

  // sum_{s != t} M(t, s), one entry per t.
  const Eigen::VectorXd& mass() const { return mass_; }

  // (n-1) h^d, the normalisation shared by every leave-one-out average.
  double normalizer() const { return normalizer_; }

  Eigen::MatrixXd numerators(const RowMatrix& values,
                             const RowMatrix& points) const;

  // Both halves of the leave-one-out mass: `below` as numerators() and
  // `above` the sum over s != t with values_s not <= points_j. Centred
  // indicators built from these never cancel mass against a numerator.
  struct Split {
    Eigen::MatrixXd below;
    Eigen::MatrixXd above;
  };
  Split split_numerators(const RowMatrix& values, const RowMatrix& points) const;

  // Throws kDegenerateNeighborhood naming the first t with zero mass.
  void require_positive_mass() const;

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd mass_;
  double h_;
  double normalizer_;
};

}  // namespace npci
