#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "npci/sample.hpp"
#include "npci/smoothing.hpp"

namespace npci {

// Axis-aligned box [lower, upper] in R^{d_w}.
struct Box {
  Eigen::RowVectorXd lower;
  Eigen::RowVectorXd upper;
};

enum class WeightKind { kIndicator, kSine, kComplexExp };

// Weight function phi(W_t, w) applied to the conditioning block.
//
// indicator:   1(W_t <= w) componentwise
// sine:        sin(w' W_t)
// complex_exp: exp(i w' W_t), carried as (cos, sin)
//
// For sine and complex_exp the evaluation arguments w are taken from the
// sample and mapped affinely from the componentwise sample range of W onto
// `domain`. Without a domain the mapping is the identity, i.e. the domain
// is the sample range itself.
struct WeightFamily {
  WeightKind kind = WeightKind::kIndicator;
  std::optional<Box> domain;

  bool is_complex() const { return kind == WeightKind::kComplexExp; }
};

std::complex<double> weight_eval(const WeightFamily& family,
                                 const ConstRowRef& w_t, const ConstRowRef& w);

// gamma = (w, y, z).
struct EvaluationPoint {
  Eigen::RowVectorXd w;
  Eigen::RowVectorXd y;
  Eigen::RowVectorXd z;
};

// S_n at a set of evaluation points. `im` is empty for real weight families.
struct ProcessValues {
  Eigen::VectorXd re;
  Eigen::VectorXd im;

  Index size() const { return re.size(); }
  bool is_complex() const { return im.size() != 0; }
};

// Estimated residual products e_t(gamma_j), row j per evaluation point and
// column t per observation. `im` is empty for real weight families.
struct ResidualMatrix {
  Eigen::MatrixXd re;
  Eigen::MatrixXd im;
  std::vector<EvaluationPoint> eval_points;

  Index num_points() const { return re.rows(); }
  Index num_obs() const { return re.cols(); }
  bool is_complex() const { return im.size() != 0; }
};

// The evaluation set {(W_j, Y_j, Z_j)}, with w mapped onto the family domain.
std::vector<EvaluationPoint> sample_eval_points(const TimeSeriesSample& sample,
                                                const WeightFamily& family);

// Direct O(n^2) evaluation of the division-free double sum
//
//   S_n(gamma) = [sqrt(n) (n-1) h^d]^{-1} sum_t sum_{s != t}
//                K((W_t - W_s)/h) phi(W_t, w) 1(Y_t <= y)
//                (1(Z_t <= z) - 1(Z_s <= z)).
std::complex<double> process_at(const TimeSeriesSample& sample, double h,
                                const WeightFamily& family,
                                const EvaluationPoint& gamma);

// S_n at every observation, sharing one kernel matrix across points.
ProcessValues process_on_sample(const TimeSeriesSample& sample, double h,
                                const WeightFamily& family);

ResidualMatrix residual_matrix(const TimeSeriesSample& sample, double h,
                               const WeightFamily& family,
                               std::vector<EvaluationPoint> eval_points);

// Everything the test needs from one sample: the kernel matrix and the
// leave-one-out Z numerators are built once and shared by the statistic and
// the bootstrap residuals.
class SampleProcess {
 public:
  // Evaluates at the observations.
  SampleProcess(TimeSeriesSample sample, double h, WeightFamily family);
  SampleProcess(TimeSeriesSample sample, double h, WeightFamily family,
                std::vector<EvaluationPoint> eval_points);

  // S_n at every evaluation point.
  ProcessValues process_values() const;

  // Residual products at every evaluation point; requires every
  // leave-one-out kernel mass to be positive.
  ResidualMatrix residuals() const;

  const LooSmoother& smoother() const { return smoother_; }
  const std::vector<EvaluationPoint>& eval_points() const { return points_; }

 private:
  // phi(W_t, w_j) for every (j, t); second matrix empty unless complex.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> weight_table() const;

  TimeSeriesSample sample_;
  WeightFamily family_;
  LooSmoother smoother_;
  std::vector<EvaluationPoint> points_;
  RowMatrix point_y_;
  RowMatrix point_z_;
  LooSmoother::Split z_numerators_;
};

}  // namespace npci
