#include "npci/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "npci/error.hpp"
#include "npci/parallel.hpp"

namespace npci {
namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
constexpr double kBandwidthExponent = -1.0 / 3.5;

double flush_tiny(double v) {
  return v < std::numeric_limits<double>::min() ? 0.0 : v;
}

double sample_sd(const Eigen::Ref<const Eigen::VectorXd>& col) {
  const Index n = col.size();
  const double mean = col.mean();
  return std::sqrt((col.array() - mean).square().sum() /
                   static_cast<double>(n - 1));
}

}  // namespace

double kernel_at_zero(const KernelSpec& spec) {
  return std::pow(kInvSqrt2Pi, spec.dim);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> u) {
  if (static_cast<int>(u.size()) != spec.dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                "kernel argument has length " + std::to_string(u.size()) +
                    ", expected " + std::to_string(spec.dim));
  }
  double k = 1.0;
  for (double x : u) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kInvalidArgument, "kernel argument not finite");
    }
    k *= kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }
  return flush_tiny(k);
}

double bandwidth(const BandwidthRule& rule, const TimeSeriesSample& sample) {
  const Index n = sample.size();
  if (n < 2) {
    throw Error(ErrorKind::kInsufficientData, "bandwidth needs n >= 2");
  }
  const double rate = std::pow(static_cast<double>(n), kBandwidthExponent);
  switch (rule.kind) {
    case BandwidthRule::Kind::kFixedC:
      if (!(rule.c > 0.0) || !std::isfinite(rule.c)) {
        throw Error(ErrorKind::kInvalidConfig,
                    "bandwidth constant must be positive");
      }
      return rule.c * rate;
    case BandwidthRule::Kind::kDataDriven: {
      double sd_sum = 0.0;
      for (Index j = 0; j < sample.dim_w(); ++j) {
        const double sd = sample_sd(sample.w.col(j));
        if (!(sd > 0.0)) {
          throw Error(ErrorKind::kDegenerateBandwidth,
                      "conditioning column " + std::to_string(j) +
                          " has zero spread; data-driven bandwidth is 0");
        }
        sd_sum += sd;
      }
      return 1.06 * (sd_sum / static_cast<double>(sample.dim_w())) * rate;
    }
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown bandwidth rule");
}

Eigen::MatrixXd kernel_weight_matrix(const RowMatrix& w, double h,
                                     const KernelSpec& spec) {
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "bandwidth must be positive");
  }
  if (w.cols() != spec.dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                "W has " + std::to_string(w.cols()) +
                    " columns, kernel expects " + std::to_string(spec.dim));
  }
  const Index n = w.rows();
  const double k0 = kernel_at_zero(spec);
  const RowMatrix scaled = w / h;
  Eigen::MatrixXd m(n, n);
#pragma omp parallel for num_threads(::npci::num_threads()) schedule(dynamic, 16) if (n > 256)
  for (Index t = 0; t < n; ++t) {
    m(t, t) = k0;
    for (Index s = t + 1; s < n; ++s) {
      const double sq = (scaled.row(t) - scaled.row(s)).squaredNorm();
      const double v = flush_tiny(k0 * std::exp(-0.5 * sq));
      m(t, s) = v;
      m(s, t) = v;
    }
  }
  return m;
}

double loo_density(const Eigen::MatrixXd& weights, double h, int dim_w,
                   Index t) {
  const Index n = weights.rows();
  if (n < 2 || t < 0 || t >= n) {
    throw Error(ErrorKind::kInvalidArgument, "loo_density: bad index or n < 2");
  }
  const double mass =
      weights.col(t).head(t).sum() + weights.col(t).tail(n - t - 1).sum();
  return mass / (static_cast<double>(n - 1) * std::pow(h, dim_w));
}

double loo_cond_cdf(const Eigen::MatrixXd& weights,
                    const Eigen::Ref<const Eigen::VectorXd>& indicator,
                    Index t) {
  const Index n = weights.rows();
  if (indicator.size() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "indicator column length != n");
  }
  if (t < 0 || t >= n) {
    throw Error(ErrorKind::kInvalidArgument, "loo_cond_cdf: bad index");
  }
  double num = 0.0;
  double den = 0.0;
  for (Index s = 0; s < n; ++s) {
    if (s == t) continue;
    num += weights(s, t) * indicator[s];
    den += weights(s, t);
  }
  if (!(den > 0.0)) {
    throw Error(ErrorKind::kDegenerateNeighborhood,
                "zero leave-one-out kernel mass at observation " +
                    std::to_string(t));
  }
  return num / den;
}

LooSmoother::LooSmoother(Eigen::MatrixXd weights, double h, int dim_w)
    : weights_(std::move(weights)), h_(h) {
  const Index n = weights_.rows();
  if (n < 2 || weights_.cols() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "kernel matrix must be square with n >= 2");
  }
  // Summing without the diagonal avoids cancelling K(0) against a row total
  // that it dominates when a point is nearly isolated.
  mass_.resize(n);
  for (Index t = 0; t < n; ++t) {
    mass_[t] = weights_.col(t).head(t).sum() +
               weights_.col(t).tail(n - t - 1).sum();
  }
  normalizer_ = static_cast<double>(n - 1) * std::pow(h, dim_w);
}

void LooSmoother::require_positive_mass() const {
  for (Index t = 0; t < mass_.size(); ++t) {
    if (!(mass_[t] > 0.0)) {
      throw Error(ErrorKind::kDegenerateNeighborhood,
                  "zero leave-one-out kernel mass at observation " +
                      std::to_string(t) + " (bandwidth " + std::to_string(h_) +
                      " too small?)");
    }
  }
}

Eigen::MatrixXd LooSmoother::numerators(const RowMatrix& values,
                                        const RowMatrix& points) const {
  return split_numerators(values, points).below;
}

LooSmoother::Split LooSmoother::split_numerators(const RowMatrix& values,
                                                 const RowMatrix& points) const {
  const Index n = size();
  const Index m = points.rows();
  if (values.rows() != n || points.cols() != values.cols()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "numerators: values/points shape mismatch");
  }
  Split out{Eigen::MatrixXd(n, m), Eigen::MatrixXd(n, m)};

  if (values.cols() == 1) {
    std::vector<Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      return values(a, 0) < values(b, 0);
    });
    std::vector<double> sorted(order.size());
    for (size_t k = 0; k < order.size(); ++k) sorted[k] = values(order[k], 0);
    // count[j] = #{s : values_s <= points_j}
    std::vector<Index> count(static_cast<size_t>(m));
    for (Index j = 0; j < m; ++j) {
      count[j] = std::upper_bound(sorted.begin(), sorted.end(), points(j, 0)) -
                 sorted.begin();
    }
#pragma omp parallel num_threads(::npci::num_threads()) if (n > 256)
    {
      std::vector<double> prefix(static_cast<size_t>(n) + 1);
      std::vector<double> suffix(static_cast<size_t>(n) + 1);
#pragma omp for schedule(static)
      for (Index t = 0; t < n; ++t) {
        const auto col = weights_.col(t);
        prefix[0] = 0.0;
        for (Index k = 0; k < n; ++k) {
          const Index s = order[k];
          prefix[k + 1] = prefix[k] + (s == t ? 0.0 : col[s]);
        }
        suffix[n] = 0.0;
        for (Index k = n - 1; k >= 0; --k) {
          const Index s = order[k];
          suffix[k] = suffix[k + 1] + (s == t ? 0.0 : col[s]);
        }
        for (Index j = 0; j < m; ++j) {
          out.below(t, j) = prefix[count[j]];
          out.above(t, j) = suffix[count[j]];
        }
      }
    }
    return out;
  }

  Eigen::MatrixXd indicator(n, 2 * m);
  for (Index j = 0; j < m; ++j) {
    for (Index s = 0; s < n; ++s) {
      const bool le = all_leq(values.row(s), points.row(j));
      indicator(s, j) = le ? 1.0 : 0.0;
      indicator(s, m + j) = le ? 0.0 : 1.0;
    }
  }
  Eigen::MatrixXd off = weights_;
  off.diagonal().setZero();
  const Eigen::MatrixXd both = off * indicator;
  out.below = both.leftCols(m);
  out.above = both.rightCols(m);
  return out;
}

}  // namespace npci
