#include "npci/ciprocess.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "npci/error.hpp"
#include "npci/parallel.hpp"

namespace npci {
namespace {

RowMatrix stack_rows(const std::vector<EvaluationPoint>& points,
                     Eigen::RowVectorXd EvaluationPoint::*field, Index dim) {
  RowMatrix out(static_cast<Index>(points.size()), dim);
  for (size_t j = 0; j < points.size(); ++j) {
    const auto& v = points[j].*field;
    if (v.size() != dim) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "evaluation point " + std::to_string(j) +
                      " has the wrong dimension");
    }
    if (!v.allFinite()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "evaluation point " + std::to_string(j) + " not finite");
    }
    out.row(static_cast<Index>(j)) = v;
  }
  return out;
}

double process_scale(Index n, double h, Index dim_w) {
  const double nd = static_cast<double>(n);
  return 1.0 / (std::sqrt(nd) * (nd - 1.0) * std::pow(h, dim_w));
}

}  // namespace

std::complex<double> weight_eval(const WeightFamily& family,
                                 const ConstRowRef& w_t,
                                 const ConstRowRef& w) {
  if (w_t.size() != w.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "weight function arguments differ in dimension");
  }
  switch (family.kind) {
    case WeightKind::kIndicator:
      return all_leq(w_t, w) ? 1.0 : 0.0;
    case WeightKind::kSine:
      return std::sin(w.dot(w_t));
    case WeightKind::kComplexExp: {
      const double a = w.dot(w_t);
      return {std::cos(a), std::sin(a)};
    }
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown weight family");
}

std::vector<EvaluationPoint> sample_eval_points(const TimeSeriesSample& sample,
                                                const WeightFamily& family) {
  sample.validate();
  const Index n = sample.size();
  std::vector<EvaluationPoint> points(static_cast<size_t>(n));
  const bool remap =
      family.domain.has_value() && family.kind != WeightKind::kIndicator;
  Eigen::RowVectorXd lo, span, dlo, dspan;
  if (remap) {
    const Box& box = *family.domain;
    if (box.lower.size() != sample.dim_w() || box.upper.size() != sample.dim_w()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "weight domain dimension != d_w");
    }
    if ((box.upper.array() < box.lower.array()).any()) {
      throw Error(ErrorKind::kInvalidConfig, "weight domain has upper < lower");
    }
    lo = sample.w.colwise().minCoeff();
    span = sample.w.colwise().maxCoeff() - lo;
    dlo = box.lower;
    dspan = box.upper - box.lower;
  }
  for (Index j = 0; j < n; ++j) {
    auto& p = points[static_cast<size_t>(j)];
    p.y = sample.y.row(j);
    p.z = sample.z.row(j);
    if (!remap) {
      p.w = sample.w.row(j);
      continue;
    }
    p.w.resize(sample.dim_w());
    for (Index k = 0; k < sample.dim_w(); ++k) {
      const double frac = span[k] > 0.0 ? (sample.w(j, k) - lo[k]) / span[k] : 0.5;
      p.w[k] = dlo[k] + frac * dspan[k];
    }
  }
  return points;
}

std::complex<double> process_at(const TimeSeriesSample& sample, double h,
                                const WeightFamily& family,
                                const EvaluationPoint& gamma) {
  sample.validate();
  if (!(h > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "bandwidth must be positive");
  }
  if (gamma.w.size() != sample.dim_w() || gamma.y.size() != sample.dim_y() ||
      gamma.z.size() != sample.dim_z()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "evaluation point does not match sample dimensions");
  }
  const Index n = sample.size();
  const KernelSpec kernel{KernelFamily::kGaussian,
                          static_cast<int>(sample.dim_w())};
  std::vector<double> u(static_cast<size_t>(sample.dim_w()));

  std::complex<double> total = 0.0;
  for (Index t = 0; t < n; ++t) {
    if (!all_leq(sample.y.row(t), gamma.y)) continue;
    const std::complex<double> phi = weight_eval(family, sample.w.row(t), gamma.w);
    const double z_t = all_leq(sample.z.row(t), gamma.z) ? 1.0 : 0.0;
    double inner = 0.0;
    for (Index s = 0; s < n; ++s) {
      if (s == t) continue;
      const double z_s = all_leq(sample.z.row(s), gamma.z) ? 1.0 : 0.0;
      if (z_t == z_s) continue;
      for (Index k = 0; k < sample.dim_w(); ++k) {
        u[static_cast<size_t>(k)] = (sample.w(t, k) - sample.w(s, k)) / h;
      }
      inner += kernel_eval(kernel, u) * (z_t - z_s);
    }
    total += phi * inner;
  }
  return total * process_scale(n, h, sample.dim_w());
}

SampleProcess::SampleProcess(TimeSeriesSample sample, double h,
                             WeightFamily family)
    : SampleProcess(sample, h, family, sample_eval_points(sample, family)) {}

SampleProcess::SampleProcess(TimeSeriesSample sample, double h,
                             WeightFamily family,
                             std::vector<EvaluationPoint> eval_points)
    : sample_((sample.validate(), std::move(sample))),
      family_(std::move(family)),
      smoother_(kernel_weight_matrix(
                    sample_.w, h,
                    {KernelFamily::kGaussian, static_cast<int>(sample_.dim_w())}),
                h, static_cast<int>(sample_.dim_w())),
      points_(std::move(eval_points)) {
  if (points_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "need at least one evaluation point");
  }
  point_y_ = stack_rows(points_, &EvaluationPoint::y, sample_.dim_y());
  point_z_ = stack_rows(points_, &EvaluationPoint::z, sample_.dim_z());
  // validates w dimensions as a side effect
  stack_rows(points_, &EvaluationPoint::w, sample_.dim_w());
  z_numerators_ = smoother_.split_numerators(sample_.z, point_z_);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> SampleProcess::weight_table() const {
  const Index n = sample_.size();
  const Index m = static_cast<Index>(points_.size());
  Eigen::MatrixXd re(m, n);
  Eigen::MatrixXd im;
  if (family_.is_complex()) im.resize(m, n);
#pragma omp parallel for num_threads(::npci::num_threads()) schedule(static) if (m * n > 65536)
  for (Index j = 0; j < m; ++j) {
    const auto& w = points_[static_cast<size_t>(j)].w;
    for (Index t = 0; t < n; ++t) {
      const std::complex<double> phi = weight_eval(family_, sample_.w.row(t), w);
      re(j, t) = phi.real();
      if (im.size() != 0) im(j, t) = phi.imag();
    }
  }
  return {std::move(re), std::move(im)};
}

ProcessValues SampleProcess::process_values() const {
  const Index n = sample_.size();
  const Index m = static_cast<Index>(points_.size());
  const auto [phi_re, phi_im] = weight_table();
  const double scale = process_scale(n, smoother_.bandwidth(), sample_.dim_w());

  ProcessValues out;
  out.re.resize(m);
  if (phi_im.size() != 0) out.im.resize(m);
#pragma omp parallel for num_threads(::npci::num_threads()) schedule(static) if (m * n > 65536)
  for (Index j = 0; j < m; ++j) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (Index t = 0; t < n; ++t) {
      if (!all_leq(sample_.y.row(t), point_y_.row(j))) continue;
      // 1(Z_t <= z) mass_t - below = above or -below
      const double a = all_leq(sample_.z.row(t), point_z_.row(j))
                           ? z_numerators_.above(t, j)
                           : -z_numerators_.below(t, j);
      acc_re += phi_re(j, t) * a;
      if (phi_im.size() != 0) acc_im += phi_im(j, t) * a;
    }
    out.re[j] = scale * acc_re;
    if (phi_im.size() != 0) out.im[j] = scale * acc_im;
  }
  return out;
}

ResidualMatrix SampleProcess::residuals() const {
  smoother_.require_positive_mass();
  const Index n = sample_.size();
  const Index m = static_cast<Index>(points_.size());
  const LooSmoother::Split y_numerators =
      smoother_.split_numerators(sample_.y, point_y_);
  auto [phi_re, phi_im] = weight_table();
  const Eigen::VectorXd& mass = smoother_.mass();
  const double norm = smoother_.normalizer();

  // e(j, t) = phi(j, t) * product(j, t), product shared by both parts
  ResidualMatrix out;
  out.re = std::move(phi_re);
  out.im = std::move(phi_im);
  out.eval_points = points_;
#pragma omp parallel for num_threads(::npci::num_threads()) schedule(static) if (m * n > 65536)
  for (Index j = 0; j < m; ++j) {
    for (Index t = 0; t < n; ++t) {
      const double phi_hat = all_leq(sample_.y.row(t), point_y_.row(j))
                                 ? y_numerators.above(t, j) / mass[t]
                                 : -y_numerators.below(t, j) / mass[t];
      const double eps_hat = all_leq(sample_.z.row(t), point_z_.row(j))
                                 ? z_numerators_.above(t, j) / mass[t]
                                 : -z_numerators_.below(t, j) / mass[t];
      const double product = phi_hat * eps_hat * (mass[t] / norm);
      out.re(j, t) *= product;
      if (out.im.size() != 0) out.im(j, t) *= product;
    }
  }
  return out;
}

ProcessValues process_on_sample(const TimeSeriesSample& sample, double h,
                                const WeightFamily& family) {
  return SampleProcess(sample, h, family).process_values();
}

ResidualMatrix residual_matrix(const TimeSeriesSample& sample, double h,
                               const WeightFamily& family,
                               std::vector<EvaluationPoint> eval_points) {
  return SampleProcess(sample, h, family, std::move(eval_points)).residuals();
}

}  // namespace npci
