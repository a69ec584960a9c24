#include "npci/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npci/error.hpp"
#include "npci/rng.hpp"

namespace npci {
namespace {

using C = NamedCoefficient;

// Z_t = 0.5 Z_{t-1} + eps2 for S2, S3 and P1-P6.
constexpr C kS2[] = {{"y_ar", 0.5}, {"z_ar", 0.5}};
constexpr C kS3[] = {{"y_ar", 0.5}, {"y_damp", -0.5}, {"z_ar", 0.5}};
constexpr C kS4[] = {{"y_omega", 0.01}, {"y_garch", 0.9}, {"y_arch", 0.05},
                     {"z_omega", 0.01}, {"z_garch", 0.9}, {"z_arch", 0.05}};
constexpr C kP1[] = {{"y_ar", 0.5}, {"y_z", 0.5}, {"z_ar", 0.5}};
constexpr C kP2[] = {{"y_ar", 0.5}, {"y_z2", 0.5}, {"z_ar", 0.5}};
constexpr C kP3[] = {{"y_yz", 0.5}, {"z_ar", 0.5}};
constexpr C kP4[] = {{"y_const", 0.3}, {"y_logh", 0.2}, {"h_omega", 0.01},
                     {"h_y2", 0.5},    {"h_z2", 0.3},   {"z_ar", 0.5}};
constexpr C kP5[] = {{"y_ar", 0.5}, {"y_z_eps", 0.5}, {"z_ar", 0.5}};
constexpr C kP6[] = {{"h_omega", 0.01}, {"h_y2", 0.5}, {"h_z2", 0.25},
                     {"z_ar", 0.5}};
constexpr C kP7[] = {{"y_omega", 0.01}, {"y_garch", 0.1}, {"y_arch", 0.4},
                     {"y_z2", 0.5},     {"z_omega", 0.01}, {"z_garch", 0.9},
                     {"z_arch", 0.05}};

class Coefs {
 public:
  explicit Coefs(DgpId id) : table_(dgp_coefficients(id)) {}
  double operator()(std::string_view name) const {
    for (const auto& c : table_) {
      if (c.name == name) return c.value;
    }
    throw Error(ErrorKind::kInvalidArgument,
                "no coefficient '" + std::string(name) + "'");
  }

 private:
  std::span<const NamedCoefficient> table_;
};

constexpr std::uint64_t kStreamEps1 = 1;
constexpr std::uint64_t kStreamEps2 = 2;
constexpr std::uint64_t kStreamEps3 = 3;

}  // namespace

std::string_view to_string(DgpId id) {
  switch (id) {
    case DgpId::S1: return "S1";
    case DgpId::S2: return "S2";
    case DgpId::S3: return "S3";
    case DgpId::S4: return "S4";
    case DgpId::P1: return "P1";
    case DgpId::P2: return "P2";
    case DgpId::P3: return "P3";
    case DgpId::P4: return "P4";
    case DgpId::P5: return "P5";
    case DgpId::P6: return "P6";
    case DgpId::P7: return "P7";
  }
  return "?";
}

DgpId parse_dgp(std::string_view name) {
  for (DgpId id : kAllDgps) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown DGP '" + std::string(name) + "' (expected S1-S4 or P1-P7)");
}

bool is_null_dgp(DgpId id) {
  return id == DgpId::S1 || id == DgpId::S2 || id == DgpId::S3 ||
         id == DgpId::S4;
}

std::span<const NamedCoefficient> dgp_coefficients(DgpId id) {
  switch (id) {
    case DgpId::S1: return {};
    case DgpId::S2: return kS2;
    case DgpId::S3: return kS3;
    case DgpId::S4: return kS4;
    case DgpId::P1: return kP1;
    case DgpId::P2: return kP2;
    case DgpId::P3: return kP3;
    case DgpId::P4: return kP4;
    case DgpId::P5: return kP5;
    case DgpId::P6: return kP6;
    case DgpId::P7: return kP7;
  }
  return {};
}

RawSeries simulate(const DgpSpec& spec) {
  if (spec.n < 2) {
    throw Error(ErrorKind::kInvalidConfig, "DGP length must be >= 2");
  }
  if (spec.burn_in < 0) {
    throw Error(ErrorKind::kInvalidConfig, "burn-in must be >= 0");
  }
  const Coefs c(spec.id);
  const Index total = spec.n + spec.burn_in;
  RngStream s1 = make_stream(spec.seed, {kStreamEps1});
  RngStream s2 = make_stream(spec.seed, {kStreamEps2});
  RngStream s3 = make_stream(spec.seed, {kStreamEps3});
  std::normal_distribution<double> n1, n2, n3;

  const bool garch_y = spec.id == DgpId::S4 || spec.id == DgpId::P7;
  const bool garch_z = garch_y;
  const bool has_h1 = garch_y || spec.id == DgpId::P4 || spec.id == DgpId::P6;

  double y = spec.initial_offset;
  double z = spec.initial_offset;
  double h1 = 0.01;
  double h2 = 0.01;
  if (garch_y) h1 = c("y_omega") / (1.0 - c("y_garch") - c("y_arch"));
  if (garch_z) h2 = c("z_omega") / (1.0 - c("z_garch") - c("z_arch"));

  RawSeries out;
  out.y.reserve(static_cast<size_t>(spec.n));
  out.z.reserve(static_cast<size_t>(spec.n));
  if (spec.id == DgpId::S1) out.x.reserve(static_cast<size_t>(spec.n));
  if (has_h1) out.h1.reserve(static_cast<size_t>(spec.n));
  if (garch_z) out.h2.reserve(static_cast<size_t>(spec.n));

  for (Index t = 0; t < total; ++t) {
    const double e1 = n1(s1);
    const double e2 = n2(s2);
    const double e3 = n3(s3);
    double y_new = 0.0;
    double z_new = 0.0;
    double x_new = 0.0;

    switch (spec.id) {
      case DgpId::S1:
        y_new = e1;
        z_new = e2;
        x_new = e3;
        break;
      case DgpId::S2:
        y_new = c("y_ar") * y + e1;
        break;
      case DgpId::S3:
        y_new = c("y_ar") * y * std::exp(c("y_damp") * y * y) + e1;
        break;
      case DgpId::S4:
        h1 = c("y_omega") + c("y_garch") * h1 + c("y_arch") * y * y;
        h2 = c("z_omega") + c("z_garch") * h2 + c("z_arch") * z * z;
        y_new = std::sqrt(h1) * e1;
        z_new = std::sqrt(h2) * e2;
        break;
      case DgpId::P1:
        y_new = c("y_ar") * y + c("y_z") * z + e1;
        break;
      case DgpId::P2:
        y_new = c("y_ar") * y + c("y_z2") * z * z + e1;
        break;
      case DgpId::P3:
        y_new = c("y_yz") * y * z + e1;
        break;
      case DgpId::P4:
        h1 = c("h_omega") + c("h_y2") * y * y + c("h_z2") * z * z;
        y_new = c("y_const") + c("y_logh") * std::log(h1) + std::sqrt(h1) * e1;
        break;
      case DgpId::P5:
        y_new = c("y_ar") * y + c("y_z_eps") * z * e1;
        break;
      case DgpId::P6:
        h1 = c("h_omega") + c("h_y2") * y * y + c("h_z2") * z * z;
        y_new = std::sqrt(h1) * e1;
        break;
      case DgpId::P7:
        h1 = c("y_omega") + c("y_garch") * h1 + c("y_arch") * y * y +
             c("y_z2") * z * z;
        h2 = c("z_omega") + c("z_garch") * h2 + c("z_arch") * z * z;
        y_new = std::sqrt(h1) * e1;
        z_new = std::sqrt(h2) * e2;
        break;
    }
    if (spec.id != DgpId::S1 && !garch_z) z_new = c("z_ar") * z + e2;

    y = y_new;
    z = z_new;
    if (t < spec.burn_in) continue;
    out.y.push_back(y);
    out.z.push_back(z);
    if (spec.id == DgpId::S1) out.x.push_back(x_new);
    if (has_h1) out.h1.push_back(h1);
    if (garch_z) out.h2.push_back(h2);
  }
  return out;
}

TimeSeriesSample make_triplet(const RawSeries& raw, DgpId id) {
  const auto len = static_cast<Index>(raw.y.size());
  if (static_cast<Index>(raw.z.size()) != len) {
    throw Error(ErrorKind::kDimensionMismatch, "Y and Z series differ in length");
  }
  if (id == DgpId::S1) {
    if (static_cast<Index>(raw.x.size()) != len) {
      throw Error(ErrorKind::kDimensionMismatch, "S1 needs an X series of length n");
    }
    if (len < 2) throw Error(ErrorKind::kInsufficientData, "series too short");
    TimeSeriesSample s{RowMatrix(len, 1), RowMatrix(len, 1), RowMatrix(len, 1)};
    for (Index t = 0; t < len; ++t) {
      s.w(t, 0) = raw.x[static_cast<size_t>(t)];
      s.y(t, 0) = raw.y[static_cast<size_t>(t)];
      s.z(t, 0) = raw.z[static_cast<size_t>(t)];
    }
    return s;
  }
  if (len < 3) throw Error(ErrorKind::kInsufficientData, "series too short");
  const Index rows = len - 1;
  TimeSeriesSample s{RowMatrix(rows, 1), RowMatrix(rows, 1), RowMatrix(rows, 1)};
  for (Index r = 0; r < rows; ++r) {
    s.w(r, 0) = raw.y[static_cast<size_t>(r)];
    s.y(r, 0) = raw.y[static_cast<size_t>(r + 1)];
    s.z(r, 0) = raw.z[static_cast<size_t>(r)];
  }
  return s;
}

TimeSeriesSample lag_embed(const EmbedRoles& roles, Index lags, Index horizon) {
  if (lags < 1) throw Error(ErrorKind::kInvalidConfig, "lags must be >= 1");
  if (horizon < 0) throw Error(ErrorKind::kInvalidConfig, "horizon must be >= 0");
  if (roles.conditioning.empty()) {
    throw Error(ErrorKind::kInvalidConfig, "need at least one conditioning column");
  }
  const auto len = static_cast<Index>(roles.target.size());
  bool same = static_cast<Index>(roles.candidate.size()) == len;
  for (const auto& c : roles.conditioning) {
    same = same && static_cast<Index>(c.size()) == len;
  }
  if (!same) {
    throw Error(ErrorKind::kDimensionMismatch, "embedded series differ in length");
  }
  const Index rows = len - lags - horizon + 1;
  if (rows < 1) {
    throw Error(ErrorKind::kInsufficientData,
                "series of length " + std::to_string(len) + " too short for " +
                    std::to_string(lags) + " lags and horizon " +
                    std::to_string(horizon));
  }
  const auto dw = static_cast<Index>(roles.conditioning.size()) * lags;
  TimeSeriesSample s{RowMatrix(rows, dw), RowMatrix(rows, 1), RowMatrix(rows, 1)};
  for (Index r = 0; r < rows; ++r) {
    const Index t = lags - 1 + r;
    Index col = 0;
    for (const auto& c : roles.conditioning) {
      for (Index k = 0; k < lags; ++k) s.w(r, col++) = c[static_cast<size_t>(t - k)];
    }
    s.y(r, 0) = roles.target[static_cast<size_t>(t + horizon)];
    s.z(r, 0) = roles.candidate[static_cast<size_t>(t)];
  }
  return s;
}

}  // namespace npci
