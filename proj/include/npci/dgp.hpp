#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "npci/sample.hpp"

namespace npci {

enum class DgpId { S1, S2, S3, S4, P1, P2, P3, P4, P5, P6, P7 };

inline constexpr std::array<DgpId, 11> kAllDgps = {
    DgpId::S1, DgpId::S2, DgpId::S3, DgpId::S4, DgpId::P1, DgpId::P2,
    DgpId::P3, DgpId::P4, DgpId::P5, DgpId::P6, DgpId::P7};

std::string_view to_string(DgpId id);
DgpId parse_dgp(std::string_view name);

// True for the designs where Y is conditionally independent of the
// candidate given W (S1-S4).
bool is_null_dgp(DgpId id);

struct DgpSpec {
  DgpId id = DgpId::S1;
  Index n = 100;
  Index burn_in = 500;
  std::uint64_t seed = 0;
  // Added to the zero starting value of every AR state; used to check that
  // the burn-in erases the initial condition.
  double initial_offset = 0.0;
};

// x is empty except for S1; h1/h2 hold the conditional variances of the
// GARCH-type designs (empty otherwise).
struct RawSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> h1;
  std::vector<double> h2;
};

struct NamedCoefficient {
  std::string_view name;
  double value;
};

// Literal recursion coefficients of each design; simulate() reads its
// constants from this table.
std::span<const NamedCoefficient> dgp_coefficients(DgpId id);

// n + burn_in steps, first burn_in discarded. Innovations eps1, eps2, eps3
// come from three independent streams derived from spec.seed.
RawSeries simulate(const DgpSpec& spec);

// S1: (W, Y, Z) = (X_t, Y_t, Z_t), n rows.
// Others: (Y_{t-1}, Y_t, Z_{t-1}), n - 1 rows.
TimeSeriesSample make_triplet(const RawSeries& raw, DgpId id);

// Column roles for lag_embed. `conditioning` columns enter W through lags
// 0..lags-1 (most recent first, column-major over the conditioning list).
struct EmbedRoles {
  std::span<const double> target;
  std::span<const double> candidate;
  std::vector<std::span<const double>> conditioning;
};

// Row r (0-based) corresponds to t = lags - 1 + r and holds
//   W = (c[t], c[t-1], ..., c[t-lags+1]) for each conditioning column c,
//   Y = target[t + horizon],
//   Z = candidate[t].
// There are len - lags - horizon + 1 rows.
TimeSeriesSample lag_embed(const EmbedRoles& roles, Index lags,
                           Index horizon);

}  // namespace npci
