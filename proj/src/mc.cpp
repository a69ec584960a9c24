#include "npci/mc.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "npci/error.hpp"
#include "npci/parallel.hpp"
#include "npci/rng.hpp"

namespace npci {
namespace {

constexpr std::uint64_t kBootstrapStream = 0xb0075742ULL;

struct CellPlan {
  BandwidthRule bandwidth;
  double block_a = 0.0;
};

struct Outcome {
  double p_cvm = std::numeric_limits<double>::quiet_NaN();
  double p_ks = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::string error;
};

}  // namespace

void ExperimentGrid::validate() const {
  if (replications < 1) {
    throw Error(ErrorKind::kInvalidConfig, "replications must be >= 1");
  }
  if (bootstrap_replications < 1) {
    throw Error(ErrorKind::kInvalidConfig, "bootstrap replications must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::kInvalidConfig, "alpha must lie in (0, 1)");
  }
  if (burn_in < 0) throw Error(ErrorKind::kInvalidConfig, "burn-in must be >= 0");
  for (Index n : sample_sizes) {
    if (n < 3) throw Error(ErrorKind::kInvalidConfig, "sample sizes must be >= 3");
  }
  if (!dgps.empty() && (sample_sizes.empty() || bandwidths.empty())) {
    throw Error(ErrorKind::kInvalidConfig,
                "grid needs at least one sample size and one bandwidth");
  }
  if (scheme == BootstrapScheme::kBlockMultiplier && !dgps.empty() &&
      block_a.empty()) {
    throw Error(ErrorKind::kInvalidConfig,
                "block multiplier scheme needs at least one block constant a");
  }
}

double mc_stderr(double p, int replications) {
  if (replications < 1 || !(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mc_stderr: need p in [0,1], R >= 1");
  }
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

McReport run_experiment(const ExperimentGrid& grid) {
  grid.validate();
  McReport report;
  report.grid = grid;

  std::vector<CellPlan> plans;
  for (const auto& bw : grid.bandwidths) {
    if (grid.scheme == BootstrapScheme::kBlockMultiplier) {
      for (double a : grid.block_a) plans.push_back({bw, a});
    } else {
      plans.push_back({bw, 0.0});
    }
  }
  const int reps = grid.replications;
  const auto num_plans = static_cast<int>(plans.size());

  for (DgpId dgp : grid.dgps) {
    for (Index n : grid.sample_sizes) {
      std::vector<Outcome> outcomes(static_cast<size_t>(reps * num_plans));

#pragma omp parallel for num_threads(::npci::num_threads()) schedule(dynamic)
      for (int r = 0; r < reps; ++r) {
        const std::uint64_t data_seed = derive_seed(
            grid.seed, {static_cast<std::uint64_t>(dgp),
                        static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(r)});
        TimeSeriesSample sample;
        std::string sim_error;
        try {
          const RawSeries raw = simulate({dgp, n, grid.burn_in, data_seed});
          sample = make_triplet(raw, dgp);
        } catch (const std::exception& e) {
          sim_error = e.what();
        }
        for (int k = 0; k < num_plans; ++k) {
          Outcome& out = outcomes[static_cast<size_t>(r * num_plans + k)];
          if (!sim_error.empty()) {
            out.error = sim_error;
            continue;
          }
          TestConfig cfg;
          cfg.bandwidth = plans[static_cast<size_t>(k)].bandwidth;
          cfg.weight = grid.weight;
          cfg.alpha = grid.alpha;
          cfg.bootstrap.replications = grid.bootstrap_replications;
          cfg.bootstrap.seed = derive_seed(data_seed, {kBootstrapStream});
          if (grid.scheme == BootstrapScheme::kBlockMultiplier) {
            cfg.bootstrap.scheme = BootstrapScheme::kBlockMultiplier;
            cfg.bootstrap.block_a = plans[static_cast<size_t>(k)].block_a;
          }
          const auto start = std::chrono::steady_clock::now();
          try {
            const TestResult res = bootstrap_test(sample, cfg);
            out.p_cvm = res.p_cvm;
            out.p_ks = res.p_ks;
          } catch (const Error& e) {
            out.error = std::string(to_string(e.kind())) + ": " + e.what();
          } catch (const std::exception& e) {
            out.error = e.what();
          }
          out.seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        }
      }

      for (int k = 0; k < num_plans; ++k) {
        McCell cell;
        cell.dgp = dgp;
        cell.n = n;
        cell.bandwidth = plans[static_cast<size_t>(k)].bandwidth;
        cell.block_a = plans[static_cast<size_t>(k)].block_a;
        int rejections_cvm = 0;
        int rejections_ks = 0;
        for (int r = 0; r < reps; ++r) {
          const Outcome& out = outcomes[static_cast<size_t>(r * num_plans + k)];
          cell.seconds += out.seconds;
          if (!out.error.empty()) {
            if (cell.failures++ == 0) cell.first_error = out.error;
            continue;
          }
          ++cell.replications;
          rejections_cvm += out.p_cvm < grid.alpha ? 1 : 0;
          rejections_ks += out.p_ks < grid.alpha ? 1 : 0;
          if (grid.keep_p_values) {
            cell.p_cvm.push_back(out.p_cvm);
            cell.p_ks.push_back(out.p_ks);
          }
        }
        if (cell.replications > 0) {
          const double denom = cell.replications;
          cell.rate_cvm = rejections_cvm / denom;
          cell.rate_ks = rejections_ks / denom;
          cell.se_cvm = mc_stderr(cell.rate_cvm, cell.replications);
          cell.se_ks = mc_stderr(cell.rate_ks, cell.replications);
        }
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

}  // namespace npci
