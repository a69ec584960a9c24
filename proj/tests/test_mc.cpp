#include <gtest/gtest.h>

#include <cmath>

#include "npci/error.hpp"
#include "npci/mc.hpp"
#include "npci/parallel.hpp"
#include "npci/report.hpp"

namespace npci {
namespace {

ExperimentGrid small_grid() {
  ExperimentGrid g;
  g.dgps = {DgpId::S1, DgpId::P1};
  g.sample_sizes = {40};
  g.bandwidths = {BandwidthRule::fixed(1.0)};
  g.replications = 20;
  g.bootstrap_replications = 49;
  g.seed = 17;
  return g;
}

TEST(McStderr, Examples) {
  EXPECT_NEAR(mc_stderr(0.05, 2000), 0.004873397172404482, 1e-15);
  EXPECT_EQ(mc_stderr(0.0, 500), 0.0);
  EXPECT_DOUBLE_EQ(mc_stderr(0.5, 100), 0.05);
  EXPECT_EQ(mc_stderr(1.0, 10), 0.0);
}

TEST(RunExperiment, SingleReplicationGivesZeroOrOne) {
  ExperimentGrid g = small_grid();
  g.replications = 1;
  const McReport r = run_experiment(g);
  for (const McCell& c : r.cells) {
    EXPECT_TRUE(c.rate_cvm == 0.0 || c.rate_cvm == 1.0);
    EXPECT_TRUE(c.rate_ks == 0.0 || c.rate_ks == 1.0);
    EXPECT_EQ(c.se_cvm, 0.0);
  }
}

TEST(RunExperiment, CellLayoutAndInvariants) {
  ExperimentGrid g = small_grid();
  g.sample_sizes = {30, 40};
  g.bandwidths = {BandwidthRule::fixed(0.5), BandwidthRule::data_driven()};
  g.keep_p_values = true;
  const McReport r = run_experiment(g);
  ASSERT_EQ(r.cells.size(), 8u);
  for (const McCell& c : r.cells) {
    EXPECT_EQ(c.replications + c.failures, g.replications);
    EXPECT_GE(c.rate_cvm, 0.0);
    EXPECT_LE(c.rate_cvm, 1.0);
    EXPECT_DOUBLE_EQ(c.se_cvm, mc_stderr(c.rate_cvm, c.replications));
    EXPECT_DOUBLE_EQ(c.se_ks, mc_stderr(c.rate_ks, c.replications));
    ASSERT_EQ(c.p_cvm.size(), static_cast<size_t>(c.replications));
    int rejections = 0;
    for (double p : c.p_cvm) rejections += p < g.alpha ? 1 : 0;
    EXPECT_DOUBLE_EQ(c.rate_cvm, static_cast<double>(rejections) / c.replications);
  }
}

TEST(McProperty, ScheduleInvariance) {
  ExperimentGrid g = small_grid();
  g.keep_p_values = true;
  g.scheme = BootstrapScheme::kBlockMultiplier;
  g.block_a = {1.0, 2.0};
  set_num_threads(1);
  const McReport serial = run_experiment(g);
  set_num_threads(3);
  const McReport parallel = run_experiment(g);
  set_num_threads(0);
  ASSERT_EQ(serial.cells.size(), parallel.cells.size());
  for (size_t i = 0; i < serial.cells.size(); ++i) {
    EXPECT_EQ(serial.cells[i].rate_cvm, parallel.cells[i].rate_cvm);
    EXPECT_EQ(serial.cells[i].rate_ks, parallel.cells[i].rate_ks);
    EXPECT_EQ(serial.cells[i].p_cvm, parallel.cells[i].p_cvm);
    EXPECT_EQ(serial.cells[i].p_ks, parallel.cells[i].p_ks);
  }
  Report a{{}, {}, serial};
  Report b{{}, {}, parallel};
  EXPECT_EQ(to_json_string(a), to_json_string(b));
}

TEST(RunExperiment, PerReplicationErrorsAreCounted) {
  ExperimentGrid g = small_grid();
  g.dgps = {DgpId::S1};
  g.bandwidths = {BandwidthRule::fixed(1e-4)};
  const McReport r = run_experiment(g);
  ASSERT_EQ(r.cells.size(), 1u);
  EXPECT_EQ(r.cells[0].failures, g.replications);
  EXPECT_EQ(r.cells[0].replications, 0);
  EXPECT_NE(r.cells[0].first_error.find("degenerate_neighborhood"), std::string::npos)
      << r.cells[0].first_error;
}

TEST(RunExperiment, InvalidGrids) {
  ExperimentGrid g = small_grid();
  g.replications = 0;
  EXPECT_THROW(run_experiment(g), Error);
  g = small_grid();
  g.bootstrap_replications = 0;
  EXPECT_THROW(run_experiment(g), Error);
  g = small_grid();
  g.alpha = 0.0;
  EXPECT_THROW(run_experiment(g), Error);
  g = small_grid();
  g.sample_sizes = {2};
  EXPECT_THROW(run_experiment(g), Error);
  g = small_grid();
  g.scheme = BootstrapScheme::kBlockMultiplier;
  EXPECT_THROW(run_experiment(g), Error);  // no a values
}

TEST(McProperty, PowerGrowsWithSampleSize) {
  ExperimentGrid g;
  g.dgps = {DgpId::P1};
  g.sample_sizes = {100, 200};
  g.bandwidths = {BandwidthRule::fixed(1.0)};
  g.replications = 100;
  g.bootstrap_replications = 99;
  g.seed = 2;
  const McReport r = run_experiment(g);
  ASSERT_EQ(r.cells.size(), 2u);
  const McCell& small = r.cells[0];
  const McCell& large = r.cells[1];
  ASSERT_EQ(small.n, 100);
  ASSERT_EQ(large.n, 200);
  const double se = std::hypot(small.se_cvm, large.se_cvm);
  EXPECT_GE(large.rate_cvm, small.rate_cvm - 2.0 * se);
  EXPECT_GT(large.rate_cvm, 0.9);
}

}  // namespace
}  // namespace npci
