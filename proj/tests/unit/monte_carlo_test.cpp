#include "scenvar/error.hpp"
#include "scenvar/monte_carlo.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace scenvar;
using namespace scenvar::mc;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// y_t = 0.5 y_{t-1} + 2 x_t with baseline x = 4 and y_0 = 10, so the
// unshocked y_1 is 13 and a change d on x moves y_1 by 8 d / 100.
struct LinearCase {
  var::VarModel model;
  SimulationPlan plan;
  MatrixXd baseline;

  explicit LinearCase(double change, double std_pct, Eigen::Index h = 1) {
    model.k = 1;
    model.p = 1;
    model.m = 1;
    model.intercept = VectorXd::Zero(1);
    model.lags = {MatrixXd::Constant(1, 1, 0.5)};
    model.exog = MatrixXd::Constant(1, 1, 2.0);
    model.sigma_u = MatrixXd::Constant(1, 1, 0.25);
    plan.history = MatrixXd::Constant(1, 1, 10.0);
    plan.horizon = h;
    plan.exogenous = MatrixXd::Constant(h, 1, 4.0);
    plan.assumptions.push_back({"x", DriveTarget::exogenous, 0, change, std_pct, [h](double d) {
                                  return DrawnPath{VectorXd::Constant(h, 4.0 * (1.0 + d / 100.0)), d < -100};
                                }});
    plan.impacts.push_back({"y", 0, h});
    var::ForecastInputs in;
    in.exogenous = plan.exogenous;
    baseline = var::forecast(model, plan.history, h, in);
  }
};

SimulationConfig config(std::size_t n, bool noise, unsigned workers = 1) {
  SimulationConfig c;
  c.n_sims = n;
  c.seed = 42;
  c.include_residual_noise = noise;
  c.workers = workers;
  return c;
}

}  // namespace

TEST(MonteCarlo, DegenerateWithoutUncertainty) {
  LinearCase lc(-50, 0);
  const auto r = run(lc.model, lc.baseline, lc.plan, config(500, false));
  ASSERT_EQ(r.impacts.size(), 1u);
  const auto& d = r.impacts[0];
  ASSERT_EQ(d.samples.size(), 500u);
  for (double s : d.samples) ASSERT_EQ(s, d.samples[0]);
  EXPECT_NEAR(d.samples[0], 8.0 * -50 / 13.0, 1e-12);
  EXPECT_EQ(d.summary.std, 0.0);
  EXPECT_EQ(d.summary.ci_lower, d.summary.ci_upper);
  EXPECT_EQ(d.summary.ci_lower, d.samples[0]);
}

TEST(MonteCarlo, LinearPropagationMatchesAnalyticStd) {
  LinearCase lc(-50, 5);
  const auto r = run(lc.model, lc.baseline, lc.plan, config(5000, false));
  const auto& d = r.impacts[0];
  const double analytic_std = 8.0 * 5.0 / 13.0;
  EXPECT_NEAR(d.summary.std / analytic_std, 1.0, 0.05);
  EXPECT_NEAR(d.summary.mean, 8.0 * -50 / 13.0, 4 * analytic_std / std::sqrt(5000.0));
  // Each sample is the exact image of its own draw.
  ASSERT_EQ(r.drawn_changes.size(), 1u);
  for (std::size_t s = 0; s < d.samples.size(); ++s)
    ASSERT_NEAR(d.samples[s], 8.0 * r.drawn_changes[0][s] / 13.0, 1e-10);
  EXPECT_TRUE(d.relative);
  EXPECT_EQ(d.baseline_value, 13.0);
}

TEST(MonteCarlo, ResidualNoiseStd) {
  LinearCase lc(0, 0);
  const auto r = run(lc.model, lc.baseline, lc.plan, config(5000, true));
  // One step of N(0, 0.25) noise on a baseline of 13: std 100 * 0.5 / 13.
  EXPECT_NEAR(r.impacts[0].summary.std / (50.0 / 13.0), 1.0, 0.05);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResults) {
  LinearCase lc(-30, 7, 4);
  lc.plan.impacts.push_back({"y@2", 0, 2});
  const auto one = run(lc.model, lc.baseline, lc.plan, config(2000, true, 1));
  const auto four = run(lc.model, lc.baseline, lc.plan, config(2000, true, 4));
  ASSERT_EQ(one.impacts.size(), four.impacts.size());
  for (std::size_t i = 0; i < one.impacts.size(); ++i) {
    EXPECT_EQ(one.impacts[i].samples, four.impacts[i].samples);
    EXPECT_EQ(one.impacts[i].summary, four.impacts[i].summary);
    EXPECT_EQ(one.impacts[i].mean_path, four.impacts[i].mean_path);
    EXPECT_EQ(one.impacts[i].lower_path, four.impacts[i].lower_path);
    EXPECT_EQ(one.impacts[i].upper_path, four.impacts[i].upper_path);
  }
  EXPECT_EQ(one.drawn_changes, four.drawn_changes);
  const auto again = run(lc.model, lc.baseline, lc.plan, config(2000, true, 3));
  EXPECT_EQ(again.impacts[1].samples, one.impacts[1].samples);
}

TEST(MonteCarlo, HalvingUncertaintyHalvesSpread) {
  LinearCase wide(-50, 6), narrow(-50, 3);
  const auto a = run(wide.model, wide.baseline, wide.plan, config(5000, false));
  const auto b = run(narrow.model, narrow.baseline, narrow.plan, config(5000, false));
  EXPECT_NEAR(b.impacts[0].summary.std / a.impacts[0].summary.std, 0.5, 0.05);
}

TEST(MonteCarlo, PinnedEndogenousDriver) {
  var::VarModel m;
  m.k = 2;
  m.p = 1;
  m.intercept = VectorXd::Zero(2);
  m.lags = {(MatrixXd(2, 2) << 0.9, 0.0, 0.5, 0.2).finished()};
  m.sigma_u = MatrixXd::Identity(2, 2);
  SimulationPlan plan;
  plan.history = (MatrixXd(1, 2) << 100.0, 50.0).finished();
  plan.horizon = 2;
  plan.assumptions.push_back({"driver", DriveTarget::endogenous, 0, -50, 0, [](double d) {
                                return DrawnPath{VectorXd::Constant(2, 100.0 * (1 + d / 100.0)), false};
                              }});
  plan.impacts.push_back({"response", 1, 2});
  var::ForecastInputs base_in;
  base_in.pinned.push_back({0, VectorXd::Constant(2, 100.0)});
  const MatrixXd baseline = var::forecast(m, plan.history, 2, base_in);
  const auto r = run(m, baseline, plan, config(10, false));
  // Step 2 response: 0.5 * pinned_1 + 0.2 * (0.5 * 100 + 0.2 * 50).
  const double base = 0.5 * 100 + 0.2 * 60, shocked = 0.5 * 50 + 0.2 * 60;
  EXPECT_NEAR(r.impacts[0].summary.mean, 100.0 * (shocked - base) / base, 1e-10);
}

TEST(MonteCarlo, NearZeroBaselineReportsAbsoluteChange) {
  LinearCase lc(-50, 0);
  lc.plan.history(0, 0) = -16.0;  // 0.5 * -16 + 8 = 0
  var::ForecastInputs in;
  in.exogenous = lc.plan.exogenous;
  lc.baseline = var::forecast(lc.model, lc.plan.history, 1, in);
  const auto r = run(lc.model, lc.baseline, lc.plan, config(5, false));
  EXPECT_FALSE(r.impacts[0].relative);
  EXPECT_NEAR(r.impacts[0].summary.mean, -4.0, 1e-12);
}

TEST(MonteCarlo, ExplosiveModelIsInstability) {
  LinearCase lc(-50, 0, 800);
  lc.model.lags[0](0, 0) = 3.0;
  var::ForecastInputs in;
  in.exogenous = lc.plan.exogenous;
  const MatrixXd baseline = MatrixXd::Constant(800, 1, 1.0);
  EXPECT_THROW(run(lc.model, baseline, lc.plan, config(100, false)), InstabilityError);
}

TEST(MonteCarlo, ClampedDrawsCounted) {
  LinearCase lc(-100, 10);
  const auto r = run(lc.model, lc.baseline, lc.plan, config(1000, false));
  EXPECT_GT(r.clamped_draws, 300u);
  EXPECT_LT(r.clamped_draws, 700u);
}

TEST(MonteCarlo, RejectsBadConfig) {
  LinearCase lc(-50, 0);
  auto c = config(0, false);
  EXPECT_THROW(run(lc.model, lc.baseline, lc.plan, c), std::invalid_argument);
  c = config(10, false);
  c.ci_level = 1.0;
  EXPECT_THROW(run(lc.model, lc.baseline, lc.plan, c), std::invalid_argument);
  lc.plan.impacts[0].step = 5;
  EXPECT_THROW(run(lc.model, lc.baseline, lc.plan, config(10, false)), std::invalid_argument);
}
