#include "scenvar/error.hpp"
#include "scenvar/var.hpp"

#include "var_sim.hpp"

#include <gtest/gtest.h>
#include <cstring>
#include <nlohmann/json.hpp>

using namespace scenvar;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

var::VarModel scalar(double c, double a) {
  var::VarModel m;
  m.k = 1;
  m.p = 1;
  m.intercept = VectorXd::Constant(1, c);
  m.lags = {MatrixXd::Constant(1, 1, a)};
  m.sigma_u = MatrixXd::Identity(1, 1);
  return m;
}

var::VarModel two_lag_model() {
  var::VarModel m;
  m.k = 2;
  m.p = 2;
  m.intercept = (VectorXd(2) << 1.0, -0.5).finished();
  m.lags = {(MatrixXd(2, 2) << 0.5, 0.2, -0.1, 0.4).finished(), (MatrixXd(2, 2) << 0.1, 0.0, 0.05, -0.2).finished()};
  m.sigma_u = (MatrixXd(2, 2) << 1.0, 0.3, 0.3, 2.0).finished();
  return m;
}

}  // namespace

TEST(VarForecast, GeometricDecay) {
  const MatrixXd f = var::forecast(scalar(0, 0.5), MatrixXd::Constant(1, 1, 8.0), 3);
  ASSERT_EQ(f.rows(), 3);
  EXPECT_EQ(f(0, 0), 4.0);
  EXPECT_EQ(f(1, 0), 2.0);
  EXPECT_EQ(f(2, 0), 1.0);
}

TEST(VarForecast, NoDynamics) {
  const MatrixXd f = var::forecast(scalar(3, 0), MatrixXd::Constant(1, 1, -40.0), 10);
  EXPECT_TRUE((f.array() == 3.0).all());
}

TEST(VarForecast, HandComputedTwoLagSteps) {
  const auto m = two_lag_model();
  MatrixXd hist(3, 2);
  hist << 9, 9, 1, 2, 3, 4;  // only the last p = 2 rows matter
  const MatrixXd f = var::forecast(m, hist, 2);
  // y1 = c + A1 (3,4) + A2 (1,2)
  const double y10 = 1.0 + (0.5 * 3 + 0.2 * 4) + (0.1 * 1);
  const double y11 = -0.5 + (-0.1 * 3 + 0.4 * 4) + (0.05 * 1 - 0.2 * 2);
  EXPECT_NEAR(f(0, 0), y10, 1e-14);
  EXPECT_NEAR(f(0, 1), y11, 1e-14);
  const double y20 = 1.0 + (0.5 * y10 + 0.2 * y11) + (0.1 * 3);
  const double y21 = -0.5 + (-0.1 * y10 + 0.4 * y11) + (0.05 * 3 - 0.2 * 4);
  EXPECT_NEAR(f(1, 0), y20, 1e-14);
  EXPECT_NEAR(f(1, 1), y21, 1e-14);
}

TEST(VarForecast, ConvergesToUnconditionalMean) {
  const auto m = two_lag_model();
  ASSERT_TRUE(var::is_stable(m).stable);
  MatrixXd hist(2, 2);
  hist << 50, -30, 20, 70;
  const MatrixXd f = var::forecast(m, hist, 200);
  const VectorXd mu = var::unconditional_mean(m);
  EXPECT_LT((f.row(199).transpose() - mu).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(VarForecast, ZeroHorizonIsEmpty) {
  const MatrixXd f = var::forecast(two_lag_model(), MatrixXd::Zero(2, 2), 0);
  EXPECT_EQ(f.rows(), 0);
  EXPECT_EQ(f.cols(), 2);
}

TEST(VarForecast, Deterministic) {
  const auto m = two_lag_model();
  const MatrixXd hist = MatrixXd::Random(4, 2);
  const MatrixXd a = var::forecast(m, hist, 30), b = var::forecast(m, hist, 30);
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())));
}

TEST(VarForecast, PinnedVariableFeedsBack) {
  const auto m = two_lag_model();
  MatrixXd hist(2, 2);
  hist << 1, 2, 3, 4;
  var::ForecastInputs in;
  in.pinned.push_back({0, (VectorXd(3) << 10, 20, 30).finished()});
  const MatrixXd f = var::forecast(m, hist, 3, in);
  EXPECT_EQ(f(0, 0), 10.0);
  EXPECT_EQ(f(1, 0), 20.0);
  EXPECT_EQ(f(2, 0), 30.0);
  const double y11 = -0.5 + (-0.1 * 3 + 0.4 * 4) + (0.05 * 1 - 0.2 * 2);
  EXPECT_NEAR(f(0, 1), y11, 1e-14);
  // Step 2 sees the pinned 10, not the model's own prediction.
  const double y21 = -0.5 + (-0.1 * 10 + 0.4 * y11) + (0.05 * 3 - 0.2 * 4);
  EXPECT_NEAR(f(1, 1), y21, 1e-14);
}

TEST(VarForecast, ShocksAreAdditive) {
  const auto m = scalar(0, 0.5);
  var::ForecastInputs in;
  in.shocks = (MatrixXd(2, 1) << 1.0, -1.0).finished();
  const MatrixXd f = var::forecast(m, MatrixXd::Constant(1, 1, 8.0), 2, in);
  EXPECT_EQ(f(0, 0), 5.0);
  EXPECT_EQ(f(1, 0), 1.5);
}

TEST(VarForecast, ExogenousRequired) {
  auto m = scalar(0, 0.5);
  m.m = 1;
  m.exog = MatrixXd::Constant(1, 1, 2.0);
  EXPECT_THROW(var::forecast(m, MatrixXd::Constant(1, 1, 8.0), 2), ExogenousRequiredError);
  var::ForecastInputs in;
  in.exogenous = (MatrixXd(2, 1) << 1.0, 3.0).finished();
  const MatrixXd f = var::forecast(m, MatrixXd::Constant(1, 1, 8.0), 2, in);
  EXPECT_EQ(f(0, 0), 6.0);
  EXPECT_EQ(f(1, 0), 9.0);
}

TEST(VarForecast, RejectsShortHistory) {
  EXPECT_THROW(var::forecast(two_lag_model(), MatrixXd::Zero(1, 2), 3), std::invalid_argument);
}

TEST(VarModelJson, RoundTripIsExact) {
  MatrixXd A(2, 2);
  A << 0.5, 0.1, 0.2, 0.3;
  MatrixXd X(300, 1);
  for (Eigen::Index t = 0; t < 300; ++t) X(t, 0) = static_cast<double>(t % 5);
  const auto m = var::fit(fixture::simulate_var(VectorXd::Ones(2), {A}, 300, 8), 2, X, {"a", "b"}, {"x"});
  const nlohmann::json j = m;
  const auto back = j.get<var::VarModel>();
  EXPECT_EQ(back.k, m.k);
  EXPECT_EQ(back.p, m.p);
  EXPECT_EQ(back.m, m.m);
  EXPECT_EQ(back.n_obs, m.n_obs);
  EXPECT_EQ(back.variable_names, m.variable_names);
  EXPECT_EQ(back.exog_names, m.exog_names);
  EXPECT_EQ(back.intercept, m.intercept);
  EXPECT_EQ(back.lags, m.lags);
  EXPECT_EQ(back.exog, m.exog);
  EXPECT_EQ(back.sigma_u, m.sigma_u);
  EXPECT_EQ(back.diagnostics.r_squared, m.diagnostics.r_squared);
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
}

TEST(VarModelJson, MalformedRejected) {
  nlohmann::json j = two_lag_model();
  j["lags"].erase(1);
  EXPECT_ANY_THROW(j.get<var::VarModel>());
}
