#include "scenvar/var.hpp"

#include "scenvar/json_io.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace scenvar::var {

using nlohmann::json;

void VarModel::check_shape() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("malformed VarModel: " + what); };
  if (k < 1 || p < 1 || m < 0) fail("k and p must be positive");
  if (intercept.size() != k) fail("intercept length");
  if (static_cast<Eigen::Index>(lags.size()) != p) fail("number of lag matrices");
  for (const auto& a : lags)
    if (a.rows() != k || a.cols() != k) fail("lag matrix shape");
  if (m > 0 && (exog.rows() != k || exog.cols() != m)) fail("exogenous matrix shape");
  if (sigma_u.rows() != k || sigma_u.cols() != k) fail("sigma_u shape");
}

int default_max_lag(Eigen::Index T, Eigen::Index n) {
  if (T < 1 || n < 1) return 0;
  return static_cast<int>(std::min<Eigen::Index>(8, (T - 1) / (n + 2)));
}

std::string_view to_string(Criterion c) noexcept { return c == Criterion::bic ? "bic" : "aic"; }

std::optional<Criterion> parse_criterion(std::string_view s) noexcept {
  if (s == "aic") return Criterion::aic;
  if (s == "bic") return Criterion::bic;
  return std::nullopt;
}

Eigen::MatrixXd companion(const VarModel& model) {
  model.check_shape();
  const auto k = model.k;
  const auto n = k * model.p;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < model.p; ++i) c.block(0, i * k, k, k) = model.lags[static_cast<std::size_t>(i)];
  if (model.p > 1) c.block(k, 0, n - k, n - k).setIdentity();
  return c;
}

Stability is_stable(const VarModel& model) {
  const Eigen::MatrixXd c = companion(model);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, /*computeEigenvectors=*/false);
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  return {radius < 1.0 - 1e-9, radius};
}

Eigen::VectorXd unconditional_mean(const VarModel& model) {
  model.check_shape();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(model.k, model.k);
  for (const auto& a : model.lags) m -= a;
  return m.fullPivLu().solve(model.intercept);
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number_or_null(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v(i)));
  return out;
}

Eigen::MatrixXd matrix_from(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw std::invalid_argument("matrix row count mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix column count mismatch");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = number_from(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(j[i]);
  return v;
}

}  // namespace

void to_json(json& j, const VarModel& model) {
  j = json{{"k", model.k},
           {"p", model.p},
           {"m", model.m},
           {"n_obs", model.n_obs},
           {"variable_names", model.variable_names},
           {"exog_names", model.exog_names},
           {"intercept", vector_json(model.intercept)},
           {"lags", json::array()},
           {"exog", model.m > 0 ? matrix_json(model.exog) : json::array()},
           {"sigma_u", matrix_json(model.sigma_u)},
           {"diagnostics",
            {{"r_squared", vector_json(model.diagnostics.r_squared)},
             {"residual_autocorr_lag1", vector_json(model.diagnostics.residual_autocorr_lag1)}}}};
  for (const auto& a : model.lags) j["lags"].push_back(matrix_json(a));
}

void from_json(const json& j, VarModel& model) {
  model.k = j.at("k").get<Eigen::Index>();
  model.p = j.at("p").get<Eigen::Index>();
  model.m = j.at("m").get<Eigen::Index>();
  model.n_obs = j.at("n_obs").get<Eigen::Index>();
  model.variable_names = j.at("variable_names").get<std::vector<std::string>>();
  model.exog_names = j.value("exog_names", std::vector<std::string>{});
  model.intercept = vector_from(j.at("intercept"));
  model.lags.clear();
  for (const auto& a : j.at("lags")) model.lags.push_back(matrix_from(a, model.k, model.k));
  model.exog = model.m > 0 ? matrix_from(j.at("exog"), model.k, model.m) : Eigen::MatrixXd();
  model.sigma_u = matrix_from(j.at("sigma_u"), model.k, model.k);
  const auto& d = j.at("diagnostics");
  model.diagnostics.r_squared = vector_from(d.at("r_squared"));
  model.diagnostics.residual_autocorr_lag1 = vector_from(d.at("residual_autocorr_lag1"));
  model.check_shape();
}

}  // namespace scenvar::var
