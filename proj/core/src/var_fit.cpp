#include "scenvar/error.hpp"
#include "scenvar/var.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scenvar::var {

namespace {

// Column pivots smaller than this fraction of the largest one count as zero.
constexpr double kRankThreshold = 1e-10;

std::vector<std::string> default_names(std::vector<std::string> names, Eigen::Index n,
                                       const char* prefix) {
  if (names.empty())
    for (Eigen::Index i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  if (static_cast<Eigen::Index>(names.size()) != n)
    throw std::invalid_argument(std::string("expected ") + std::to_string(n) + " " + prefix + " names");
  return names;
}

std::string design_column_name(Eigen::Index col, Eigen::Index k, Eigen::Index p,
                               const std::vector<std::string>& names,
                               const std::vector<std::string>& exog_names) {
  if (col == 0) return "const";
  if (col <= k * p) {
    const auto lag = (col - 1) / k + 1;
    const auto var = (col - 1) % k;
    return "L" + std::to_string(lag) + "." + names[static_cast<std::size_t>(var)];
  }
  return exog_names[static_cast<std::size_t>(col - 1 - k * p)];
}

double log_det_psd(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  double out = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()(i);
    if (!(ev > 0.0)) return -std::numeric_limits<double>::infinity();
    out += std::log(ev);
  }
  return out;
}

}  // namespace

VarModel fit(const Eigen::MatrixXd& Y, int p, const Eigen::MatrixXd& X, std::vector<std::string> names,
             std::vector<std::string> exog_names) {
  const Eigen::Index T = Y.rows();
  const Eigen::Index k = Y.cols();
  const Eigen::Index m = X.size() == 0 ? 0 : X.cols();
  if (p < 1) throw std::invalid_argument("lag order must be >= 1");
  if (k < 1) throw std::invalid_argument("Y must have at least one column");
  if (m > 0 && X.rows() != T) throw std::invalid_argument("X and Y must have the same number of rows");
  if (!Y.allFinite() || (m > 0 && !X.allFinite()))
    throw std::invalid_argument("observations must be finite");
  names = default_names(std::move(names), k, "y");
  exog_names = default_names(std::move(exog_names), m, "x");

  if (T < p + k * p + m + 2)
    throw SampleSizeError("VAR(" + std::to_string(p) + ") with " + std::to_string(k) + " variables and " +
                          std::to_string(m) + " exogenous needs at least " +
                          std::to_string(p + k * p + m + 2) + " rows, got " + std::to_string(T));

  std::vector<std::string> constant;
  for (Eigen::Index j = 0; j < k; ++j)
    if ((Y.col(j).array() == Y(0, j)).all()) constant.push_back(names[static_cast<std::size_t>(j)]);
  if (!constant.empty()) {
    std::string list;
    for (const auto& c : constant) list += (list.empty() ? "" : ", ") + c;
    throw SingularDesignError("constant column(s): " + list, constant);
  }

  const Eigen::Index n = T - p;
  const Eigen::Index ncols = 1 + k * p + m;
  Eigen::MatrixXd Z(n, ncols);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Eigen::Index t = r + p;
    Z(r, 0) = 1.0;
    for (Eigen::Index i = 1; i <= p; ++i) Z.block(r, 1 + (i - 1) * k, 1, k) = Y.row(t - i);
    if (m > 0) Z.block(r, 1 + k * p, 1, m) = X.row(t);
  }
  const Eigen::MatrixXd R = Y.bottomRows(n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(n, ncols);
  qr.setThreshold(kRankThreshold);
  qr.compute(Z);
  if (qr.rank() < ncols) {
    std::vector<std::string> dependent;
    std::string list;
    for (Eigen::Index i = qr.rank(); i < ncols; ++i) {
      dependent.push_back(design_column_name(qr.colsPermutation().indices()(i), k, p, names, exog_names));
      list += (list.empty() ? "" : ", ") + dependent.back();
    }
    throw SingularDesignError("rank-deficient design (rank " + std::to_string(qr.rank()) + " of " +
                                  std::to_string(ncols) + "); dependent column(s): " + list,
                              dependent);
  }
  const Eigen::MatrixXd coef = qr.solve(R);  // ncols x k
  const Eigen::MatrixXd U = R - Z * coef;

  VarModel model;
  model.k = k;
  model.p = p;
  model.m = m;
  model.n_obs = n;
  model.variable_names = std::move(names);
  model.exog_names = std::move(exog_names);
  model.intercept = coef.row(0).transpose();
  for (Eigen::Index i = 0; i < p; ++i) model.lags.push_back(coef.block(1 + i * k, 0, k, k).transpose());
  if (m > 0) model.exog = coef.bottomRows(m).transpose();

  const double dof = static_cast<double>(n - ncols);
  Eigen::MatrixXd sigma = (U.transpose() * U) / dof;
  model.sigma_u = 0.5 * (sigma + sigma.transpose());

  model.diagnostics.r_squared.resize(k);
  model.diagnostics.residual_autocorr_lag1.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double ssr = U.col(j).squaredNorm();
    const double sst = (R.col(j).array() - R.col(j).mean()).matrix().squaredNorm();
    model.diagnostics.r_squared(j) = sst > 0.0 ? 1.0 - ssr / sst : (ssr > 0.0 ? 0.0 : 1.0);
    double num = 0.0;
    for (Eigen::Index t = 1; t < n; ++t) num += U(t, j) * U(t - 1, j);
    model.diagnostics.residual_autocorr_lag1(j) = ssr > 0.0 ? num / ssr : 0.0;
  }
  return model;
}

LagSelection select_lag(const Eigen::MatrixXd& Y, int p_max, Criterion criterion,
                        const Eigen::MatrixXd& X) {
  if (p_max < 1) throw std::invalid_argument("p_max must be >= 1");
  const Eigen::Index T = Y.rows();
  const Eigen::Index k = Y.cols();
  const Eigen::Index m = X.size() == 0 ? 0 : X.cols();
  const Eigen::Index t_eff = T - p_max;
  if (t_eff < 1) throw SelectionError("not enough rows for p_max = " + std::to_string(p_max));

  LagSelection sel;
  sel.criterion = criterion;
  std::string last_error;
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const Eigen::Index rows = t_eff + p;
    VarModel model;
    try {
      model = fit(Y.bottomRows(rows), p, m > 0 ? Eigen::MatrixXd(X.bottomRows(rows)) : Eigen::MatrixXd());
    } catch (const Error& e) {
      sel.failed.push_back(p);
      last_error = e.what();
      continue;
    }
    const double dof = static_cast<double>(t_eff - k * p - m - 1);
    const Eigen::MatrixXd ml_cov = model.sigma_u * (dof / static_cast<double>(t_eff));
    const double q = static_cast<double>(k * (1 + k * p + m));
    const double te = static_cast<double>(t_eff);
    const double penalty = criterion == Criterion::aic ? 2.0 * q / te : q * std::log(te) / te;
    const double score = log_det_psd(ml_cov) + penalty;
    sel.scores.push_back({p, score});
    if (sel.scores.size() == 1 || score < best) {
      best = score;
      sel.chosen_p = p;
    }
  }
  if (sel.scores.empty()) throw SelectionError("no lag order in 1.." + std::to_string(p_max) + " could be fitted: " + last_error);
  return sel;
}

}  // namespace scenvar::var
