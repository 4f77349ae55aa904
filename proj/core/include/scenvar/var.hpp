#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace scenvar::var {

/// Per-equation residual diagnostics reported with a fitted model.
struct Diagnostics {
  Eigen::VectorXd r_squared;
  Eigen::VectorXd residual_autocorr_lag1;
};

/// VAR(p) with optional exogenous block:
///
///   y_t = c + A_1 y_{t-1} + ... + A_p y_{t-p} + B x_t + u_t
///
/// `sigma_u` is the dof-adjusted residual covariance
/// U'U / (T - p - k p - m - 1). Instances are immutable once fitted and safe
/// to share across threads.
struct VarModel {
  Eigen::Index k = 0;
  Eigen::Index p = 0;
  Eigen::Index m = 0;
  Eigen::VectorXd intercept;
  std::vector<Eigen::MatrixXd> lags;  // lags[i] multiplies y_{t-1-i}
  Eigen::MatrixXd exog;               // k x m, empty when m == 0
  Eigen::MatrixXd sigma_u;
  std::vector<std::string> variable_names;
  std::vector<std::string> exog_names;
  Eigen::Index n_obs = 0;  // T - p
  Diagnostics diagnostics;

  bool has_exog() const noexcept { return m > 0; }
  /// Throws std::invalid_argument if dimensions are inconsistent.
  void check_shape() const;
};

/// Default lag ceiling for T observations of n variables:
/// min(8, floor((T - 1) / (n + 2))). May be 0 when T is very short.
int default_max_lag(Eigen::Index T, Eigen::Index n);

/// Equation-by-equation OLS on the design [1, y_{t-1}', ..., y_{t-p}', x_t']
/// solved by column-pivoted Householder QR.
///
/// Throws SampleSizeError when T < p + k p + m + 2, SingularDesignError for
/// constant columns of Y or a rank-deficient design (naming the columns), and
/// std::invalid_argument for non-finite input or mismatched shapes.
VarModel fit(const Eigen::MatrixXd& Y, int p, const Eigen::MatrixXd& X = {},
             std::vector<std::string> names = {}, std::vector<std::string> exog_names = {});

enum class Criterion { aic, bic };

std::string_view to_string(Criterion c) noexcept;
std::optional<Criterion> parse_criterion(std::string_view s) noexcept;

struct LagScore {
  int p = 0;
  double score = 0.0;  // may be -inf for a singular residual covariance
};

struct LagSelection {
  int chosen_p = 1;
  Criterion criterion = Criterion::aic;
  std::vector<LagScore> scores;  // successful fits only, ascending p
  std::vector<int> failed;       // lag orders whose fit threw
};

/// Fits p = 1..p_max on the common sample (rows p_max..T-1 as responses) and
/// scores each with
///   AIC = ln det S + 2 q / T_eff,   BIC = ln det S + q ln(T_eff) / T_eff,
/// q = k (1 + k p + m), S = U'U / T_eff. Ties go to the smaller p.
LagSelection select_lag(const Eigen::MatrixXd& Y, int p_max, Criterion criterion = Criterion::aic,
                        const Eigen::MatrixXd& X = {});

/// (k p) x (k p) companion matrix [A_1 ... A_p; I 0].
Eigen::MatrixXd companion(const VarModel& model);

struct Stability {
  bool stable = false;
  double spectral_radius = 0.0;
};

/// Stable iff the companion spectral radius is below 1 - 1e-9.
Stability is_stable(const VarModel& model);

/// (I - sum A_i)^{-1} c, the mean a stable model without exogenous inputs
/// converges to.
Eigen::VectorXd unconditional_mean(const VarModel& model);

/// Future values pinned for one endogenous variable during forecasting.
struct PinnedPath {
  Eigen::Index variable = 0;
  Eigen::VectorXd values;  // length >= h
};

struct ForecastInputs {
  Eigen::MatrixXd exogenous;  // h x m; required iff the model has exogenous terms
  std::vector<PinnedPath> pinned;
  Eigen::MatrixXd shocks;  // h x k additive innovations; empty = none
};

/// Iterated one-step forecasts from the last p rows of `history`:
///   y_{t+1} = c + sum A_i y_{t+1-i} + B x_{t+1} + shock_{t+1},
/// after which pinned variables are overwritten with their path values before
/// feeding the step back in. Returns an h x k matrix (0 x k for h == 0).
Eigen::MatrixXd forecast(const VarModel& model, const Eigen::MatrixXd& history, Eigen::Index h,
                         const ForecastInputs& inputs = {});

void to_json(nlohmann::json& j, const VarModel& model);
void from_json(const nlohmann::json& j, VarModel& model);

}  // namespace scenvar::var
