#pragma once

#include "scenvar/catalog.hpp"
#include "scenvar/error.hpp"
#include "scenvar/monte_carlo.hpp"
#include "scenvar/report.hpp"
#include "scenvar/scenario.hpp"
#include "scenvar/validation.hpp"
#include "scenvar/var.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scenvar {

struct AssumptionPath {
  std::vector<double> values;
  bool clamped = false;  // the drawn change was below -100 and was clamped
};

/// Assumption values for the `horizon` periods following `origin` at
/// `frequency`. Inside the assumption period a step shape applies
/// last_value * (1 + change/100); a linear ramp moves the multiplier from 1 at
/// the period start to (1 + change/100) at its last period, reaching
/// 1 + (change/100) * j/n at the j-th of n periods. Outside the period the
/// value is last_value.
AssumptionPath generate_assumption_path(const Assumption& assumption, double last_value, Date origin,
                                        Frequency frequency, int horizon, double drawn_change_pct);

/// Same, taking the origin and last value from the final point of
/// `baseline_series` and stepping at its frequency.
AssumptionPath generate_assumption_path(const Assumption& assumption, const TimeSeries& baseline_series,
                                        int horizon, double drawn_change_pct);

/// How assumption series enter the model.
enum class Conditioning {
  /// One joint VAR over assumptions and impacts; assumption futures are
  /// overwritten by their generated paths during forecasting.
  path_substitution,
  /// VAR over impacts only, assumptions as contemporaneous exogenous inputs.
  exogenous,
};

std::string_view to_string(Conditioning c) noexcept;

struct PipelineOptions {
  var::Criterion criterion = var::Criterion::aic;
  std::optional<int> max_lag;
  Conditioning conditioning = Conditioning::path_substitution;
  /// Variables whose AR(1) coefficient exceeds this are first-differenced.
  double unit_root_threshold = 0.98;
  ResampleRules resample = ResampleRules::defaults();
};

/// Failure of one pipeline stage: validate, align, select-lag, fit, forecast
/// or simulate.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, std::string code, const std::string& message,
                std::vector<Finding> findings = {})
      : Error(std::move(code), stage + ": " + message), stage_(std::move(stage)),
        findings_(std::move(findings)) {}

  const std::string& stage() const noexcept { return stage_; }
  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::string stage_;
  std::vector<Finding> findings_;
};

/// Everything evaluate() derives before running Monte Carlo. Exposed so the
/// intermediate products (aligned data, model, baseline) can be inspected.
struct EvaluationSetup {
  Scenario scenario;
  ValidationReport validation;
  AlignedData aligned;
  std::vector<bool> differenced;       // per aligned column
  Eigen::MatrixXd endogenous;          // model-space endogenous data
  Eigen::MatrixXd exogenous;           // model-space exogenous data (may be empty)
  std::vector<Eigen::Index> endogenous_columns;  // aligned column of each endogenous variable
  std::vector<Eigen::Index> exogenous_columns;
  var::LagSelection selection;
  var::VarModel model;
  var::Stability stability;
  std::vector<int> impact_steps;
  std::vector<Date> step_dates;
  mc::SimulationPlan plan;
  Eigen::MatrixXd baseline_model;   // h x k, model space
  Eigen::MatrixXd baseline_levels;  // h x k, levels
  Conditioning conditioning = Conditioning::path_substitution;
};

/// First-order autoregression slope of y_t on (1, y_{t-1}); 0 for a constant
/// lagged series.
double ar1_coefficient(const Eigen::Ref<const Eigen::VectorXd>& series);

EvaluationSetup prepare_evaluation(const Scenario& scenario, const Catalog& catalog,
                                   const mc::SimulationConfig& config, const PipelineOptions& options = {});

/// Validate, align, difference near-unit-root variables, select the lag and
/// fit the VAR, forecast the baseline, run Monte Carlo and assemble the
/// report. Deterministic given (scenario, catalog contents, config, options).
EvaluationReport evaluate(const Scenario& scenario, const Catalog& catalog,
                          const mc::SimulationConfig& config, const PipelineOptions& options = {});

}  // namespace scenvar
