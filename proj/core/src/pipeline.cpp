#include "scenvar/pipeline.hpp"

#include "scenvar/json_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scenvar {

std::string_view to_string(Conditioning c) noexcept {
  return c == Conditioning::exogenous ? "exogenous" : "path_substitution";
}

double ar1_coefficient(const Eigen::Ref<const Eigen::VectorXd>& series) {
  const Eigen::Index n = series.size();
  if (n < 3) return 0.0;
  const Eigen::VectorXd x = series.head(n - 1);
  const Eigen::VectorXd y = series.tail(n - 1);
  const double mx = x.mean();
  const double my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  if (!(sxx > 0.0)) return 0.0;
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  return sxy / sxx;
}

namespace {

std::vector<std::string> names_of(const std::vector<SeriesKey>& keys, const std::vector<Eigen::Index>& columns) {
  std::vector<std::string> out;
  out.reserve(columns.size());
  for (auto c : columns) out.push_back(to_string(keys[static_cast<std::size_t>(c)]));
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& data, const std::vector<Eigen::Index>& columns) {
  Eigen::MatrixXd out(data.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = data.col(columns[j]);
  return out;
}

}  // namespace

EvaluationSetup prepare_evaluation(const Scenario& scenario, const Catalog& catalog,
                                   const mc::SimulationConfig& config, const PipelineOptions& options) {
  config.check();
  if (!(options.unit_root_threshold > 0.0)) throw std::invalid_argument("unit_root_threshold must be positive");

  EvaluationSetup setup;
  setup.scenario = scenario;
  setup.conditioning = options.conditioning;

  ValidationOptions vopts;
  vopts.resample = options.resample;
  vopts.max_lag = options.max_lag;
  setup.validation = validate(scenario, catalog, vopts);
  if (!setup.validation.valid()) {
    const auto& first = *std::find_if(setup.validation.findings.begin(), setup.validation.findings.end(),
                                      [](const Finding& f) { return f.severity == Severity::error; });
    throw PipelineError("validate", "invalid-scenario",
                        std::to_string(setup.validation.error_count()) + " validation error(s), first: " +
                            first.message,
                        setup.validation.findings);
  }

  const Frequency freq = common_frequency(scenario);
  std::vector<SeriesKey> keys;
  for (const auto& a : scenario.assumptions) keys.push_back(a.key);
  for (const auto& i : scenario.impacts) keys.push_back(i.key);
  try {
    setup.aligned = catalog.align(keys, freq, DateRange::unbounded(), options.resample);
  } catch (const Error& e) {
    throw PipelineError("align", e.code(), e.what());
  }

  const Eigen::MatrixXd& levels = setup.aligned.values;
  const Eigen::Index T = levels.rows();
  const Eigen::Index n_cols = levels.cols();
  const Eigen::Index n_assumptions = static_cast<Eigen::Index>(scenario.assumptions.size());
  if (T < 3) throw PipelineError("align", "insufficient-overlap", "fewer than 3 common observations");

  setup.differenced.assign(static_cast<std::size_t>(n_cols), false);
  bool any_diff = false;
  for (Eigen::Index j = 0; j < n_cols; ++j) {
    if (ar1_coefficient(levels.col(j)) > options.unit_root_threshold) {
      setup.differenced[static_cast<std::size_t>(j)] = true;
      any_diff = true;
    }
  }
  Eigen::MatrixXd data = any_diff ? Eigen::MatrixXd(levels.bottomRows(T - 1)) : levels;
  for (Eigen::Index j = 0; j < n_cols; ++j)
    if (setup.differenced[static_cast<std::size_t>(j)])
      data.col(j) = levels.col(j).tail(T - 1) - levels.col(j).head(T - 1);

  if (options.conditioning == Conditioning::path_substitution) {
    for (Eigen::Index j = 0; j < n_cols; ++j) setup.endogenous_columns.push_back(j);
  } else {
    for (Eigen::Index j = 0; j < n_assumptions; ++j) setup.exogenous_columns.push_back(j);
    for (Eigen::Index j = n_assumptions; j < n_cols; ++j) setup.endogenous_columns.push_back(j);
  }
  setup.endogenous = select_columns(data, setup.endogenous_columns);
  if (!setup.exogenous_columns.empty()) setup.exogenous = select_columns(data, setup.exogenous_columns);

  const Eigen::Index Tm = data.rows();
  const int p_max = options.max_lag.value_or(var::default_max_lag(Tm, n_cols));
  if (p_max < 1 || Tm < p_max + 10)
    throw PipelineError("align", "insufficient-overlap",
                        std::to_string(Tm) + " usable observations, need at least " +
                            std::to_string(std::max(p_max, 1) + 10));

  const auto names = names_of(setup.aligned.keys, setup.endogenous_columns);
  const auto exog_names = names_of(setup.aligned.keys, setup.exogenous_columns);
  try {
    setup.selection = var::select_lag(setup.endogenous, p_max, options.criterion, setup.exogenous);
  } catch (const SelectionError& e) {
    // Every order failed; if even p = 1 cannot be fitted, report why.
    try {
      var::fit(setup.endogenous, 1, setup.exogenous, names, exog_names);
    } catch (const Error& fit_error) {
      throw PipelineError("fit", fit_error.code(), fit_error.what());
    }
    throw PipelineError("select-lag", e.code(), e.what());
  } catch (const Error& e) {
    throw PipelineError("select-lag", e.code(), e.what());
  }
  try {
    setup.model = var::fit(setup.endogenous, setup.selection.chosen_p, setup.exogenous, names, exog_names);
  } catch (const Error& e) {
    throw PipelineError("fit", e.code(), e.what());
  }
  setup.stability = var::is_stable(setup.model);

  int H = 1;
  for (const auto& impact : scenario.impacts) {
    setup.impact_steps.push_back(horizon_steps(impact, freq));
    H = std::max(H, setup.impact_steps.back());
  }
  const Date origin = setup.aligned.index.back();
  for (int t = 1; t <= H; ++t) setup.step_dates.push_back(advance(origin, freq, t));

  auto& plan = setup.plan;
  plan.horizon = H;
  plan.history = setup.endogenous.bottomRows(setup.model.p);
  if (setup.model.has_exog()) plan.exogenous = Eigen::MatrixXd::Zero(H, setup.model.m);

  for (Eigen::Index a = 0; a < n_assumptions; ++a) {
    const Assumption& assumption = scenario.assumptions[static_cast<std::size_t>(a)];
    const double last = levels(T - 1, a);
    const bool diff = setup.differenced[static_cast<std::size_t>(a)];
    mc::AssumptionDriver driver;
    driver.label = to_string(assumption.key);
    driver.change_pct = assumption.change_pct;
    driver.std_pct = assumption.uncertainty_std_pct.value_or(config.default_uncertainty_std_pct);
    if (options.conditioning == Conditioning::path_substitution) {
      driver.target = mc::DriveTarget::endogenous;
      driver.index = a;
    } else {
      driver.target = mc::DriveTarget::exogenous;
      driver.index = a;
    }
    driver.path = [assumption, last, diff, origin, freq, H](double drawn) {
      const AssumptionPath ap = generate_assumption_path(assumption, last, origin, freq, H, drawn);
      Eigen::VectorXd v(H);
      for (Eigen::Index t = 0; t < H; ++t) {
        const double value = ap.values[static_cast<std::size_t>(t)];
        const double prev = t == 0 ? last : ap.values[static_cast<std::size_t>(t - 1)];
        v(t) = diff ? value - prev : value;
      }
      return mc::DrawnPath{std::move(v), ap.clamped};
    };
    plan.assumptions.push_back(std::move(driver));
  }

  const Eigen::Index k = setup.model.k;
  for (std::size_t i = 0; i < scenario.impacts.size(); ++i) {
    const Eigen::Index column = n_assumptions + static_cast<Eigen::Index>(i);
    const auto pos = std::find(setup.endogenous_columns.begin(), setup.endogenous_columns.end(), column);
    plan.impacts.push_back({display_label(scenario.impacts[i].key),
                            static_cast<Eigen::Index>(pos - setup.endogenous_columns.begin()),
                            setup.impact_steps[i]});
  }

  if (any_diff) {
    Eigen::VectorXd last_levels(k);
    std::vector<bool> integrate(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto col = setup.endogenous_columns[static_cast<std::size_t>(j)];
      last_levels(j) = levels(T - 1, col);
      integrate[static_cast<std::size_t>(j)] = setup.differenced[static_cast<std::size_t>(col)];
    }
    plan.to_levels = [last_levels, integrate](const Eigen::MatrixXd& fc) {
      Eigen::MatrixXd out = fc;
      for (Eigen::Index j = 0; j < fc.cols(); ++j) {
        if (!integrate[static_cast<std::size_t>(j)]) continue;
        double acc = last_levels(j);
        for (Eigen::Index t = 0; t < fc.rows(); ++t) {
          acc += fc(t, j);
          out(t, j) = acc;
        }
      }
      return out;
    };
  }

  var::ForecastInputs baseline_inputs;
  if (setup.model.has_exog()) baseline_inputs.exogenous = plan.exogenous;
  for (const auto& driver : plan.assumptions) {
    mc::DrawnPath dp = driver.path(0.0);
    if (driver.target == mc::DriveTarget::endogenous)
      baseline_inputs.pinned.push_back({driver.index, std::move(dp.values)});
    else
      baseline_inputs.exogenous.col(driver.index) = dp.values;
  }
  try {
    setup.baseline_model = var::forecast(setup.model, plan.history, H, baseline_inputs);
  } catch (const Error& e) {
    throw PipelineError("forecast", e.code(), e.what());
  }
  setup.baseline_levels = plan.to_levels ? plan.to_levels(setup.baseline_model) : setup.baseline_model;
  if (!setup.baseline_levels.allFinite())
    throw PipelineError("forecast", "instability", "baseline forecast is not finite");
  return setup;
}

EvaluationReport evaluate(const Scenario& scenario, const Catalog& catalog, const mc::SimulationConfig& config,
                          const PipelineOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const EvaluationSetup setup = prepare_evaluation(scenario, catalog, config, options);

  mc::SimulationResult sim;
  try {
    sim = mc::run(setup.model, setup.baseline_levels, setup.plan, config);
  } catch (const Error& e) {
    throw PipelineError("simulate", e.code(), e.what());
  }

  EvaluationReport report;
  report.scenario_id = scenario.id;
  report.scenario_name = scenario.name;
  report.frequency = setup.aligned.frequency;
  report.forecast_origin = setup.aligned.index.back();
  report.step_dates = setup.step_dates;

  for (std::size_t i = 0; i < scenario.impacts.size(); ++i) {
    const auto& dist = sim.impacts[i];
    const auto& probe = setup.plan.impacts[i];
    ImpactResult r;
    r.key = scenario.impacts[i].key;
    r.label = dist.label;
    r.horizon = scenario.impacts[i].horizon;
    r.step = setup.impact_steps[i];
    r.predicted_change_pct = dist.summary.mean;
    r.ci_lower = dist.summary.ci_lower;
    r.ci_upper = dist.summary.ci_upper;
    r.std = dist.summary.std;
    r.median = dist.summary.median;
    r.q25 = dist.summary.q25;
    r.q75 = dist.summary.q75;
    r.relative = dist.relative;
    r.baseline_value = dist.baseline_value;
    for (Eigen::Index t = 0; t < setup.plan.horizon; ++t)
      r.baseline_path.push_back(setup.baseline_levels(t, probe.variable));
    r.mean_path = dist.mean_path;
    r.lower_path = dist.lower_path;
    r.upper_path = dist.upper_path;
    report.impacts.push_back(std::move(r));
  }

  auto& d = report.diagnostics;
  d.conditioning = std::string(to_string(setup.conditioning));
  d.criterion = std::string(var::to_string(setup.selection.criterion));
  d.lag_order = static_cast<int>(setup.model.p);
  d.lag_scores = setup.selection.scores;
  d.spectral_radius = setup.stability.spectral_radius;
  d.stable = setup.stability.stable;
  d.variables = setup.model.variable_names;
  d.exogenous = setup.model.exog_names;
  for (std::size_t j = 0; j < setup.differenced.size(); ++j)
    if (setup.differenced[j]) d.differenced.push_back(to_string(setup.aligned.keys[j]));
  const auto& diag = setup.model.diagnostics;
  d.r_squared.assign(diag.r_squared.data(), diag.r_squared.data() + diag.r_squared.size());
  d.residual_autocorr_lag1.assign(diag.residual_autocorr_lag1.data(),
                                  diag.residual_autocorr_lag1.data() + diag.residual_autocorr_lag1.size());
  d.n_obs = setup.model.n_obs;
  d.sample_size = setup.aligned.rows();

  report.model = setup.model;
  report.config = {config.n_sims, config.seed, config.ci_level, config.default_uncertainty_std_pct,
                   config.include_residual_noise};
  report.completed_sims = sim.completed;
  report.aborted_sims = sim.aborted;
  report.clamped_draws = sim.clamped_draws;

  for (const auto& f : setup.validation.findings)
    if (f.severity == Severity::warning) report.warnings.push_back(f.code + ": " + f.message);
  if (!setup.stability.stable)
    report.warnings.push_back("unstable-model: companion spectral radius " +
                              format_double(setup.stability.spectral_radius));
  if (sim.clamped_draws > 0)
    report.warnings.push_back("clamped-draws: " + std::to_string(sim.clamped_draws) +
                              " simulation(s) drew a change below -100% and were clamped");
  if (sim.aborted > 0)
    report.warnings.push_back("aborted-simulations: " + std::to_string(sim.aborted) +
                              " simulation(s) produced non-finite forecasts");

  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace scenvar
