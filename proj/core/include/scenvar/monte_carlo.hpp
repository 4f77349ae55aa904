#pragma once

#include "scenvar/var.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace scenvar::mc {

struct SimulationConfig {
  std::size_t n_sims = 5000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  double default_uncertainty_std_pct = 0.0;
  bool include_residual_noise = true;
  /// Worker threads; 0 uses std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  unsigned workers = 0;

  /// Throws std::invalid_argument unless n_sims >= 1, 0 < ci_level < 1 and
  /// the default std is finite and non-negative.
  void check() const;
};

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample std (n - 1); 0 for a single sample
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

/// Quantile of sorted data, inclusive linear interpolation: with
/// h = (n - 1) q, returns x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
double quantile_sorted(std::span<const double> sorted, double q);

/// Throws std::invalid_argument on an empty list, non-finite samples or a
/// ci_level outside (0, 1). ci = (quantile((1 - L)/2), quantile(1 - (1 - L)/2)).
Summary summarize(std::span<const double> samples, double ci_level);

enum class DriveTarget { endogenous, exogenous };

/// A path in model space together with whether the draw had to be clamped.
struct DrawnPath {
  Eigen::VectorXd values;
  bool clamped = false;
};

/// One scenario assumption as seen by the simulator. Each simulation draws
/// change ~ Normal(change_pct, std_pct) and asks `path` for the resulting
/// model-space series, which either pins an endogenous variable or fills an
/// exogenous column.
struct AssumptionDriver {
  std::string label;
  DriveTarget target = DriveTarget::endogenous;
  Eigen::Index index = 0;
  double change_pct = 0.0;
  double std_pct = 0.0;
  std::function<DrawnPath(double drawn_pct)> path;
};

/// Reported quantity: the level of `variable` at 1-based `step`.
struct ImpactProbe {
  std::string label;
  Eigen::Index variable = 0;
  Eigen::Index step = 1;
};

struct SimulationPlan {
  Eigen::MatrixXd history;    // model-space rows, at least p
  Eigen::Index horizon = 1;
  Eigen::MatrixXd exogenous;  // h x m baseline exogenous values (m > 0 only)
  std::vector<AssumptionDriver> assumptions;
  std::vector<ImpactProbe> impacts;
  /// Maps an h x k model-space forecast to levels; identity when empty.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> to_levels;
};

struct ImpactDistribution {
  std::string label;
  std::vector<double> samples;  // percent change vs baseline (or absolute, see `relative`)
  Summary summary;
  /// False when |baseline| < 1e-9 at the probe step; samples are then
  /// absolute differences.
  bool relative = true;
  double baseline_value = 0.0;
  std::vector<double> mean_path;   // per-step mean simulated level
  std::vector<double> lower_path;  // per-step ci_level band of the level
  std::vector<double> upper_path;
};

struct SimulationResult {
  std::vector<ImpactDistribution> impacts;
  /// drawn_changes[a][s]: change drawn for assumption a in the s-th completed
  /// simulation (same order as the impact samples).
  std::vector<std::vector<double>> drawn_changes;
  std::size_t n_sims = 0;
  std::size_t completed = 0;
  std::size_t aborted = 0;
  std::size_t clamped_draws = 0;
};

/// Runs config.n_sims perturbed forecasts. Simulation s draws from
/// CounterRng(seed, s): first one Normal per assumption (in order), then, when
/// residual noise is on, h x k standard normals mapped through a square root
/// of sigma_u. Impact samples are 100 (shocked - baseline) / |baseline| at the
/// probe step, `baseline_levels` being the h x k unshocked forecast.
///
/// Simulations producing non-finite levels are dropped and counted; more than
/// 1% dropped throws InstabilityError.
SimulationResult run(const var::VarModel& model, const Eigen::MatrixXd& baseline_levels,
                     const SimulationPlan& plan, const SimulationConfig& config);

}  // namespace scenvar::mc
