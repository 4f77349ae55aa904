#include "scenvar/monte_carlo.hpp"

#include "scenvar/error.hpp"
#include "scenvar/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace scenvar::mc {

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void SimulationConfig::check() const {
  if (n_sims < 1) throw std::invalid_argument("n_sims must be >= 1");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("ci_level must lie in (0, 1)");
  if (!std::isfinite(default_uncertainty_std_pct) || default_uncertainty_std_pct < 0.0)
    throw std::invalid_argument("default_uncertainty_std_pct must be finite and >= 0");
}

namespace {

constexpr double kRelativeEpsilon = 1e-9;

// Square root of a PSD covariance via its eigendecomposition, so singular
// covariances (e.g. from noiseless equations) are handled.
Eigen::MatrixXd covariance_root(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal();
}

struct Buffers {
  std::size_t n_assumptions;
  std::size_t n_impacts;
  std::size_t horizon;
  std::vector<double> draws;   // n x A
  std::vector<double> values;  // n x I
  std::vector<double> paths;   // n x I x H
  std::vector<unsigned char> ok;
  std::vector<unsigned char> clamped;
};

}  // namespace

SimulationResult run(const var::VarModel& model, const Eigen::MatrixXd& baseline_levels,
                     const SimulationPlan& plan, const SimulationConfig& config) {
  config.check();
  model.check_shape();
  const Eigen::Index H = plan.horizon;
  const Eigen::Index k = model.k;
  if (H < 1) throw std::invalid_argument("simulation horizon must be >= 1");
  if (baseline_levels.rows() < H || baseline_levels.cols() != k)
    throw std::invalid_argument("baseline forecast must be h x k");
  if (plan.impacts.empty()) throw std::invalid_argument("simulation plan has no impacts");
  for (const auto& probe : plan.impacts)
    if (probe.variable < 0 || probe.variable >= k || probe.step < 1 || probe.step > H)
      throw std::invalid_argument("impact probe out of range: " + probe.label);
  for (const auto& a : plan.assumptions) {
    const auto bound = a.target == DriveTarget::endogenous ? k : model.m;
    if (a.index < 0 || a.index >= bound || !a.path)
      throw std::invalid_argument("assumption driver out of range: " + a.label);
    if (!std::isfinite(a.std_pct) || a.std_pct < 0.0)
      throw std::invalid_argument("assumption std must be finite and >= 0: " + a.label);
  }
  if (model.has_exog() && (plan.exogenous.rows() < H || plan.exogenous.cols() != model.m))
    throw ExogenousRequiredError("simulation plan lacks baseline exogenous values");

  const bool noise = config.include_residual_noise;
  const Eigen::MatrixXd root = noise ? covariance_root(model.sigma_u) : Eigen::MatrixXd();

  const std::size_t n = config.n_sims;
  Buffers buf{plan.assumptions.size(), plan.impacts.size(), static_cast<std::size_t>(H), {}, {}, {}, {}, {}};
  buf.draws.resize(n * buf.n_assumptions);
  buf.values.resize(n * buf.n_impacts);
  buf.paths.resize(n * buf.n_impacts * buf.horizon);
  buf.ok.assign(n, 0);
  buf.clamped.assign(n, 0);

  auto simulate = [&](std::size_t s) {
    CounterRng rng(config.seed, s);
    var::ForecastInputs inputs;
    if (model.has_exog()) inputs.exogenous = plan.exogenous.topRows(H);
    for (std::size_t a = 0; a < buf.n_assumptions; ++a) {
      const auto& driver = plan.assumptions[a];
      const double drawn = driver.change_pct + driver.std_pct * rng.normal();
      buf.draws[s * buf.n_assumptions + a] = drawn;
      DrawnPath dp = driver.path(drawn);
      if (dp.values.size() < H) throw std::logic_error("assumption path shorter than horizon: " + driver.label);
      if (dp.clamped) buf.clamped[s] = 1;
      if (driver.target == DriveTarget::endogenous)
        inputs.pinned.push_back({driver.index, std::move(dp.values)});
      else
        inputs.exogenous.col(driver.index) = dp.values.head(H);
    }
    if (noise) {
      Eigen::MatrixXd z(H, k);
      for (Eigen::Index t = 0; t < H; ++t)
        for (Eigen::Index j = 0; j < k; ++j) z(t, j) = rng.normal();
      inputs.shocks = z * root.transpose();
    }
    const Eigen::MatrixXd fc = var::forecast(model, plan.history, H, inputs);
    const Eigen::MatrixXd levels = plan.to_levels ? plan.to_levels(fc) : fc;
    if (levels.rows() < H || levels.cols() != k || !levels.allFinite()) return;

    for (std::size_t i = 0; i < buf.n_impacts; ++i) {
      const auto& probe = plan.impacts[i];
      const double base = baseline_levels(probe.step - 1, probe.variable);
      const double shocked = levels(probe.step - 1, probe.variable);
      const double diff = shocked - base;
      buf.values[s * buf.n_impacts + i] =
          std::abs(base) < kRelativeEpsilon ? diff : 100.0 * diff / std::abs(base);
      for (Eigen::Index t = 0; t < H; ++t)
        buf.paths[(s * buf.n_impacts + i) * buf.horizon + static_cast<std::size_t>(t)] =
            levels(t, probe.variable);
    }
    buf.ok[s] = 1;
  };

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t s = 0; s < n; ++s) simulate(s);
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t s = w; s < n; s += workers) simulate(s);
        } catch (...) {
          std::scoped_lock lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  SimulationResult result;
  result.n_sims = n;
  result.completed = static_cast<std::size_t>(std::count(buf.ok.begin(), buf.ok.end(), 1));
  result.aborted = n - result.completed;
  for (std::size_t s = 0; s < n; ++s) result.clamped_draws += buf.clamped[s];
  if (result.aborted * 100 > n || result.completed == 0)
    throw InstabilityError(std::to_string(result.aborted) + " of " + std::to_string(n) +
                           " simulations produced non-finite forecasts");

  result.drawn_changes.assign(buf.n_assumptions, {});
  for (auto& d : result.drawn_changes) d.reserve(result.completed);
  result.impacts.resize(buf.n_impacts);
  for (std::size_t i = 0; i < buf.n_impacts; ++i) {
    auto& dist = result.impacts[i];
    const auto& probe = plan.impacts[i];
    dist.label = probe.label;
    dist.baseline_value = baseline_levels(probe.step - 1, probe.variable);
    dist.relative = std::abs(dist.baseline_value) >= kRelativeEpsilon;
    dist.samples.reserve(result.completed);
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!buf.ok[s]) continue;
    for (std::size_t a = 0; a < buf.n_assumptions; ++a)
      result.drawn_changes[a].push_back(buf.draws[s * buf.n_assumptions + a]);
    for (std::size_t i = 0; i < buf.n_impacts; ++i)
      result.impacts[i].samples.push_back(buf.values[s * buf.n_impacts + i]);
  }

  std::vector<double> column(result.completed);
  for (std::size_t i = 0; i < buf.n_impacts; ++i) {
    auto& dist = result.impacts[i];
    dist.summary = summarize(dist.samples, config.ci_level);
    for (std::size_t t = 0; t < buf.horizon; ++t) {
      std::size_t c = 0;
      for (std::size_t s = 0; s < n; ++s)
        if (buf.ok[s]) column[c++] = buf.paths[(s * buf.n_impacts + i) * buf.horizon + t];
      const Summary step = summarize(column, config.ci_level);
      dist.mean_path.push_back(step.mean);
      dist.lower_path.push_back(step.ci_lower);
      dist.upper_path.push_back(step.ci_upper);
    }
  }
  return result;
}

}  // namespace scenvar::mc
