#include "scenvar/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace scenvar::mc {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i]);
}

Summary summarize(std::span<const double> samples, double ci_level) {
  if (samples.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw std::invalid_argument("ci_level must lie in (0, 1)");
  for (double x : samples)
    if (!std::isfinite(x)) throw std::invalid_argument("samples must be finite");

  const auto n = static_cast<double>(samples.size());
  // Shifted by the first sample so identical samples give an exact mean and
  // zero spread.
  const double shift = samples.front();
  double acc = 0.0;
  for (double x : samples) acc += x - shift;
  const double mean = shift + acc / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - ci_level) / 2.0;

  Summary s;
  s.mean = mean;
  s.std = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.median = quantile_sorted(sorted, 0.5);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q75 = quantile_sorted(sorted, 0.75);
  s.ci_lower = quantile_sorted(sorted, tail);
  s.ci_upper = quantile_sorted(sorted, 1.0 - tail);
  return s;
}

}  // namespace scenvar::mc
