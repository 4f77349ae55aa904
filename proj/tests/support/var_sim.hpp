#pragma once

#include "scenvar/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace scenvar::fixture {

// Draws T rows from y_t = c + sum A_i y_{t-i} + sd * e_t, e_t iid N(0, I),
// after `burn_in` discarded rows started at zero.
inline Eigen::MatrixXd simulate_var(const Eigen::VectorXd& c, const std::vector<Eigen::MatrixXd>& A,
                                    Eigen::Index T, std::uint64_t seed, double sd = 1.0,
                                    Eigen::Index burn_in = 200) {
  const auto k = c.size();
  const auto p = static_cast<Eigen::Index>(A.size());
  mc::CounterRng rng(seed, 0);
  Eigen::MatrixXd all = Eigen::MatrixXd::Zero(T + burn_in + p, k);
  for (Eigen::Index t = p; t < all.rows(); ++t) {
    Eigen::VectorXd y = c;
    for (Eigen::Index i = 0; i < p; ++i) y += A[static_cast<std::size_t>(i)] * all.row(t - 1 - i).transpose();
    for (Eigen::Index j = 0; j < k; ++j) y(j) += sd * rng.normal();
    all.row(t) = y.transpose();
  }
  return all.bottomRows(T);
}

}  // namespace scenvar::fixture
