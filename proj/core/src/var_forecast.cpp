#include "scenvar/error.hpp"
#include "scenvar/var.hpp"

#include <stdexcept>

namespace scenvar::var {

Eigen::MatrixXd forecast(const VarModel& model, const Eigen::MatrixXd& history, Eigen::Index h,
                         const ForecastInputs& inputs) {
  model.check_shape();
  const auto k = model.k;
  const auto p = model.p;
  if (h < 0) throw std::invalid_argument("forecast horizon must be >= 0");
  if (history.cols() != k) throw std::invalid_argument("history must have k columns");
  if (history.rows() < p)
    throw std::invalid_argument("history needs at least p = " + std::to_string(p) + " rows");
  if (model.has_exog()) {
    if (inputs.exogenous.rows() < h || inputs.exogenous.cols() != model.m)
      throw ExogenousRequiredError("model has " + std::to_string(model.m) +
                                   " exogenous variables; supply an h x m matrix of future values");
  } else if (inputs.exogenous.size() > 0) {
    throw std::invalid_argument("exogenous values supplied for a model without exogenous terms");
  }
  if (inputs.shocks.size() > 0 && (inputs.shocks.rows() < h || inputs.shocks.cols() != k))
    throw std::invalid_argument("shocks must be an h x k matrix");
  for (const auto& pin : inputs.pinned)
    if (pin.variable < 0 || pin.variable >= k || pin.values.size() < h)
      throw std::invalid_argument("pinned path out of range");

  if (h == 0) return Eigen::MatrixXd(0, k);

  Eigen::MatrixXd buf(p + h, k);
  buf.topRows(p) = history.bottomRows(p);
  Eigen::VectorXd y(k);
  for (Eigen::Index s = 0; s < h; ++s) {
    y = model.intercept;
    for (Eigen::Index i = 1; i <= p; ++i)
      y.noalias() += model.lags[static_cast<std::size_t>(i - 1)] * buf.row(p + s - i).transpose();
    if (model.has_exog()) y.noalias() += model.exog * inputs.exogenous.row(s).transpose();
    if (inputs.shocks.size() > 0) y += inputs.shocks.row(s).transpose();
    for (const auto& pin : inputs.pinned) y(pin.variable) = pin.values(s);
    buf.row(p + s) = y.transpose();
  }
  return buf.bottomRows(h);
}

}  // namespace scenvar::var
