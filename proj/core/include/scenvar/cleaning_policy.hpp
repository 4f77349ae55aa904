#pragma once

namespace scenvar {

enum class MissingStrategy { drop, linear_interpolate };
enum class OutlierAction { winsorize, drop };
enum class Transform { none, log };

struct CleaningPolicy {
  MissingStrategy missing_strategy = MissingStrategy::linear_interpolate;
  double outlier_z_threshold = 4.0;
  OutlierAction outlier_action = OutlierAction::winsorize;
  Transform transform = Transform::none;

  friend bool operator==(const CleaningPolicy&, const CleaningPolicy&) = default;
};

}  // namespace scenvar
