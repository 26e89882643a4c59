#pragma once

#include <span>
#include <vector>

namespace argprobe {

struct RocPoint {
  double false_positive_rate;
  double true_positive_rate;
};

/// ROC curve obtained by sweeping the threshold down through the distinct scores.
/// Starts at (0,0) and ends at (1,1); tied positives and negatives move diagonally.
std::vector<RocPoint> roc_curve(std::span<const double> positives, std::span<const double> negatives);

/// Trapezoidal area under roc_curve. Equals P(pos > neg) + P(pos == neg) / 2.
/// Throws when either side is empty.
double auc(std::span<const double> positives, std::span<const double> negatives);

/// Product-moment correlation. Requires equal lengths >= 2 and nonzero variance on both sides.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace argprobe
