#include "argprobe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "argprobe/error.hpp"

namespace argprobe {

namespace {

struct CountPoint {
  std::size_t negatives_above;
  std::size_t positives_above;
};

// Cumulative (negatives, positives) scoring at or above each distinct threshold, highest first.
std::vector<CountPoint> sweep(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) {
    throw Error("ROC needs at least one positive and one negative score");
  }
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());

  std::vector<CountPoint> points{{0, 0}};
  std::size_t i = 0, j = 0;
  while (i < pos.size() || j < neg.size()) {
    double threshold = i == pos.size()   ? neg[j]
                       : j == neg.size() ? pos[i]
                                         : std::max(pos[i], neg[j]);
    while (i < pos.size() && pos[i] == threshold) ++i;
    while (j < neg.size() && neg[j] == threshold) ++j;
    points.push_back({j, i});
  }
  return points;
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const double> positives, std::span<const double> negatives) {
  const double np = static_cast<double>(positives.size());
  const double nn = static_cast<double>(negatives.size());
  std::vector<RocPoint> curve;
  for (const auto& p : sweep(positives, negatives)) {
    curve.push_back({static_cast<double>(p.negatives_above) / nn,
                     static_cast<double>(p.positives_above) / np});
  }
  return curve;
}

double auc(std::span<const double> positives, std::span<const double> negatives) {
  // Trapezoids accumulated in integer units of 1 / (2 |P| |N|).
  auto points = sweep(positives, negatives);
  unsigned long long twice_area = 0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    auto width = points[k].negatives_above - points[k - 1].negatives_above;
    twice_area += static_cast<unsigned long long>(width) *
                  (points[k].positives_above + points[k - 1].positives_above);
  }
  return static_cast<double>(twice_area) /
         (2.0 * static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson: inputs differ in length");
  if (x.size() < 2) throw Error("pearson: need at least two pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace argprobe
