#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "replay/point_set.hpp"
#include "replay/rng.hpp"

namespace replay {

/// A finite distribution over domain points, sampled by inversion of the
/// cumulative weights.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Point> points, std::vector<double> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty() || points_.size() != weights_.size()) {
      throw Error("distribution needs one weight per point");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error("distribution weights must be finite and nonnegative");
      total += w;
      cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error("distribution weights sum to " + std::to_string(total));
  }

  std::span<const Point> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

  double probability(Point x) const {
    double p = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] == x) p += weights_[i];
    }
    return p;
  }

  PointSet support() const {
    PointSet s;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (weights_[i] > 0.0) s = s.with(points_[i]);
    }
    return s;
  }

  Point sample(Rng& rng) const {
    const double u = uniform01(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), points_.size() - 1);
    return points_[i];
  }

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

inline DiscreteDistribution uniform_distribution(std::vector<Point> points) {
  std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
  // Push rounding residue onto the last weight so the total is exact.
  double rest = 1.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) rest -= w[i];
  w.back() = rest;
  return DiscreteDistribution(std::move(points), std::move(w));
}

inline DiscreteDistribution uniform_distribution(const Domain& domain) {
  std::vector<Point> pts(domain.size());
  std::iota(pts.begin(), pts.end(), Point{0});
  return uniform_distribution(std::move(pts));
}

/// Points x_1, ..., x_k with P(x_j) = 1 / (2 * 3^(j-1)) for j >= 2 and the
/// remaining mass on x_1.
inline DiscreteDistribution geometric_witness(std::vector<Point> points) {
  if (points.empty()) throw Error("geometric_witness needs at least one point");
  std::vector<double> w(points.size());
  double tail = 0.0;
  for (std::size_t j = 1; j < points.size(); ++j) {
    w[j] = 0.5 / std::pow(3.0, static_cast<double>(j));
    tail += w[j];
  }
  w[0] = 1.0 - tail;
  return DiscreteDistribution(std::move(points), std::move(w));
}

/// The threshold lower-bound law on [N]: P(X = k) = 3^(k-N) / 2 for
/// k = 1..N-1 and the rest on N. Points are 0-based, so k lives at k - 1.
inline DiscreteDistribution geometric_threshold(std::size_t n) {
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) pts[j] = static_cast<Point>(n - 1 - j);
  auto d = geometric_witness(pts);
  std::vector<Point> ordered(n);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    ordered[n - 1 - j] = pts[j];
    w[n - 1 - j] = d.weights()[j];
  }
  return DiscreteDistribution(std::move(ordered), std::move(w));
}

}  // namespace replay
