#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "replay/point_set.hpp"
#include "replay/rng.hpp"

namespace replay::convex {

using Vec = std::array<double, 3>;  // unused trailing coordinates stay 0

enum class Body { Interval, Disk, Polygon, Ball };

inline std::size_t body_dimension(Body b) {
  switch (b) {
    case Body::Interval: return 1;
    case Body::Disk:
    case Body::Polygon: return 2;
    case Body::Ball: return 3;
  }
  return 0;
}

inline Body parse_body(std::string_view name) {
  if (name == "interval") return Body::Interval;
  if (name == "disk") return Body::Disk;
  if (name == "polygon") return Body::Polygon;
  if (name == "ball") return Body::Ball;
  throw Error("unsupported convex body: " + std::string(name));
}

/// The default body in each dimension: [0,1], the unit disk, the unit ball.
inline Body default_body(std::size_t d) {
  switch (d) {
    case 1: return Body::Interval;
    case 2: return Body::Disk;
    case 3: return Body::Ball;
    default: throw Error("convex bodies are supported for d in {1,2,3}");
  }
}

namespace detail {

/// Regular hexagon with circumradius 1, as a membership test.
inline bool in_hexagon(double x, double y) {
  const double s = std::sqrt(3.0);
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  return ay <= s / 2 && s * ax + ay <= s;
}

}  // namespace detail

/// Uniform draw from the body (rejection from the bounding box for d >= 2).
inline Vec sample(Body b, Rng& rng) {
  auto u = [&rng] { return 2.0 * uniform01(rng) - 1.0; };
  switch (b) {
    case Body::Interval: return {uniform01(rng), 0.0, 0.0};
    case Body::Disk:
      for (;;) {
        const double x = u(), y = u();
        if (x * x + y * y <= 1.0) return {x, y, 0.0};
      }
    case Body::Polygon:
      for (;;) {
        const double x = u(), y = u();
        if (detail::in_hexagon(x, y)) return {x, y, 0.0};
      }
    case Body::Ball:
      for (;;) {
        const double x = u(), y = u(), z = u();
        if (x * x + y * y + z * z <= 1.0) return {x, y, z};
      }
  }
  throw Error("unsupported convex body");
}

/// Phase-one simplex deciding whether `target` is a convex combination of
/// `points` in the first d coordinates. Returns the minimal L1 residual of
/// sum(l_i p_i) = target, sum(l_i) = 1 over l >= 0; Bland's rule throughout.
inline double hull_residual(std::span<const Vec> points, const Vec& target, std::size_t d) {
  const std::size_t k = points.size();
  const std::size_t m = d + 1;
  const std::size_t cols = k + m;
  // Row-major tableau: m constraint rows, each with cols entries then the rhs.
  std::vector<double> tab(m * (cols + 1), 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return tab[r * (cols + 1) + c]; };
  for (std::size_t r = 0; r < m; ++r) {
    const double rhs = r < d ? target[r] : 1.0;
    const double sign = rhs < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < k; ++j) at(r, j) = sign * (r < d ? points[j][r] : 1.0);
    at(r, k + r) = 1.0;
    at(r, cols) = sign * rhs;
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = k + r;

  // Reduced costs of min sum(artificials): c_j - c_B B^-1 A_j.
  std::vector<double> cost(cols + 1, 0.0);
  for (std::size_t c = 0; c <= cols; ++c) {
    if (c >= k && c < cols) continue;
    for (std::size_t r = 0; r < m; ++r) cost[c] -= at(r, c);
  }
  constexpr double kPivotTol = 1e-12;
  for (std::size_t iter = 0; iter < 50 * (cols + 1); ++iter) {
    std::size_t enter = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (cost[c] < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = at(r, cols) / a;
      if (leave == m || ratio < best - kPivotTol || (ratio <= best + kPivotTol && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase one
    const double piv = at(leave, enter);
    for (std::size_t c = 0; c <= cols; ++c) at(leave, c) /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= factor * at(leave, c);
    }
    const double factor = cost[enter];
    for (std::size_t c = 0; c <= cols; ++c) cost[c] -= factor * at(leave, c);
    basis[leave] = enter;
  }
  return std::max(0.0, -cost[cols]);
}

/// Predicts 1 exactly on the convex hull of the positives that caused
/// mistakes (within `eps` on the feasibility residual), and grows the hull on
/// every false negative. Negatives never change it.
class ConvexHullLearner {
 public:
  explicit ConvexHullLearner(std::size_t d, double eps = 1e-9) : d_(d), eps_(eps) {
    if (d < 1 || d > 3) throw Error("convex hull learner supports d in {1,2,3}");
    lo_.fill(0.0);
    hi_.fill(0.0);
  }

  std::size_t dimension() const { return d_; }
  std::span<const Vec> stored() const { return points_; }

  bool predict(const Vec& x) const {
    check_finite(x);
    if (points_.empty()) return false;
    for (std::size_t i = 0; i < d_; ++i) {
      if (x[i] < lo_[i] - eps_ || x[i] > hi_[i] + eps_) return false;
    }
    if (d_ == 1) return true;
    return hull_residual(points_, x, d_) <= eps_;
  }

  /// Returns whether the observation was a mistake.
  bool observe(const Vec& x, bool y) {
    const bool yhat = predict(x);
    if (y && !yhat) add(x);
    return y != yhat;
  }

 private:
  void check_finite(const Vec& x) const {
    for (std::size_t i = 0; i < d_; ++i) {
      if (!std::isfinite(x[i])) throw Error("convex hull learner: non-finite coordinate");
    }
  }

  void add(const Vec& x) {
    if (points_.empty()) {
      lo_ = x;
      hi_ = x;
    }
    for (std::size_t i = 0; i < d_; ++i) {
      lo_[i] = std::min(lo_[i], x[i]);
      hi_[i] = std::max(hi_[i], x[i]);
    }
    // On the line the hull is [lo, hi]; only the extremes matter.
    if (d_ == 1) {
      points_ = {lo_, hi_};
      return;
    }
    points_.push_back(x);
  }

  std::size_t d_;
  double eps_;
  std::vector<Vec> points_;
  Vec lo_{};
  Vec hi_{};
};

/// One run against i.i.d. uniform positives from `body`: cumulative mistakes
/// after each checkpoint horizon (ascending).
inline std::vector<std::size_t> run_uniform(Body body, std::span<const std::size_t> checkpoints, Rng& rng,
                                            double eps = 1e-9) {
  ConvexHullLearner learner(body_dimension(body), eps);
  std::vector<std::size_t> out;
  out.reserve(checkpoints.size());
  std::size_t mistakes = 0;
  std::size_t t = 0;
  for (std::size_t horizon : checkpoints) {
    for (; t < horizon; ++t) mistakes += learner.observe(sample(body, rng), true) ? 1 : 0;
    out.push_back(mistakes);
  }
  return out;
}

}  // namespace replay::convex
