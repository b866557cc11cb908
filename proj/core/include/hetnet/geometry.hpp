#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hetnet/rng.hpp"

namespace hetnet {

/// Planar coordinate in meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double squared_distance(Point2 a, Point2 b) { return squared_norm(a - b); }
inline double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

/// A finite realization of a planar point process observed on a disk
/// centered at `center` (the origin unless the set was translated).
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::vector<Point2> points, double window_radius, double intensity, Point2 center = {});

  [[nodiscard]] std::span<const Point2> points() const { return points_; }
  [[nodiscard]] const Point2& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] double window_radius() const { return window_radius_; }
  [[nodiscard]] double intensity() const { return intensity_; }
  [[nodiscard]] Point2 center() const { return center_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<Point2> points_;
  double window_radius_ = 0.0;
  double intensity_ = 0.0;
  Point2 center_{};
};

/// Homogeneous PPP of `intensity` (points per m^2) on the disk of `window_radius`
/// around the origin. Throws ParameterError on negative or non-finite input.
[[nodiscard]] PointSet sample_ppp(double intensity, double window_radius, RngSeed seed);

/// Same as sample_ppp but observed on a disk around `center`.
[[nodiscard]] PointSet sample_ppp(double intensity, double window_radius, Point2 center, RngSeed seed);

/// Independent thinning: keep each point with probability `retain_prob`.
[[nodiscard]] PointSet thin(const PointSet& points, double retain_prob, RngSeed seed);

/// Shift every point (and the window center) by `offset`.
[[nodiscard]] PointSet translate(const PointSet& points, Point2 offset);

struct NearestPoint {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Brute-force nearest neighbour; ties go to the lowest index.
/// Throws NoCandidateError when `points` is empty.
[[nodiscard]] NearestPoint nearest(const PointSet& points, Point2 from);

/// Radius for which a PPP of `min_intensity` leaves the window empty with
/// probability exp(-factor^2).
[[nodiscard]] double window_radius_for(double min_intensity, double factor);

}  // namespace hetnet
