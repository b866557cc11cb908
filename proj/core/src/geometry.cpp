#include "hetnet/geometry.hpp"

#include <numbers>
#include <random>
#include <string>

#include "hetnet/errors.hpp"

namespace hetnet {

PointSet::PointSet(std::vector<Point2> points, double window_radius, double intensity, Point2 center)
    : points_(std::move(points)), window_radius_(window_radius), intensity_(intensity), center_(center) {}

PointSet sample_ppp(double intensity, double window_radius, RngSeed seed) {
  return sample_ppp(intensity, window_radius, Point2{}, seed);
}

PointSet sample_ppp(double intensity, double window_radius, Point2 center, RngSeed seed) {
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw ParameterError("sample_ppp: intensity must be finite and >= 0, got " + std::to_string(intensity));
  }
  if (!std::isfinite(window_radius) || window_radius <= 0.0) {
    throw ParameterError("sample_ppp: window radius must be finite and > 0, got " + std::to_string(window_radius));
  }
  if (intensity == 0.0) {
    return PointSet({}, window_radius, 0.0, center);
  }

  auto engine = make_engine(seed);
  const double mean_count = intensity * std::numbers::pi * window_radius * window_radius;
  std::poisson_distribution<long long> count_dist(mean_count);
  const auto count = static_cast<std::size_t>(count_dist(engine));

  // 53 random mantissa bits mapped to [-1, 1); rejection from the square keeps the disk uniform
  auto symmetric_unit = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-52 - 1.0; };
  std::vector<Point2> points;
  points.reserve(count);
  while (points.size() < count) {
    const double u = symmetric_unit();
    const double v = symmetric_unit();
    if (u * u + v * v < 1.0) {
      points.push_back({center.x + window_radius * u, center.y + window_radius * v});
    }
  }
  return PointSet(std::move(points), window_radius, intensity, center);
}

PointSet thin(const PointSet& points, double retain_prob, RngSeed seed) {
  if (!(retain_prob >= 0.0 && retain_prob <= 1.0)) {
    throw ParameterError("thin: retain probability must lie in [0, 1], got " + std::to_string(retain_prob));
  }
  std::vector<Point2> kept;
  if (retain_prob == 1.0) {
    kept.assign(points.points().begin(), points.points().end());
  } else if (retain_prob > 0.0) {
    auto engine = make_engine(seed);
    std::bernoulli_distribution keep(retain_prob);
    kept.reserve(static_cast<std::size_t>(retain_prob * static_cast<double>(points.size())) + 8);
    for (const auto& p : points.points()) {
      if (keep(engine)) {
        kept.push_back(p);
      }
    }
  }
  return PointSet(std::move(kept), points.window_radius(), retain_prob * points.intensity(), points.center());
}

PointSet translate(const PointSet& points, Point2 offset) {
  std::vector<Point2> moved;
  moved.reserve(points.size());
  for (const auto& p : points.points()) {
    moved.push_back(p + offset);
  }
  return PointSet(std::move(moved), points.window_radius(), points.intensity(), points.center() + offset);
}

NearestPoint nearest(const PointSet& points, Point2 from) {
  if (points.empty()) {
    throw NoCandidateError("nearest: no candidate BS in the point set; regenerate or enlarge the window");
  }
  std::size_t best = 0;
  double best_d2 = squared_distance(points[0], from);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d2 = squared_distance(points[i], from);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, std::sqrt(best_d2)};
}

double window_radius_for(double min_intensity, double factor) {
  if (!(min_intensity > 0.0) || !std::isfinite(min_intensity)) {
    throw ParameterError("window_radius_for: intensity must be finite and > 0");
  }
  if (!(factor > 0.0)) {
    throw ParameterError("window_radius_for: factor must be > 0");
  }
  return factor / std::sqrt(std::numbers::pi * min_intensity);
}

}  // namespace hetnet
