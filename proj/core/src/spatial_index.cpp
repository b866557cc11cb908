#include "hetnet/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetnet/errors.hpp"

namespace hetnet {

GridIndex::GridIndex(const PointSet& points, double points_per_cell) : points_(&points) {
  if (points.empty()) {
    return;
  }
  double max_x = points[0].x;
  double max_y = points[0].y;
  min_x_ = points[0].x;
  min_y_ = points[0].y;
  for (const auto& p : points.points()) {
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  const double width = std::max(max_x - min_x_, 1e-9);
  const double height = std::max(max_y - min_y_, 1e-9);
  const double cells_wanted = std::max(1.0, static_cast<double>(points.size()) / points_per_cell);
  cell_ = std::max(std::sqrt(width * height / cells_wanted), 1e-9);
  nx_ = std::max(1L, static_cast<long>(std::ceil(width / cell_)) + 1);
  ny_ = std::max(1L, static_cast<long>(std::ceil(height / cell_)) + 1);

  const auto n_cells = static_cast<std::size_t>(nx_ * ny_);
  std::vector<std::size_t> counts(n_cells + 1, 0);
  std::vector<std::size_t> cell_of(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto c = static_cast<std::size_t>(cell_coord(points[i].y, min_y_) * nx_ + cell_coord(points[i].x, min_x_));
    cell_of[i] = c;
    ++counts[c + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) {
    counts[c + 1] += counts[c];
  }
  cell_start_ = counts;
  order_.resize(points.size());
  // stable fill keeps indices ascending inside a cell
  for (std::size_t i = 0; i < points.size(); ++i) {
    order_[counts[cell_of[i]]++] = i;
  }
}

long GridIndex::cell_coord(double v, double lo) const {
  return static_cast<long>(std::floor((v - lo) / cell_));
}

NearestPoint GridIndex::nearest(Point2 from) const {
  if (points_->empty()) {
    throw NoCandidateError("GridIndex::nearest: no candidate BS in the point set");
  }
  const long qx = cell_coord(from.x, min_x_);
  const long qy = cell_coord(from.y, min_y_);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  const long max_ring = std::max({std::labs(qx), std::labs(qy), std::labs(nx_ - 1 - qx), std::labs(ny_ - 1 - qy)});

  auto scan_cell = [&](long cx, long cy) {
    if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) {
      return;
    }
    const auto c = static_cast<std::size_t>(cy * nx_ + cx);
    for (std::size_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const std::size_t i = order_[k];
      const double d2 = squared_distance((*points_)[i], from);
      if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
        best_d2 = d2;
        best = i;
      }
    }
  };

  for (long r = 0; r <= max_ring; ++r) {
    if (r == 0) {
      scan_cell(qx, qy);
    } else {
      for (long dx = -r; dx <= r; ++dx) {
        scan_cell(qx + dx, qy - r);
        scan_cell(qx + dx, qy + r);
      }
      for (long dy = -r + 1; dy <= r - 1; ++dy) {
        scan_cell(qx - r, qy + dy);
        scan_cell(qx + r, qy + dy);
      }
    }
    // Anything outside the scanned block is at least `reach` away. The strict
    // comparison keeps scanning while an equidistant lower index could remain.
    const double left = min_x_ + static_cast<double>(qx - r) * cell_;
    const double bottom = min_y_ + static_cast<double>(qy - r) * cell_;
    const double span = static_cast<double>(2 * r + 1) * cell_;
    const double reach = std::min({from.x - left, left + span - from.x, from.y - bottom, bottom + span - from.y});
    if (reach > 0.0 && best_d2 < reach * reach) {
      break;
    }
  }
  return {best, std::sqrt(best_d2)};
}

}  // namespace hetnet
