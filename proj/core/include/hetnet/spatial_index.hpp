#pragma once

#include <cstddef>
#include <vector>

#include "hetnet/geometry.hpp"

namespace hetnet {

/// Uniform bucket grid over a PointSet for repeated nearest-neighbour
/// queries. Answers are identical to `nearest()`, including the
/// lowest-index tie-break. The referenced PointSet must outlive the index.
class GridIndex {
 public:
  explicit GridIndex(const PointSet& points, double points_per_cell = 2.0);

  [[nodiscard]] NearestPoint nearest(Point2 from) const;
  [[nodiscard]] bool empty() const { return points_->empty(); }

 private:
  [[nodiscard]] long cell_coord(double v, double lo) const;

  const PointSet* points_;
  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double cell_ = 1.0;
  long nx_ = 1;
  long ny_ = 1;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> order_;
};

}  // namespace hetnet
