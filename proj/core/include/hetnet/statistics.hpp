#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hetnet {

/// A Monte Carlo estimate: mean, standard error and the number of
/// realizations it was computed from.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

/// Sample mean with standard error s / sqrt(n).
[[nodiscard]] McEstimate estimate_mean(std::span<const double> samples);

/// Running first and second moments of a fixed-length sample vector.
/// Merging is a plain sum, so combining per-chunk accumulators in a fixed
/// order is bit-reproducible.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t dim = 0);

  void add(std::span<const double> sample);
  void merge(const MomentAccumulator& other);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] std::vector<double> mean() const;
  /// Sample covariance (n - 1 denominator), row-major dim x dim.
  [[nodiscard]] std::vector<double> covariance() const;

  /// Estimate of g(E[Y]) with a delta-method standard error from a
  /// central-difference gradient of g. Non-finite g gives a NaN estimate.
  [[nodiscard]] McEstimate delta(const std::function<double(std::span<const double>)>& g) const;

 private:
  std::size_t dim_;
  std::uint64_t count_ = 0;
  std::vector<double> sum_;
  std::vector<double> cross_;  // upper triangle incl. diagonal, row-major packed
};

/// Two-sided one-sample Kolmogorov-Smirnov statistic D_n of `samples` against `cdf`.
[[nodiscard]] double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic critical value of D_n at significance `level` (0.01, 0.05 or 0.10).
[[nodiscard]] double ks_critical_value(std::size_t n, double level);

}  // namespace hetnet
