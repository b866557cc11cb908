#include "hetnet/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hetnet/errors.hpp"

namespace hetnet {

McEstimate estimate_mean(std::span<const double> samples) {
  if (samples.empty()) {
    throw ParameterError("estimate_mean: no samples");
  }
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) {
    sum += v;
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : samples) {
    ss += (v - mean) * (v - mean);
  }
  const double sd = samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n), samples.size()};
}

MomentAccumulator::MomentAccumulator(std::size_t dim)
    : dim_(dim), sum_(dim, 0.0), cross_(dim * (dim + 1) / 2, 0.0) {}

void MomentAccumulator::add(std::span<const double> sample) {
  if (sample.size() != dim_) {
    throw ParameterError("MomentAccumulator::add: sample has wrong dimension");
  }
  ++count_;
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double yi = sample[i];
    sum_[i] += yi;
    if (yi == 0.0) {
      k += dim_ - i;
      continue;
    }
    for (std::size_t j = i; j < dim_; ++j) {
      cross_[k++] += yi * sample[j];
    }
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.dim_ != dim_) {
    throw ParameterError("MomentAccumulator::merge: dimension mismatch");
  }
  count_ += other.count_;
  for (std::size_t i = 0; i < sum_.size(); ++i) {
    sum_[i] += other.sum_[i];
  }
  for (std::size_t i = 0; i < cross_.size(); ++i) {
    cross_[i] += other.cross_[i];
  }
}

std::vector<double> MomentAccumulator::mean() const {
  std::vector<double> m(dim_, std::numeric_limits<double>::quiet_NaN());
  if (count_ == 0) {
    return m;
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    m[i] = sum_[i] / static_cast<double>(count_);
  }
  return m;
}

std::vector<double> MomentAccumulator::covariance() const {
  std::vector<double> cov(dim_ * dim_, 0.0);
  if (count_ < 2) {
    return cov;
  }
  const auto n = static_cast<double>(count_);
  const auto m = mean();
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      const double c = (cross_[k++] - n * m[i] * m[j]) / (n - 1.0);
      cov[i * dim_ + j] = c;
      cov[j * dim_ + i] = c;
    }
  }
  return cov;
}

McEstimate MomentAccumulator::delta(const std::function<double(std::span<const double>)>& g) const {
  McEstimate est;
  est.n_samples = count_;
  auto m = mean();
  est.mean = g(m);
  if (!std::isfinite(est.mean)) {
    est.mean = std::numeric_limits<double>::quiet_NaN();
    est.std_error = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  std::vector<double> grad(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    const double h = 1e-6 * std::max(std::abs(m[i]), 1e-6);
    const double saved = m[i];
    m[i] = saved + h;
    const double up = g(m);
    m[i] = saved - h;
    const double down = g(m);
    m[i] = saved;
    if (std::isfinite(up) && std::isfinite(down)) {
      grad[i] = (up - down) / (2.0 * h);
    } else if (std::isfinite(up)) {
      grad[i] = (up - est.mean) / h;
    } else if (std::isfinite(down)) {
      grad[i] = (est.mean - down) / h;
    }
  }
  const auto cov = covariance();
  double var = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (grad[i] == 0.0) {
      continue;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      var += grad[i] * cov[i * dim_ + j] * grad[j];
    }
  }
  est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(count_));
  return est;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) {
    throw ParameterError("ks_statistic: no samples");
  }
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double level) {
  double c = 0.0;
  if (level == 0.01) {
    c = 1.6276;
  } else if (level == 0.05) {
    c = 1.3581;
  } else if (level == 0.10) {
    c = 1.2239;
  } else {
    throw ParameterError("ks_critical_value: supported levels are 0.01, 0.05 and 0.10");
  }
  return c / std::sqrt(static_cast<double>(n));
}

}  // namespace hetnet
