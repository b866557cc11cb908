#pragma once

#include <functional>
#include <string_view>

namespace hetnet::quad {

struct Tolerance {
  double relative = 1e-8;
  double absolute = 1e-14;
};

/// Adaptive Gauss-Kronrod over [0, inf). Throws NumericError (with the
/// reached error estimate in the message) when the tolerance is not met.
[[nodiscard]] double integrate_half_line(const std::function<double(double)>& f, Tolerance tol,
                                         std::string_view what);

/// Double-exponential (tanh-sinh) quadrature over a finite [a, b]; copes
/// with non-smooth endpoints.
[[nodiscard]] double integrate_interval(const std::function<double(double)>& f, double a, double b, Tolerance tol,
                                        std::string_view what);

}  // namespace hetnet::quad
