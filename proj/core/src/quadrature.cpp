#include "hetnet/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "hetnet/errors.hpp"

namespace hetnet::quad {
namespace {

constexpr unsigned kMaxDepth = 30;
// tanh-sinh is asked for a tighter error than is accepted
constexpr double kRefineMargin = 1e-2;

[[noreturn]] void fail(std::string_view what, double value, double error, double l1, Tolerance tol) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "quadrature did not converge for " << what << ": value=" << value << " error_estimate=" << error
      << " L1=" << l1 << " requested rel=" << tol.relative << " abs=" << tol.absolute;
  throw NumericError(msg.str());
}

bool converged(double error, double l1, Tolerance tol) {
  return std::isfinite(error) && error <= std::max(tol.relative * l1, tol.absolute);
}

}  // namespace

double integrate_half_line(const std::function<double(double)>& f, Tolerance tol, std::string_view what) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), kMaxDepth, tol.relative, &error, &l1);
  if (!std::isfinite(value) || !converged(error, l1, tol)) {
    fail(what, value, error, l1, tol);
  }
  return value;
}

double integrate_interval(const std::function<double(double)>& f, double a, double b, Tolerance tol,
                          std::string_view what) {
  if (a == b) {
    return 0.0;
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(f, a, b, tol.relative * kRefineMargin, &error, &l1, &levels);
  if (!std::isfinite(value) || !converged(error, l1, tol)) {
    fail(what, value, error, l1, tol);
  }
  return value;
}

}  // namespace hetnet::quad
