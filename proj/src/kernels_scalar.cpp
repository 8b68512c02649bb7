#include <cmath>

#include "robustflow/kernels.hpp"

namespace robustflow::kernels::scalar {

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> y) {
  for (double& v : y) v *= a;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void flush_small(double threshold, std::span<double> y) {
  for (double& v : y) {
    if (std::fabs(v) <= threshold) v = 0.0;
  }
}

}  // namespace robustflow::kernels::scalar
