#include "tomokin/numerics/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tomokin/errors.hpp"

namespace tomokin::numerics {

Grid1D::Grid1D(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw ArgumentError("grid needs finite bounds with hi > lo");
  if (n < 4 || n % 2 != 0)
    throw ArgumentError("grid sample count must be even and >= 4, got " +
                        std::to_string(n));
  h_ = (hi - lo) / static_cast<double>(n);
}

Grid1D Grid1D::cell_centered(double half_width, std::size_t n) {
  if (!(half_width > 0)) throw ArgumentError("half width must be positive");
  double h = 2 * half_width / static_cast<double>(n);
  return Grid1D(-half_width + h / 2, half_width + h / 2, n);
}

std::vector<double> Grid1D::points() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

long Grid1D::mode(std::size_t j) const {
  long m = static_cast<long>(j);
  return m <= static_cast<long>(n_ / 2) ? m : m - static_cast<long>(n_);
}

double Grid1D::wavenumber(std::size_t j) const {
  return 2 * std::numbers::pi * static_cast<double>(mode(j)) / length();
}

}  // namespace tomokin::numerics
