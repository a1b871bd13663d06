#include "tomokin/numerics/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tomokin/errors.hpp"

namespace tomokin::numerics {
namespace {

void check_axis(std::size_t rank, std::size_t axis) {
  if (axis >= rank)
    throw ArgumentError("axis index " + std::to_string(axis) +
                        " out of range for rank " + std::to_string(rank));
}

std::vector<cplx> derivative_multiplier(const Grid1D& g) {
  std::vector<cplx> m(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    m[j] = j == g.size() / 2 ? cplx{} : cplx(0, g.wavenumber(j));
  return m;
}

std::vector<cplx> inverse_multiplier(const Grid1D& g) {
  std::vector<cplx> m(g.size());
  for (std::size_t j = 1; j < g.size(); ++j)
    m[j] = j == g.size() / 2 ? cplx{} : cplx(0, -1.0 / g.wavenumber(j));
  return m;
}

template <class T>
Field<T> integrate_impl(const Field<T>& field, std::size_t axis) {
  check_axis(field.rank(), axis);
  auto shape = field.shape();
  LineLayout l = line_layout(shape, axis);
  std::vector<Grid1D> rest;
  for (std::size_t i = 0; i < field.rank(); ++i)
    if (i != axis) rest.push_back(field.axis(i));
  std::vector<T> out(l.outer * l.inner, T{});
  double h = field.axis(axis).spacing();
  auto v = field.values();
  for (std::size_t line = 0; line < l.lines(); ++line) {
    const T* src = v.data() + l.base(line);
    T s{};
    for (std::size_t j = 0; j < l.n; ++j) {
      T x = src[j * l.inner];
      if (!std::isfinite(std::abs(x)))
        throw NumericError("non-finite value in integrand");
      s += x;
    }
    out[line] = s * h;
  }
  return Field<T>(std::move(rest), std::move(out));
}

template <class T>
void inverse_impl(std::span<T> v, std::span<const std::size_t> shape,
                  std::size_t axis, const Grid1D& grid, ZeroMode zero) {
  LineLayout l = line_layout(shape, axis);
  if (l.n < 4) throw ArgumentError("inverse derivative needs n >= 4");
  std::vector<T> constant;
  if (zero == ZeroMode::Continuous) {
    // -(1/L) int X (phi - mean) dX, per line, from the input.
    constant.resize(l.lines());
    double h = grid.spacing(), L = grid.length();
    for (std::size_t line = 0; line < l.lines(); ++line) {
      const T* src = v.data() + l.base(line);
      T mean{};
      for (std::size_t j = 0; j < l.n; ++j) mean += src[j * l.inner];
      mean /= static_cast<double>(l.n);
      T s{};
      for (std::size_t j = 0; j < l.n; ++j)
        s += grid.point(j) * (src[j * l.inner] - mean);
      constant[line] = -s * (h / L);
    }
  }
  auto m = inverse_multiplier(grid);
  filter_lines(v, shape, axis, m);
  if (zero == ZeroMode::Continuous) {
    for (std::size_t line = 0; line < l.lines(); ++line) {
      T* dst = v.data() + l.base(line);
      for (std::size_t j = 0; j < l.n; ++j) dst[j * l.inner] += constant[line];
    }
  }
}

template <class T>
Field<T> derivative_field(const Field<T>& f, std::size_t axis) {
  check_axis(f.rank(), axis);
  Field<T> out = f;
  auto shape = f.shape();
  derivative_inplace(out.values(), shape, axis, f.axis(axis));
  return out;
}

template <class T>
Field<T> inverse_field(const Field<T>& f, std::size_t axis, ZeroMode zero) {
  check_axis(f.rank(), axis);
  Field<T> out = f;
  auto shape = f.shape();
  inverse_derivative_inplace(out.values(), shape, axis, f.axis(axis), zero);
  return out;
}

}  // namespace

RealField integrate(const RealField& f, std::size_t axis) {
  return integrate_impl(f, axis);
}
ComplexField integrate(const ComplexField& f, std::size_t axis) {
  return integrate_impl(f, axis);
}

double integrate_all(const RealField& f) {
  double s = 0, w = 1;
  for (const auto& a : f.axes()) w *= a.spacing();
  for (double x : f.values()) {
    if (!std::isfinite(x)) throw NumericError("non-finite value in integrand");
    s += x;
  }
  return s * w;
}

RealField spectral_derivative(const RealField& f, std::size_t axis) {
  return derivative_field(f, axis);
}
ComplexField spectral_derivative(const ComplexField& f, std::size_t axis) {
  return derivative_field(f, axis);
}
RealField inverse_x_derivative(const RealField& f, std::size_t axis, ZeroMode z) {
  return inverse_field(f, axis, z);
}
ComplexField inverse_x_derivative(const ComplexField& f, std::size_t axis,
                                  ZeroMode z) {
  return inverse_field(f, axis, z);
}

ComplexField dft(const ComplexField& f, std::size_t axis) {
  check_axis(f.rank(), axis);
  ComplexField out = f;
  auto shape = f.shape();
  dft_lines(out.values(), shape, axis, -1);
  return out;
}

ComplexField idft(const ComplexField& f, std::size_t axis) {
  check_axis(f.rank(), axis);
  ComplexField out = f;
  auto shape = f.shape();
  dft_lines(out.values(), shape, axis, +1);
  double s = 1.0 / static_cast<double>(f.axis(axis).size());
  for (auto& x : out.values()) x *= s;
  return out;
}

void derivative_inplace(std::span<double> v, std::span<const std::size_t> shape,
                        std::size_t axis, const Grid1D& grid) {
  if (line_layout(shape, axis).n < 4)
    throw ArgumentError("spectral derivative needs n >= 4");
  auto m = derivative_multiplier(grid);
  filter_lines(v, shape, axis, m);
}

void derivative_inplace(std::span<cplx> v, std::span<const std::size_t> shape,
                        std::size_t axis, const Grid1D& grid) {
  if (line_layout(shape, axis).n < 4)
    throw ArgumentError("spectral derivative needs n >= 4");
  auto m = derivative_multiplier(grid);
  filter_lines(v, shape, axis, m);
}

void inverse_derivative_inplace(std::span<double> v,
                                std::span<const std::size_t> shape,
                                std::size_t axis, const Grid1D& grid,
                                ZeroMode zero) {
  inverse_impl(v, shape, axis, grid, zero);
}

void inverse_derivative_inplace(std::span<cplx> v,
                                std::span<const std::size_t> shape,
                                std::size_t axis, const Grid1D& grid,
                                ZeroMode zero) {
  inverse_impl(v, shape, axis, grid, zero);
}

void shift_inplace(std::span<double> v, std::span<const std::size_t> shape,
                   std::size_t axis, const Grid1D& grid, double shift) {
  std::vector<cplx> m(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double a = grid.wavenumber(j) * shift;
    m[j] = j == grid.size() / 2 ? cplx(std::cos(a), 0) : std::polar(1.0, a);
  }
  filter_lines(v, shape, axis, m);
}

}  // namespace tomokin::numerics
