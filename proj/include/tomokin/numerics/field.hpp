#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/grid.hpp"

namespace tomokin::numerics {

std::vector<std::size_t> shape_of(const std::vector<Grid1D>& axes);
std::size_t count_of(const std::vector<Grid1D>& axes);

// Values over the row-major product of axes. Axes are fixed at construction.
template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(std::vector<Grid1D> axes)
      : axes_(std::move(axes)), values_(count_of(axes_), T{}) {}
  Field(std::vector<Grid1D> axes, std::vector<T> values)
      : axes_(std::move(axes)), values_(std::move(values)) {
    if (values_.size() != count_of(axes_))
      throw ArgumentError("field value count does not match axis product");
  }

  const std::vector<Grid1D>& axes() const { return axes_; }
  const Grid1D& axis(std::size_t i) const { return axes_.at(i); }
  std::size_t rank() const { return axes_.size(); }
  std::vector<std::size_t> shape() const { return shape_of(axes_); }
  std::size_t size() const { return values_.size(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::vector<T>& storage() { return values_; }
  const std::vector<T>& storage() const { return values_; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<Grid1D> axes_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

}  // namespace tomokin::numerics
