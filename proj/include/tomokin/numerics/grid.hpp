#pragma once

#include <cstddef>
#include <vector>

namespace tomokin::numerics {

// Uniform periodic sample axis: x_j = lo + j*h, j = 0..n-1, h = (hi-lo)/n.
class Grid1D {
 public:
  Grid1D(double lo, double hi, std::size_t n);

  // Symmetric axis of n cells over [-half_width, half_width) shifted by half a
  // cell, so no sample sits on 0.
  static Grid1D cell_centered(double half_width, std::size_t n);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return n_; }
  double length() const { return hi_ - lo_; }
  double spacing() const { return h_; }
  double point(std::size_t j) const { return lo_ + static_cast<double>(j) * h_; }
  std::vector<double> points() const;

  // Signed mode index of FFT slot j: 0..n/2, then -n/2+1..-1.
  long mode(std::size_t j) const;
  double wavenumber(std::size_t j) const;

  // Fractional index of coordinate x (unwrapped).
  double index_of(double x) const { return (x - lo_) / h_; }

  bool operator==(const Grid1D& o) const {
    return lo_ == o.lo_ && hi_ == o.hi_ && n_ == o.n_;
  }

 private:
  double lo_, hi_, h_;
  std::size_t n_;
};

}  // namespace tomokin::numerics
