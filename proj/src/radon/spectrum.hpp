#pragma once

// Zero-padded spectra of sampled data, re-centred on the sample nearest the
// origin so they vary slowly in frequency and can be interpolated.

#include <complex>
#include <vector>

#include "tomokin/numerics/grid.hpp"

namespace tomokin::radon::detail {

using cplx = std::complex<double>;
using numerics::Grid1D;

// F(k) = h sum_j v_j exp(sign i k x_j), for |k| < pi/h.
class Spectrum1D {
 public:
  Spectrum1D(const double* v, std::size_t stride, const Grid1D& x, int padding, int sign);
  cplx at(double k, int order) const;
  double nyquist() const;

 private:
  std::vector<cplx> s_;
  std::size_t N_;
  double h_;
};

// F(a, b) = hq hp sum f_ij exp(-i (a q_i + b p_j)), for |a| < pi/hq, |b| < pi/hp.
class Spectrum2D {
 public:
  Spectrum2D(const double* f, const Grid1D& q, const Grid1D& p, int padding);
  bool inside(double a, double b) const;
  cplx at(double a, double b, int order) const;
  // Largest |F| over the band |m| >= 0.4 N of the sampled spectrum.
  double edge_level() const { return edge_; }

 private:
  std::vector<cplx> s_;
  std::size_t Nq_, Np_;
  double hq_, hp_, edge_ = 0;
};

}  // namespace tomokin::radon::detail
