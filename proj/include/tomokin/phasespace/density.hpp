#pragma once

#include <vector>

#include "tomokin/numerics/field.hpp"
#include "tomokin/phasespace/potential.hpp"

namespace tomokin::phasespace {

using numerics::Grid1D;
using numerics::RealField;

struct DensityTolerances {
  double negativity = 1e-12;
  double normalization = 1e-8;
};

// Nonnegative normalized field over (q1, p1[, q2, p2]).
class PhaseSpaceDensity {
 public:
  static PhaseSpaceDensity from_field(RealField f, DensityTolerances tol = {});

  int particles() const { return static_cast<int>(f_.rank() / 2); }
  const RealField& field() const { return f_; }
  const Grid1D& axis(std::size_t i) const { return f_.axis(i); }
  std::span<const double> values() const { return f_.values(); }
  double cell_volume() const;

 private:
  explicit PhaseSpaceDensity(RealField f) : f_(std::move(f)) {}
  RealField f_;
};

// Mean of length 2*particles ordered (q1, p1, q2, p2); covariance row-major.
struct GaussianSpec {
  std::vector<double> mean;
  std::vector<double> covariance;
  std::size_t dimension() const { return mean.size(); }
};

GaussianSpec standard_gaussian(int particles);
// Delta surrogate at (q0, p0): isotropic with the given width.
GaussianSpec narrow_gaussian(double q0, double p0, double width);

// Normalized multivariate normal density, evaluated pointwise.
class GaussianPdf {
 public:
  explicit GaussianPdf(const GaussianSpec& spec);
  std::size_t dimension() const { return mean_.size(); }
  double operator()(const double* z) const;
  double log_density(const double* z) const;
  // Precision matrix, row-major.
  const std::vector<double>& precision() const { return precision_; }
  const std::vector<double>& mean() const { return mean_; }
  double log_norm() const { return log_norm_; }

 private:
  std::vector<double> mean_, precision_;
  double log_norm_ = 0;
};

struct SampleOptions {
  double edge_tolerance = 1e-12;
};

// Largest |value| on the faces of the box.
double edge_magnitude(const RealField& f);

PhaseSpaceDensity make_gaussian(const GaussianSpec& spec, std::vector<Grid1D> axes,
                                SampleOptions opt = {});
// exp(-H) with H = sum p^2/2 + U, sampled and normalized on the grid.
PhaseSpaceDensity make_boltzmann(const PotentialSpec& u, std::vector<Grid1D> axes,
                                 SampleOptions opt = {});
PhaseSpaceDensity make_product(const PhaseSpaceDensity& a,
                               const PhaseSpaceDensity& b);
PhaseSpaceDensity marginalize_second_particle(const PhaseSpaceDensity& f);

struct Moments {
  double mean_q = 0, mean_p = 0, var_q = 0, var_p = 0, cov_qp = 0;
};
Moments moments(const PhaseSpaceDensity& f);

}  // namespace tomokin::phasespace
