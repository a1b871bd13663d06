#pragma once

#include <array>
#include <span>

#include "tomokin/numerics/parallel.hpp"
#include "tomokin/phasespace/density.hpp"
#include "tomokin/radon/tomogram.hpp"

namespace tomokin::radon {

using numerics::RealField;
using phasespace::PhaseSpaceDensity;

struct InverseOptions {
  double imag_tolerance = 1e-8;
  double negativity_clip = 1e-9;
  double normalization_tolerance = 1e-6;
  int order = 12;   // interpolation in |(mu, nu)| for angular tomograms
  int padding = 2;  // zero padding of the X spectrum for angular tomograms
  // Smooth low-pass exp(-36 (s / cutoff)^16) on the characteristic function,
  // s = |(mu, nu)|. 0 disables it.
  double cutoff = 0;
  numerics::Exec exec;
};

// f(q, p) = (1/4 pi^2) sum G(mu, nu) exp(-i (mu q + nu p)) dmu dnu with
// G(mu, nu) = int w(X, mu, nu) exp(iX) dX.
// Lattice tomograms supply G on their own frames. Angular tomograms supply it
// on the reciprocal lattice of the (q, p) box through homogeneity,
// G(s cos th, s sin th) = int W(Y, th) exp(i s Y / r) dY.
struct RawInverse {
  RealField values;
  double max_imag = 0;
};

RawInverse radon_inverse_raw(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                             const InverseOptions& opt = {});

// Quality-checked inverse: imaginary residue and negativity beyond their
// thresholds raise InversionQualityError; small negatives are clipped to 0.
PhaseSpaceDensity radon_inverse(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                                const InverseOptions& opt = {});

struct PositivityReport {
  double min_value = 0;
  double argmin_q = 0, argmin_p = 0;
  double max_imag = 0;
  std::size_t probes = 0;
};

// Evaluates the inversion integral at the probes; q and p fix the frequency
// lattice as in radon_inverse.
PositivityReport check_positivity(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                                  std::span<const std::array<double, 2>> probes,
                                  const InverseOptions& opt = {});

}  // namespace tomokin::radon
