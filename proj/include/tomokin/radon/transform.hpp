#pragma once

#include "tomokin/numerics/parallel.hpp"
#include "tomokin/phasespace/density.hpp"
#include "tomokin/radon/tomogram.hpp"

namespace tomokin::radon {

using numerics::RealField;
using phasespace::PhaseSpaceDensity;

struct DirectOptions {
  int order = 8;                 // Lagrange interpolation order along the line
  double edge_tolerance = 1e-9;  // largest density allowed on the box faces
  double normalization_tolerance = 1e-6;
  double negativity_tolerance = 1e-9;
  numerics::Exec exec;
};

// w(X, mu, nu) = int f delta(X - mu q - nu p) dq dp, integrating over the
// variable whose coefficient is larger in magnitude.
Tomogram radon_forward_direct(const PhaseSpaceDensity& f, const FrameSet& frames,
                              const Grid1D& x, const DirectOptions& opt = {});

// The same linear map for a signed (q, p) field; no probability checks.
Tomogram radon_project(const RealField& f, const FrameSet& frames, const Grid1D& x,
                       const DirectOptions& opt = {});

struct SliceOptions {
  int padding = 2;
  int order = 8;
  double nyquist_tolerance = 1e-10;
  double normalization_tolerance = 1e-6;
  double negativity_tolerance = 1e-6;
  numerics::Exec exec;
};

// Projection-slice path: 2D spectrum of f sampled along the rays
// (k mu, k nu), then a 1D inverse DFT in X.
Tomogram radon_forward_slice(const PhaseSpaceDensity& f, const FrameSet& frames,
                             const Grid1D& x, const SliceOptions& opt = {});

// Two-particle transform as nested one-particle projections.
Tomogram radon_forward_2p(const PhaseSpaceDensity& f, const FrameSet& frames1,
                          const Grid1D& x1, const FrameSet& frames2, const Grid1D& x2,
                          const DirectOptions& opt = {});
Tomogram radon_project_2p(const RealField& f, const FrameSet& frames1, const Grid1D& x1,
                          const FrameSet& frames2, const Grid1D& x2,
                          const DirectOptions& opt = {});

struct ReductionOptions {
  double spread_tolerance = 1e-4;
};

struct Reduction {
  Tomogram reduced;
  double spread = 0;  // max over (frame1, X1) of the range across frames2
};

// Integrates out X2 and averages over the second particle's frames.
Reduction reduce_tomogram(const Tomogram& w, const ReductionOptions& opt = {});

}  // namespace tomokin::radon
