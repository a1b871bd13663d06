#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tomokin/liouville/liouville.hpp"
#include "tomokin/radon/inverse.hpp"
#include "tomokin/radon/transform.hpp"

namespace tomokin::bogolyubov {

using numerics::Grid1D;
using numerics::RealField;
using phasespace::GaussianSpec;
using phasespace::PhaseSpaceDensity;
using phasespace::PotentialSpec;
using radon::FrameSet;
using radon::Tomogram;

struct Norms {
  double sup = 0, l2 = 0;
};

struct ReductionReport {
  Norms residual_phase, residual_tomo, cross_consistency;
  double boundary_terms = 0;  // largest face term of the reduced phase equation
  double spread = 0;          // reduced tomogram range across the second particle's frames
  bool flagged = false;       // cross_consistency.sup above the flag threshold
};

// {(1, 0), (0, 1), (cos 1, sin 1)}. The (1, 0) frame reads q2 directly.
FrameSet second_particle_frames();

// Particle 1 on an angular set, particle 2 on a list that contains (1, 0).
// The interaction term is rebuilt from the (1, 0) slices: every X2 column is
// inverted onto (q1, p1), multiplied by the pair kernel and summed over X2.
struct TomoLayout {
  FrameSet frames1;
  Grid1D x1;
  FrameSet frames2;
  Grid1D x2;
  Grid1D q1, p1;
  radon::DirectOptions forward;
  radon::InverseOptions inverse;
};

TomoLayout make_layout(std::size_t angles, const Grid1D& x1, const Grid1D& x2,
                       const Grid1D& q1, const Grid1D& p1);

struct Pipelines {
  PotentialSpec phase;  // potential of the phase-space side
  PotentialSpec tomo;   // potential of the tomographic side, normally the same
  std::optional<TomoLayout> layout;  // unset: phase-space side only
  liouville::ReducedOptions reduced;
  radon::ReductionOptions reduction;
  double flag_threshold = 2e-3;
};

// What one time slice contributes to the residuals. The 4D field is not kept.
struct Snapshot {
  double time = 0;
  RealField marginal;  // f~(q1, p1)
  std::optional<RealField> phase_force;
  std::optional<Tomogram> reduced;     // w~ from the two-particle tomogram
  std::optional<Tomogram> tomo_force;  // projection of the slice-built force
  double boundary = 0, spread = 0;
};

// forces = false keeps only what a time difference needs.
Snapshot summarize(const PhaseSpaceDensity& f, double time, const Pipelines& p, bool forces);

// Force integral of the reduced equation rebuilt from a two-particle tomogram,
// as a field over (layout.q1, layout.p1).
RealField tomographic_force(const Tomogram& w, const PotentialSpec& u, const TomoLayout& layout);

// Residual fields on a window (t - dt, t, t + dt); the middle snapshot needs
// forces.
//   phase: dt f~ + p1 dq1 f~ + force
//   tomo:  dt w~ - mu1 dnu1 w~ + projection of the tomographic force
RealField phase_residual_field(const Snapshot& before, const Snapshot& at,
                               const Snapshot& after);
Tomogram tomo_residual_field(const Snapshot& before, const Snapshot& at,
                             const Snapshot& after);
// Projection of the phase residual minus the tomographic residual.
Tomogram cross_field(const Snapshot& before, const Snapshot& at, const Snapshot& after,
                     const TomoLayout& layout);

Norms field_norms(const RealField& f);
Norms tomogram_norms(const Tomogram& w);

// Residuals over all interior snapshots of a uniform series (at least three).
ReductionReport reduced_phase_residual(std::span<const PhaseSpaceDensity> series,
                                       std::span<const double> times, const PotentialSpec& u,
                                       const liouville::ReducedOptions& opt = {});
ReductionReport reduced_tomo_residual(std::span<const PhaseSpaceDensity> series,
                                      std::span<const double> times, const PotentialSpec& u,
                                      const TomoLayout& layout);
ReductionReport cross_consistency(std::span<const PhaseSpaceDensity> series,
                                  std::span<const double> times, const Pipelines& p);

// Streaming form: the Gaussian f0 is evolved to t - dt, t, t + dt for every
// sample time and each 4D field is summarized and dropped before the next.
struct StreamConfig {
  std::vector<double> sample_times;
  double dt = 5e-3;
  liouville::PropagatorConfig propagator;
  liouville::EvolveOptions evolve;
};

ReductionReport stream_reduction(const GaussianSpec& f0, const std::vector<Grid1D>& axes,
                                 const Pipelines& p, const StreamConfig& cfg);

// log(e_coarse / e_fine) / log(n_fine / n_coarse)
double convergence_order(double e_coarse, double e_fine, double n_coarse, double n_fine);

}  // namespace tomokin::bogolyubov
