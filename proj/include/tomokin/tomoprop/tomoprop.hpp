#pragma once

#include <optional>

#include "tomokin/liouville/liouville.hpp"
#include "tomokin/numerics/parallel.hpp"
#include "tomokin/phasespace/potential.hpp"
#include "tomokin/radon/inverse.hpp"
#include "tomokin/radon/tomogram.hpp"
#include "tomokin/radon/transform.hpp"

namespace tomokin::tomoprop {

using numerics::Grid1D;
using phasespace::PhaseSpaceDensity;
using phasespace::PotentialSpec;
using radon::FrameSet;
using radon::Tomogram;

// Phase-space operations and their tomographic counterparts:
//   p f    <-> P  = -(d/dX)^-1 d/dnu
//   q f    <-> Q  = -(d/dX)^-1 d/dmu
//   dq f   <-> Dq = mu d/dX
//   dp f   <-> Dp = nu d/dX
enum class OperatorKind { MultiplyByP, MultiplyByQ, Dq, Dp };

struct TomoOperator {
  OperatorKind kind;
  int particle = 0;
};

struct OperatorOptions {
  // Lattice frames only: largest spectral energy fraction allowed in the
  // upper half of the mu or nu band.
  double tail_tolerance = 1e-6;
};

// Angular frames use the polar chart mu = r cos th, nu = r sin th, in which
//   Q W = (cos th X W + sin th (d/dX)^-1 dW/dth) / r
//   P W = (sin th X W - cos th (d/dX)^-1 dW/dth) / r
//   Dq W = r cos th dW/dX,  Dp W = r sin th dW/dX.
// Lattice frames differentiate spectrally along mu or nu. List frames support
// Dq and Dp only.
Tomogram apply_correspondence(const TomoOperator& op, const Tomogram& w,
                              const OperatorOptions& opt = {});

// Largest degree of U for which the operator path is offered.
inline constexpr int kMaxOperatorDegree = 3;

// dw/dt = sum_j mu_j dw/dnu_j + U'(Q) nu_j dw/dX_j, evaluated as
// -Dq(P w) + Dp(U'(Q) w) per particle. Pair potentials and U of degree above
// kMaxOperatorDegree raise CapabilityError.
Tomogram tomographic_rhs(const Tomogram& w, const PotentialSpec& u,
                         const OperatorOptions& opt = {});

// Transform-domain evaluation for any one-body U: the free part on the
// tomogram, the force term as w -> f by inversion on (q, p), U'(q) df/dp, then
// back by projection. Without a low-pass on the inverse the round trip
// amplifies the poorly sampled upper band and RK4 blows up; cutoff_fraction
// places the filter at that fraction of the (q, p) Nyquist wavenumber when
// inverse.cutoff is 0.
struct TransformRoute {
  Grid1D q, p;
  radon::InverseOptions inverse;
  radon::DirectOptions forward = [] {
    radon::DirectOptions o;
    o.order = 12;
    return o;
  }();
  double cutoff_fraction = 0.75;
};

Tomogram tomographic_rhs_transform(const Tomogram& w, const PotentialSpec& u,
                                   const TransformRoute& route);

struct TomoPDEConfig {
  double dt = 1e-2;
  double t_final = 0;
  double instability_tolerance = 1e-3;  // per-frame normalization drift
  std::optional<TransformRoute> transform;  // set for the transform-domain route
  OperatorOptions operators;
};

struct TomoEvolveStats {
  std::size_t steps = 0;
  double max_drift = 0;  // per-frame |int w dX - 1| at the final time
};

// RK4 in t on the whole tomogram, no renormalization.
Tomogram evolve_tomogram(const Tomogram& w0, const PotentialSpec& u, const TomoPDEConfig& cfg,
                         TomoEvolveStats* stats = nullptr);

struct CoverageOptions {
  double max_fraction_lost = 0;
  int order = 8;
};

// Characteristic solutions for Free and Harmonic potentials:
//   Free:     w(X, mu, nu, t) = w0(X, mu, nu + mu t)
//   Harmonic: w(X, mu, nu, t) = w0(X, mu cos wt - nu w sin wt, mu sin(wt)/w + nu cos wt)
// Values off the frame set are interpolated; angular sets reach every frame
// through homogeneity. Entries whose preimage is not covered are set to 0 and
// counted; too many raise CoverageError.
Tomogram analytic_tomo_flow(const Tomogram& w0, const PotentialSpec& u, double t,
                            const CoverageOptions& opt = {}, double* fraction_lost = nullptr);

struct DiagramNorms {
  double sup = 0, l2 = 0;
};

// Both sides sampled on the same frames: sqrt(h_X sum e^2 / frames) for l2.
DiagramNorms tomogram_distance(const Tomogram& a, const Tomogram& b);

struct DiagramSetup {
  FrameSet frames;
  Grid1D x;
  liouville::PropagatorConfig phase;
  TomoPDEConfig tomo;
  radon::DirectOptions forward;
};

// radon(evolve_density(f0)) against evolve_tomogram(radon(f0)).
DiagramNorms commuting_diagram_error(const PhaseSpaceDensity& f0, const PotentialSpec& u,
                                     double t, const DiagramSetup& setup);

}  // namespace tomokin::tomoprop
