#pragma once

#include <span>
#include <vector>

#include "tomokin/numerics/parallel.hpp"
#include "tomokin/phasespace/density.hpp"
#include "tomokin/phasespace/potential.hpp"

namespace tomokin::liouville {

using numerics::Grid1D;
using numerics::RealField;
using phasespace::GaussianSpec;
using phasespace::PhaseSpaceDensity;
using phasespace::PotentialSpec;

struct FlowState {
  std::vector<double> q, p;
};

enum class Scheme { RK4, Verlet };

struct PropagatorConfig {
  double dt = 1e-2;
  Scheme scheme = Scheme::RK4;
  double t_final = 0;
  // Trajectories leaving |q_j|, |p_j| <= safety_box raise DivergenceError.
  double safety_box = 1e4;
};

void validate(const PropagatorConfig& cfg);

// Integrates q' = p, p' = -grad U from 0 to t (t < 0 runs backward) in
// ceil(|t|/dt) equal steps.
FlowState hamiltonian_flow(FlowState state, const PotentialSpec& u, double t,
                           const PropagatorConfig& cfg);

struct EvolveOptions {
  int order = 8;                   // Lagrange interpolation of gridded f0
  double drift_tolerance = 1e-4;   // |int f - 1| before renormalization
  double negativity_tolerance = 1e-9;
  numerics::Exec exec;
};

struct EvolveStats {
  double mass_drift = 0;  // int f - 1 before renormalization
  double min_value = 0;   // before small negatives are cut to zero
  bool affine = false;    // one propagator matrix served every node
};

// f(z, t) = f0(Phi_-t(z)) at every node of the output grid. Gridded f0 is
// interpolated (reads zero outside its box); the analytic overload evaluates
// the Gaussian exactly. The result is renormalized.
PhaseSpaceDensity evolve_density(const PhaseSpaceDensity& f0, const PotentialSpec& u,
                                 double t, const PropagatorConfig& cfg,
                                 const EvolveOptions& opt = {}, EvolveStats* stats = nullptr);
PhaseSpaceDensity evolve_density(const GaussianSpec& f0, const std::vector<Grid1D>& axes,
                                 const PotentialSpec& u, double t,
                                 const PropagatorConfig& cfg, const EvolveOptions& opt = {},
                                 EvolveStats* stats = nullptr);

struct ResidualNorms {
  double sup = 0, l2 = 0;
};

// dt f + sum_j (p_j dq_j f - dU/dq_j dp_j f) on the interior snapshots,
// central differences in time and spectral derivatives in phase space.
// Returns the largest norms over snapshots.
ResidualNorms liouville_residual(std::span<const PhaseSpaceDensity> series,
                                 std::span<const double> times, const PotentialSpec& u);
RealField liouville_residual_field(const PhaseSpaceDensity& before,
                                   const PhaseSpaceDensity& at,
                                   const PhaseSpaceDensity& after, double dt,
                                   const PotentialSpec& u);

struct ReducedOptions {
  double boundary_tolerance = 1e-6;
};

// The three integrals of the two-particle equation after integrating out
// (q2, p2), as fields over (q1, p1):
//   transport   int p2 dq2 f
//   force       -int dU/dq1 dp1 f      (pair kernel plus any external force)
//   interaction +int u'(|q1-q2|) sgn(q1-q2) dp2 f
// transport and interaction are exact integrals of derivatives over the box,
// i.e. differences of face values; they must vanish for decayed densities.
struct ReducedTerms {
  RealField transport, force, interaction;
  double transport_sup = 0, interaction_sup = 0;
};

ReducedTerms reduced_rhs_2p(const PhaseSpaceDensity& f, const PotentialSpec& u,
                            const ReducedOptions& opt = {});
// Only the force integral, on a raw 4D field.
RealField reduced_force(const RealField& f, const PotentialSpec& u);

}  // namespace tomokin::liouville
