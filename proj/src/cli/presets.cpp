#include "tomokin/cli/runner.hpp"

namespace tomokin::cli {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"verify-gaussian", "transform, inverse and tomogram axioms on a correlated Gaussian",
       R"(name: verify-gaussian
description: transform, inverse and tomogram axioms on a correlated Gaussian
particles: 1
initial_state:
  gaussian:
    mean: [0.3, -0.2]
    covariance: [0.9, 0.15, 0.15, 0.8]
grids:
  phase: {half_width: 10, n: 128}
  x: {half_width: 12, n: 256}
  frames: {angular: 96}
propagator: both
t_final: 0
seed: 20240611
checks: [normalization, positivity, homogeneity, round_trip, transform]
outputs:
  - {what: tomogram, times: [0]}
  - {what: density, times: [0]}
  - {what: report}
)"},
      {"free-1p", "free streaming of a Gaussian, phase-space and tomographic paths compared",
       R"(name: free-1p
description: free streaming of a Gaussian, phase-space and tomographic paths compared
particles: 1
initial_state:
  gaussian:
    mean: [0.3, -0.2]
    covariance: [0.9, 0.15, 0.15, 0.8]
potential: {kind: free}
grids:
  phase: {half_width: 10, n: 128}
  x: {half_width: 12, n: 128}
  frames: {angular: 64}
propagator: both
t_final: 1
dt: 0.01
checks: [normalization, positivity, commuting, conservation]
outputs:
  - {what: tomogram, times: [0, 0.5, 1]}
  - {what: density, times: [1], format: columns}
  - {what: report}
)"},
      {"harmonic-1p", "one harmonic period of a displaced Gaussian on both paths",
       R"(name: harmonic-1p
description: one harmonic period of a displaced Gaussian on both paths
particles: 1
initial_state:
  gaussian:
    mean: [1.0, 0.5]
    covariance: [0.8, 0.1, 0.1, 0.6]
potential: {kind: harmonic, omega: 1}
grids:
  phase: {half_width: 10, n: 128}
  x: {half_width: 12, n: 128}
  frames: {angular: 64}
propagator: both
t_final: 3.141592653589793
dt: 0.01
checks: [normalization, positivity, homogeneity, commuting, conservation]
tolerances:
  commuting: 2.0e-3
outputs:
  - {what: tomogram, times: [0, 1.5707963267948966, 3.141592653589793]}
  - {what: report}
)"},
      {"quartic-1p", "anharmonic well on the transform-domain route",
       R"(name: quartic-1p
description: anharmonic well on the transform-domain route
particles: 1
initial_state:
  gaussian:
    mean: [0.3, -0.2]
    covariance: [0.4, 0.05, 0.05, 0.5]
potential:
  kind: polynomial
  coefficients: [0, 0, 0.5, 0, 0.02]
grids:
  phase: {half_width: 10, n: 96}
  x: {half_width: 12, n: 128}
  frames: {angular: 64}
propagator: both
route: transform
t_final: 0.5
dt: 0.01
checks: [normalization, commuting]
outputs:
  - {what: tomogram, times: [0.5]}
  - {what: density, times: [0.5]}
  - {what: report}
)"},
      {"stationary-harmonic-1p", "exp(-H) of the oscillator has a vanishing tomographic rhs",
       R"(name: stationary-harmonic-1p
description: exp(-H) of the oscillator has a vanishing tomographic rhs
particles: 1
initial_state: {preset: boltzmann}
potential: {kind: harmonic, omega: 1}
grids:
  phase: {half_width: 10, n: 128}
  x: {half_width: 12, n: 128}
  frames: {angular: 64}
propagator: both
t_final: 0
checks: [normalization, positivity, stationarity]
outputs:
  - {what: tomogram, times: [0]}
  - {what: report}
)"},
      {"pair-harmonic-2p", "two particles in a harmonic trap with a harmonic pair force",
       R"(name: pair-harmonic-2p
description: two particles in a harmonic trap with a harmonic pair force
particles: 2
initial_state:
  gaussian:
    mean: [0.4, 0, -0.4, 0.2]
    covariance: [0.5, 0, 0, 0,
                 0, 0.5, 0, 0,
                 0, 0, 0.5, 0,
                 0, 0, 0, 0.5]
potential:
  kind: pair
  profile: [0, 0, 0.5]
  external: {kind: harmonic, omega: 1}
grids:
  phase: {half_width: 6, n: 64}
  x: {half_width: 8, n: 128}
  frames: {angular: 64}
propagator: phase
t_final: 0.3
dt: 0.001
reduction:
  sample_times: [0.25]
  dt: 0.005
checks: [normalization, positivity, reduction, bogolyubov]
outputs:
  - {what: reduced, times: [0, 0.3]}
  - {what: density, times: [0.3]}
  - {what: report}
)"},
      {"reduction-consistency-2p", "reduced two-particle tomogram against the marginal's tomogram",
       R"(name: reduction-consistency-2p
description: reduced two-particle tomogram against the marginal's tomogram
particles: 2
initial_state:
  gaussian:
    mean: [0.2, 0, -0.3, 0]
    covariance: [1.0, 0.2, 0.4, 0.1,
                 0.2, 0.9, 0.1, 0.0,
                 0.4, 0.1, 1.2, 0.2,
                 0.1, 0.0, 0.2, 0.8]
potential:
  kind: pair
  profile: [0, 0, 0.5]
grids:
  phase: {half_width: 9, n: 64}
  x: {half_width: 12, n: 128}
  frames: {angular: 32}
  frames2: {list: [[1, 0], [0, 1], [0.6, 0.8]]}
propagator: phase
t_final: 0
checks: [normalization, positivity, reduction]
outputs:
  - {what: reduced, times: [0]}
  - {what: report}
)"},
  };
  return all;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace tomokin::cli
