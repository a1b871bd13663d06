#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tomokin/radon/tomogram.hpp"

namespace tomokin::radon {

// Evaluates a one-particle tomogram off its nodes.
//  Lattice: tensor Lagrange in (mu, nu, X); the (mu, nu) stencil must lie
//    inside the lattice.
//  Angular: only on the circle of the frame set (trigonometric in th).
//  List: only at listed frames.
// X outside the grid reads as 0. at() never uses homogeneity.
class TomogramSampler {
 public:
  explicit TomogramSampler(const Tomogram& w, int order = 8);
  std::optional<double> at(double X, double mu, double nu) const;
  // Angular tomograms reach any frame through w(X, s e) = (r/s) W(r X / s, e).
  std::optional<double> extended(double X, double mu, double nu) const;

 private:
  double along_x(std::size_t frame, double X) const;
  const Tomogram& w_;
  int order_;
};

struct HomogeneityOptions {
  double min_radius = 0.3;           // lattice annulus, inner radius past the stencil reach
  double max_radius_fraction = 0.9;  // lattice annulus, fraction of the half box
  int order = 8;
  std::size_t x_stride = 1;
};

struct HomogeneityEntry {
  double lambda = 0;
  double max_deviation = 0;
  std::size_t sampled = 0, skipped = 0;
};

// max |w(lX, l mu, l nu) - w(X, mu, nu)/|l|| over sampled nodes, per lambda.
std::vector<HomogeneityEntry> check_homogeneity(const Tomogram& w,
                                                std::span<const double> lambdas,
                                                const HomogeneityOptions& opt = {});

// Two particles, scaling each particle's arguments by its own lambda. Frames
// are matched exactly; X values are interpolated.
std::vector<HomogeneityEntry> check_homogeneity_2p(
    const Tomogram& w, std::span<const std::pair<double, double>> lambdas,
    const HomogeneityOptions& opt = {});

}  // namespace tomokin::radon
