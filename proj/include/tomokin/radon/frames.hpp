#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tomokin/numerics/grid.hpp"

namespace tomokin::radon {

using numerics::Grid1D;

// Reference frame of the observable X = mu q + nu p.
struct Frame {
  double mu = 0, nu = 0;
};

enum class FrameScheme { Lattice, Angular, List };

// Frames of one particle.
//  Lattice: (mu_a, nu_b) over the product of two axes, nu fastest.
//  Angular: r (cos th_j, sin th_j) with th_j = 2 pi j / n; by homogeneity this
//    circle carries the whole tomogram, and th is periodic.
//  List: arbitrary frames.
class FrameSet {
 public:
  static FrameSet lattice(const Grid1D& mu, const Grid1D& nu);
  static FrameSet angular(std::size_t n_theta, double radius = 1.0);
  static FrameSet list(std::vector<Frame> frames);

  FrameScheme scheme() const { return scheme_; }
  std::size_t size() const { return frames_.size(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  std::span<const Frame> frames() const { return frames_; }

  const Grid1D& mu_axis() const;
  const Grid1D& nu_axis() const;
  const Grid1D& theta_axis() const;
  double radius() const { return radius_; }

  // Index of a frame equal to f within tol, if any.
  std::optional<std::size_t> find(Frame f, double tol = 1e-12) const;

  bool operator==(const FrameSet& o) const;

 private:
  FrameSet() = default;
  FrameScheme scheme_ = FrameScheme::List;
  std::vector<Frame> frames_;
  std::vector<Grid1D> axes_;
  double radius_ = 0;
};

}  // namespace tomokin::radon
