#pragma once

#include <span>
#include <vector>

#include "tomokin/radon/frames.hpp"

namespace tomokin::radon {

// Tomogram-shaped values. One particle: [frame][X]. Two particles:
// [frame1][X1][frame2][X2]. Probability axioms are checked separately, since
// operator outputs share the layout without being probabilities.
class Tomogram {
 public:
  Tomogram(FrameSet frames, Grid1D x, std::vector<double> values);
  Tomogram(FrameSet frames1, Grid1D x1, FrameSet frames2, Grid1D x2,
           std::vector<double> values);

  int particles() const { return static_cast<int>(frames_.size()); }
  const FrameSet& frames(int particle = 0) const { return frames_.at(particle); }
  const Grid1D& x_axis(int particle = 0) const { return x_.at(particle); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::vector<double>& storage() { return values_; }
  const std::vector<double>& storage() const { return values_; }
  std::vector<std::size_t> shape() const;

  // One-particle row of frame i.
  std::span<const double> row(std::size_t i) const;
  std::span<double> row(std::size_t i);

  Tomogram with_values(std::vector<double> values) const;

 private:
  std::vector<FrameSet> frames_;
  std::vector<Grid1D> x_;
  std::vector<double> values_;
};

struct AxiomReport {
  double max_normalization_error = 0;  // over frames (tuples for two particles)
  double min_value = 0;
  std::size_t worst_frame = 0;
};

AxiomReport tomogram_axioms(const Tomogram& w);

// Throws AccuracyError naming the worst frame when a bound is violated.
void require_axioms(const Tomogram& w, double normalization_tol,
                    double negativity_tol);

}  // namespace tomokin::radon
