#include "tomokin/radon/tomogram.hpp"

#include <cmath>
#include <sstream>

#include "tomokin/errors.hpp"

namespace tomokin::radon {

Tomogram::Tomogram(FrameSet frames, Grid1D x, std::vector<double> values)
    : frames_{std::move(frames)}, x_{x}, values_(std::move(values)) {
  if (values_.size() != frames_[0].size() * x.size())
    throw ArgumentError("tomogram value count does not match frames x X grid");
}

Tomogram::Tomogram(FrameSet frames1, Grid1D x1, FrameSet frames2, Grid1D x2,
                   std::vector<double> values)
    : frames_{std::move(frames1), std::move(frames2)}, x_{x1, x2}, values_(std::move(values)) {
  if (values_.size() != frames_[0].size() * x1.size() * frames_[1].size() * x2.size())
    throw ArgumentError("two-particle tomogram value count does not match its axes");
}

std::vector<std::size_t> Tomogram::shape() const {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < frames_.size(); ++j) {
    s.push_back(frames_[j].size());
    s.push_back(x_[j].size());
  }
  return s;
}

std::span<const double> Tomogram::row(std::size_t i) const {
  if (particles() != 1) throw ArgumentError("row() needs a one-particle tomogram");
  return std::span<const double>(values_).subspan(i * x_[0].size(), x_[0].size());
}

std::span<double> Tomogram::row(std::size_t i) {
  if (particles() != 1) throw ArgumentError("row() needs a one-particle tomogram");
  return std::span<double>(values_).subspan(i * x_[0].size(), x_[0].size());
}

Tomogram Tomogram::with_values(std::vector<double> values) const {
  if (particles() == 1) return Tomogram(frames_[0], x_[0], std::move(values));
  return Tomogram(frames_[0], x_[0], frames_[1], x_[1], std::move(values));
}

AxiomReport tomogram_axioms(const Tomogram& w) {
  AxiomReport r;
  auto v = w.values();
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError("tomogram has non-finite values");
    r.min_value = std::min(r.min_value, x);
  }
  if (w.particles() == 1) {
    std::size_t nx = w.x_axis().size();
    double h = w.x_axis().spacing();
    for (std::size_t i = 0; i < w.frames().size(); ++i) {
      double s = 0;
      for (std::size_t k = 0; k < nx; ++k) s += v[i * nx + k];
      double e = std::abs(s * h - 1);
      if (e > r.max_normalization_error) {
        r.max_normalization_error = e;
        r.worst_frame = i;
      }
    }
    return r;
  }
  std::size_t f1 = w.frames(0).size(), n1 = w.x_axis(0).size();
  std::size_t f2 = w.frames(1).size(), n2 = w.x_axis(1).size();
  double hh = w.x_axis(0).spacing() * w.x_axis(1).spacing();
  for (std::size_t a = 0; a < f1; ++a)
    for (std::size_t b = 0; b < f2; ++b) {
      double s = 0;
      for (std::size_t k = 0; k < n1; ++k)
        for (std::size_t l = 0; l < n2; ++l) s += v[((a * n1 + k) * f2 + b) * n2 + l];
      double e = std::abs(s * hh - 1);
      if (e > r.max_normalization_error) {
        r.max_normalization_error = e;
        r.worst_frame = a * f2 + b;
      }
    }
  return r;
}

void require_axioms(const Tomogram& w, double normalization_tol, double negativity_tol) {
  AxiomReport r = tomogram_axioms(w);
  if (r.max_normalization_error > normalization_tol || r.min_value < -negativity_tol) {
    std::ostringstream os;
    os << "tomogram violates its axioms: normalization error "
       << r.max_normalization_error << " (frame #" << r.worst_frame << "), min value "
       << r.min_value;
    throw AccuracyError(os.str());
  }
}

}  // namespace tomokin::radon
