#include "tomokin/radon/frames.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tomokin/errors.hpp"

namespace tomokin::radon {
namespace {

void check_frame(const Frame& f, std::size_t index) {
  if (!std::isfinite(f.mu) || !std::isfinite(f.nu) || (f.mu == 0 && f.nu == 0)) {
    std::ostringstream os;
    os << "invalid frame #" << index << " (mu, nu) = (" << f.mu << ", " << f.nu << ")";
    throw ArgumentError(os.str());
  }
}

}  // namespace

FrameSet FrameSet::lattice(const Grid1D& mu, const Grid1D& nu) {
  FrameSet s;
  s.scheme_ = FrameScheme::Lattice;
  s.axes_ = {mu, nu};
  for (std::size_t a = 0; a < mu.size(); ++a)
    for (std::size_t b = 0; b < nu.size(); ++b) {
      Frame f{mu.point(a), nu.point(b)};
      check_frame(f, s.frames_.size());
      s.frames_.push_back(f);
    }
  return s;
}

FrameSet FrameSet::angular(std::size_t n_theta, double radius) {
  if (!(radius > 0) || !std::isfinite(radius))
    throw ArgumentError("angular frame radius must be positive");
  FrameSet s;
  s.scheme_ = FrameScheme::Angular;
  s.radius_ = radius;
  s.axes_ = {Grid1D(0, 2 * std::numbers::pi, n_theta)};
  for (std::size_t j = 0; j < n_theta; ++j) {
    double th = s.axes_[0].point(j);
    // Exact zeros on the axes keep frame (1, 0) and its rotations exact.
    double c = std::cos(th), sn = std::sin(th);
    if (4 * j % n_theta == 0) {
      std::size_t quarter = 4 * j / n_theta;
      c = quarter == 0 ? 1 : quarter == 2 ? -1 : 0;
      sn = quarter == 1 ? 1 : quarter == 3 ? -1 : 0;
    }
    s.frames_.push_back(Frame{radius * c, radius * sn});
  }
  return s;
}

FrameSet FrameSet::list(std::vector<Frame> frames) {
  if (frames.empty()) throw ArgumentError("frame list is empty");
  for (std::size_t i = 0; i < frames.size(); ++i) check_frame(frames[i], i);
  FrameSet s;
  s.scheme_ = FrameScheme::List;
  s.frames_ = std::move(frames);
  return s;
}

const Grid1D& FrameSet::mu_axis() const {
  if (scheme_ != FrameScheme::Lattice) throw ArgumentError("frame set is not a lattice");
  return axes_[0];
}

const Grid1D& FrameSet::nu_axis() const {
  if (scheme_ != FrameScheme::Lattice) throw ArgumentError("frame set is not a lattice");
  return axes_[1];
}

const Grid1D& FrameSet::theta_axis() const {
  if (scheme_ != FrameScheme::Angular) throw ArgumentError("frame set is not angular");
  return axes_[0];
}

std::optional<std::size_t> FrameSet::find(Frame f, double tol) const {
  for (std::size_t i = 0; i < frames_.size(); ++i)
    if (std::abs(frames_[i].mu - f.mu) <= tol && std::abs(frames_[i].nu - f.nu) <= tol)
      return i;
  return std::nullopt;
}

bool FrameSet::operator==(const FrameSet& o) const {
  if (scheme_ != o.scheme_ || frames_.size() != o.frames_.size() || radius_ != o.radius_)
    return false;
  for (std::size_t i = 0; i < frames_.size(); ++i)
    if (frames_[i].mu != o.frames_[i].mu || frames_[i].nu != o.frames_[i].nu) return false;
  return true;
}

}  // namespace tomokin::radon
