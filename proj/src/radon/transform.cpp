#include "tomokin/radon/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectrum.hpp"
#include "tomokin/errors.hpp"
#include "tomokin/numerics/fft.hpp"
#include "tomokin/numerics/interp.hpp"

namespace tomokin::radon {
namespace {

using numerics::cplx;

void check_plane(const RealField& f) {
  if (f.rank() != 2) throw ArgumentError("one-particle transform needs a (q, p) field");
}

// Line integral of the (q, p) slice f for one frame, written to out[0..nx).
// Integrates over the coordinate with the larger coefficient and interpolates
// along the other; nodes outside the box read as zero.
void project_frame(const double* f, const Grid1D& q, const Grid1D& p, const Frame& fr,
                   const Grid1D& x, int order, double* out) {
  const bool over_q = std::abs(fr.nu) >= std::abs(fr.mu);
  const Grid1D& a = over_q ? q : p;  // summed
  const Grid1D& b = over_q ? p : q;  // interpolated
  const double ca = over_q ? fr.mu : fr.nu, cb = over_q ? fr.nu : fr.mu;
  const std::size_t na = a.size(), nb = b.size();
  const std::size_t row_stride = over_q ? p.size() : 1, elem_stride = over_q ? 1 : p.size();
  const double scale = a.spacing() / std::abs(cb);
  const double slope = -ca * a.spacing() / (cb * b.spacing());
  const double lo_t = -order, hi_t = static_cast<double>(nb) + order;
  for (std::size_t k = 0; k < x.size(); ++k) {
    // t_i = t0 + slope * i is the fractional b-index of node i on the line.
    double t0 = ((x.point(k) - ca * a.lo()) / cb - b.lo()) / b.spacing();
    std::size_t i0 = 0, i1 = na;
    if (slope != 0) {
      double u = (lo_t - t0) / slope, v = (hi_t - t0) / slope;
      if (u > v) std::swap(u, v);
      i0 = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(na)));
      i1 = static_cast<std::size_t>(std::clamp(std::ceil(v) + 1, 0.0, static_cast<double>(na)));
    } else if (t0 < lo_t || t0 > hi_t) {
      i1 = 0;
    }
    double acc = 0;
    for (std::size_t i = i0; i < i1; ++i) {
      double t = t0 + slope * static_cast<double>(i);
      acc += numerics::sample_line(f + i * row_stride, nb, elem_stride, t, order);
    }
    out[k] = acc * scale;
  }
}

void project_all(const double* f, const Grid1D& q, const Grid1D& p, const FrameSet& frames,
                 const Grid1D& x, int order, double* out) {
  for (std::size_t i = 0; i < frames.size(); ++i)
    project_frame(f, q, p, frames[i], x, order, out + i * x.size());
}

void check_edge(const RealField& f, double tol) {
  double edge = phasespace::edge_magnitude(f);
  if (edge > tol) {
    std::ostringstream os;
    os << "interpolation reaches beyond the box where the density is still " << edge;
    throw AccuracyError(os.str());
  }
}

}  // namespace

Tomogram radon_project(const RealField& f, const FrameSet& frames, const Grid1D& x,
                       const DirectOptions& opt) {
  check_plane(f);
  std::vector<double> out(frames.size() * x.size());
  const Grid1D &q = f.axis(0), &p = f.axis(1);
  numerics::parallel_for(opt.exec, frames.size(), [&](std::size_t i) {
    project_frame(f.values().data(), q, p, frames[i], x, opt.order, out.data() + i * x.size());
  });
  return Tomogram(frames, x, std::move(out));
}

Tomogram radon_forward_direct(const PhaseSpaceDensity& f, const FrameSet& frames,
                              const Grid1D& x, const DirectOptions& opt) {
  if (f.particles() != 1) throw ArgumentError("radon_forward_direct needs one particle");
  check_edge(f.field(), opt.edge_tolerance);
  Tomogram w = radon_project(f.field(), frames, x, opt);
  require_axioms(w, opt.normalization_tolerance, opt.negativity_tolerance);
  return w;
}

Tomogram radon_forward_slice(const PhaseSpaceDensity& f, const FrameSet& frames,
                             const Grid1D& x, const SliceOptions& opt) {
  if (f.particles() != 1) throw ArgumentError("radon_forward_slice needs one particle");
  if (opt.padding < 1) throw ArgumentError("slice padding must be >= 1");
  const Grid1D &q = f.axis(0), &p = f.axis(1);
  detail::Spectrum2D spec(f.values().data(), q, p, opt.padding);

  const std::size_t nx = x.size();
  const double kmax = x.wavenumber(nx / 2 - 1);
  if (spec.edge_level() > opt.nyquist_tolerance) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (!spec.inside(kmax * frames[i].mu, kmax * frames[i].nu)) bad.push_back(i);
    if (!bad.empty()) {
      std::ostringstream os;
      os << "rays leave the resolved spectrum (edge level " << spec.edge_level()
         << ") for " << bad.size() << " frames:";
      for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k)
        os << " #" << bad[k] << "(" << frames[bad[k]].mu << "," << frames[bad[k]].nu << ")";
      throw AccuracyError(os.str());
    }
  }

  std::vector<double> out(frames.size() * nx);
  const double L = x.length();
  numerics::parallel_for(opt.exec, frames.size(), [&](std::size_t i) {
    std::vector<cplx> c(nx);
    const Frame& fr = frames[i];
    for (std::size_t m = 0; m < nx / 2; ++m) {
      double k = x.wavenumber(m);
      cplx F = spec.at(k * fr.mu, k * fr.nu, opt.order) * std::polar(1.0 / L, k * x.lo());
      c[m] = F;
      if (m > 0) c[nx - m] = std::conj(F);
    }
    std::size_t shape[1] = {nx};
    numerics::dft_lines(c, shape, 0, +1);
    for (std::size_t k = 0; k < nx; ++k) out[i * nx + k] = c[k].real();
  });
  Tomogram w(frames, x, std::move(out));
  require_axioms(w, opt.normalization_tolerance, opt.negativity_tolerance);
  return w;
}

Tomogram radon_project_2p(const RealField& f, const FrameSet& frames1, const Grid1D& x1,
                          const FrameSet& frames2, const Grid1D& x2,
                          const DirectOptions& opt) {
  if (f.rank() != 4) throw ArgumentError("two-particle transform needs a 4D field");
  const Grid1D &q1 = f.axis(0), &p1 = f.axis(1), &q2 = f.axis(2), &p2 = f.axis(3);
  const std::size_t n12 = q1.size() * p1.size(), plane2 = q2.size() * p2.size();
  const std::size_t inner = frames2.size() * x2.size();
  // Particle 2 first: [q1 p1][F2 X2].
  std::vector<double> tmp(n12 * inner);
  numerics::parallel_for(opt.exec, n12, [&](std::size_t s) {
    project_all(f.values().data() + s * plane2, q2, p2, frames2, x2, opt.order,
                tmp.data() + s * inner);
  });
  // Then particle 1 on every (F2, X2) column.
  const std::size_t outer = frames1.size() * x1.size();
  std::vector<double> out(outer * inner);
  numerics::parallel_for(opt.exec, inner, [&](std::size_t c) {
    std::vector<double> plane(n12), col(outer);
    for (std::size_t s = 0; s < n12; ++s) plane[s] = tmp[s * inner + c];
    project_all(plane.data(), q1, p1, frames1, x1, opt.order, col.data());
    for (std::size_t r = 0; r < outer; ++r) out[r * inner + c] = col[r];
  });
  return Tomogram(frames1, x1, frames2, x2, std::move(out));
}

Tomogram radon_forward_2p(const PhaseSpaceDensity& f, const FrameSet& frames1,
                          const Grid1D& x1, const FrameSet& frames2, const Grid1D& x2,
                          const DirectOptions& opt) {
  if (f.particles() != 2) throw ArgumentError("radon_forward_2p needs two particles");
  check_edge(f.field(), opt.edge_tolerance);
  Tomogram w = radon_project_2p(f.field(), frames1, x1, frames2, x2, opt);
  require_axioms(w, opt.normalization_tolerance, opt.negativity_tolerance);
  return w;
}

Reduction reduce_tomogram(const Tomogram& w, const ReductionOptions& opt) {
  if (w.particles() != 2) throw ArgumentError("reduction needs a two-particle tomogram");
  const std::size_t f1 = w.frames(0).size(), n1 = w.x_axis(0).size();
  const std::size_t f2 = w.frames(1).size(), n2 = w.x_axis(1).size();
  const double h2 = w.x_axis(1).spacing();
  auto v = w.values();
  std::vector<double> out(f1 * n1);
  double spread = 0;
  for (std::size_t r = 0; r < f1 * n1; ++r) {
    double lo = INFINITY, hi = -INFINITY, sum = 0;
    for (std::size_t b = 0; b < f2; ++b) {
      const double* x = v.data() + (r * f2 + b) * n2;
      double s = 0;
      for (std::size_t l = 0; l < n2; ++l) s += x[l];
      s *= h2;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      sum += s;
    }
    spread = std::max(spread, hi - lo);
    out[r] = sum / static_cast<double>(f2);
  }
  if (spread > opt.spread_tolerance) {
    std::ostringstream os;
    os << "reduced tomogram depends on the second particle's frame: spread " << spread;
    throw InconsistencyError(os.str(), spread);
  }
  return Reduction{Tomogram(w.frames(0), w.x_axis(0), std::move(out)), spread};
}

}  // namespace tomokin::radon
