#include "tomokin/bogolyubov/bogolyubov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/spectral.hpp"
#include "tomokin/tomoprop/tomoprop.hpp"

namespace tomokin::bogolyubov {
namespace {

std::size_t unit_q_frame(const FrameSet& fs) {
  for (std::size_t b = 0; b < fs.size(); ++b)
    if (std::abs(fs[b].mu - 1) < 1e-12 && std::abs(fs[b].nu) < 1e-12) return b;
  throw ArgumentError("second particle's frames must include (1, 0)");
}

double window_step(const Snapshot& before, const Snapshot& at, const Snapshot& after) {
  double a = at.time - before.time, b = after.time - at.time;
  if (!(a > 0) || std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a)))
    throw ArgumentError("snapshots must be uniformly spaced in time");
  return a;
}

void merge(Norms& into, const Norms& n) {
  into.sup = std::max(into.sup, n.sup);
  into.l2 = std::max(into.l2, n.l2);
}

void require_series(std::size_t n, std::size_t m) {
  if (n != m) throw ArgumentError("one time per snapshot");
  if (n < 3) throw ArgumentError("residuals need at least three snapshots");
}

std::vector<Snapshot> summarize_all(std::span<const PhaseSpaceDensity> series,
                                    std::span<const double> times, const Pipelines& p) {
  require_series(series.size(), times.size());
  std::vector<Snapshot> s;
  s.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    s.push_back(summarize(series[i], times[i], p, i > 0 && i + 1 < series.size()));
  return s;
}

ReductionReport collect(const std::vector<Snapshot>& s, const Pipelines& p, bool phase,
                        bool tomo) {
  ReductionReport r;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    r.boundary_terms = std::max(r.boundary_terms, s[i].boundary);
    if (phase) merge(r.residual_phase, field_norms(phase_residual_field(s[i - 1], s[i], s[i + 1])));
    if (tomo) merge(r.residual_tomo, tomogram_norms(tomo_residual_field(s[i - 1], s[i], s[i + 1])));
    if (phase && tomo)
      merge(r.cross_consistency,
            tomogram_norms(cross_field(s[i - 1], s[i], s[i + 1], *p.layout)));
  }
  for (const auto& x : s) r.spread = std::max(r.spread, x.spread);
  r.flagged = phase && tomo && r.cross_consistency.sup > p.flag_threshold;
  return r;
}

}  // namespace

FrameSet second_particle_frames() {
  return FrameSet::list({{1, 0}, {0, 1}, {std::cos(1.0), std::sin(1.0)}});
}

TomoLayout make_layout(std::size_t angles, const Grid1D& x1, const Grid1D& x2,
                       const Grid1D& q1, const Grid1D& p1) {
  return TomoLayout{FrameSet::angular(angles), x1, second_particle_frames(), x2, q1, p1, {}, {}};
}

RealField tomographic_force(const Tomogram& w, const PotentialSpec& u, const TomoLayout& layout) {
  if (w.particles() != 2) throw ArgumentError("tomographic force needs a two-particle tomogram");
  phasespace::validate(u);
  if (!phasespace::is_pair(u)) throw ArgumentError("tomographic force needs a pair potential");
  const auto& pair = std::get<phasespace::Pair>(u);
  const std::size_t b0 = unit_q_frame(w.frames(1));
  const FrameSet& fs1 = w.frames(0);
  const Grid1D& x1 = w.x_axis(0);
  const Grid1D& x2 = w.x_axis(1);
  const std::size_t F1 = fs1.size(), X1 = x1.size(), F2 = w.frames(1).size(), X2 = x2.size();
  const Grid1D &gq = layout.q1, &gp = layout.p1;
  const std::size_t n0 = gq.size(), n1 = gp.size();
  const double h2 = x2.spacing();
  auto v = w.values();

  double top = 0;
  for (double e : v) top = std::max(top, std::abs(e));

  // g(q1, p1, q2) from the inverse of each (1, 0) column.
  std::vector<double> g(n0 * n1 * X2, 0.0);
  std::vector<double> slice(F1 * X1);
  for (std::size_t l = 0; l < X2; ++l) {
    double m = 0;
    for (std::size_t r = 0; r < F1 * X1; ++r) {
      slice[r] = v[(r * F2 + b0) * X2 + l];
      m = std::max(m, std::abs(slice[r]));
    }
    if (m <= 1e-14 * top) continue;
    auto f = radon::radon_inverse_raw(Tomogram(fs1, x1, slice), gq, gp, layout.inverse).values;
    auto fv = f.values();
    for (std::size_t s = 0; s < n0 * n1; ++s) g[s * X2 + l] = fv[s];
  }
  std::vector<double> marginal(n0 * n1, 0.0);
  for (std::size_t s = 0; s < n0 * n1; ++s) {
    double acc = 0;
    for (std::size_t l = 0; l < X2; ++l) acc += g[s * X2 + l];
    marginal[s] = acc * h2;
  }
  // Half a cell in X2 keeps the kernel's singular set q1 = q2 off the nodes.
  std::size_t gshape[] = {n0, n1, X2};
  numerics::shift_inplace(std::span<double>(g), gshape, 2, x2, 0.5 * h2);

  RealField out({gq, gp});
  auto o = out.values();
  std::vector<double> table(X2);
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t l = 0; l < X2; ++l)
      table[l] = phasespace::pair_kernel(pair, gq.point(i) - x2.point(l) - 0.5 * h2);
    double ext = phasespace::one_body_derivative(pair.external, gq.point(i));
    for (std::size_t j = 0; j < n1; ++j) {
      const double* row = g.data() + (i * n1 + j) * X2;
      double acc = 0;
      for (std::size_t l = 0; l < X2; ++l) acc += table[l] * row[l];
      o[i * n1 + j] = acc * h2 + ext * marginal[i * n1 + j];
    }
  }
  std::size_t oshape[] = {n0, n1};
  numerics::derivative_inplace(o, oshape, 1, gp);
  for (double& e : o) e = -e;
  return out;
}

Snapshot summarize(const PhaseSpaceDensity& f, double time, const Pipelines& p, bool forces) {
  if (f.particles() != 2) throw ArgumentError("reduction needs a two-particle density");
  Snapshot s;
  s.time = time;
  s.marginal = phasespace::marginalize_second_particle(f).field();
  if (forces) {
    auto terms = liouville::reduced_rhs_2p(f, p.phase, p.reduced);
    s.phase_force = std::move(terms.force);
    s.boundary = std::max(terms.transport_sup, terms.interaction_sup);
  }
  if (p.layout) {
    const TomoLayout& L = *p.layout;
    auto w = radon::radon_forward_2p(f, L.frames1, L.x1, L.frames2, L.x2, L.forward);
    auto red = radon::reduce_tomogram(w, p.reduction);
    s.reduced = std::move(red.reduced);
    s.spread = red.spread;
    if (forces)
      s.tomo_force = radon::radon_project(tomographic_force(w, p.tomo, L), L.frames1, L.x1,
                                          L.forward);
  }
  return s;
}

RealField phase_residual_field(const Snapshot& before, const Snapshot& at,
                               const Snapshot& after) {
  const double dt = window_step(before, at, after);
  if (!at.phase_force) throw ArgumentError("middle snapshot lacks the force term");
  RealField r = numerics::spectral_derivative(at.marginal, 0);
  auto o = r.values();
  auto a = before.marginal.values(), c = after.marginal.values(), fz = at.phase_force->values();
  const Grid1D& gp = at.marginal.axis(1);
  const std::size_t n1 = gp.size();
  for (std::size_t s = 0; s < o.size(); ++s)
    o[s] = (c[s] - a[s]) / (2 * dt) + gp.point(s % n1) * o[s] + fz[s];
  return r;
}

Tomogram tomo_residual_field(const Snapshot& before, const Snapshot& at,
                             const Snapshot& after) {
  const double dt = window_step(before, at, after);
  if (!before.reduced || !at.reduced || !after.reduced || !at.tomo_force)
    throw ArgumentError("snapshots lack tomographic data");
  auto r = tomoprop::tomographic_rhs(*at.reduced, phasespace::Free{});
  auto o = r.values();
  auto a = before.reduced->values(), c = after.reduced->values(), fz = at.tomo_force->values();
  for (std::size_t s = 0; s < o.size(); ++s) o[s] = (c[s] - a[s]) / (2 * dt) - o[s] + fz[s];
  return r;
}

Tomogram cross_field(const Snapshot& before, const Snapshot& at, const Snapshot& after,
                     const TomoLayout& layout) {
  auto ph = radon::radon_project(phase_residual_field(before, at, after), layout.frames1,
                                 layout.x1, layout.forward);
  auto t = tomo_residual_field(before, at, after);
  auto o = ph.values();
  auto tv = t.values();
  for (std::size_t s = 0; s < o.size(); ++s) o[s] -= tv[s];
  return ph;
}

Norms field_norms(const RealField& f) {
  Norms n;
  double cell = 1, ss = 0;
  for (const auto& a : f.axes()) cell *= a.spacing();
  for (double e : f.values()) {
    n.sup = std::max(n.sup, std::abs(e));
    ss += e * e;
  }
  n.l2 = std::sqrt(ss * cell);
  return n;
}

Norms tomogram_norms(const Tomogram& w) {
  Norms n;
  double ss = 0;
  for (double e : w.values()) {
    n.sup = std::max(n.sup, std::abs(e));
    ss += e * e;
  }
  n.l2 = std::sqrt(ss * w.x_axis().spacing() / static_cast<double>(w.frames().size()));
  return n;
}

ReductionReport reduced_phase_residual(std::span<const PhaseSpaceDensity> series,
                                       std::span<const double> times, const PotentialSpec& u,
                                       const liouville::ReducedOptions& opt) {
  Pipelines p{u, u, std::nullopt, opt, {}};
  return collect(summarize_all(series, times, p), p, true, false);
}

ReductionReport reduced_tomo_residual(std::span<const PhaseSpaceDensity> series,
                                      std::span<const double> times, const PotentialSpec& u,
                                      const TomoLayout& layout) {
  Pipelines p{u, u, layout, {}, {}};
  return collect(summarize_all(series, times, p), p, false, true);
}

ReductionReport cross_consistency(std::span<const PhaseSpaceDensity> series,
                                  std::span<const double> times, const Pipelines& p) {
  if (!p.layout) throw ArgumentError("cross-consistency needs a tomographic layout");
  return collect(summarize_all(series, times, p), p, true, true);
}

ReductionReport stream_reduction(const GaussianSpec& f0, const std::vector<Grid1D>& axes,
                                 const Pipelines& p, const StreamConfig& cfg) {
  if (!(cfg.dt > 0)) throw ArgumentError("dt must be positive");
  if (cfg.sample_times.empty()) throw ArgumentError("no sample times");
  ReductionReport total;
  for (double t : cfg.sample_times) {
    if (t - cfg.dt < -1e-12) {
      std::ostringstream os;
      os << "sample time " << t << " needs a snapshot before t = 0";
      throw ArgumentError(os.str());
    }
    std::vector<Snapshot> w;
    for (int k = -1; k <= 1; ++k) {
      double tk = std::max(0.0, t + k * cfg.dt);
      auto f = liouville::evolve_density(f0, axes, p.phase, tk, cfg.propagator, cfg.evolve);
      w.push_back(summarize(f, t + k * cfg.dt, p, k == 0));
    }
    auto r = collect(w, p, true, p.layout.has_value());
    merge(total.residual_phase, r.residual_phase);
    merge(total.residual_tomo, r.residual_tomo);
    merge(total.cross_consistency, r.cross_consistency);
    total.boundary_terms = std::max(total.boundary_terms, r.boundary_terms);
    total.spread = std::max(total.spread, r.spread);
  }
  total.flagged = p.layout.has_value() && total.cross_consistency.sup > p.flag_threshold;
  return total;
}

double convergence_order(double e_coarse, double e_fine, double n_coarse, double n_fine) {
  if (!(e_coarse > 0) || !(e_fine > 0) || !(n_fine > n_coarse) || !(n_coarse > 0))
    throw ArgumentError("convergence order needs positive errors and n_fine > n_coarse");
  return std::log(e_coarse / e_fine) / std::log(n_fine / n_coarse);
}

}  // namespace tomokin::bogolyubov
