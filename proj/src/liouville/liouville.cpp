#include "tomokin/liouville/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/interp.hpp"
#include "tomokin/numerics/spectral.hpp"

namespace tomokin::liouville {
namespace {

using phasespace::AffineForce;

void check_state(const FlowState& s) {
  if (s.q.empty() || s.q.size() != s.p.size())
    throw ArgumentError("flow state needs matching nonempty q and p");
  for (std::size_t j = 0; j < s.q.size(); ++j)
    if (!std::isfinite(s.q[j]) || !std::isfinite(s.p[j]))
      throw ArgumentError("flow state has non-finite components");
}

bool escaped(const FlowState& s, double box) {
  for (std::size_t j = 0; j < s.q.size(); ++j)
    if (!(std::abs(s.q[j]) <= box) || !(std::abs(s.p[j]) <= box)) return true;
  return false;
}

// One step of the chosen scheme; g is scratch of the same length as q.
void step(FlowState& s, const PotentialSpec& u, double h, Scheme scheme,
          std::vector<double>& g, std::vector<double>& work) {
  const std::size_t n = s.q.size();
  if (scheme == Scheme::Verlet) {
    phasespace::gradient(u, s.q, g);
    for (std::size_t j = 0; j < n; ++j) s.p[j] -= 0.5 * h * g[j];
    for (std::size_t j = 0; j < n; ++j) s.q[j] += h * s.p[j];
    phasespace::gradient(u, s.q, g);
    for (std::size_t j = 0; j < n; ++j) s.p[j] -= 0.5 * h * g[j];
    return;
  }
  // work holds k1..k4 for q and p, then the trial position.
  work.resize(9 * n);
  double* kq = work.data();
  double* kp = kq + 4 * n;
  double* qt = kp + 4 * n;
  for (int stage = 0; stage < 4; ++stage) {
    double c = stage == 0 ? 0 : (stage == 3 ? 1.0 : 0.5);
    for (std::size_t j = 0; j < n; ++j) {
      double dq = stage == 0 ? 0 : kq[(stage - 1) * n + j];
      qt[j] = s.q[j] + c * h * dq;
    }
    phasespace::gradient(u, std::span<const double>(qt, n), g);
    for (std::size_t j = 0; j < n; ++j) {
      double dp = stage == 0 ? 0 : kp[(stage - 1) * n + j];
      kq[stage * n + j] = s.p[j] + c * h * dp;
      kp[stage * n + j] = -g[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    s.q[j] += h / 6 * (kq[j] + 2 * kq[n + j] + 2 * kq[2 * n + j] + kq[3 * n + j]);
    s.p[j] += h / 6 * (kp[j] + 2 * kp[n + j] + 2 * kp[2 * n + j] + kp[3 * n + j]);
  }
}

std::size_t step_count(double t, double dt) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t) / dt - 1e-9)));
}

// Density layout (q1, p1, q2, p2) <-> flow state.
void to_state(const double* z, std::size_t n, FlowState& s) {
  for (std::size_t j = 0; j < n; ++j) {
    s.q[j] = z[2 * j];
    s.p[j] = z[2 * j + 1];
  }
}
void from_state(const FlowState& s, double* z) {
  for (std::size_t j = 0; j < s.q.size(); ++j) {
    z[2 * j] = s.q[j];
    z[2 * j + 1] = s.p[j];
  }
}

// The whole flow map as z -> M z + c when the force is affine. The scheme is
// affine in the state too, so this reproduces per-node integration exactly.
struct AffineMap {
  std::vector<double> M, c;
};

AffineMap affine_map(std::size_t particles, const PotentialSpec& u, double t,
                     const PropagatorConfig& cfg) {
  const std::size_t d = 2 * particles;
  PropagatorConfig loose = cfg;
  loose.safety_box = INFINITY;
  FlowState s{std::vector<double>(particles), std::vector<double>(particles)};
  std::vector<double> z(d, 0.0), out(d);
  AffineMap m{std::vector<double>(d * d), std::vector<double>(d)};
  FlowState r = hamiltonian_flow(s, u, t, loose);
  from_state(r, m.c.data());
  for (std::size_t col = 0; col < d; ++col) {
    std::fill(z.begin(), z.end(), 0.0);
    z[col] = 1;
    to_state(z.data(), particles, s);
    r = hamiltonian_flow(s, u, t, loose);
    from_state(r, out.data());
    for (std::size_t row = 0; row < d; ++row) m.M[row * d + col] = out[row] - m.c[row];
  }
  return m;
}

class GridSampler {
 public:
  GridSampler(const RealField& f, int order) : f_(f), order_(order) {}

  double operator()(const double* z) const {
    const std::size_t rank = f_.rank();
    numerics::Stencil st[4];
    long n[4];
    for (std::size_t a = 0; a < rank; ++a) {
      const Grid1D& g = f_.axis(a);
      n[a] = static_cast<long>(g.size());
      double t = g.index_of(z[a]);
      if (t < -order_ || t > static_cast<double>(n[a]) + order_) return 0;
      st[a] = numerics::lagrange_stencil(t, order_);
    }
    auto v = f_.values();
    if (rank == 2) {
      double acc = 0;
      for (int i = 0; i < st[0].count; ++i) {
        long a = st[0].first + i;
        if (a < 0 || a >= n[0]) continue;
        double row = 0;
        for (int j = 0; j < st[1].count; ++j) {
          long b = st[1].first + j;
          if (b < 0 || b >= n[1]) continue;
          row += st[1].w[j] * v[static_cast<std::size_t>(a * n[1] + b)];
        }
        acc += st[0].w[i] * row;
      }
      return acc;
    }
    double acc = 0;
    for (int i = 0; i < st[0].count; ++i) {
      long a = st[0].first + i;
      if (a < 0 || a >= n[0]) continue;
      for (int j = 0; j < st[1].count; ++j) {
        long b = st[1].first + j;
        if (b < 0 || b >= n[1]) continue;
        double wab = st[0].w[i] * st[1].w[j];
        for (int k = 0; k < st[2].count; ++k) {
          long c = st[2].first + k;
          if (c < 0 || c >= n[2]) continue;
          std::size_t base = static_cast<std::size_t>(((a * n[1] + b) * n[2] + c) * n[3]);
          double row = 0;
          for (int l = 0; l < st[3].count; ++l) {
            long e = st[3].first + l;
            if (e < 0 || e >= n[3]) continue;
            row += st[3].w[l] * v[base + static_cast<std::size_t>(e)];
          }
          acc += wab * st[2].w[k] * row;
        }
      }
    }
    return acc;
  }

 private:
  const RealField& f_;
  int order_;
};

template <class Eval>
PhaseSpaceDensity evolve(const std::vector<Grid1D>& axes, Eval&& f0, const PotentialSpec& u,
                         double t, const PropagatorConfig& cfg, const EvolveOptions& opt,
                         EvolveStats* stats) {
  validate(cfg);
  phasespace::validate(u);
  if (!std::isfinite(t)) throw ArgumentError("evolve_density: time must be finite");
  const std::size_t rank = axes.size();
  if (rank != 2 && rank != 4) throw ArgumentError("evolve_density needs 1 or 2 particles");
  const std::size_t particles = rank / 2;
  RealField out(axes);
  auto shape = out.shape();
  const std::size_t inner = out.size() / shape[0];

  AffineForce af;
  bool affine = phasespace::affine_force(u, particles, af);
  AffineMap map;
  if (affine && t != 0) map = affine_map(particles, u, -t, cfg);

  auto values = out.values();
  numerics::parallel_for(opt.exec, shape[0], [&](std::size_t i0) {
    double z[4], z0[4];
    std::size_t idx[4];
    FlowState s{std::vector<double>(particles), std::vector<double>(particles)};
    for (std::size_t r = 0; r < inner; ++r) {
      std::size_t flat = i0 * inner + r, rem = flat;
      for (std::size_t a = rank; a-- > 0;) {
        idx[a] = rem % shape[a];
        rem /= shape[a];
      }
      for (std::size_t a = 0; a < rank; ++a) z[a] = axes[a].point(idx[a]);
      if (t == 0) {
        std::copy(z, z + rank, z0);
      } else if (affine) {
        for (std::size_t a = 0; a < rank; ++a) {
          double acc = map.c[a];
          for (std::size_t b = 0; b < rank; ++b) acc += map.M[a * rank + b] * z[b];
          z0[a] = acc;
        }
        for (std::size_t a = 0; a < rank; ++a)
          if (!(std::abs(z0[a]) <= cfg.safety_box))
            throw DivergenceError("characteristic left the safety box");
      } else {
        to_state(z, particles, s);
        s = hamiltonian_flow(std::move(s), u, -t, cfg);
        from_state(s, z0);
      }
      values[flat] = f0(z0);
    }
  });

  double sum = 0, lo = 0;
  for (double v : values) {
    sum += v;
    lo = std::min(lo, v);
  }
  double cell = 1;
  for (const auto& g : axes) cell *= g.spacing();
  double mass = sum * cell, drift = mass - 1;
  if (stats) *stats = EvolveStats{drift, lo, affine};
  if (!std::isfinite(mass) || std::abs(drift) > opt.drift_tolerance) {
    std::ostringstream msg;
    msg << "evolved density lost normalization: drift " << drift
        << " (grid or dt too coarse, or the flow leaves the box)";
    throw ResolutionError(msg.str());
  }
  if (lo < -opt.negativity_tolerance) {
    std::ostringstream msg;
    msg << "evolved density undershoots to " << lo;
    throw ResolutionError(msg.str());
  }
  double scale = 1 / mass;
  for (double& v : values) v = std::max(v, 0.0) * scale;
  return PhaseSpaceDensity::from_field(std::move(out));
}

void require_same_axes(const PhaseSpaceDensity& a, const PhaseSpaceDensity& b) {
  if (a.field().axes() != b.field().axes())
    throw ArgumentError("snapshots must share one grid");
}

}  // namespace

void validate(const PropagatorConfig& cfg) {
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw ArgumentError("dt must be positive");
  if (!(cfg.t_final >= 0) || !std::isfinite(cfg.t_final))
    throw ArgumentError("t_final must be nonnegative");
  if (cfg.t_final > 0 && cfg.dt > cfg.t_final) throw ArgumentError("dt exceeds t_final");
  if (!(cfg.safety_box > 0)) throw ArgumentError("safety box must be positive");
}

FlowState hamiltonian_flow(FlowState state, const PotentialSpec& u, double t,
                           const PropagatorConfig& cfg) {
  check_state(state);
  if (!(cfg.dt > 0)) throw ArgumentError("dt must be positive");
  if (!std::isfinite(t)) throw ArgumentError("flow time must be finite");
  if (t == 0) return state;
  std::size_t n = step_count(t, cfg.dt);
  double h = t / static_cast<double>(n);
  std::vector<double> g(state.q.size()), work;
  for (std::size_t k = 0; k < n; ++k) {
    step(state, u, h, cfg.scheme, g, work);
    if (escaped(state, cfg.safety_box)) {
      std::ostringstream msg;
      msg << "trajectory left the safety box " << cfg.safety_box << " at step " << k + 1;
      throw DivergenceError(msg.str());
    }
  }
  return state;
}

PhaseSpaceDensity evolve_density(const PhaseSpaceDensity& f0, const PotentialSpec& u,
                                 double t, const PropagatorConfig& cfg,
                                 const EvolveOptions& opt, EvolveStats* stats) {
  if (t == 0) {
    validate(cfg);
    if (stats) *stats = EvolveStats{numerics::integrate_all(f0.field()) - 1, 0, false};
    return f0;
  }
  GridSampler sample(f0.field(), opt.order);
  return evolve(f0.field().axes(), sample, u, t, cfg, opt, stats);
}

PhaseSpaceDensity evolve_density(const GaussianSpec& f0, const std::vector<Grid1D>& axes,
                                 const PotentialSpec& u, double t,
                                 const PropagatorConfig& cfg, const EvolveOptions& opt,
                                 EvolveStats* stats) {
  if (f0.dimension() != axes.size())
    throw ArgumentError("Gaussian dimension does not match the grid");
  phasespace::GaussianPdf pdf(f0);
  return evolve(axes, [&](const double* z) { return pdf(z); }, u, t, cfg, opt, stats);
}

RealField liouville_residual_field(const PhaseSpaceDensity& before,
                                   const PhaseSpaceDensity& at,
                                   const PhaseSpaceDensity& after, double dt,
                                   const PotentialSpec& u) {
  require_same_axes(before, at);
  require_same_axes(after, at);
  if (!(dt > 0)) throw ArgumentError("snapshot spacing must be positive");
  const RealField& f = at.field();
  const std::size_t rank = f.rank(), particles = rank / 2;
  auto shape = f.shape();
  RealField r(f.axes());
  auto rv = r.values();
  auto b = before.values(), a = after.values();
  for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = (a[i] - b[i]) / (2 * dt);

  std::vector<std::vector<double>> dq(particles), dp(particles);
  for (std::size_t j = 0; j < particles; ++j) {
    dq[j] = f.storage();
    numerics::derivative_inplace(std::span<double>(dq[j]), shape, 2 * j, f.axis(2 * j));
    dp[j] = f.storage();
    numerics::derivative_inplace(std::span<double>(dp[j]), shape, 2 * j + 1, f.axis(2 * j + 1));
  }
  std::vector<double> q(particles), p(particles), g(particles);
  std::size_t idx[4];
  for (std::size_t flat = 0; flat < rv.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t ax = rank; ax-- > 0;) {
      idx[ax] = rem % shape[ax];
      rem /= shape[ax];
    }
    for (std::size_t j = 0; j < particles; ++j) {
      q[j] = f.axis(2 * j).point(idx[2 * j]);
      p[j] = f.axis(2 * j + 1).point(idx[2 * j + 1]);
    }
    phasespace::gradient(u, q, g);
    double acc = 0;
    for (std::size_t j = 0; j < particles; ++j) acc += p[j] * dq[j][flat] - g[j] * dp[j][flat];
    rv[flat] += acc;
  }
  return r;
}

ResidualNorms liouville_residual(std::span<const PhaseSpaceDensity> series,
                                 std::span<const double> times, const PotentialSpec& u) {
  if (series.size() < 3) throw ArgumentError("liouville_residual needs at least 3 snapshots");
  if (times.size() != series.size()) throw ArgumentError("one time per snapshot");
  double dt = times[1] - times[0];
  for (std::size_t k = 1; k + 1 < times.size(); ++k)
    if (std::abs(times[k + 1] - times[k] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw ArgumentError("snapshots must be uniformly spaced in time");
  ResidualNorms out;
  for (std::size_t k = 1; k + 1 < series.size(); ++k) {
    RealField r = liouville_residual_field(series[k - 1], series[k], series[k + 1], dt, u);
    double sup = 0, sq = 0;
    for (double v : r.values()) {
      sup = std::max(sup, std::abs(v));
      sq += v * v;
    }
    out.sup = std::max(out.sup, sup);
    out.l2 = std::max(out.l2, std::sqrt(sq * series[k].cell_volume()));
  }
  return out;
}

namespace {

struct PairParts {
  const phasespace::Pair* pair = nullptr;
  phasespace::OneBody external;
};

PairParts pair_parts(const PotentialSpec& u) {
  PairParts out;
  if (const auto* pr = std::get_if<phasespace::Pair>(&u)) {
    out.pair = pr;
    out.external = pr->external;
  } else {
    out.external = phasespace::one_body_part(u);
  }
  return out;
}

double kernel(const PairParts& pp, double d) {
  return pp.pair ? phasespace::pair_kernel(*pp.pair, d) : 0.0;
}

void require_two_particles(const RealField& f) {
  if (f.rank() != 4) throw ArgumentError("reduced terms need a two-particle density");
}

}  // namespace

RealField reduced_force(const RealField& f, const PotentialSpec& u) {
  require_two_particles(f);
  phasespace::validate(u);
  PairParts pp = pair_parts(u);
  const Grid1D &gq1 = f.axis(0), &gp1 = f.axis(1), &gq2 = f.axis(2), &gp2 = f.axis(3);
  const std::size_t n0 = gq1.size(), n1 = gp1.size(), n2 = gq2.size(), n3 = gp2.size();
  auto v = f.values();

  // g(q1, p1, q2) = int f dp2, then moved half a cell in q2 so that the
  // kernel's singular set q1 = q2 is never sampled.
  std::vector<double> g(n0 * n1 * n2);
  const double hp2 = gp2.spacing(), hq2 = gq2.spacing();
  for (std::size_t r = 0; r < g.size(); ++r) {
    const double* row = v.data() + r * n3;
    double s = 0;
    for (std::size_t l = 0; l < n3; ++l) s += row[l];
    g[r] = s * hp2;
  }
  std::vector<double> marginal(n0 * n1, 0.0);
  for (std::size_t r = 0; r < n0 * n1; ++r) {
    double s = 0;
    for (std::size_t k = 0; k < n2; ++k) s += g[r * n2 + k];
    marginal[r] = s * hq2;
  }
  std::size_t gshape[] = {n0, n1, n2};
  numerics::shift_inplace(std::span<double>(g), gshape, 2, gq2, 0.5 * hq2);

  std::vector<double> table(n0 * n2);
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t k = 0; k < n2; ++k)
      table[i * n2 + k] = kernel(pp, gq1.point(i) - gq2.point(k) - 0.5 * hq2);

  RealField out({gq1, gp1});
  auto o = out.values();
  for (std::size_t i = 0; i < n0; ++i) {
    double ext = phasespace::one_body_derivative(pp.external, gq1.point(i));
    for (std::size_t j = 0; j < n1; ++j) {
      const double* row = g.data() + (i * n1 + j) * n2;
      double s = 0;
      for (std::size_t k = 0; k < n2; ++k) s += table[i * n2 + k] * row[k];
      o[i * n1 + j] = s * hq2 + ext * marginal[i * n1 + j];
    }
  }
  std::size_t oshape[] = {n0, n1};
  numerics::derivative_inplace(o, oshape, 1, gp1);
  for (double& x : o) x = -x;
  return out;
}

ReducedTerms reduced_rhs_2p(const PhaseSpaceDensity& f, const PotentialSpec& u,
                            const ReducedOptions& opt) {
  const RealField& F = f.field();
  require_two_particles(F);
  if (!phasespace::is_pair(u)) throw ArgumentError("reduced_rhs_2p needs a pair potential");
  PairParts pp = pair_parts(u);
  const Grid1D &gq1 = F.axis(0), &gp1 = F.axis(1), &gq2 = F.axis(2), &gp2 = F.axis(3);
  const std::size_t n0 = gq1.size(), n1 = gp1.size(), n2 = gq2.size(), n3 = gp2.size();
  auto v = F.values();

  ReducedTerms t{RealField({gq1, gp1}), RealField(), RealField({gq1, gp1}), 0, 0};
  auto tr = t.transport.values(), in = t.interaction.values();
  const double hq2 = gq2.spacing(), hp2 = gp2.spacing();
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      const double* blk = v.data() + (i * n1 + j) * n2 * n3;
      double a = 0;
      for (std::size_t l = 0; l < n3; ++l)
        a += gp2.point(l) * (blk[(n2 - 1) * n3 + l] - blk[l]);
      double b = 0;
      for (std::size_t k = 0; k < n2; ++k)
        b += kernel(pp, gq1.point(i) - gq2.point(k)) * (blk[k * n3 + n3 - 1] - blk[k * n3]);
      tr[i * n1 + j] = a * hp2;
      in[i * n1 + j] = b * hq2;
    }
  for (double x : tr) t.transport_sup = std::max(t.transport_sup, std::abs(x));
  for (double x : in) t.interaction_sup = std::max(t.interaction_sup, std::abs(x));
  double worst = std::max(t.transport_sup, t.interaction_sup);
  if (!(worst <= opt.boundary_tolerance)) {
    std::ostringstream msg;
    msg << "boundary terms do not vanish: transport " << t.transport_sup << ", interaction "
        << t.interaction_sup << " (box too small)";
    throw BoxSizeError(msg.str(), worst);
  }
  t.force = reduced_force(F, u);
  return t;
}

}  // namespace tomokin::liouville
