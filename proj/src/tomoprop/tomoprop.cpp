#include "tomokin/tomoprop/tomoprop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/fft.hpp"
#include "tomokin/numerics/spectral.hpp"
#include "tomokin/radon/checks.hpp"

namespace tomokin::tomoprop {
namespace {

using numerics::ZeroMode;
using Values = std::vector<double>;
constexpr double kPi = std::numbers::pi;

// Storage geometry of one particle inside a tomogram: values are indexed
// ((o * nF + f) * nX + x) * inner + i.
struct Slot {
  std::size_t outer = 1, nF = 0, nX = 0, inner = 1;
  std::size_t f_axis = 0, x_axis = 0;  // axes of the storage shape
};

Slot slot_of(const Tomogram& w, int particle) {
  if (particle < 0 || particle >= w.particles())
    throw ArgumentError("operator particle index out of range");
  auto shape = w.shape();
  Slot s;
  std::size_t a = 2 * static_cast<std::size_t>(particle);
  for (std::size_t k = 0; k < a; ++k) s.outer *= shape[k];
  for (std::size_t k = a + 2; k < shape.size(); ++k) s.inner *= shape[k];
  s.nF = shape[a];
  s.nX = shape[a + 1];
  s.f_axis = a;
  s.x_axis = a + 1;
  return s;
}

// v[idx] *= fn(frame, X index) for every entry of the particle's slot.
template <class Fn>
void scale(Values& v, const Slot& s, Fn&& fn) {
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t f = 0; f < s.nF; ++f)
      for (std::size_t x = 0; x < s.nX; ++x) {
        double c = fn(f, x);
        double* p = v.data() + ((o * s.nF + f) * s.nX + x) * s.inner;
        for (std::size_t i = 0; i < s.inner; ++i) p[i] *= c;
      }
}

void d_x(Values& v, const Tomogram& w, int j) {
  numerics::derivative_inplace(std::span<double>(v), w.shape(), 2 * j + 1, w.x_axis(j));
}

void d_x_inverse(Values& v, const Tomogram& w, int j) {
  numerics::inverse_derivative_inplace(std::span<double>(v), w.shape(), 2 * j + 1,
                                       w.x_axis(j), ZeroMode::Continuous);
}

// Storage shape with each lattice frame axis split into (mu, nu).
std::vector<std::size_t> split_shape(const Tomogram& w, int j, std::size_t& mu_axis) {
  std::vector<std::size_t> out;
  for (int k = 0; k < w.particles(); ++k) {
    const FrameSet& fs = w.frames(k);
    if (k == j) {
      mu_axis = out.size();
      out.push_back(fs.mu_axis().size());
      out.push_back(fs.nu_axis().size());
    } else {
      out.push_back(fs.size());
    }
    out.push_back(w.x_axis(k).size());
  }
  return out;
}

void require_resolved(const Values& v, const std::vector<std::size_t>& shape, std::size_t axis,
                      double tol, const char* name) {
  std::vector<numerics::cplx> c(v.begin(), v.end());
  numerics::dft_lines(c, shape, axis, -1);
  auto lay = numerics::line_layout(shape, axis);
  const std::size_t n = lay.n;
  double tail = 0, total = 0;
  for (std::size_t line = 0; line < lay.lines(); ++line) {
    std::size_t base = lay.base(line);
    for (std::size_t m = 0; m < n; ++m) {
      double e = std::norm(c[base + m * lay.inner]);
      long sm = m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
      total += e;
      if (4 * std::labs(sm) >= static_cast<long>(n)) tail += e;
    }
  }
  double frac = total > 0 ? tail / total : 0;
  if (frac > tol) {
    std::ostringstream msg;
    msg << "frame lattice too coarse for a spectral d/d" << name << ": tail energy " << frac;
    throw ResolutionError(msg.str());
  }
}

void d_lattice(Values& v, const Tomogram& w, int j, bool along_mu, double tol) {
  std::size_t mu_axis = 0;
  auto shape = split_shape(w, j, mu_axis);
  std::size_t axis = along_mu ? mu_axis : mu_axis + 1;
  const FrameSet& fs = w.frames(j);
  require_resolved(v, shape, axis, tol, along_mu ? "mu" : "nu");
  numerics::derivative_inplace(std::span<double>(v), shape, axis,
                               along_mu ? fs.mu_axis() : fs.nu_axis());
}

Values apply(OperatorKind kind, int j, const Tomogram& w, const Values& in,
             const OperatorOptions& opt) {
  const FrameSet& fs = w.frames(j);
  Slot s = slot_of(w, j);
  const Grid1D& xg = w.x_axis(j);
  Values v = in;
  switch (kind) {
    case OperatorKind::Dq:
    case OperatorKind::Dp: {
      d_x(v, w, j);
      bool q = kind == OperatorKind::Dq;
      scale(v, s, [&](std::size_t f, std::size_t) { return q ? fs[f].mu : fs[f].nu; });
      return v;
    }
    case OperatorKind::MultiplyByQ:
    case OperatorKind::MultiplyByP:
      break;
  }
  bool q = kind == OperatorKind::MultiplyByQ;
  switch (fs.scheme()) {
    case radon::FrameScheme::List:
      throw CapabilityError(
          "multiplication by q or p needs frame derivatives; list frames have none");
    case radon::FrameScheme::Lattice:
      d_lattice(v, w, j, q, opt.tail_tolerance);
      d_x_inverse(v, w, j);
      for (double& x : v) x = -x;
      return v;
    case radon::FrameScheme::Angular:
      break;
  }
  // Polar chart.
  const double r = fs.radius();
  numerics::derivative_inplace(std::span<double>(v), w.shape(), 2 * j, fs.theta_axis());
  d_x_inverse(v, w, j);
  Values xw = in;
  scale(xw, s, [&](std::size_t, std::size_t x) { return xg.point(x); });
  // (c_a X W + c_b (d/dX)^-1 dW/dth) / r with (c_a, c_b) = (cos, sin) for Q and
  // (sin, -cos) for P.
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t f = 0; f < s.nF; ++f) {
      double c = fs[f].mu / r, sn = fs[f].nu / r;
      double ca = q ? c : sn, cb = q ? sn : -c;
      for (std::size_t x = 0; x < s.nX; ++x) {
        std::size_t base = ((o * s.nF + f) * s.nX + x) * s.inner;
        for (std::size_t i = 0; i < s.inner; ++i)
          v[base + i] = (ca * xw[base + i] + cb * v[base + i]) / r;
      }
    }
  return v;
}

std::vector<double> operator_force(const PotentialSpec& u) {
  phasespace::validate(u);
  if (phasespace::is_pair(u))
    throw CapabilityError(
        "pair potentials have no lattice operator form; use the transform-domain route");
  if (const auto* poly = std::get_if<phasespace::Polynomial>(&u)) {
    int degree = -1;
    for (std::size_t k = 0; k < poly->coefficients.size(); ++k)
      if (poly->coefficients[k] != 0) degree = static_cast<int>(k);
    if (degree > kMaxOperatorDegree) {
      std::ostringstream msg;
      msg << "potential of degree " << degree << " exceeds the operator path (max "
          << kMaxOperatorDegree << "); use the transform-domain route";
      throw CapabilityError(msg.str());
    }
  }
  return phasespace::force_coefficients(phasespace::one_body_part(u));
}

void add(Values& acc, const Values& v, double c = 1) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
}

Values free_term(const Tomogram& w, const Values& v, int j, const OperatorOptions& opt) {
  Values out = apply(OperatorKind::Dq, j, w, apply(OperatorKind::MultiplyByP, j, w, v, opt), opt);
  for (double& x : out) x = -x;
  return out;
}

Values rhs_values(const Tomogram& w, const Values& v, const std::vector<double>& c,
                  const OperatorOptions& opt) {
  Values acc(v.size(), 0.0);
  for (int j = 0; j < w.particles(); ++j) {
    add(acc, free_term(w, v, j, opt));
    if (c.empty()) continue;
    // U'(Q) v by Horner, then Dp outermost so every frame keeps int dX = 0.
    Values r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c.back() * v[i];
    for (std::size_t k = c.size() - 1; k-- > 0;) {
      r = apply(OperatorKind::MultiplyByQ, j, w, r, opt);
      add(r, v, c[k]);
    }
    add(acc, apply(OperatorKind::Dp, j, w, r, opt));
  }
  return acc;
}

Values transform_rhs_values(const Tomogram& w, const Values& v, const PotentialSpec& u,
                            const TransformRoute& route) {
  if (w.particles() != 1) throw ArgumentError("transform-domain route is one-particle only");
  phasespace::validate(u);
  if (phasespace::is_pair(u)) throw CapabilityError("transform route takes one-body potentials");
  Values acc = free_term(w, v, 0, OperatorOptions{});
  auto inv = route.inverse;
  if (inv.cutoff == 0)
    inv.cutoff = route.cutoff_fraction * kPi / std::max(route.q.spacing(), route.p.spacing());
  auto f = radon::radon_inverse_raw(w.with_values(v), route.q, route.p, inv).values;
  const std::size_t n = route.q.size(), m = route.p.size();
  auto shape = f.shape();
  numerics::derivative_inplace(f.values(), shape, 1, route.p);
  auto one = phasespace::one_body_part(u);
  for (std::size_t i = 0; i < n; ++i) {
    double g = phasespace::one_body_derivative(one, route.q.point(i));
    for (std::size_t k = 0; k < m; ++k) f.values()[i * m + k] *= g;
  }
  add(acc, radon::radon_project(f, w.frames(), w.x_axis(), route.forward).storage());
  return acc;
}

double normalization_drift(const Tomogram& w, const Values& v) {
  auto shape = w.shape();
  if (w.particles() == 1) {
    const std::size_t nx = shape[1];
    const double h = w.x_axis().spacing();
    double worst = 0;
    for (std::size_t f = 0; f < shape[0]; ++f) {
      double s = 0;
      for (std::size_t x = 0; x < nx; ++x) s += v[f * nx + x];
      double e = std::abs(s * h - 1);
      if (!std::isfinite(e)) return INFINITY;
      worst = std::max(worst, e);
    }
    return worst;
  }
  const std::size_t F1 = shape[0], X1 = shape[1], F2 = shape[2], X2 = shape[3];
  const double h = w.x_axis(0).spacing() * w.x_axis(1).spacing();
  std::vector<double> sums(F1 * F2, 0.0);
  for (std::size_t a = 0; a < F1; ++a)
    for (std::size_t x = 0; x < X1; ++x)
      for (std::size_t b = 0; b < F2; ++b) {
        const double* row = v.data() + ((a * X1 + x) * F2 + b) * X2;
        double s = 0;
        for (std::size_t y = 0; y < X2; ++y) s += row[y];
        sums[a * F2 + b] += s;
      }
  double worst = 0;
  for (double s : sums) {
    double e = std::abs(s * h - 1);
    if (!std::isfinite(e)) return INFINITY;
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace

Tomogram apply_correspondence(const TomoOperator& op, const Tomogram& w,
                              const OperatorOptions& opt) {
  slot_of(w, op.particle);
  return w.with_values(apply(op.kind, op.particle, w, w.storage(), opt));
}

Tomogram tomographic_rhs(const Tomogram& w, const PotentialSpec& u, const OperatorOptions& opt) {
  auto c = operator_force(u);
  return w.with_values(rhs_values(w, w.storage(), c, opt));
}

Tomogram tomographic_rhs_transform(const Tomogram& w, const PotentialSpec& u,
                                   const TransformRoute& route) {
  return w.with_values(transform_rhs_values(w, w.storage(), u, route));
}

Tomogram evolve_tomogram(const Tomogram& w0, const PotentialSpec& u, const TomoPDEConfig& cfg,
                         TomoEvolveStats* stats) {
  if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) throw ArgumentError("dt must be positive");
  if (!(cfg.t_final >= 0) || !std::isfinite(cfg.t_final))
    throw ArgumentError("t_final must be nonnegative");
  std::vector<double> c;
  if (!cfg.transform) c = operator_force(u);
  auto rhs = [&](const Values& v) {
    return cfg.transform ? transform_rhs_values(w0, v, u, *cfg.transform)
                         : rhs_values(w0, v, c, cfg.operators);
  };
  Values v = w0.storage();
  TomoEvolveStats st;
  if (cfg.t_final > 0) {
    std::size_t n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg.t_final / cfg.dt - 1e-9)));
    double h = cfg.t_final / static_cast<double>(n);
    Values tmp(v.size());
    for (std::size_t step = 0; step < n; ++step) {
      Values k1 = rhs(v);
      for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
      Values k2 = rhs(tmp);
      for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
      Values k3 = rhs(tmp);
      for (std::size_t i = 0; i < v.size(); ++i) tmp[i] = v[i] + h * k3[i];
      Values k4 = rhs(tmp);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      double drift = normalization_drift(w0, v);
      if (!(drift <= cfg.instability_tolerance)) {
        std::ostringstream msg;
        msg << "tomogram normalization drifted by " << drift << " at step " << step + 1;
        throw InstabilityError(msg.str(), step + 1);
      }
      st.steps = step + 1;
    }
  }
  st.max_drift = normalization_drift(w0, v);
  if (stats) *stats = st;
  return w0.with_values(std::move(v));
}

Tomogram analytic_tomo_flow(const Tomogram& w0, const PotentialSpec& u, double t,
                            const CoverageOptions& opt, double* fraction_lost) {
  if (w0.particles() != 1) throw ArgumentError("analytic_tomo_flow is one-particle only");
  if (!std::isfinite(t)) throw ArgumentError("flow time must be finite");
  phasespace::validate(u);
  double omega = 0;
  if (const auto* h = std::get_if<phasespace::Harmonic>(&u))
    omega = h->omega;
  else if (!std::holds_alternative<phasespace::Free>(u))
    throw CapabilityError("analytic tomographic flow exists for free and harmonic motion only");
  if (fraction_lost) *fraction_lost = 0;
  if (t == 0) return w0;

  const FrameSet& fs = w0.frames();
  const Grid1D& xg = w0.x_axis();
  radon::TomogramSampler sampler(w0, opt.order);
  const double co = std::cos(omega * t), si = std::sin(omega * t);
  std::vector<double> out(w0.storage().size(), 0.0);
  std::size_t lost = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double mu = fs[i].mu, nu = fs[i].nu, m0, n0;
    if (omega == 0) {
      m0 = mu;
      n0 = nu + mu * t;
    } else {
      m0 = mu * co - nu * omega * si;
      n0 = mu * si / omega + nu * co;
    }
    for (std::size_t k = 0; k < xg.size(); ++k) {
      auto v = sampler.extended(xg.point(k), m0, n0);
      if (v)
        out[i * xg.size() + k] = *v;
      else
        ++lost;
    }
  }
  double frac = static_cast<double>(lost) / static_cast<double>(out.size());
  if (fraction_lost) *fraction_lost = frac;
  if (frac > opt.max_fraction_lost) {
    std::ostringstream msg;
    msg << "characteristic preimages leave the frame set for a fraction " << frac
        << " of the entries";
    throw CoverageError(msg.str(), frac);
  }
  return w0.with_values(std::move(out));
}

DiagramNorms tomogram_distance(const Tomogram& a, const Tomogram& b) {
  if (a.shape() != b.shape()) throw ArgumentError("tomograms differ in shape");
  DiagramNorms n;
  double sq = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    double e = a.values()[i] - b.values()[i];
    n.sup = std::max(n.sup, std::abs(e));
    sq += e * e;
  }
  double h = 1;
  std::size_t frames = 1;
  for (int j = 0; j < a.particles(); ++j) {
    h *= a.x_axis(j).spacing();
    frames *= a.frames(j).size();
  }
  n.l2 = std::sqrt(sq * h / static_cast<double>(frames));
  return n;
}

DiagramNorms commuting_diagram_error(const PhaseSpaceDensity& f0, const PotentialSpec& u,
                                     double t, const DiagramSetup& setup) {
  auto ft = liouville::evolve_density(f0, u, t, setup.phase);
  auto lhs = radon::radon_forward_direct(ft, setup.frames, setup.x, setup.forward);
  TomoPDEConfig cfg = setup.tomo;
  cfg.t_final = t;
  auto rhs = evolve_tomogram(radon::radon_forward_direct(f0, setup.frames, setup.x, setup.forward),
                             u, cfg);
  return tomogram_distance(lhs, rhs);
}

}  // namespace tomokin::tomoprop
