#include "tomokin/radon/inverse.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spectrum.hpp"
#include "tomokin/errors.hpp"

namespace tomokin::radon {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct Characteristic {
  std::vector<double> mu, nu;
  double dmu = 0, dnu = 0;
  std::vector<cplx> G;  // [mu][nu]
};

// Periodic interpolation kernel on n equispaced nodes (n even).
double dirichlet(double x, std::size_t n) {
  double half = 0.5 * x;
  double s = std::sin(half);
  if (std::abs(s) < 1e-14) return 1;
  return std::sin(static_cast<double>(n) * half) * std::cos(half) / (static_cast<double>(n) * s);
}

Characteristic from_lattice(const Tomogram& w, const InverseOptions& opt) {
  const FrameSet& fs = w.frames();
  const Grid1D& x = w.x_axis();
  Characteristic c;
  c.mu = fs.mu_axis().points();
  c.nu = fs.nu_axis().points();
  c.dmu = fs.mu_axis().spacing();
  c.dnu = fs.nu_axis().spacing();
  std::vector<cplx> e(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) e[k] = std::polar(x.spacing(), x.point(k));
  c.G.resize(fs.size());
  numerics::parallel_for(opt.exec, fs.size(), [&](std::size_t i) {
    auto r = w.row(i);
    cplx s{};
    for (std::size_t k = 0; k < x.size(); ++k) s += r[k] * e[k];
    c.G[i] = s;
  });
  return c;
}

std::vector<double> reciprocal(const Grid1D& g) {
  std::vector<double> k;
  long half = static_cast<long>(g.size() / 2);
  for (long m = -half + 1; m < half; ++m) k.push_back(2 * kPi * static_cast<double>(m) / g.length());
  return k;
}

Characteristic from_angular(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                            const InverseOptions& opt) {
  const FrameSet& fs = w.frames();
  const Grid1D& x = w.x_axis();
  const std::size_t nt = fs.size();
  const double r = fs.radius(), dth = 2 * kPi / static_cast<double>(nt);
  std::vector<detail::Spectrum1D> rows;
  rows.reserve(nt);
  for (std::size_t j = 0; j < nt; ++j) rows.emplace_back(w.row(j).data(), 1, x, opt.padding, +1);
  Characteristic c;
  c.mu = reciprocal(q);
  c.nu = reciprocal(p);
  c.dmu = 2 * kPi / q.length();
  c.dnu = 2 * kPi / p.length();
  const std::size_t na = c.mu.size(), nb = c.nu.size();
  c.G.assign(na * nb, cplx{});
  const double kmax = rows[0].nyquist();
  numerics::parallel_for(opt.exec, na, [&](std::size_t a) {
    for (std::size_t b = 0; b < nb; ++b) {
      double mu = c.mu[a], nu = c.nu[b];
      double s = std::hypot(mu, nu);
      if (s == 0) {
        cplx mean{};
        for (std::size_t j = 0; j < nt; ++j) mean += rows[j].at(0, opt.order);
        c.G[a * nb + b] = mean / static_cast<double>(nt);
        continue;
      }
      double kappa = s / r;
      if (kappa >= kmax) continue;
      double th = std::atan2(nu, mu);
      if (th < 0) th += 2 * kPi;
      double t = th / dth;
      double tr = std::nearbyint(t);
      cplx acc{};
      if (std::abs(t - tr) < 1e-12) {
        acc = rows[static_cast<std::size_t>(tr) % nt].at(kappa, opt.order);
      } else {
        for (std::size_t j = 0; j < nt; ++j)
          acc += dirichlet(th - static_cast<double>(j) * dth, nt) * rows[j].at(kappa, opt.order);
      }
      c.G[a * nb + b] = acc;
    }
  });
  return c;
}

Characteristic characteristic(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                              const InverseOptions& opt) {
  if (w.particles() != 1) throw ArgumentError("inversion needs a one-particle tomogram");
  switch (w.frames().scheme()) {
    case FrameScheme::Lattice:
      return from_lattice(w, opt);
    case FrameScheme::Angular:
      return from_angular(w, q, p, opt);
    case FrameScheme::List:
      break;
  }
  throw CapabilityError("inversion needs a frame lattice or an angular frame set");
}

}  // namespace

RawInverse radon_inverse_raw(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                             const InverseOptions& opt) {
  Characteristic c = characteristic(w, q, p, opt);
  const std::size_t na = c.mu.size(), nb = c.nu.size(), nq = q.size(), np = p.size();
  if (opt.cutoff > 0)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b)
        c.G[a * nb + b] *= std::exp(-36 * std::pow(std::hypot(c.mu[a], c.nu[b]) / opt.cutoff, 16));
  // H[a][j] = sum_b G[a][b] exp(-i nu_b p_j) dnu
  std::vector<cplx> ep(nb * np), H(na * np);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t j = 0; j < np; ++j) ep[b * np + j] = std::polar(c.dnu, -c.nu[b] * p.point(j));
  numerics::parallel_for(opt.exec, na, [&](std::size_t a) {
    cplx* h = H.data() + a * np;
    for (std::size_t b = 0; b < nb; ++b) {
      cplx g = c.G[a * nb + b];
      if (g == cplx{}) continue;
      const cplx* e = ep.data() + b * np;
      for (std::size_t j = 0; j < np; ++j) h[j] += g * e[j];
    }
  });
  RawInverse out{RealField({q, p}), 0};
  std::vector<double> imag(nq, 0);
  const double pre = c.dmu / (4 * kPi * kPi);
  numerics::parallel_for(opt.exec, nq, [&](std::size_t i) {
    std::vector<cplx> row(np);
    for (std::size_t a = 0; a < na; ++a) {
      cplx e = std::polar(pre, -c.mu[a] * q.point(i));
      const cplx* h = H.data() + a * np;
      for (std::size_t j = 0; j < np; ++j) row[j] += e * h[j];
    }
    for (std::size_t j = 0; j < np; ++j) {
      out.values[i * np + j] = row[j].real();
      imag[i] = std::max(imag[i], std::abs(row[j].imag()));
    }
  });
  for (double m : imag) out.max_imag = std::max(out.max_imag, m);
  return out;
}

PhaseSpaceDensity radon_inverse(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                                const InverseOptions& opt) {
  RawInverse raw = radon_inverse_raw(w, q, p, opt);
  double lo = 0;
  for (double v : raw.values.values()) lo = std::min(lo, v);
  if (raw.max_imag > opt.imag_tolerance || lo < -opt.negativity_clip) {
    std::ostringstream os;
    os << "inversion quality: imaginary residue " << raw.max_imag << ", min value " << lo;
    throw InversionQualityError(os.str(), raw.max_imag, lo);
  }
  for (double& v : raw.values.values())
    if (v < 0) v = 0;
  try {
    return PhaseSpaceDensity::from_field(std::move(raw.values),
                                         {0.0, opt.normalization_tolerance});
  } catch (const ArgumentError& e) {
    throw InversionQualityError(std::string("inversion quality: ") + e.what(), raw.max_imag, lo);
  }
}

PositivityReport check_positivity(const Tomogram& w, const Grid1D& q, const Grid1D& p,
                                  std::span<const std::array<double, 2>> probes,
                                  const InverseOptions& opt) {
  Characteristic c = characteristic(w, q, p, opt);
  const std::size_t na = c.mu.size(), nb = c.nu.size();
  PositivityReport r;
  r.probes = probes.size();
  r.min_value = INFINITY;
  const double pre = c.dmu * c.dnu / (4 * kPi * kPi);
  for (const auto& z : probes) {
    cplx s{};
    for (std::size_t a = 0; a < na; ++a) {
      cplx row{};
      for (std::size_t b = 0; b < nb; ++b)
        row += c.G[a * nb + b] * std::polar(1.0, -c.nu[b] * z[1]);
      s += row * std::polar(1.0, -c.mu[a] * z[0]);
    }
    s *= pre;
    r.max_imag = std::max(r.max_imag, std::abs(s.imag()));
    if (s.real() < r.min_value) {
      r.min_value = s.real();
      r.argmin_q = z[0];
      r.argmin_p = z[1];
    }
  }
  if (r.max_imag > opt.imag_tolerance) {
    std::ostringstream os;
    os << "positivity probe: imaginary residue " << r.max_imag;
    throw InversionQualityError(os.str(), r.max_imag, r.min_value);
  }
  return r;
}

}  // namespace tomokin::radon
