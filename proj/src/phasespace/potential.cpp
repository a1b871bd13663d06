#include "tomokin/phasespace/potential.hpp"

#include <cmath>
#include <string>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/interp.hpp"
#include "tomokin/numerics/spectral.hpp"

namespace tomokin::phasespace {
namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

std::size_t degree(const Polynomial& p) {
  std::size_t d = p.coefficients.size();
  while (d > 0 && p.coefficients[d - 1] == 0) --d;
  return d == 0 ? 0 : d - 1;
}

double horner(const std::vector<double>& c, double x) {
  double s = 0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

std::vector<double> derivative_coefficients(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
  return d;
}

void validate_polynomial(const Polynomial& p, const char* what) {
  for (double c : p.coefficients)
    if (!std::isfinite(c)) throw ArgumentError(std::string(what) + ": non-finite coefficient");
  if (degree(p) > 6)
    throw ArgumentError(std::string(what) + ": polynomial degree exceeds 6");
}

void validate_one_body(const OneBody& v) {
  std::visit(overloaded{[](const Free&) {},
                        [](const Harmonic& h) {
                          if (!(h.omega > 0) || !std::isfinite(h.omega))
                            throw ArgumentError("harmonic frequency must be positive");
                        },
                        [](const Polynomial& p) { validate_polynomial(p, "polynomial potential"); }},
             v);
}

// Reflected sample index on the period 2(m-1): even (sign +1) or odd (-1).
double reflected(const std::vector<double>& s, long k, bool odd) {
  long m = static_cast<long>(s.size()), period = 2 * (m - 1);
  long j = k % period;
  if (j < 0) j += period;
  if (j <= m - 1) return s[static_cast<std::size_t>(j)];
  double v = s[static_cast<std::size_t>(period - j)];
  return odd ? -v : v;
}

double interpolate_reflected(const std::vector<double>& s, double t, bool odd) {
  numerics::Stencil st = numerics::lagrange_stencil(t, 8);
  double acc = 0;
  for (int k = 0; k < st.count; ++k) acc += st.w[k] * reflected(s, st.first + k, odd);
  return acc;
}

}  // namespace

TabulatedProfile::TabulatedProfile(double dr, std::vector<double> samples)
    : dr_(dr), samples_(std::move(samples)) {
  if (!(dr > 0)) throw ArgumentError("tabulated profile spacing must be positive");
  if (samples_.size() < 4) throw ArgumentError("tabulated profile needs >= 4 samples");
  for (double v : samples_)
    if (!std::isfinite(v)) throw ArgumentError("tabulated profile has non-finite sample");
  std::size_t m = samples_.size(), period = 2 * (m - 1);
  std::vector<double> ext(period);
  for (std::size_t k = 0; k < period; ++k) ext[k] = reflected(samples_, static_cast<long>(k), false);
  numerics::Grid1D g(0, dr * static_cast<double>(period), period);
  std::vector<std::size_t> shape{period};
  numerics::derivative_inplace(std::span<double>(ext), shape, 0, g);
  slope_.assign(ext.begin(), ext.begin() + static_cast<long>(m));
}

double TabulatedProfile::value(double r) const {
  if (r < 0 || r > r_max()) throw ArgumentError("pair distance outside tabulated range");
  return interpolate_reflected(samples_, r / dr_, false);
}

double TabulatedProfile::derivative(double r) const {
  if (r < 0 || r > r_max()) throw ArgumentError("pair distance outside tabulated range");
  return interpolate_reflected(slope_, r / dr_, true);
}

void validate(const PotentialSpec& u) {
  std::visit(overloaded{[](const Free&) {},
                        [](const Harmonic& h) { validate_one_body(h); },
                        [](const Polynomial& p) { validate_one_body(p); },
                        [](const Pair& pr) {
                          if (auto* p = std::get_if<Polynomial>(&pr.profile))
                            validate_polynomial(*p, "pair profile");
                          validate_one_body(pr.external);
                        }},
             u);
}

bool is_pair(const PotentialSpec& u) { return std::holds_alternative<Pair>(u); }

const char* kind_name(const PotentialSpec& u) {
  static const char* names[] = {"free", "harmonic", "polynomial", "pair"};
  return names[u.index()];
}

std::vector<double> force_coefficients(const OneBody& v) {
  return std::visit(overloaded{[](const Free&) { return std::vector<double>{}; },
                               [](const Harmonic& h) {
                                 return std::vector<double>{0.0, h.omega * h.omega};
                               },
                               [](const Polynomial& p) {
                                 return derivative_coefficients(p.coefficients);
                               }},
                    v);
}

OneBody one_body_part(const PotentialSpec& u) {
  return std::visit(overloaded{[](const Free& f) -> OneBody { return f; },
                               [](const Harmonic& h) -> OneBody { return h; },
                               [](const Polynomial& p) -> OneBody { return p; },
                               [](const Pair& p) -> OneBody { return p.external; }},
                    u);
}

double one_body_value(const OneBody& v, double q) {
  return std::visit(overloaded{[](const Free&) { return 0.0; },
                               [q](const Harmonic& h) { return 0.5 * h.omega * h.omega * q * q; },
                               [q](const Polynomial& p) { return horner(p.coefficients, q); }},
                    v);
}

double one_body_derivative(const OneBody& v, double q) {
  return std::visit(overloaded{[](const Free&) { return 0.0; },
                               [q](const Harmonic& h) { return h.omega * h.omega * q; },
                               [q](const Polynomial& p) {
                                 double s = 0;
                                 const auto& c = p.coefficients;
                                 for (std::size_t k = c.size(); k-- > 1;)
                                   s = s * q + static_cast<double>(k) * c[k];
                                 return s;
                               }},
                    v);
}

double pair_value(const Pair& u, double r) {
  return std::visit(overloaded{[r](const Polynomial& p) { return horner(p.coefficients, r); },
                               [r](const TabulatedProfile& t) { return t.value(r); }},
                    u.profile);
}

double pair_derivative(const Pair& u, double r) {
  return std::visit(overloaded{[r](const Polynomial& p) {
                                 return horner(derivative_coefficients(p.coefficients), r);
                               },
                               [r](const TabulatedProfile& t) { return t.derivative(r); }},
                    u.profile);
}

double pair_kernel(const Pair& u, double d) {
  if (d == 0) return 0;
  double s = d > 0 ? 1.0 : -1.0;
  return pair_derivative(u, std::abs(d)) * s;
}

double energy(const PotentialSpec& u, std::span<const double> q,
              std::span<const double> p) {
  double e = 0;
  for (double x : p) e += 0.5 * x * x;
  OneBody v = one_body_part(u);
  for (double x : q) e += one_body_value(v, x);
  if (auto* pr = std::get_if<Pair>(&u))
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j)
        e += pair_value(*pr, std::abs(q[i] - q[j]));
  return e;
}

void gradient(const PotentialSpec& u, std::span<const double> q,
              std::span<double> grad) {
  OneBody v = one_body_part(u);
  for (std::size_t i = 0; i < q.size(); ++i) grad[i] = one_body_derivative(v, q[i]);
  if (auto* pr = std::get_if<Pair>(&u))
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = i + 1; j < q.size(); ++j) {
        double k = pair_kernel(*pr, q[i] - q[j]);
        grad[i] += k;
        grad[j] -= k;
      }
}

bool affine_force(const PotentialSpec& u, std::size_t n, AffineForce& out) {
  out.K.assign(n * n, 0.0);
  out.b.assign(n, 0.0);
  OneBody v = one_body_part(u);
  double k1 = 0, b1 = 0;
  if (auto* h = std::get_if<Harmonic>(&v)) {
    k1 = h->omega * h->omega;
  } else if (auto* p = std::get_if<Polynomial>(&v)) {
    if (degree(*p) > 2) return false;
    const auto& c = p->coefficients;
    b1 = c.size() > 1 ? c[1] : 0.0;
    k1 = c.size() > 2 ? 2 * c[2] : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.K[i * n + i] = k1;
    out.b[i] = b1;
  }
  if (auto* pr = std::get_if<Pair>(&u)) {
    auto* p = std::get_if<Polynomial>(&pr->profile);
    if (!p || degree(*p) > 2) return false;
    const auto& c = p->coefficients;
    if (c.size() > 1 && c[1] != 0) return false;
    double k2 = c.size() > 2 ? 2 * c[2] : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) {
          out.K[i * n + i] += k2;
          out.K[i * n + j] -= k2;
        }
  }
  return true;
}

}  // namespace tomokin::phasespace
