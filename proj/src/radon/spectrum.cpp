#include "spectrum.hpp"

#include <cmath>
#include <numbers>

#include "tomokin/numerics/fft.hpp"
#include "tomokin/numerics/interp.hpp"

namespace tomokin::radon::detail {
namespace {

constexpr double kPi = std::numbers::pi;

struct Centring {
  long j0;
  double delta;
};

Centring centre(const Grid1D& g) {
  long j0 = std::lround(-g.lo() / g.spacing());
  return {j0, g.lo() + static_cast<double>(j0) * g.spacing()};
}

long signed_mode(std::size_t m, std::size_t N) {
  return m <= N / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(N);
}

std::size_t wrap(long j, std::size_t N) {
  long n = static_cast<long>(N);
  j %= n;
  return static_cast<std::size_t>(j < 0 ? j + n : j);
}

}  // namespace

Spectrum1D::Spectrum1D(const double* v, std::size_t stride, const Grid1D& x, int padding,
                       int sign)
    : N_(x.size() * static_cast<std::size_t>(padding)), h_(x.spacing()) {
  Centring c = centre(x);
  s_.assign(N_, cplx{});
  for (std::size_t j = 0; j < x.size(); ++j)
    s_[wrap(static_cast<long>(j) - c.j0, N_)] = v[j * stride];
  std::size_t shape[1] = {N_};
  numerics::dft_lines(s_, shape, 0, sign);
  // Fold the sub-cell offset into the samples; the result is the spectrum of
  // data centred exactly on the origin, symmetric when the data are.
  const double dk = 2 * kPi / (static_cast<double>(N_) * h_);
  for (std::size_t m = 0; m < N_; ++m)
    s_[m] *= h_ * std::polar(1.0, sign * dk * static_cast<double>(signed_mode(m, N_)) * c.delta);
}

double Spectrum1D::nyquist() const { return kPi / h_; }

cplx Spectrum1D::at(double k, int order) const {
  double u = k * static_cast<double>(N_) * h_ / (2 * kPi);
  if (std::abs(u) >= static_cast<double>(N_) / 2) return {};
  numerics::Stencil st = numerics::lagrange_stencil(u, order);
  cplx acc{};
  for (int i = 0; i < st.count; ++i) acc += st.w[i] * s_[wrap(st.first + i, N_)];
  return acc;
}

Spectrum2D::Spectrum2D(const double* f, const Grid1D& q, const Grid1D& p, int padding)
    : Nq_(q.size() * static_cast<std::size_t>(padding)),
      Np_(p.size() * static_cast<std::size_t>(padding)),
      hq_(q.spacing()),
      hp_(p.spacing()) {
  Centring cq = centre(q), cp = centre(p);
  s_.assign(Nq_ * Np_, cplx{});
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::size_t a = wrap(static_cast<long>(i) - cq.j0, Nq_);
    for (std::size_t j = 0; j < p.size(); ++j)
      s_[a * Np_ + wrap(static_cast<long>(j) - cp.j0, Np_)] = f[i * p.size() + j];
  }
  std::size_t shape[2] = {Nq_, Np_};
  numerics::dft_lines(s_, shape, 0, -1);
  numerics::dft_lines(s_, shape, 1, -1);
  const double da = 2 * kPi / (static_cast<double>(Nq_) * hq_);
  const double db = 2 * kPi / (static_cast<double>(Np_) * hp_);
  for (std::size_t a = 0; a < Nq_; ++a) {
    cplx ra = std::polar(hq_ * hp_, -da * static_cast<double>(signed_mode(a, Nq_)) * cq.delta);
    for (std::size_t b = 0; b < Np_; ++b)
      s_[a * Np_ + b] *= ra * std::polar(1.0, -db * static_cast<double>(signed_mode(b, Np_)) * cp.delta);
  }
  for (std::size_t a = 0; a < Nq_; ++a) {
    long ma = std::abs(static_cast<long>(a <= Nq_ / 2 ? a : Nq_ - a));
    for (std::size_t b = 0; b < Np_; ++b) {
      long mb = std::abs(static_cast<long>(b <= Np_ / 2 ? b : Np_ - b));
      if (10 * ma >= 4 * static_cast<long>(Nq_) || 10 * mb >= 4 * static_cast<long>(Np_))
        edge_ = std::max(edge_, std::abs(s_[a * Np_ + b]));
    }
  }
}

bool Spectrum2D::inside(double a, double b) const {
  return std::abs(a) * hq_ < kPi && std::abs(b) * hp_ < kPi;
}

cplx Spectrum2D::at(double a, double b, int order) const {
  if (!inside(a, b)) return {};
  double u = a * static_cast<double>(Nq_) * hq_ / (2 * kPi);
  double v = b * static_cast<double>(Np_) * hp_ / (2 * kPi);
  numerics::Stencil su = numerics::lagrange_stencil(u, order);
  numerics::Stencil sv = numerics::lagrange_stencil(v, order);
  std::size_t cols[numerics::kMaxStencil];
  for (int k = 0; k < sv.count; ++k) cols[k] = wrap(sv.first + k, Np_);
  cplx acc{};
  for (int i = 0; i < su.count; ++i) {
    const cplx* row = s_.data() + wrap(su.first + i, Nq_) * Np_;
    cplx r{};
    for (int k = 0; k < sv.count; ++k) r += sv.w[k] * row[cols[k]];
    acc += su.w[i] * r;
  }
  return acc;
}

}  // namespace tomokin::radon::detail
