#include "tomokin/radon/checks.hpp"

#include <cmath>
#include <numbers>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/interp.hpp"

namespace tomokin::radon {
namespace {

constexpr double kPi = std::numbers::pi;

double dirichlet(double x, std::size_t n) {
  double half = 0.5 * x, s = std::sin(half);
  if (std::abs(s) < 1e-14) return 1;
  return std::sin(static_cast<double>(n) * half) * std::cos(half) / (static_cast<double>(n) * s);
}

bool inside_x(const Grid1D& x, double X) {
  double t = x.index_of(X);
  return t > -1e-9 && t < static_cast<double>(x.size() - 1) + 1e-9;
}

std::optional<std::size_t> scaled_frame(const FrameSet& fs, const Frame& f, double lambda) {
  Frame g{lambda * f.mu, lambda * f.nu};
  double tol = 1e-9 * std::max(1.0, std::hypot(g.mu, g.nu));
  return fs.find(g, tol);
}

}  // namespace

TomogramSampler::TomogramSampler(const Tomogram& w, int order) : w_(w), order_(order) {
  if (w.particles() != 1) throw ArgumentError("sampler needs a one-particle tomogram");
}

double TomogramSampler::along_x(std::size_t frame, double X) const {
  const Grid1D& x = w_.x_axis();
  return numerics::sample_line(w_.row(frame).data(), x.size(), 1, x.index_of(X), order_);
}

std::optional<double> TomogramSampler::at(double X, double mu, double nu) const {
  const FrameSet& fs = w_.frames();
  switch (fs.scheme()) {
    case FrameScheme::Lattice: {
      const Grid1D &gm = fs.mu_axis(), &gn = fs.nu_axis();
      numerics::Stencil sa = numerics::lagrange_stencil(gm.index_of(mu), order_);
      numerics::Stencil sb = numerics::lagrange_stencil(gn.index_of(nu), order_);
      long na = static_cast<long>(gm.size()), nb = static_cast<long>(gn.size());
      if (sa.first < 0 || sa.first + sa.count > na || sb.first < 0 || sb.first + sb.count > nb)
        return std::nullopt;
      double acc = 0;
      for (int i = 0; i < sa.count; ++i)
        for (int j = 0; j < sb.count; ++j) {
          std::size_t f = static_cast<std::size_t>(sa.first + i) * gn.size() +
                          static_cast<std::size_t>(sb.first + j);
          acc += sa.w[i] * sb.w[j] * along_x(f, X);
        }
      return acc;
    }
    case FrameScheme::Angular: {
      double s = std::hypot(mu, nu), r = fs.radius();
      if (std::abs(s - r) > 1e-12 * r) return std::nullopt;
      std::size_t n = fs.size();
      double dth = 2 * kPi / static_cast<double>(n);
      double th = std::atan2(nu, mu);
      if (th < 0) th += 2 * kPi;
      double t = th / dth, tr = std::nearbyint(t);
      if (std::abs(t - tr) < 1e-9) return along_x(static_cast<std::size_t>(tr) % n, X);
      double acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        acc += dirichlet(th - static_cast<double>(j) * dth, n) * along_x(j, X);
      return acc;
    }
    case FrameScheme::List: {
      auto i = fs.find(Frame{mu, nu}, 1e-12 * std::max(1.0, std::hypot(mu, nu)));
      if (!i) return std::nullopt;
      return along_x(*i, X);
    }
  }
  return std::nullopt;
}

std::optional<double> TomogramSampler::extended(double X, double mu, double nu) const {
  const FrameSet& fs = w_.frames();
  if (fs.scheme() != FrameScheme::Angular) return at(X, mu, nu);
  double s = std::hypot(mu, nu);
  if (s == 0) return std::nullopt;
  double k = fs.radius() / s;
  auto v = at(X * k, mu * k, nu * k);
  if (!v) return std::nullopt;
  return *v * k;
}

std::vector<HomogeneityEntry> check_homogeneity(const Tomogram& w,
                                                std::span<const double> lambdas,
                                                const HomogeneityOptions& opt) {
  TomogramSampler sampler(w, opt.order);
  const FrameSet& fs = w.frames();
  const Grid1D& x = w.x_axis();
  double rmin = 0, rmax = INFINITY, reach = 0;
  if (fs.scheme() == FrameScheme::Lattice) {
    rmin = opt.min_radius;
    rmax = opt.max_radius_fraction * 0.5 *
           std::min(fs.mu_axis().length(), fs.nu_axis().length());
    // The interpolation stencil must keep clear of the singular origin too.
    reach = 0.5 * opt.order * std::hypot(fs.mu_axis().spacing(), fs.nu_axis().spacing());
  }
  std::vector<HomogeneityEntry> out;
  for (double lambda : lambdas) {
    if (lambda == 0 || !std::isfinite(lambda)) throw ArgumentError("homogeneity needs lambda != 0");
    HomogeneityEntry e{lambda, 0, 0, 0};
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const Frame& f = fs[i];
      double s = std::hypot(f.mu, f.nu), ls = std::abs(lambda) * s;
      bool ring = s >= rmin && s <= rmax && ls - reach >= rmin && ls <= rmax;
      for (std::size_t k = 0; k < x.size(); k += std::max<std::size_t>(1, opt.x_stride)) {
        double X = x.point(k);
        std::optional<double> v;
        if (ring && inside_x(x, lambda * X)) v = sampler.at(lambda * X, lambda * f.mu, lambda * f.nu);
        if (!v) {
          ++e.skipped;
          continue;
        }
        ++e.sampled;
        double base = w.values()[i * x.size() + k];
        e.max_deviation = std::max(e.max_deviation, std::abs(*v - base / std::abs(lambda)));
      }
    }
    out.push_back(e);
  }
  return out;
}

std::vector<HomogeneityEntry> check_homogeneity_2p(
    const Tomogram& w, std::span<const std::pair<double, double>> lambdas,
    const HomogeneityOptions& opt) {
  if (w.particles() != 2) throw ArgumentError("check_homogeneity_2p needs two particles");
  const FrameSet &f1 = w.frames(0), &f2 = w.frames(1);
  const Grid1D &x1 = w.x_axis(0), &x2 = w.x_axis(1);
  const std::size_t n1 = x1.size(), n2 = x2.size(), F2 = f2.size();
  auto v = w.values();
  std::vector<HomogeneityEntry> out;
  std::size_t stride = std::max<std::size_t>(1, opt.x_stride);
  for (auto [l1, l2] : lambdas) {
    if (l1 == 0 || l2 == 0) throw ArgumentError("homogeneity needs lambda != 0");
    HomogeneityEntry e{l1 * l2, 0, 0, 0};
    for (std::size_t a = 0; a < f1.size(); ++a)
      for (std::size_t b = 0; b < F2; ++b) {
        auto sa = scaled_frame(f1, f1[a], l1);
        auto sb = scaled_frame(f2, f2[b], l2);
        for (std::size_t k = 0; k < n1; k += stride)
          for (std::size_t l = 0; l < n2; l += stride) {
            double X1 = l1 * x1.point(k), X2 = l2 * x2.point(l);
            if (!sa || !sb || !inside_x(x1, X1) || !inside_x(x2, X2)) {
              ++e.skipped;
              continue;
            }
            numerics::Stencil s1 = numerics::lagrange_stencil(x1.index_of(X1), opt.order);
            numerics::Stencil s2 = numerics::lagrange_stencil(x2.index_of(X2), opt.order);
            double acc = 0;
            for (int i = 0; i < s1.count; ++i) {
              long ki = s1.first + i;
              if (ki < 0 || ki >= static_cast<long>(n1)) continue;
              for (int j = 0; j < s2.count; ++j) {
                long lj = s2.first + j;
                if (lj < 0 || lj >= static_cast<long>(n2)) continue;
                acc += s1.w[i] * s2.w[j] *
                       v[((*sa * n1 + static_cast<std::size_t>(ki)) * F2 + *sb) * n2 +
                         static_cast<std::size_t>(lj)];
              }
            }
            double base = v[((a * n1 + k) * F2 + b) * n2 + l];
            ++e.sampled;
            e.max_deviation = std::max(e.max_deviation, std::abs(acc - base / std::abs(l1 * l2)));
          }
      }
    out.push_back(e);
  }
  return out;
}

}  // namespace tomokin::radon
