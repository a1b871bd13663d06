#include "tomokin/phasespace/density.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tomokin/errors.hpp"
#include "tomokin/numerics/spectral.hpp"

namespace tomokin::phasespace {
namespace {

void check_axes(const std::vector<Grid1D>& axes) {
  if (axes.size() != 2 && axes.size() != 4)
    throw ArgumentError("phase-space density needs 2 or 4 axes");
}

// Calls fn(flat, z) for every grid node, z holding its coordinates.
template <class Fn>
void for_each_node(const std::vector<Grid1D>& axes, Fn&& fn) {
  std::size_t d = axes.size();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> z(d);
  for (std::size_t k = 0; k < d; ++k) z[k] = axes[k].point(0);
  std::size_t total = numerics::count_of(axes);
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, z.data());
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < axes[k].size()) {
        z[k] = axes[k].point(idx[k]);
        break;
      }
      idx[k] = 0;
      z[k] = axes[k].point(0);
    }
  }
}

PhaseSpaceDensity normalized(RealField f, const SampleOptions& opt) {
  double total = numerics::integrate_all(f);
  if (!(total > 0)) throw NumericError("sampled density has no mass on the grid");
  for (auto& v : f.values()) v /= total;
  double edge = edge_magnitude(f);
  if (edge > opt.edge_tolerance) {
    std::ostringstream os;
    os << "box too narrow: density on the box faces reaches " << edge;
    throw PreconditionError(os.str(), edge);
  }
  return PhaseSpaceDensity::from_field(std::move(f));
}

}  // namespace

PhaseSpaceDensity PhaseSpaceDensity::from_field(RealField f, DensityTolerances tol) {
  check_axes(f.axes());
  double lo = 0;
  for (double v : f.values()) {
    if (!std::isfinite(v)) throw NumericError("density has non-finite values");
    lo = std::min(lo, v);
  }
  if (lo < -tol.negativity) {
    std::ostringstream os;
    os << "density is negative: min " << lo;
    throw ArgumentError(os.str());
  }
  double total = numerics::integrate_all(f);
  if (std::abs(total - 1) > tol.normalization) {
    std::ostringstream os;
    os.precision(12);
    os << "density is not normalized: integral " << total;
    throw ArgumentError(os.str());
  }
  return PhaseSpaceDensity(std::move(f));
}

double PhaseSpaceDensity::cell_volume() const {
  double w = 1;
  for (const auto& a : f_.axes()) w *= a.spacing();
  return w;
}

GaussianSpec standard_gaussian(int particles) {
  std::size_t d = 2 * static_cast<std::size_t>(particles);
  GaussianSpec s{std::vector<double>(d, 0.0), std::vector<double>(d * d, 0.0)};
  for (std::size_t i = 0; i < d; ++i) s.covariance[i * d + i] = 1;
  return s;
}

GaussianSpec narrow_gaussian(double q0, double p0, double width) {
  return GaussianSpec{{q0, p0}, {width * width, 0, 0, width * width}};
}

GaussianPdf::GaussianPdf(const GaussianSpec& spec) : mean_(spec.mean) {
  std::size_t d = spec.mean.size();
  if (d == 0 || spec.covariance.size() != d * d)
    throw ArgumentError("gaussian covariance must be a d x d matrix");
  Eigen::MatrixXd C(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double c = spec.covariance[i * d + j];
      if (!std::isfinite(c)) throw ArgumentError("gaussian covariance has non-finite entries");
      C(i, j) = c;
    }
  if (!C.isApprox(C.transpose(), 1e-12))
    throw ArgumentError("gaussian covariance is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0)
    throw ArgumentError("gaussian covariance is not positive-definite");
  Eigen::MatrixXd P = llt.solve(Eigen::MatrixXd::Identity(d, d));
  precision_.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) precision_[i * d + j] = 0.5 * (P(i, j) + P(j, i));
  double logdet = 2 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  log_norm_ = -0.5 * static_cast<double>(d) * std::log(2 * std::numbers::pi) - 0.5 * logdet;
}

double GaussianPdf::log_density(const double* z) const {
  std::size_t d = mean_.size();
  double e = 0;
  for (std::size_t i = 0; i < d; ++i) {
    double di = z[i] - mean_[i], row = 0;
    for (std::size_t j = 0; j < d; ++j) row += precision_[i * d + j] * (z[j] - mean_[j]);
    e += di * row;
  }
  return log_norm_ - 0.5 * e;
}

double GaussianPdf::operator()(const double* z) const { return std::exp(log_density(z)); }

double edge_magnitude(const RealField& f) {
  double m = 0;
  std::size_t d = f.rank();
  std::vector<std::size_t> idx(d, 0);
  auto v = f.values();
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    bool edge = false;
    for (std::size_t k = 0; k < d && !edge; ++k)
      edge = idx[k] == 0 || idx[k] + 1 == f.axis(k).size();
    if (edge) m = std::max(m, std::abs(v[flat]));
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < f.axis(k).size()) break;
      idx[k] = 0;
    }
  }
  return m;
}

PhaseSpaceDensity make_gaussian(const GaussianSpec& spec, std::vector<Grid1D> axes,
                                SampleOptions opt) {
  check_axes(axes);
  GaussianPdf pdf(spec);
  if (pdf.dimension() != axes.size())
    throw ArgumentError("gaussian dimension does not match the number of axes");
  RealField f(axes);
  auto v = f.values();
  for_each_node(axes, [&](std::size_t flat, const double* z) { v[flat] = pdf(z); });
  return normalized(std::move(f), opt);
}

PhaseSpaceDensity make_boltzmann(const PotentialSpec& u, std::vector<Grid1D> axes,
                                 SampleOptions opt) {
  check_axes(axes);
  validate(u);
  std::size_t n = axes.size() / 2;
  RealField f(axes);
  auto v = f.values();
  std::vector<double> q(n), p(n);
  for_each_node(axes, [&](std::size_t flat, const double* z) {
    for (std::size_t j = 0; j < n; ++j) {
      q[j] = z[2 * j];
      p[j] = z[2 * j + 1];
    }
    v[flat] = std::exp(-energy(u, q, p));
  });
  return normalized(std::move(f), opt);
}

PhaseSpaceDensity make_product(const PhaseSpaceDensity& a, const PhaseSpaceDensity& b) {
  if (a.particles() != 1 || b.particles() != 1)
    throw ArgumentError("product needs two one-particle densities");
  std::vector<Grid1D> axes = a.field().axes();
  axes.insert(axes.end(), b.field().axes().begin(), b.field().axes().end());
  RealField f(axes);
  auto av = a.values(), bv = b.values();
  auto v = f.values();
  for (std::size_t i = 0; i < av.size(); ++i)
    for (std::size_t j = 0; j < bv.size(); ++j) v[i * bv.size() + j] = av[i] * bv[j];
  return PhaseSpaceDensity::from_field(std::move(f));
}

PhaseSpaceDensity marginalize_second_particle(const PhaseSpaceDensity& f) {
  if (f.particles() != 2) throw ArgumentError("marginalization needs a two-particle density");
  const auto& ax = f.field().axes();
  std::size_t inner = ax[2].size() * ax[3].size();
  double w = ax[2].spacing() * ax[3].spacing();
  RealField out({ax[0], ax[1]});
  auto v = f.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0;
    const double* row = v.data() + i * inner;
    for (std::size_t k = 0; k < inner; ++k) s += row[k];
    out[i] = s * w;
  }
  return PhaseSpaceDensity::from_field(std::move(out));
}

Moments moments(const PhaseSpaceDensity& f) {
  if (f.particles() != 1) throw ArgumentError("moments are defined for one particle");
  const Grid1D& gq = f.axis(0);
  const Grid1D& gp = f.axis(1);
  auto v = f.values();
  double m0 = 0, mq = 0, mp = 0;
  for (std::size_t i = 0; i < gq.size(); ++i)
    for (std::size_t j = 0; j < gp.size(); ++j) {
      double x = v[i * gp.size() + j];
      m0 += x;
      mq += x * gq.point(i);
      mp += x * gp.point(j);
    }
  Moments m;
  m.mean_q = mq / m0;
  m.mean_p = mp / m0;
  for (std::size_t i = 0; i < gq.size(); ++i)
    for (std::size_t j = 0; j < gp.size(); ++j) {
      double x = v[i * gp.size() + j], dq = gq.point(i) - m.mean_q, dp = gp.point(j) - m.mean_p;
      m.var_q += x * dq * dq;
      m.var_p += x * dp * dp;
      m.cov_qp += x * dq * dp;
    }
  m.var_q /= m0;
  m.var_p /= m0;
  m.cov_qp /= m0;
  return m;
}

}  // namespace tomokin::phasespace
