#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/oracles.hpp"
#include "tomokin/errors.hpp"
#include "tomokin/numerics/spectral.hpp"
#include "tomokin/radon/checks.hpp"
#include "tomokin/tomoprop/tomoprop.hpp"

using namespace tomokin;
using namespace tomokin::tomoprop;
using radon::FrameSet;
using radon::Tomogram;

namespace {

const double kPi = std::numbers::pi;

struct G {
  double mq, mp, a, b, c;
  phasespace::GaussianSpec spec() const { return {{mq, mp}, {a, b, b, c}}; }
  double tomo(double X, double mu, double nu) const {
    return oracle::normal2_tomogram(X, mu, nu, mq, mp, a, b, c);
  }
};

// Tomogram of g after free flow for time t, from the closed form.
Tomogram closed(const FrameSet& fs, const Grid1D& x, const G& g, double t = 0) {
  std::vector<double> v;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      v.push_back(g.tomo(x.point(k), fs[i].mu, fs[i].nu + fs[i].mu * t));
  return Tomogram(fs, x, v);
}

Tomogram closed_harmonic(const FrameSet& fs, const Grid1D& x, const G& g, double t) {
  std::vector<double> v;
  double c = std::cos(t), s = std::sin(t);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k) {
      double mu = fs[i].mu, nu = fs[i].nu;
      v.push_back(g.tomo(x.point(k), mu * c - nu * s, mu * s + nu * c));
    }
  return Tomogram(fs, x, v);
}

double sup(std::span<const double> a) {
  double e = 0;
  for (double v : a) e = std::max(e, std::abs(v));
  return e;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

const OperatorKind kAll[] = {OperatorKind::MultiplyByP, OperatorKind::MultiplyByQ,
                             OperatorKind::Dq, OperatorKind::Dp};

const auto kX = Grid1D::cell_centered(12, 192);
const G kShifted{0.7, -0.4, 0.8, 0.15, 0.6};

}  // namespace

TEST_CASE("correspondence operators are linear") {
  auto fs = FrameSet::angular(64);
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  std::vector<double> a(fs.size() * kX.size()), b(a.size()), ab(a.size());
  for (auto& x : a) x = n01(rng);
  for (auto& x : b) x = n01(rng);
  const double ca = 0.7, cb = -1.3;
  for (std::size_t i = 0; i < a.size(); ++i) ab[i] = ca * a[i] + cb * b[i];
  Tomogram wa(fs, kX, a), wb(fs, kX, b), wab(fs, kX, ab);
  for (auto k : kAll) {
    auto ra = apply_correspondence({k}, wa), rb = apply_correspondence({k}, wb),
         rab = apply_correspondence({k}, wab);
    double e = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      e = std::max(e, std::abs(rab.values()[i] - ca * ra.values()[i] - cb * rb.values()[i]));
    CHECK(e < 1e-12 * std::max(1.0, sup(rab.values())));
  }
}

TEST_CASE("X-integrals of Q w and P w are the mean position and momentum") {
  auto fs = FrameSet::angular(96);
  for (const G& g : {G{0, 0, 1, 0, 1}, kShifted}) {
    auto w = closed(fs, kX, g);
    auto qw = apply_correspondence({OperatorKind::MultiplyByQ}, w);
    auto pw = apply_correspondence({OperatorKind::MultiplyByP}, w);
    double eq = 0, ep = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double sq = 0, sp = 0;
      for (std::size_t k = 0; k < kX.size(); ++k) {
        sq += qw.row(i)[k];
        sp += pw.row(i)[k];
      }
      eq = std::max(eq, std::abs(sq * kX.spacing() - g.mq));
      ep = std::max(ep, std::abs(sp * kX.spacing() - g.mp));
    }
    CHECK(eq < 1e-6);
    CHECK(ep < 1e-6);
  }
}

TEST_CASE("inverting the image of each rule gives the phase-space operation") {
  auto box = Grid1D::cell_centered(10, 128);
  auto fs = FrameSet::angular(128);
  auto f = phasespace::make_gaussian(kShifted.spec(), {box, box});
  auto w = closed(fs, kX, kShifted);
  auto dq = numerics::spectral_derivative(f.field(), 0);
  auto dp = numerics::spectral_derivative(f.field(), 1);
  for (auto k : kAll) {
    auto back = radon::radon_inverse_raw(apply_correspondence({k}, w), box, box).values;
    double e = 0;
    for (std::size_t i = 0; i < box.size(); ++i)
      for (std::size_t j = 0; j < box.size(); ++j) {
        std::size_t idx = i * box.size() + j;
        double ref = 0;
        switch (k) {
          case OperatorKind::MultiplyByQ: ref = box.point(i) * f.values()[idx]; break;
          case OperatorKind::MultiplyByP: ref = box.point(j) * f.values()[idx]; break;
          case OperatorKind::Dq: ref = dq.values()[idx]; break;
          case OperatorKind::Dp: ref = dp.values()[idx]; break;
        }
        e = std::max(e, std::abs(back.values()[idx] - ref));
      }
    CHECK(e < 1e-4);
  }
}

TEST_CASE("list frames support derivatives only") {
  auto fs = FrameSet::list({{1, 0}, {0.6, 0.8}});
  auto w = closed(fs, kX, kShifted);
  auto d = apply_correspondence({OperatorKind::Dq}, w);
  double e = 0;
  for (std::size_t k = 0; k < kX.size(); ++k) {
    double ref = 0.6 * oracle::fd8([&](double X) { return kShifted.tomo(X, 0.6, 0.8); },
                                   kX.point(k), 1e-2);
    e = std::max(e, std::abs(d.row(1)[k] - ref));
  }
  CHECK(e < 1e-8);
  CHECK_THROWS_AS(apply_correspondence({OperatorKind::MultiplyByQ}, w), CapabilityError);
  CHECK_THROWS_AS(apply_correspondence({OperatorKind::Dq, 1}, w), ArgumentError);
}

TEST_CASE("lattice operators differentiate along mu and refuse unresolved data") {
  auto mu = Grid1D::cell_centered(2, 32), nu = Grid1D::cell_centered(2, 32);
  auto fs = FrameSet::lattice(mu, nu);
  const double L = mu.length();
  std::vector<double> v;
  // g + 0.1 cos(k mu) g' with g the normal pdf: unit mass at every frame.
  const double kk = 2 * kPi / L;
  auto g = [](double X) { return oracle::normal_pdf(X, 0, 1); };
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k) {
      double X = kX.point(k);
      v.push_back(g(X) - 0.1 * std::cos(kk * fs[i].mu) * X * g(X));
    }
  auto qw = apply_correspondence({OperatorKind::MultiplyByQ}, Tomogram(fs, kX, v));
  // Q = -(d/dX)^-1 d/dmu maps it to 0.1 k sin(k mu) g.
  double e = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k) {
      double ref = 0.1 * kk * std::sin(kk * fs[i].mu) * g(kX.point(k));
      e = std::max(e, std::abs(qw.row(i)[k] - ref));
    }
  CHECK(e < 1e-8);

  auto gauss = closed(fs, kX, kShifted);
  CHECK_THROWS_AS(apply_correspondence({OperatorKind::MultiplyByQ}, gauss), ResolutionError);
  CHECK_THROWS_AS(tomographic_rhs(gauss, phasespace::Free{}), ResolutionError);
}

TEST_CASE("free rhs is the time derivative of the sheared tomogram") {
  auto fs = FrameSet::angular(96);
  auto w = closed(fs, kX, kShifted);
  auto r = tomographic_rhs(w, phasespace::Free{});
  double e = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k) {
      double mu = fs[i].mu, nu = fs[i].nu, X = kX.point(k);
      double ref = oracle::fd8([&](double t) { return kShifted.tomo(X, mu, nu + mu * t); }, 0, 1e-2);
      e = std::max(e, std::abs(r.row(i)[k] - ref));
    }
  CHECK(e < 1e-6);
}

TEST_CASE("harmonic rhs: rotation generator, stationary state, conservation") {
  auto fs = FrameSet::angular(96);
  auto w = closed(fs, kX, kShifted);
  auto r = tomographic_rhs(w, phasespace::Harmonic{1});
  double e = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k) {
      double mu = fs[i].mu, nu = fs[i].nu, X = kX.point(k);
      double ref = oracle::fd8(
          [&](double t) {
            return kShifted.tomo(X, mu * std::cos(t) - nu * std::sin(t),
                                 mu * std::sin(t) + nu * std::cos(t));
          },
          0, 1e-2);
      e = std::max(e, std::abs(r.row(i)[k] - ref));
    }
  CHECK(e < 1e-6);

  auto rest = closed(fs, kX, G{0, 0, 1, 0, 1});
  CHECK(sup(tomographic_rhs(rest, phasespace::Harmonic{1}).values()) < 1e-6);
  // The harmonic ground state of omega = 2 has variances 1/2 and 2.
  auto rest2 = closed(fs, kX, G{0, 0, 0.5, 0, 2});
  CHECK(sup(tomographic_rhs(rest2, phasespace::Harmonic{2}).values()) < 1e-6);

  phasespace::Polynomial cubic{{0, 0.2, 0.5, 0.1}};
  for (const phasespace::PotentialSpec& u :
       {phasespace::PotentialSpec{phasespace::Free{}}, phasespace::PotentialSpec{cubic}}) {
    auto ru = tomographic_rhs(w, u);
    double worst = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double s = 0;
      for (double v : ru.row(i)) s += v;
      worst = std::max(worst, std::abs(s * kX.spacing()));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("free exp(-H) is stationary on a Cartesian lattice") {
  // exp(-p^2/2) has tomogram sqrt(2 pi)/|mu|, constant in X and nu.
  auto mu = Grid1D::cell_centered(2, 16), nu = Grid1D::cell_centered(2, 16);
  auto fs = FrameSet::lattice(mu, nu);
  std::vector<double> v;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k) v.push_back(std::sqrt(2 * kPi) / std::abs(fs[i].mu));
  CHECK(sup(tomographic_rhs(Tomogram(fs, kX, v), phasespace::Free{}).values()) < 1e-6);
}

TEST_CASE("unsupported potentials on the operator path") {
  auto w = closed(FrameSet::angular(32), kX, kShifted);
  phasespace::Pair pair{phasespace::Polynomial{{0, 0, 0.5}}};
  CHECK_THROWS_AS(tomographic_rhs(w, pair), CapabilityError);
  CHECK_THROWS_AS(tomographic_rhs(w, phasespace::Polynomial{{0, 0, 0, 0, 1}}), CapabilityError);
  CHECK_NOTHROW(tomographic_rhs(w, phasespace::Polynomial{{0, 0, 0, 1}}));
}

TEST_CASE("two-particle rhs is the sum of one-particle rhs") {
  auto fs = FrameSet::angular(32);
  auto x = Grid1D::cell_centered(10, 64);
  G a{0.3, -0.2, 0.9, 0.1, 0.7}, b{-0.5, 0.4, 0.6, -0.1, 1.1};
  auto wa = closed(fs, x, a), wb = closed(fs, x, b);
  std::vector<double> v;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t j = 0; j < fs.size(); ++j)
        for (std::size_t l = 0; l < x.size(); ++l) v.push_back(wa.row(i)[k] * wb.row(j)[l]);
  Tomogram w(fs, x, fs, x, v);
  phasespace::Harmonic u{1.3};
  auto r = tomographic_rhs(w, u);
  auto ra = tomographic_rhs(wa, u), rb = tomographic_rhs(wb, u);
  double e = 0;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t j = 0; j < fs.size(); ++j)
        for (std::size_t l = 0; l < x.size(); ++l, ++idx) {
          double ref = ra.row(i)[k] * wb.row(j)[l] + wa.row(i)[k] * rb.row(j)[l];
          e = std::max(e, std::abs(r.values()[idx] - ref));
        }
  CHECK(e < 1e-12);
}

TEST_CASE("evolve_tomogram: free shear, harmonic period, identity") {
  auto fs = FrameSet::angular(96);
  auto w0 = closed(fs, kX, kShifted);
  TomoPDEConfig cfg;
  cfg.t_final = 1;
  TomoEvolveStats st;
  auto w1 = evolve_tomogram(w0, phasespace::Free{}, cfg, &st);
  CHECK(st.steps == 100);
  CHECK(st.max_drift < 1e-5);
  CHECK(sup_diff(w1.values(), closed(fs, kX, kShifted, 1).values()) < 5e-4);

  cfg.t_final = 2 * kPi;
  auto wp = evolve_tomogram(w0, phasespace::Harmonic{1}, cfg, &st);
  CHECK(st.max_drift < 1e-5);
  CHECK(sup_diff(wp.values(), w0.values()) < 1e-3);

  cfg.t_final = 0;
  auto same = evolve_tomogram(w0, phasespace::Harmonic{1}, cfg);
  CHECK(sup_diff(same.values(), w0.values()) == 0.0);
}

TEST_CASE("evolved tomograms keep their homogeneity") {
  auto fs = FrameSet::angular(96);
  TomoPDEConfig cfg;
  cfg.t_final = 1.5;
  cfg.dt = 5e-3;
  auto w = evolve_tomogram(closed(fs, kX, kShifted), phasespace::Polynomial{{0, 0.1, 0.5, 0.01}},
                           cfg);
  double minus_one = -1;
  auto rep = radon::check_homogeneity(w, std::span<const double>(&minus_one, 1));
  CHECK(rep[0].sampled > 0);
  CHECK(rep[0].max_deviation < 5e-4);
}

TEST_CASE("an unstable step is reported with its index") {
  auto fs = FrameSet::angular(32);
  auto w0 = closed(fs, kX, kShifted);
  TomoPDEConfig cfg;
  cfg.dt = 0.5;
  cfg.t_final = 50;
  try {
    evolve_tomogram(w0, phasespace::Free{}, cfg);
    FAIL("expected an instability");
  } catch (const InstabilityError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() <= 100);
  }
}

TEST_CASE("analytic flows") {
  auto fs = FrameSet::angular(64);
  auto w0 = closed(fs, kX, kShifted);
  double lost = 1;
  auto w = analytic_tomo_flow(w0, phasespace::Free{}, 1.3, {}, &lost);
  CHECK(lost == 0.0);
  // Frame (0, 1) is index n/4; its mean is <p>, unchanged by free motion.
  auto mean = [&](const Tomogram& t) {
    double s = 0;
    for (std::size_t k = 0; k < kX.size(); ++k) s += kX.point(k) * t.row(16)[k];
    return s * kX.spacing();
  };
  CHECK(std::abs(mean(w) - mean(w0)) < 1e-8);
  CHECK(sup_diff(w.values(), closed(fs, kX, kShifted, 1.3).values()) < 1e-4);

  auto h = analytic_tomo_flow(w0, phasespace::Harmonic{1}, kPi / 2);
  double e = 0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t k = 0; k < kX.size(); ++k)
      e = std::max(e, std::abs(h.row(i)[k] - kShifted.tomo(kX.point(k), -fs[i].nu, fs[i].mu)));
  CHECK(e < 1e-4);
  CHECK(sup_diff(analytic_tomo_flow(w0, phasespace::Harmonic{1}, 0).values(), w0.values()) == 0.0);

  auto lat = FrameSet::lattice(Grid1D::cell_centered(2, 16), Grid1D::cell_centered(2, 16));
  auto wl = closed(lat, kX, kShifted);
  try {
    analytic_tomo_flow(wl, phasespace::Free{}, 1);
    FAIL("expected a coverage error");
  } catch (const CoverageError& err) {
    CHECK(err.fraction_lost() > 0);
    CHECK(err.fraction_lost() < 1);
  }
  CHECK_THROWS_AS(analytic_tomo_flow(w0, phasespace::Polynomial{{0, 0, 0.5}}, 1), CapabilityError);
}

TEST_CASE("commuting diagram: identity, free and quartic via the transform route") {
  auto box = Grid1D::cell_centered(10, 96);
  auto f0 = phasespace::make_gaussian(kShifted.spec(), {box, box});
  DiagramSetup setup{FrameSet::angular(64), Grid1D::cell_centered(12, 128), {}, {}, {}};
  CHECK(commuting_diagram_error(f0, phasespace::Free{}, 0, setup).sup < 1e-10);
  auto free = commuting_diagram_error(f0, phasespace::Free{}, 1, setup);
  CHECK(free.sup < 1e-3);
  CHECK(free.l2 <= free.sup);

  // Narrow start: the quartic force must not push the tails out of the box.
  auto f1 = phasespace::make_gaussian(G{0.3, -0.2, 0.4, 0.05, 0.5}.spec(), {box, box});
  phasespace::Polynomial quartic{{0, 0, 0.5, 0, 0.02}};
  setup.tomo.transform = TransformRoute{box, box};
  auto q = commuting_diagram_error(f1, quartic, 0.5, setup);
  CHECK(q.sup < 1e-3);
}

TEST_CASE("transform route agrees with the operator path where both apply") {
  auto box = Grid1D::cell_centered(10, 128);
  auto fs = FrameSet::angular(96);
  auto w = closed(fs, kX, kShifted);
  phasespace::Polynomial cubic{{0, 0.2, 0.5, 0.1}};
  auto a = tomographic_rhs(w, cubic);
  auto b = tomographic_rhs_transform(w, cubic, TransformRoute{box, box});
  CHECK(sup_diff(a.values(), b.values()) < 1e-5);
}
