#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tomokin/numerics/spectral.hpp"
#include "tomokin/radon/checks.hpp"
#include "tomokin/radon/inverse.hpp"
#include "tomokin/radon/transform.hpp"

using namespace tomokin;
using namespace tomokin::radon;
using phasespace::GaussianSpec;
using phasespace::make_gaussian;

namespace {

struct Gauss2 {
  double mq, mp, a, b, c;
  GaussianSpec spec() const { return GaussianSpec{{mq, mp}, {a, b, b, c}}; }
  double tomogram(double X, double mu, double nu) const {
    return oracle::normal2_tomogram(X, mu, nu, mq, mp, a, b, c);
  }
  double density(double q, double p) const { return oracle::normal2_pdf(q, p, mq, mp, a, b, c); }
};

Gauss2 random_gauss(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1), s(0.6, 1.3);
  double a = s(rng), c = s(rng), r = 0.6 * u(rng);
  return Gauss2{0.8 * u(rng), 0.8 * u(rng), a, r * std::sqrt(a * c), c};
}

Frame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0, 2 * oracle::pi), s(0.5, 2.0);
  double t = th(rng), r = s(rng);
  return Frame{r * std::cos(t), r * std::sin(t)};
}

double sup_vs(const Tomogram& w, const Gauss2& g) {
  double e = 0;
  for (std::size_t i = 0; i < w.frames().size(); ++i)
    for (std::size_t k = 0; k < w.x_axis().size(); ++k)
      e = std::max(e, std::abs(w.row(i)[k] - g.tomogram(w.x_axis().point(k), w.frames()[i].mu,
                                                         w.frames()[i].nu)));
  return e;
}

const numerics::Grid1D kBox = numerics::Grid1D::cell_centered(10, 128);
const numerics::Grid1D kX = numerics::Grid1D::cell_centered(20, 256);

}  // namespace

TEST_CASE("direct path matches the Gaussian closed form") {
  std::mt19937_64 rng(101);
  Gauss2 std_g{0, 0, 1, 0, 1};
  auto f = make_gaussian(std_g.spec(), {kBox, kBox});
  std::vector<Frame> frames;
  for (int i = 0; i < 8; ++i) frames.push_back(random_frame(rng));
  frames.push_back({1, 0});
  frames.push_back({0, 1});
  auto w = radon_forward_direct(f, FrameSet::list(frames), kX);
  CHECK(sup_vs(w, std_g) < 1e-6);
}

TEST_CASE("direct path agrees with brute-force quadrature of the line integral") {
  Gauss2 g{0.4, -0.3, 0.9, 0.25, 0.7};
  auto f = make_gaussian(g.spec(), {kBox, kBox});
  Frame fr{0.6, -1.3};
  auto w = radon_forward_direct(f, FrameSet::list({fr}), kX);
  for (std::size_t k = 100; k < 160; k += 7) {
    double X = kX.point(k);
    double ref = oracle::quad([&](double q) { return g.density(q, (X - fr.mu * q) / fr.nu); },
                              -12, 12, 600) / std::abs(fr.nu);
    CHECK(std::abs(w.row(0)[k] - ref) < 1e-7);
  }
}

TEST_CASE("narrow Gaussian at (1, 2) peaks at X = 11 in frame (3, 4)") {
  auto grid = numerics::Grid1D::cell_centered(4, 160);
  auto f = make_gaussian(phasespace::narrow_gaussian(1, 2, 4 * grid.spacing()), {grid, grid});
  numerics::Grid1D x(-2, 22, 960);
  auto w = radon_forward_direct(f, FrameSet::list({{3, 4}}), x);
  auto r = w.row(0);
  std::size_t k = std::max_element(r.begin(), r.end()) - r.begin();
  CHECK(std::abs(x.point(k) - 11) <= x.spacing());
  double mean = 0;
  for (std::size_t j = 0; j < x.size(); ++j) mean += x.point(j) * r[j] * x.spacing();
  CHECK(mean == doctest::Approx(11).epsilon(1e-8));
}

TEST_CASE("frame (1, 0) gives the q-marginal") {
  Gauss2 g{0.3, 0.1, 1.1, 0.2, 0.8};
  auto f = make_gaussian(g.spec(), {kBox, kBox});
  auto w = radon_forward_direct(f, FrameSet::list({{1, 0}}), kBox);
  auto m = numerics::integrate(f.field(), 1);
  for (std::size_t i = 0; i < kBox.size(); ++i) {
    CHECK(std::abs(w.row(0)[i] - m[i]) < 1e-8);
    CHECK(std::abs(w.row(0)[i] - oracle::normal_pdf(kBox.point(i), 0.3, 1.1)) < 1e-8);
  }
}

TEST_CASE("zero frames and undecayed densities are rejected") {
  CHECK_THROWS_AS(FrameSet::list({{1, 0}, {0, 0}}), ArgumentError);
  numerics::Grid1D g(-1, 1, 16);
  numerics::RealField flat({g, g});
  for (auto& v : flat.values()) v = 0.25;
  auto f = phasespace::PhaseSpaceDensity::from_field(flat);
  CHECK_THROWS_AS(radon_forward_direct(f, FrameSet::list({{1, 1}}), kX), AccuracyError);
}

TEST_CASE("slice path examples") {
  Gauss2 std_g{0, 0, 1, 0, 1};
  auto f = make_gaussian(std_g.spec(), {kBox, kBox});
  auto frames = FrameSet::list({{1, 0}, {std::cos(oracle::pi / 4), std::sin(oracle::pi / 4)},
                                {0.3, -1.7}, {-2.0, 0.5}});
  auto slice = radon_forward_slice(f, frames, kX);
  auto direct = radon_forward_direct(f, frames, kX);
  double e10 = 0;
  for (std::size_t k = 0; k < kX.size(); ++k)
    e10 = std::max(e10, std::abs(slice.row(0)[k] - direct.row(0)[k]));
  CHECK(e10 < 1e-6);
  CHECK(sup_vs(slice, std_g) < 1e-4);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    auto r = slice.row(i);
    for (std::size_t k = 0; k < kX.size(); ++k) CHECK(std::abs(r[k] - r[kX.size() - 1 - k]) < 1e-10);
  }
}

TEST_CASE("slice path refuses rays through an unresolved spectrum") {
  auto grid = numerics::Grid1D::cell_centered(3, 32);
  auto f = make_gaussian(phasespace::narrow_gaussian(0, 0, 0.5 * grid.spacing()), {grid, grid},
                         {1.0});
  numerics::Grid1D x = numerics::Grid1D::cell_centered(6, 256);
  try {
    radon_forward_slice(f, FrameSet::list({{0.2, 0.1}, {3, 2}}), x);
    FAIL("expected an accuracy error");
  } catch (const AccuracyError& e) {
    CHECK(std::string(e.what()).find("#1") != std::string::npos);
  }
}

TEST_CASE("slice equals direct on random Gaussians; both are nonnegative") {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 6; ++t) {
    Gauss2 g = random_gauss(rng);
    auto f = make_gaussian(g.spec(), {kBox, kBox});
    std::vector<Frame> fr;
    for (int i = 0; i < 5; ++i) fr.push_back(random_frame(rng));
    auto frames = FrameSet::list(fr);
    auto s = radon_forward_slice(f, frames, kX);
    auto d = radon_forward_direct(f, frames, kX);
    double e = 0, smin = 0, dmin = 0;
    for (std::size_t i = 0; i < s.values().size(); ++i) {
      e = std::max(e, std::abs(s.values()[i] - d.values()[i]));
      smin = std::min(smin, s.values()[i]);
      dmin = std::min(dmin, d.values()[i]);
    }
    CHECK(e < 1e-4);
    CHECK(dmin >= -1e-9);
    CHECK(smin >= -1e-6);
    CHECK(tomogram_axioms(s).max_normalization_error < 1e-6);
    CHECK(tomogram_axioms(d).max_normalization_error < 1e-6);
  }
}

TEST_CASE("round trip through a frame lattice") {
  std::mt19937_64 rng(77);
  auto box = numerics::Grid1D::cell_centered(10, 96);
  auto lat = numerics::Grid1D::cell_centered(2 * oracle::pi / box.length() * 24, 48);
  numerics::Grid1D x = numerics::Grid1D::cell_centered(2 * oracle::pi * 16, 2048);
  auto frames = FrameSet::lattice(lat, lat);
  for (int t = 0; t < 2; ++t) {
    Gauss2 g = random_gauss(rng);
    auto f = make_gaussian(g.spec(), {box, box});
    auto w = radon_forward_slice(f, frames, x);
    auto back = radon_inverse(w, box, box);
    double e = 0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
      e = std::max(e, std::abs(back.values()[i] - f.values()[i]));
    CHECK(e < 2e-4);
    CHECK(std::abs(numerics::integrate_all(back.field()) - 1) < 1e-6);
    auto m = phasespace::moments(back);
    CHECK(std::abs(m.mean_q - g.mq) < box.spacing());
    CHECK(std::abs(m.mean_p - g.mp) < box.spacing());
  }
}

TEST_CASE("shifted Gaussian is recovered from an angular tomogram") {
  Gauss2 g{1, 2, 0.8, 0.1, 0.9};
  auto box = numerics::Grid1D::cell_centered(10, 160);
  auto f = make_gaussian(g.spec(), {box, box});
  auto frames = FrameSet::angular(96);
  auto w = radon_forward_direct(f, frames, box);
  auto back = radon_inverse(w, box, box);
  double e = 0;
  for (std::size_t i = 0; i < f.values().size(); ++i)
    e = std::max(e, std::abs(back.values()[i] - f.values()[i]));
  CHECK(e < 2e-4);
  auto m = phasespace::moments(back);
  CHECK(std::abs(m.mean_q - 1) < box.spacing());
  CHECK(std::abs(m.mean_p - 2) < box.spacing());
  CHECK(std::abs(numerics::integrate_all(back.field()) - 1) < 1e-6);
  CHECK_THROWS_AS(radon_inverse(Tomogram(FrameSet::list({{1, 0}}), box,
                                         std::vector<double>(box.size())),
                                box, box),
                  CapabilityError);
}

TEST_CASE("two-particle transform") {
  auto g4 = numerics::Grid1D::cell_centered(9, 48);
  auto x = numerics::Grid1D::cell_centered(12, 200);
  DirectOptions o12;
  o12.order = 12;
  Gauss2 a{0.3, -0.2, 0.9, 0.1, 1.0}, b{-0.5, 0.4, 1.1, -0.2, 0.8};
  auto fa = make_gaussian(a.spec(), {g4, g4}), fb = make_gaussian(b.spec(), {g4, g4});
  auto fr1 = FrameSet::list({{1, 0}, {0.6, 0.8}, {-0.5, 1.2}});
  auto fr2 = FrameSet::list({{0, 1}, {1.1, -0.4}});
  auto w = radon_forward_2p(phasespace::make_product(fa, fb), fr1, x, fr2, x, o12);
  auto w1 = radon_forward_direct(fa, fr1, x, o12), w2 = radon_forward_direct(fb, fr2, x, o12);
  double e = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < x.size(); ++l)
          e = std::max(e, std::abs(w.values()[((i * x.size() + k) * 2 + j) * x.size() + l] -
                                   w1.row(i)[k] * w2.row(j)[l]));
  CHECK(e < 1e-6);
  CHECK(tomogram_axioms(w).max_normalization_error < 1e-6);

  // Correlated 4D Gaussian: frames (1,0), (1,0) give the (q1, q2) marginal.
  GaussianSpec s{{0.2, 0, -0.3, 0},
                 {1.0, 0.2, 0.4, 0.1, 0.2, 0.9, 0.1, 0.0, 0.4, 0.1, 1.2, 0.2, 0.1, 0.0, 0.2, 0.8}};
  auto f = make_gaussian(s, {g4, g4, g4, g4});
  auto one = FrameSet::list({{1, 0}});
  auto wq = radon_forward_2p(f, one, g4, one, g4);
  double det = 1.0 * 1.2 - 0.4 * 0.4, eq = 0;
  for (std::size_t k = 0; k < g4.size(); ++k)
    for (std::size_t l = 0; l < g4.size(); ++l) {
      double d1 = g4.point(k) - 0.2, d2 = g4.point(l) + 0.3;
      double ref = std::exp(-0.5 * (1.2 * d1 * d1 - 0.8 * d1 * d2 + 1.0 * d2 * d2) / det) /
                   (2 * oracle::pi * std::sqrt(det));
      eq = std::max(eq, std::abs(wq.values()[k * g4.size() + l] - ref));
    }
  CHECK(eq < 1e-6);
}

TEST_CASE("reduction of two-particle tomograms") {
  auto g4 = numerics::Grid1D::cell_centered(9, 48);
  auto x = numerics::Grid1D::cell_centered(12, 200);
  DirectOptions o12;
  o12.order = 12;
  GaussianSpec s{{0.2, 0.1, -0.3, 0},
                 {1.0, 0.2, 0.4, 0.1, 0.2, 0.9, 0.1, 0.0, 0.4, 0.1, 1.2, 0.2, 0.1, 0.0, 0.2, 0.8}};
  auto f = make_gaussian(s, {g4, g4, g4, g4});
  auto fr1 = FrameSet::list({{1, 0}, {0.6, 0.8}, {-0.5, 1.2}});
  auto fr2 = FrameSet::list({{0, 1}, {1.1, -0.4}, {1, 0}});
  auto red = reduce_tomogram(radon_forward_2p(f, fr1, x, fr2, x, o12));
  auto ref = radon_forward_direct(phasespace::marginalize_second_particle(f), fr1, x, o12);
  double e = 0;
  for (std::size_t i = 0; i < ref.values().size(); ++i)
    e = std::max(e, std::abs(red.reduced.values()[i] - ref.values()[i]));
  CHECK(e < 1e-6);
  CHECK(red.spread < 1e-6);
  CHECK(tomogram_axioms(red.reduced).max_normalization_error < 1e-6);

  // Product tomogram reduces to its first factor.
  auto fa = make_gaussian(phasespace::standard_gaussian(1), {g4, g4});
  auto w1 = radon_forward_direct(fa, fr1, x, o12);
  auto w2 = radon_forward_direct(fa, fr2, x, o12);
  std::vector<double> prod;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t l = 0; l < x.size(); ++l) prod.push_back(w1.row(i)[k] * w2.row(j)[l]);
  auto rp = reduce_tomogram(Tomogram(fr1, x, fr2, x, prod));
  double ep = 0;
  for (std::size_t i = 0; i < w1.values().size(); ++i)
    ep = std::max(ep, std::abs(rp.reduced.values()[i] - w1.values()[i]));
  CHECK(ep < 1e-8);

  // A frame-dependent second factor is inconsistent.
  for (std::size_t i = 0; i < prod.size(); i += 3 * x.size()) prod[i + 5] += 0.1;
  CHECK_THROWS_AS(reduce_tomogram(Tomogram(fr1, x, fr2, x, prod)), InconsistencyError);
}

TEST_CASE("homogeneity on lattice, angular and list tomograms") {
  Gauss2 g{0.3, -0.2, 0.9, 0.15, 0.8};
  auto f = make_gaussian(g.spec(), {kBox, kBox});
  auto lat = numerics::Grid1D::cell_centered(2, 64);
  numerics::Grid1D x = numerics::Grid1D::cell_centered(24, 4096);
  auto w = radon_forward_slice(f, FrameSet::lattice(lat, lat), x);
  std::vector<double> lambdas{2, 1, -1, 0.5, -2, -0.5};
  HomogeneityOptions ho;
  ho.x_stride = 16;
  auto rep = check_homogeneity(w, lambdas, ho);
  for (const auto& e : rep) {
    CHECK(e.sampled > 0);
    CHECK(e.max_deviation < 1e-4);
  }
  CHECK(rep[1].max_deviation == 0.0);
  CHECK(rep[0].skipped > 0);

  auto wa = radon_forward_direct(f, FrameSet::angular(64), x);
  double minus_one = -1, two = 2;
  auto ra = check_homogeneity(wa, std::span<const double>(&minus_one, 1));
  CHECK(ra[0].max_deviation < 1e-4);
  CHECK(ra[0].sampled > 0);
  CHECK(check_homogeneity(wa, std::span<const double>(&two, 1))[0].sampled == 0);

  auto fl = FrameSet::list({{0.5, 0.25}, {1.0, 0.5}, {-0.5, -0.25}, {-1, -0.5}});
  auto wl = radon_forward_direct(f, fl, x);
  double ls[] = {2, -1, -2};
  for (const auto& e : check_homogeneity(wl, ls)) CHECK(e.max_deviation < 1e-4);
  double zero = 0;
  CHECK_THROWS_AS(check_homogeneity(wl, std::span<const double>(&zero, 1)), ArgumentError);
}

TEST_CASE("two-particle homogeneity") {
  auto g4 = numerics::Grid1D::cell_centered(9, 48);
  auto x = numerics::Grid1D::cell_centered(12, 96);
  auto f = make_gaussian(phasespace::standard_gaussian(2), {g4, g4, g4, g4});
  auto fr = FrameSet::list({{0.5, 0.25}, {1.0, 0.5}, {-0.5, -0.25}});
  auto w = radon_forward_2p(f, fr, x, fr, x);
  std::pair<double, double> ls[] = {{2, 1}, {1, -1}, {-1, 2}};
  for (const auto& e : check_homogeneity_2p(w, ls)) {
    CHECK(e.sampled > 0);
    CHECK(e.max_deviation < 1e-4);
  }
}

TEST_CASE("positivity probes") {
  auto box = numerics::Grid1D::cell_centered(10, 128);
  auto frames = FrameSet::angular(64);
  Gauss2 wide{0, 0, 1.5, 0, 1.5}, narrow{0, 0, 0.3, 0, 0.3};
  auto w1 = radon_forward_direct(make_gaussian(wide.spec(), {box, box}), frames, box);
  std::vector<std::array<double, 2>> probes;
  for (double q = -3; q <= 3; q += 0.5)
    for (double p = -3; p <= 3; p += 0.5) probes.push_back({q, p});
  auto r = check_positivity(w1, box, box, probes);
  CHECK(r.min_value >= -1e-6);

  // (w_wide - 0.5 w_narrow) / 0.5 is the tomogram of a signed density that is
  // negative at the origin.
  auto w2 = radon_forward_direct(make_gaussian(narrow.spec(), {box, box}), frames, box);
  std::vector<double> mix(w1.values().size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = (w1.values()[i] - 0.5 * w2.values()[i]) / 0.5;
  auto rn = check_positivity(w1.with_values(mix), box, box, probes);
  double expect = (wide.density(rn.argmin_q, rn.argmin_p) - 0.5 * narrow.density(rn.argmin_q, rn.argmin_p)) / 0.5;
  CHECK(rn.min_value < -0.1);
  CHECK(std::abs(rn.min_value - expect) < 1e-4);
  CHECK(std::abs(rn.argmin_q) < 1e-12);

  std::array<double, 2> far[] = {{9.5, -9.5}};
  CHECK(std::abs(check_positivity(w1, box, box, far).min_value) < 1e-8);
}
