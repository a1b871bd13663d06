#include "tomokin/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tomokin/bogolyubov/bogolyubov.hpp"
#include "tomokin/cli/fieldfile.hpp"
#include "tomokin/liouville/liouville.hpp"
#include "tomokin/radon/checks.hpp"
#include "tomokin/radon/inverse.hpp"
#include "tomokin/radon/transform.hpp"
#include "tomokin/tomoprop/tomoprop.hpp"

namespace tomokin::cli {
namespace {

using numerics::Grid1D;
using phasespace::PhaseSpaceDensity;
using radon::FrameSet;
using radon::Tomogram;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSameTime = 1e-12;

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.9g", v);
  return b;
}

std::string exact(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string time_label(double t) {
  char b[40];
  std::snprintf(b, sizeof b, "%.6g", t);
  return b;
}

// A library failure inside a named stage of the pipeline.
class StageFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageFailure(name + ": " + e.what());
  }
}

const char* propagator_name(Propagator p) {
  switch (p) {
    case Propagator::Phase: return "phase";
    case Propagator::Tomo: return "tomo";
    case Propagator::Both: break;
  }
  return "both";
}

std::vector<double> output_times(const OutputSpec& o, const Scenario& s) {
  return o.times.empty() ? std::vector<double>{s.t_final} : o.times;
}

std::vector<double> all_times(const Scenario& s) {
  std::vector<double> t{0, s.t_final};
  for (const auto& o : s.outputs)
    for (double x : output_times(o, s)) t.push_back(x);
  std::sort(t.begin(), t.end());
  std::vector<double> out;
  for (double x : t)
    if (out.empty() || x - out.back() > kSameTime) out.push_back(x);
  return out;
}

bool same_time(double a, double b) { return std::abs(a - b) <= kSameTime; }

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

double min_of(std::span<const double> v) {
  double m = kInf;
  for (double x : v) m = std::min(m, x);
  return m;
}

std::string lambda_key(double l) { return "lambda(" + num(l) + ")"; }

// Columns: frame coordinates and X per particle, then the value.
std::string tomogram_columns(const Tomogram& w) {
  std::ostringstream os;
  if (w.particles() == 1) {
    os << "# mu nu X w\n";
    const auto& fs = w.frames();
    const auto& x = w.x_axis();
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t k = 0; k < x.size(); ++k)
        os << exact(fs[i].mu) << ' ' << exact(fs[i].nu) << ' ' << exact(x.point(k)) << ' '
           << exact(w.row(i)[k]) << '\n';
    return os.str();
  }
  os << "# mu1 nu1 X1 mu2 nu2 X2 w\n";
  const auto &f1 = w.frames(0), &f2 = w.frames(1);
  const auto &x1 = w.x_axis(0), &x2 = w.x_axis(1);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < f1.size(); ++i)
    for (std::size_t k = 0; k < x1.size(); ++k)
      for (std::size_t j = 0; j < f2.size(); ++j)
        for (std::size_t l = 0; l < x2.size(); ++l)
          os << exact(f1[i].mu) << ' ' << exact(f1[i].nu) << ' ' << exact(x1.point(k)) << ' '
             << exact(f2[j].mu) << ' ' << exact(f2[j].nu) << ' ' << exact(x2.point(l)) << ' '
             << exact(w.values()[idx++]) << '\n';
  return os.str();
}

std::string field_columns(const numerics::RealField& f) {
  std::ostringstream os;
  os << "#";
  for (std::size_t a = 0; a < f.rank(); ++a) os << " x" << a;
  os << " value\n";
  auto shape = f.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t a = 0; a < shape.size(); ++a) os << exact(f.axis(a).point(idx[a])) << ' ';
    os << exact(f[i]) << '\n';
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++idx[a] < shape[a]) break;
      idx[a] = 0;
    }
  }
  return os.str();
}

class Checks {
 public:
  explicit Checks(std::vector<CheckResult>& out) : out_(out) {}
  CheckResult& open(const std::string& name) {
    out_.push_back(CheckResult{name, {}});
    return out_.back();
  }

 private:
  std::vector<CheckResult>& out_;
};

void info(CheckResult& c, const std::string& key, double v) { c.measures.push_back({key, v, std::nullopt, false}); }
void bound(CheckResult& c, const std::string& key, double v, double limit) {
  c.measures.push_back({key, v, limit, false});
}
void at_least(CheckResult& c, const std::string& key, double v, double limit) {
  c.measures.push_back({key, v, limit, true});
}

radon::DirectOptions relaxed_direct(const numerics::Exec& exec) {
  radon::DirectOptions o;
  o.normalization_tolerance = kInf;
  o.negativity_tolerance = kInf;
  o.exec = exec;
  return o;
}

double gaussian_tomogram(const phasespace::GaussianSpec& g, double X, double mu, double nu) {
  const auto& m = g.mean;
  const auto& c = g.covariance;
  double mean = mu * m[0] + nu * m[1];
  double var = mu * mu * c[0] + 2 * mu * nu * c[1] + nu * nu * c[3];
  double d = X - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2 * std::numbers::pi * var);
}

// <p> from the frame (0, 1) and <H> from (0, 1) and (1, 0).
struct Expectations {
  double p = 0, energy = 0;
};

Expectations expectations(const Tomogram& w, const phasespace::OneBody& u) {
  const auto& fs = w.frames();
  auto ip = fs.find({0, 1}), iq = fs.find({1, 0});
  if (!ip || !iq) throw ArgumentError("conservation needs the frames (1, 0) and (0, 1)");
  const auto& x = w.x_axis();
  Expectations e;
  double kinetic = 0, potential = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double X = x.point(k);
    e.p += X * w.row(*ip)[k];
    kinetic += 0.5 * X * X * w.row(*ip)[k];
    potential += phasespace::one_body_value(u, X) * w.row(*iq)[k];
  }
  double h = x.spacing();
  e.p *= h;
  e.energy = h * (kinetic + potential);
  return e;
}

struct Slice {
  double t = 0;
  std::optional<PhaseSpaceDensity> f;
  std::optional<Tomogram> phase_w, tomo_w;
};

class Run {
 public:
  Run(const Scenario& s, const RunOptions& o, RunResult& r)
      : s_(s), o_(o), r_(r), checks_(r.checks), dir_(o.out_dir / s.name) {
    exec_.threads = std::max(1u, o.threads);
  }

  void execute() {
    std::filesystem::create_directories(dir_);
    if (s_.particles == 1)
      one_particle();
    else
      two_particle();
  }

 private:
  double tol(const std::string& key) const { return tolerance(s_, key, o_.tolerance_scale); }
  bool wants(const std::string& c) const {
    return std::find(s_.checks.begin(), s_.checks.end(), c) != s_.checks.end();
  }

  void write_bytes(const std::string& file, const std::string& bytes) {
    auto path = dir_ / file;
    write_atomic(path, bytes);
    r_.files.push_back(path);
  }
  void emit(const std::string& stem, const Tomogram& w, OutputSpec::Format fmt) {
    if (fmt == OutputSpec::Format::Field)
      write_bytes(stem + ".tmk", encode(from_tomogram(w)));
    else
      write_bytes(stem + ".dat", tomogram_columns(w));
  }
  void emit(const std::string& stem, const numerics::RealField& f, OutputSpec::Format fmt) {
    if (fmt == OutputSpec::Format::Field)
      write_bytes(stem + ".tmk", encode(from_field(f)));
    else
      write_bytes(stem + ".dat", field_columns(f));
  }

  liouville::PropagatorConfig propagator() const {
    liouville::PropagatorConfig pc;
    pc.dt = s_.dt;
    return pc;
  }
  liouville::EvolveOptions evolve_options() const {
    liouville::EvolveOptions eo;
    eo.exec = exec_;
    return eo;
  }

  tomoprop::TransformRoute transform_route(const Grid1D& g) const {
    tomoprop::TransformRoute route{g, g, {}};
    route.inverse.exec = exec_;
    route.forward.exec = exec_;
    return route;
  }

  void one_particle();
  void two_particle();
  void homogeneity_1p(const PhaseSpaceDensity& f0, const Tomogram& w0,
                      const std::vector<Slice>& slices);
  void conservation_1p(const std::vector<Slice>& slices);

  const Scenario& s_;
  const RunOptions& o_;
  RunResult& r_;
  Checks checks_;
  std::filesystem::path dir_;
  numerics::Exec exec_;
};

void Run::one_particle() {
  Grid1D g = s_.phase.grid();
  std::vector<Grid1D> axes{g, g};
  FrameSet frames = s_.frames.build();
  Grid1D x = s_.x.grid();
  auto dopt = relaxed_direct(exec_);
  const auto& u = s_.potential;

  auto f0 = stage("initial state", [&] {
    return s_.initial == InitialKind::Gaussian ? phasespace::make_gaussian(s_.gaussian, axes)
                                               : phasespace::make_boltzmann(u, axes);
  });
  auto w0 = stage("transform", [&] { return radon::radon_forward_direct(f0, frames, x, dopt); });

  const bool phase = s_.propagator != Propagator::Tomo;
  const bool tomo = s_.propagator != Propagator::Phase;
  auto pc = propagator();
  auto eo = evolve_options();
  tomoprop::TomoPDEConfig tc;
  tc.dt = s_.dt;
  if (s_.route == Route::Transform) tc.transform = transform_route(g);

  std::vector<Slice> slices;
  Tomogram wt = w0;
  double prev = 0;
  for (double t : all_times(s_)) {
    Slice sl{t, {}, {}, {}};
    if (phase) {
      if (t == 0) {
        sl.f = f0;
        sl.phase_w = w0;
      } else {
        sl.f = stage("phase evolution", [&] {
          return s_.initial == InitialKind::Gaussian
                     ? liouville::evolve_density(s_.gaussian, axes, u, t, pc, eo)
                     : liouville::evolve_density(f0, u, t, pc, eo);
        });
        sl.phase_w =
            stage("transform", [&] { return radon::radon_forward_direct(*sl.f, frames, x, dopt); });
      }
    }
    if (tomo) {
      if (t > prev) {
        tc.t_final = t - prev;
        wt = stage("tomographic evolution", [&] { return tomoprop::evolve_tomogram(wt, u, tc); });
        prev = t;
      }
      sl.tomo_w = wt;
    }
    slices.push_back(std::move(sl));
  }

  auto at = [&](double t) -> const Slice& {
    for (const auto& sl : slices)
      if (same_time(sl.t, t)) return sl;
    throw NumericError("no snapshot at t = " + num(t));
  };
  for (const auto& o : s_.outputs) {
    if (o.what == OutputSpec::What::Report) continue;
    for (double t : output_times(o, s_)) {
      const Slice& sl = at(t);
      auto tl = "_t" + time_label(t);
      if (o.what == OutputSpec::What::Tomogram) {
        if (sl.phase_w) emit("tomogram_phase" + tl, *sl.phase_w, o.format);
        if (sl.tomo_w) emit("tomogram_tomo" + tl, *sl.tomo_w, o.format);
      } else if (o.what == OutputSpec::What::Density) {
        emit("density" + tl, sl.f->field(), o.format);
      }
    }
  }

  const Slice& last = slices.back();
  const bool evolved = s_.t_final > 0;
  if (wants("normalization")) {
    auto& c = checks_.open("normalization");
    bound(c, "initial.max_error", radon::tomogram_axioms(w0).max_normalization_error,
          tol("normalization"));
    if (evolved) {
      if (last.phase_w)
        bound(c, "phase.final.max_error",
              radon::tomogram_axioms(*last.phase_w).max_normalization_error,
              tol("normalization.evolved"));
      if (last.tomo_w)
        bound(c, "tomo.final.max_error",
              radon::tomogram_axioms(*last.tomo_w).max_normalization_error,
              tol("normalization.evolved"));
    }
  }
  if (wants("positivity")) {
    auto& c = checks_.open("positivity");
    double lim = -tol("positivity");
    at_least(c, "initial.min_value", min_of(w0.values()), lim);
    if (evolved) {
      if (last.phase_w) at_least(c, "phase.final.min_value", min_of(last.phase_w->values()), lim);
      if (last.f) at_least(c, "phase.final.density_min", min_of(last.f->values()), lim);
      if (last.tomo_w) at_least(c, "tomo.final.min_value", min_of(last.tomo_w->values()), lim);
    }
  }
  if (wants("homogeneity")) homogeneity_1p(f0, w0, slices);
  if (wants("round_trip")) {
    auto& c = checks_.open("round_trip");
    radon::InverseOptions io;
    io.exec = exec_;
    auto raw = stage("round_trip", [&] { return radon::radon_inverse_raw(w0, g, g, io); });
    bound(c, "sup_error", sup_diff(raw.values.values(), f0.values()), tol("round_trip"));
    info(c, "max_imag", raw.max_imag);
    double mass = 0;
    for (double v : raw.values.values()) mass += v;
    info(c, "mass_error", std::abs(mass * f0.cell_volume() - 1));
  }
  if (wants("transform")) {
    auto& c = checks_.open("transform");
    std::mt19937_64 rng(s_.seed);
    std::uniform_real_distribution<double> th(0, 2 * std::numbers::pi), rad(0.5, 2.0);
    std::vector<radon::Frame> list;
    for (int i = 0; i < 20; ++i) {
      double a = th(rng), r = rad(rng);
      list.push_back({r * std::cos(a), r * std::sin(a)});
    }
    FrameSet fs = FrameSet::list(list);
    radon::SliceOptions so;
    so.normalization_tolerance = kInf;
    so.negativity_tolerance = kInf;
    so.exec = exec_;
    auto direct = stage("transform", [&] { return radon::radon_forward_direct(f0, fs, x, dopt); });
    auto slice = stage("transform", [&] { return radon::radon_forward_slice(f0, fs, x, so); });
    double ed = 0, es = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t k = 0; k < x.size(); ++k) {
        double ref = gaussian_tomogram(s_.gaussian, x.point(k), fs[i].mu, fs[i].nu);
        ed = std::max(ed, std::abs(direct.row(i)[k] - ref));
        es = std::max(es, std::abs(slice.row(i)[k] - ref));
      }
    info(c, "frames", static_cast<double>(fs.size()));
    bound(c, "direct.sup_error", ed, tol("transform.direct"));
    bound(c, "slice.sup_error", es, tol("transform.slice"));
  }
  if (wants("commuting")) {
    auto& c = checks_.open("commuting");
    for (const auto& sl : slices) {
      if (sl.t == 0) continue;
      auto d = tomoprop::tomogram_distance(*sl.phase_w, *sl.tomo_w);
      auto key = "t_" + time_label(sl.t);
      if (&sl == &last)
        bound(c, key + ".sup", d.sup, tol("commuting"));
      else
        info(c, key + ".sup", d.sup);
      info(c, key + ".l2", d.l2);
    }
  }
  if (wants("conservation")) conservation_1p(slices);
  if (wants("stationarity")) {
    auto& c = checks_.open("stationarity");
    auto rhs = stage("stationarity", [&] {
      return tc.transform ? tomoprop::tomographic_rhs_transform(w0, u, *tc.transform)
                          : tomoprop::tomographic_rhs(w0, u);
    });
    double sup = 0;
    for (double v : rhs.values()) sup = std::max(sup, std::abs(v));
    bound(c, "rhs.sup", sup, tol("stationarity"));
  }
}

void Run::homogeneity_1p(const PhaseSpaceDensity& f0, const Tomogram& w0,
                         const std::vector<Slice>& slices) {
  auto& c = checks_.open("homogeneity");
  const double limit = tol("homogeneity");
  auto record = [&](const std::string& prefix, const std::vector<radon::HomogeneityEntry>& rep,
                    double lim) {
    for (const auto& e : rep) {
      if (e.sampled == 0) continue;
      auto key = prefix + "." + lambda_key(e.lambda);
      bound(c, key + ".max_deviation", e.max_deviation, lim);
      info(c, key + ".sampled", static_cast<double>(e.sampled));
    }
  };
  const std::vector<double> scales{-0.5, 0.5, -2, 2};
  const std::vector<double> minus_one{-1};
  // Angular sets sit on one circle, so the scaled frames come from an auxiliary
  // lattice tomogram of the same density.
  auto lat = Grid1D::cell_centered(2, 64);
  auto xs = Grid1D::cell_centered(24, 4096);
  radon::SliceOptions so;
  so.exec = exec_;
  so.normalization_tolerance = kInf;
  so.negativity_tolerance = kInf;
  auto aux = stage("homogeneity", [&] {
    return radon::radon_forward_slice(f0, FrameSet::lattice(lat, lat), xs, so);
  });
  radon::HomogeneityOptions ho;
  ho.x_stride = 16;
  record("lattice", radon::check_homogeneity(aux, scales, ho), limit);
  const bool angular = w0.frames().scheme() == radon::FrameScheme::Angular;
  record("initial", radon::check_homogeneity(w0, angular ? minus_one : scales), limit);
  const auto& last = slices.back();
  if (last.t > 0 && last.tomo_w && angular)
    record("tomo.final", radon::check_homogeneity(*last.tomo_w, minus_one),
           tol("homogeneity.evolved"));
}

void Run::conservation_1p(const std::vector<Slice>& slices) {
  auto& c = checks_.open("conservation");
  const auto ob = phasespace::one_body_part(s_.potential);
  const bool free = std::holds_alternative<phasespace::Free>(s_.potential);
  auto path = [&](const std::string& name, auto member) {
    std::optional<Expectations> first;
    double dp = 0, de = 0;
    for (const auto& sl : slices) {
      const auto& w = sl.*member;
      if (!w) return;
      auto e = expectations(*w, ob);
      if (!first) first = e;
      dp = std::max(dp, std::abs(e.p - first->p));
      de = std::max(de, std::abs(e.energy - first->energy));
    }
    info(c, name + ".mean_p.initial", first->p);
    if (free)
      bound(c, name + ".mean_p.drift", dp, tol("conservation.momentum"));
    else
      info(c, name + ".mean_p.drift", dp);
    info(c, name + ".energy.initial", first->energy);
    bound(c, name + ".energy.drift", de, tol("conservation.energy"));
  };
  path("phase", &Slice::phase_w);
  path("tomo", &Slice::tomo_w);
}

void Run::two_particle() {
  Grid1D g = s_.phase.grid();
  std::vector<Grid1D> axes{g, g, g, g};
  FrameSet frames1 = s_.frames.build();
  FrameSet frames2 = s_.frames2 ? s_.frames2->build() : bogolyubov::second_particle_frames();
  Grid1D x1 = s_.x.grid();
  Grid1D x2 = s_.x2 ? s_.x2->grid() : x1;
  auto dopt = relaxed_direct(exec_);
  const auto& u = s_.potential;
  auto pc = propagator();
  auto eo = evolve_options();

  std::optional<CheckResult> norm, pos, red;
  if (wants("normalization")) norm = CheckResult{"normalization", {}};
  if (wants("positivity")) pos = CheckResult{"positivity", {}};
  if (wants("reduction")) red = CheckResult{"reduction", {}};

  for (double t : all_times(s_)) {
    auto f = stage(t == 0 ? "initial state" : "phase evolution", [&] {
      if (s_.initial == InitialKind::Boltzmann) return phasespace::make_boltzmann(u, axes);
      return t == 0 ? phasespace::make_gaussian(s_.gaussian, axes)
                    : liouville::evolve_density(s_.gaussian, axes, u, t, pc, eo);
    });
    auto w = stage("transform", [&] {
      return radon::radon_forward_2p(f, frames1, x1, frames2, x2, dopt);
    });
    radon::ReductionOptions ro;
    ro.spread_tolerance = kInf;
    auto reduced = stage("reduction", [&] { return radon::reduce_tomogram(w, ro); });
    auto marginal = phasespace::marginalize_second_particle(f);
    auto tl = time_label(t);
    auto key = "t_" + tl;

    for (const auto& o : s_.outputs) {
      bool here = false;
      for (double ot : output_times(o, s_)) here = here || same_time(ot, t);
      if (!here) continue;
      if (o.what == OutputSpec::What::Tomogram) emit("tomogram_t" + tl, w, o.format);
      if (o.what == OutputSpec::What::Reduced) emit("reduced_t" + tl, reduced.reduced, o.format);
      if (o.what == OutputSpec::What::Density)
        emit("density_marginal_t" + tl, marginal.field(), o.format);
    }
    auto ax = radon::tomogram_axioms(w);
    if (norm)
      bound(*norm, key + ".max_error", ax.max_normalization_error,
            tol(t == 0 ? "normalization" : "normalization.evolved"));
    if (pos) at_least(*pos, key + ".min_value", ax.min_value, -tol("positivity"));
    if (red) {
      auto w1 = stage("reduction",
                      [&] { return radon::radon_forward_direct(marginal, frames1, x1, dopt); });
      bound(*red, key + ".square", sup_diff(reduced.reduced.values(), w1.values()),
            tol("reduction"));
      bound(*red, key + ".spread", reduced.spread, tol("reduction.spread"));
    }
  }
  for (auto* c : {&norm, &pos, &red})
    if (*c) r_.checks.push_back(std::move(**c));

  if (wants("bogolyubov")) {
    auto layout = bogolyubov::make_layout(s_.frames.angles, x1, x2, g, g);
    if (s_.frames2) layout.frames2 = frames2;
    layout.forward.exec = exec_;
    layout.inverse.exec = exec_;
    bogolyubov::Pipelines p{u, u, layout, {}, {}};
    p.reduction.spread_tolerance = kInf;
    p.flag_threshold = tol("bogolyubov.cross");
    bogolyubov::StreamConfig cfg;
    cfg.sample_times = s_.sample_times;
    cfg.dt = s_.residual_dt;
    cfg.propagator = pc;
    cfg.evolve = eo;
    auto rep = stage("bogolyubov",
                     [&] { return bogolyubov::stream_reduction(s_.gaussian, axes, p, cfg); });
    auto& c = checks_.open("bogolyubov");
    bound(c, "cross.sup", rep.cross_consistency.sup, tol("bogolyubov.cross"));
    info(c, "cross.l2", rep.cross_consistency.l2);
    bound(c, "phase.sup", rep.residual_phase.sup, tol("bogolyubov.phase"));
    info(c, "phase.l2", rep.residual_phase.l2);
    bound(c, "tomo.sup", rep.residual_tomo.sup, tol("bogolyubov.tomo"));
    info(c, "tomo.l2", rep.residual_tomo.l2);
    bound(c, "boundary", rep.boundary_terms, tol("bogolyubov.boundary"));
    info(c, "spread", rep.spread);
  }
}

}  // namespace

bool Measure::ok() const {
  if (!limit) return std::isfinite(value);
  return floor ? value >= *limit : value <= *limit;
}

bool CheckResult::passed() const {
  return std::all_of(measures.begin(), measures.end(), [](const Measure& m) { return m.ok(); });
}

std::string CheckResult::failure() const {
  for (const auto& m : measures) {
    if (m.ok()) continue;
    std::string msg = "check '" + name + "' failed: " + m.key + " = " + num(m.value);
    if (m.limit) msg += (m.floor ? " below " : " above ") + num(*m.limit);
    return msg;
  }
  return {};
}

std::string format_report(const Scenario& s, const std::vector<CheckResult>& checks,
                          const RunOptions& opt) {
  bool all = std::all_of(checks.begin(), checks.end(),
                         [](const CheckResult& c) { return c.passed(); });
  std::ostringstream os;
  os << "scenario = " << s.name << '\n';
  os << "particles = " << s.particles << '\n';
  os << "propagator = " << propagator_name(s.propagator) << '\n';
  os << "route = " << (s.route == Route::Transform ? "transform" : "operator") << '\n';
  os << "t_final = " << num(s.t_final) << '\n';
  os << "dt = " << num(s.dt) << '\n';
  os << "tolerance_scale = " << num(opt.tolerance_scale) << '\n';
  os << "status = " << (all ? "pass" : "fail") << '\n';
  for (const auto& c : checks) {
    os << "\n[" << c.name << "]\n";
    for (const auto& m : c.measures) {
      os << m.key << " = " << num(m.value) << '\n';
      if (m.limit) os << m.key << (m.floor ? ".floor = " : ".limit = ") << num(*m.limit) << '\n';
    }
    os << "status = " << (c.passed() ? "pass" : "fail") << '\n';
  }
  return os.str();
}

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
  RunResult r;
  try {
    Run(s, opt, r).execute();
  } catch (const StageFailure& e) {
    r.exit_code = kNumericFailure;
    r.message = e.what();
    return r;
  } catch (const std::exception& e) {
    r.exit_code = kNumericFailure;
    r.message = e.what();
    return r;
  }
  r.report = format_report(s, r.checks, opt);
  auto path = opt.out_dir / s.name / "report.txt";
  try {
    write_atomic(path, r.report);
    r.files.push_back(path);
  } catch (const std::exception& e) {
    r.exit_code = kNumericFailure;
    r.message = std::string("report: ") + e.what();
    return r;
  }
  for (const auto& c : r.checks)
    if (!c.passed()) {
      r.exit_code = kNumericFailure;
      r.message = c.failure();
      return r;
    }
  r.message = "scenario '" + s.name + "' passed";
  return r;
}

RunResult run_text(const std::string& yaml, const RunOptions& opt) {
  Scenario s;
  try {
    s = parse_scenario(yaml);
  } catch (const ParseError& e) {
    return RunResult{kParseFailure, e.what(), {}, {}, {}};
  }
  try {
    validate(s);
  } catch (const ValidationError& e) {
    return RunResult{kValidationFailure, e.what(), {}, {}, {}};
  }
  return run_scenario(s, opt);
}

RunResult run_path_or_preset(const std::string& target, const RunOptions& opt) {
  if (!std::filesystem::exists(target)) {
    if (const Preset* p = find_preset(target)) return run_text(p->yaml, opt);
    return RunResult{kParseFailure, "no scenario file or preset named '" + target + "'", {}, {}, {}};
  }
  std::ifstream in(target);
  if (!in) return RunResult{kParseFailure, "cannot read scenario " + target, {}, {}, {}};
  std::ostringstream ss;
  ss << in.rdbuf();
  return run_text(ss.str(), opt);
}

}  // namespace tomokin::cli
