#include "tomokin/cli/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tomokin::cli {
namespace {

using Keys = std::set<std::string>;

[[noreturn]] void parse_fail(const YAML::Node& n, const std::string& what) {
  std::ostringstream os;
  os << what;
  if (n.Mark().line >= 0) os << " (line " << n.Mark().line + 1 << ")";
  throw ParseError(os.str());
}

void require_map(const YAML::Node& n, const std::string& where, const Keys& allowed) {
  if (!n) throw ParseError(where + " is missing");
  if (!n.IsMap()) parse_fail(n, where + " must be a mapping");
  for (const auto& kv : n) {
    auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) parse_fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) parse_fail(n, where + " must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::BadConversion&) {
    parse_fail(n, "bad value for " + where);
  }
}

std::vector<double> reals(const YAML::Node& n, const std::string& where) {
  if (!n.IsSequence()) parse_fail(n, where + " must be a list");
  std::vector<double> v;
  for (const auto& e : n) v.push_back(scalar<double>(e, where));
  return v;
}

AxisSpec axis(const YAML::Node& n, const std::string& where) {
  require_map(n, where, {"half_width", "n"});
  if (!n["half_width"] || !n["n"]) parse_fail(n, where + " needs half_width and n");
  AxisSpec a;
  a.half_width = scalar<double>(n["half_width"], where + ".half_width");
  long count = scalar<long>(n["n"], where + ".n");
  if (count <= 0) parse_fail(n["n"], where + ".n must be positive");
  a.n = static_cast<std::size_t>(count);
  return a;
}

FrameSpec frames(const YAML::Node& n, const std::string& where) {
  require_map(n, where, {"angular", "lattice", "list"});
  if (n.size() != 1) parse_fail(n, where + " takes exactly one of angular, lattice, list");
  FrameSpec f;
  if (n["angular"]) {
    f.kind = FrameSpec::Kind::Angular;
    long a = scalar<long>(n["angular"], where + ".angular");
    if (a <= 0) parse_fail(n["angular"], where + ".angular must be positive");
    f.angles = static_cast<std::size_t>(a);
  } else if (n["lattice"]) {
    const auto& l = n["lattice"];
    require_map(l, where + ".lattice", {"mu", "nu"});
    if (!l["mu"] || !l["nu"]) parse_fail(l, where + ".lattice needs mu and nu");
    f.kind = FrameSpec::Kind::Lattice;
    f.mu = axis(l["mu"], where + ".lattice.mu");
    f.nu = axis(l["nu"], where + ".lattice.nu");
  } else {
    const auto& l = n["list"];
    if (!l.IsSequence()) parse_fail(l, where + ".list must be a list of [mu, nu]");
    f.kind = FrameSpec::Kind::List;
    for (const auto& e : l) {
      auto v = reals(e, where + ".list entry");
      if (v.size() != 2) parse_fail(e, where + ".list entries are [mu, nu]");
      f.list.push_back({v[0], v[1]});
    }
  }
  return f;
}

phasespace::OneBody one_body(const YAML::Node& n, const std::string& where) {
  require_map(n, where, {"kind", "omega", "coefficients", "profile", "external"});
  auto kind = n["kind"] ? scalar<std::string>(n["kind"], where + ".kind") : std::string("free");
  if (kind == "free") return phasespace::Free{};
  if (kind == "harmonic")
    return phasespace::Harmonic{n["omega"] ? scalar<double>(n["omega"], where + ".omega") : 1.0};
  if (kind == "polynomial") {
    if (!n["coefficients"]) parse_fail(n, where + " needs coefficients");
    return phasespace::Polynomial{reals(n["coefficients"], where + ".coefficients")};
  }
  parse_fail(n, "unknown potential kind '" + kind + "' in " + where);
}

phasespace::PotentialSpec potential(const YAML::Node& n) {
  require_map(n, "potential", {"kind", "omega", "coefficients", "profile", "external"});
  auto kind = n["kind"] ? scalar<std::string>(n["kind"], "potential.kind") : std::string();
  if (kind == "pair") {
    if (!n["profile"]) parse_fail(n, "pair potential needs profile coefficients");
    phasespace::Pair p{phasespace::Polynomial{reals(n["profile"], "potential.profile")},
                       phasespace::Free{}};
    if (n["external"]) p.external = one_body(n["external"], "potential.external");
    return p;
  }
  if (n["profile"] || n["external"]) parse_fail(n, "profile and external belong to pair potentials");
  auto ob = one_body(n, "potential");
  return std::visit([](auto&& v) -> phasespace::PotentialSpec { return v; }, ob);
}

OutputSpec output(const YAML::Node& n) {
  require_map(n, "output", {"what", "times", "format"});
  if (!n["what"]) parse_fail(n, "output needs 'what'");
  OutputSpec o;
  auto what = scalar<std::string>(n["what"], "output.what");
  if (what == "tomogram") o.what = OutputSpec::What::Tomogram;
  else if (what == "density") o.what = OutputSpec::What::Density;
  else if (what == "reduced") o.what = OutputSpec::What::Reduced;
  else if (what == "report") o.what = OutputSpec::What::Report;
  else parse_fail(n["what"], "unknown output '" + what + "'");
  if (n["format"]) {
    auto fmt = scalar<std::string>(n["format"], "output.format");
    if (fmt == "field") o.format = OutputSpec::Format::Field;
    else if (fmt == "columns") o.format = OutputSpec::Format::Columns;
    else parse_fail(n["format"], "unknown format '" + fmt + "'");
  }
  if (n["times"]) o.times = reals(n["times"], "output.times");
  return o;
}

void initial_state(const YAML::Node& n, Scenario& s) {
  require_map(n, "initial_state", {"gaussian", "preset"});
  if (n.size() != 1) parse_fail(n, "initial_state takes exactly one of gaussian, preset");
  if (n["gaussian"]) {
    const auto& g = n["gaussian"];
    require_map(g, "initial_state.gaussian", {"mean", "covariance"});
    if (!g["mean"] || !g["covariance"]) parse_fail(g, "gaussian needs mean and covariance");
    s.initial = InitialKind::Gaussian;
    s.gaussian.mean = reals(g["mean"], "gaussian.mean");
    s.gaussian.covariance = reals(g["covariance"], "gaussian.covariance");
    return;
  }
  auto name = scalar<std::string>(n["preset"], "initial_state.preset");
  if (name == "standard") {
    s.initial = InitialKind::Gaussian;
    s.gaussian = phasespace::standard_gaussian(s.particles);
  } else if (name == "boltzmann") {
    s.initial = InitialKind::Boltzmann;
  } else {
    parse_fail(n["preset"], "unknown initial preset '" + name + "'");
  }
}

}  // namespace

numerics::Grid1D AxisSpec::grid() const { return numerics::Grid1D::cell_centered(half_width, n); }

radon::FrameSet FrameSpec::build() const {
  switch (kind) {
    case Kind::Angular:
      return radon::FrameSet::angular(angles);
    case Kind::Lattice:
      return radon::FrameSet::lattice(mu.grid(), nu.grid());
    case Kind::List:
      break;
  }
  return radon::FrameSet::list(list);
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"normalization", 1e-6},        {"normalization.evolved", 1e-5},
      {"positivity", 1e-6},           {"homogeneity", 1e-4},
      {"homogeneity.evolved", 5e-4},  {"round_trip", 2e-4},
      {"transform.direct", 1e-6},     {"transform.slice", 1e-4},
      {"commuting", 1e-3},            {"conservation.momentum", 1e-6},
      {"conservation.energy", 1e-5},  {"stationarity", 1e-6},
      {"reduction", 1e-6},            {"reduction.spread", 1e-4},
      {"bogolyubov.cross", 2e-3},     {"bogolyubov.boundary", 1e-6},
      {"bogolyubov.phase", 5e-4},     {"bogolyubov.tomo", 2e-3},
  };
  return t;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> c{
      "normalization", "positivity", "homogeneity", "round_trip", "transform", "commuting",
      "conservation",  "stationarity", "reduction", "bogolyubov"};
  return c;
}

Scenario parse_scenario(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("scenario is not valid YAML: ") + e.what());
  }
  require_map(root, "scenario",
              {"name", "description", "particles", "initial_state", "potential", "grids",
               "propagator", "route", "t_final", "dt", "seed", "reduction", "checks",
               "tolerances", "outputs"});
  Scenario s;
  if (!root["name"]) parse_fail(root, "scenario needs a name");
  s.name = scalar<std::string>(root["name"], "name");
  if (root["description"]) s.description = scalar<std::string>(root["description"], "description");
  if (root["particles"]) s.particles = scalar<int>(root["particles"], "particles");
  if (!root["initial_state"]) parse_fail(root, "scenario needs initial_state");
  initial_state(root["initial_state"], s);
  if (root["potential"]) s.potential = potential(root["potential"]);

  if (!root["grids"]) parse_fail(root, "scenario needs grids");
  const auto& g = root["grids"];
  require_map(g, "grids", {"phase", "x", "frames", "frames2", "x2"});
  if (!g["phase"] || !g["x"] || !g["frames"]) parse_fail(g, "grids needs phase, x and frames");
  s.phase = axis(g["phase"], "grids.phase");
  s.x = axis(g["x"], "grids.x");
  s.frames = frames(g["frames"], "grids.frames");
  if (g["frames2"]) s.frames2 = frames(g["frames2"], "grids.frames2");
  if (g["x2"]) s.x2 = axis(g["x2"], "grids.x2");

  if (root["propagator"]) {
    auto p = scalar<std::string>(root["propagator"], "propagator");
    if (p == "phase") s.propagator = Propagator::Phase;
    else if (p == "tomo") s.propagator = Propagator::Tomo;
    else if (p == "both") s.propagator = Propagator::Both;
    else parse_fail(root["propagator"], "propagator is phase, tomo or both");
  }
  if (root["route"]) {
    auto r = scalar<std::string>(root["route"], "route");
    if (r == "operator") s.route = Route::Operator;
    else if (r == "transform") s.route = Route::Transform;
    else parse_fail(root["route"], "route is operator or transform");
  }
  if (root["t_final"]) s.t_final = scalar<double>(root["t_final"], "t_final");
  if (root["dt"]) s.dt = scalar<double>(root["dt"], "dt");
  if (root["seed"]) s.seed = scalar<std::uint64_t>(root["seed"], "seed");
  if (root["reduction"]) {
    const auto& r = root["reduction"];
    require_map(r, "reduction", {"sample_times", "dt"});
    if (r["sample_times"]) s.sample_times = reals(r["sample_times"], "reduction.sample_times");
    if (r["dt"]) s.residual_dt = scalar<double>(r["dt"], "reduction.dt");
  }
  if (root["checks"]) {
    if (!root["checks"].IsSequence()) parse_fail(root["checks"], "checks must be a list");
    for (const auto& c : root["checks"]) s.checks.push_back(scalar<std::string>(c, "checks"));
  }
  if (root["tolerances"]) {
    const auto& t = root["tolerances"];
    if (!t.IsMap()) parse_fail(t, "tolerances must be a mapping");
    for (const auto& kv : t) {
      auto key = kv.first.as<std::string>();
      if (!default_tolerances().count(key)) parse_fail(kv.first, "unknown tolerance '" + key + "'");
      s.tolerances[key] = scalar<double>(kv.second, "tolerances." + key);
    }
  }
  if (root["outputs"]) {
    if (!root["outputs"].IsSequence()) parse_fail(root["outputs"], "outputs must be a list");
    for (const auto& o : root["outputs"]) s.outputs.push_back(output(o));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read scenario " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void validate(const Scenario& s) {
  auto fail = [](const std::string& m) { throw ValidationError(m); };
  if (s.name.empty()) fail("scenario name is empty");
  for (char c : s.name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
      fail("scenario name may hold letters, digits, '-' and '_' only");
  if (s.particles != 1 && s.particles != 2) fail("particles must be 1 or 2");
  if (s.initial == InitialKind::Gaussian) {
    const std::size_t d = 2 * static_cast<std::size_t>(s.particles);
    if (s.gaussian.mean.size() != d || s.gaussian.covariance.size() != d * d)
      fail("gaussian mean and covariance do not match the particle count");
  }
  try {
    phasespace::validate(s.potential);
  } catch (const Error& e) {
    fail(std::string("potential: ") + e.what());
  }
  if (s.particles == 2 && !phasespace::is_pair(s.potential))
    fail("two-particle scenarios need a pair potential");
  if (s.particles == 1 && phasespace::is_pair(s.potential))
    fail("pair potentials need two particles");
  for (const AxisSpec* a : {&s.phase, &s.x})
    if (!(a->half_width > 0) || a->n < 2) fail("grid axes need a positive half width and n >= 2");
  try {
    s.frames.build();
    if (s.frames2) s.frames2->build();
  } catch (const ArgumentError& e) {
    fail(std::string("grids: ") + e.what());
  }
  if (s.particles == 1 && (s.frames2 || s.x2)) fail("frames2 and x2 need two particles");
  if (!(s.t_final >= 0) || !std::isfinite(s.t_final)) fail("t_final must be nonnegative");
  if (!(s.dt > 0) || !std::isfinite(s.dt)) fail("dt must be positive");
  if (s.outputs.empty()) fail("scenario declares no outputs");
  for (const auto& o : s.outputs) {
    for (double t : o.times)
      if (!(t >= 0 && t <= s.t_final + 1e-12)) {
        std::ostringstream os;
        os << "output time " << t << " outside [0, t_final]";
        fail(os.str());
      }
    if (o.what == OutputSpec::What::Reduced && s.particles != 2)
      fail("reduced output needs two particles");
    if (o.what == OutputSpec::What::Density && s.propagator == Propagator::Tomo)
      fail("density output needs the phase propagator");
  }
  if (s.particles == 2 && s.propagator != Propagator::Phase)
    fail("two-particle tomograms come from the phase propagator; set propagator: phase");
  if (s.route == Route::Transform && s.frames.kind != FrameSpec::Kind::Angular)
    fail("the transform route needs angular frames");
  if (s.particles == 1 && s.propagator != Propagator::Phase && s.route == Route::Operator) {
    if (const auto* p = std::get_if<phasespace::Polynomial>(&s.potential)) {
      std::size_t deg = p->coefficients.size();
      while (deg > 0 && p->coefficients[deg - 1] == 0) --deg;
      if (deg > 0 && static_cast<int>(deg) - 1 > 3)
        fail("the operator route takes polynomials up to degree 3; use route: transform");
    }
  }
  if (s.particles == 2 && s.initial == InitialKind::Boltzmann && s.t_final > 0)
    fail("a two-particle Boltzmann start is stationary; use t_final: 0");
  for (const auto& c : s.checks) {
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      fail("unknown check '" + c + "'");
    bool two = c == "reduction" || c == "bogolyubov";
    if (two != (s.particles == 2) && c != "normalization" && c != "positivity")
      fail("check '" + c + "' does not apply to " + std::to_string(s.particles) + " particle(s)");
  }
  auto has = [&](const char* c) { return std::find(s.checks.begin(), s.checks.end(), c) != s.checks.end(); };
  if (s.initial == InitialKind::Boltzmann && std::holds_alternative<phasespace::Free>(s.potential))
    fail("exp(-H) of a free particle does not decay in q; pick a confining potential");
  if (has("round_trip") && s.frames.kind == FrameSpec::Kind::List)
    fail("round_trip check needs angular or lattice frames");
  if (has("transform") && s.initial != InitialKind::Gaussian)
    fail("transform check compares against the Gaussian closed form");
  if (has("commuting") && s.propagator != Propagator::Both)
    fail("commuting check needs propagator: both");
  if (has("stationarity") && s.initial != InitialKind::Boltzmann)
    fail("stationarity check needs the boltzmann initial state");
  if (has("conservation")) {
    auto fs = s.frames.build();
    if (!fs.find({1, 0}) || !fs.find({0, 1}))
      fail("conservation check needs the frames (1, 0) and (0, 1)");
  }
  bool bogo = has("bogolyubov");
  if (bogo) {
    if (s.sample_times.empty()) fail("bogolyubov check needs reduction.sample_times");
    if (!(s.residual_dt > 0)) fail("reduction.dt must be positive");
    for (double t : s.sample_times)
      if (t - s.residual_dt < 0 || t + s.residual_dt > s.t_final + 1e-12)
        fail("reduction sample times need t - dt >= 0 and t + dt <= t_final");
    if (s.initial != InitialKind::Gaussian) fail("bogolyubov check streams a Gaussian start");
    if (s.frames.kind != FrameSpec::Kind::Angular)
      fail("bogolyubov check needs angular frames for the first particle");
    if (s.frames2 && !s.frames2->build().find({1, 0}))
      fail("bogolyubov check needs the frame (1, 0) for the second particle");
  }
  for (const auto& [k, v] : s.tolerances)
    if (!(v > 0) || !std::isfinite(v)) fail("tolerance '" + k + "' must be positive");
}

double tolerance(const Scenario& s, const std::string& key, double scale) {
  auto it = s.tolerances.find(key);
  double v = it != s.tolerances.end() ? it->second : default_tolerances().at(key);
  return v * scale;
}

}  // namespace tomokin::cli
