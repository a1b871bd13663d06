#include <doctest.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tomokin/cli/fieldfile.hpp"
#include "tomokin/cli/runner.hpp"
#include "tomokin/cli/scenario.hpp"
#include "tomokin/errors.hpp"

using namespace tomokin;
using namespace tomokin::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("tomokin_test_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"(name: small
particles: 1
initial_state:
  gaussian:
    mean: [0.3, -0.2]
    covariance: [0.9, 0.15, 0.15, 0.8]
potential: {kind: harmonic, omega: 1}
grids:
  phase: {half_width: 10, n: 128}
  x: {half_width: 12, n: 128}
  frames: {angular: 32}
propagator: both
t_final: 0.2
dt: 0.02
checks: [normalization, commuting, conservation]
outputs:
  - {what: tomogram, times: [0, 0.2]}
  - {what: density, times: [0.2], format: columns}
  - {what: report}
)";

std::string with(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("field file round trip is bit exact") {
  FieldFile f{{{-1.5, 2.25, 3}, {0, 1, 2}},
              {0.1, -0.0, 1e-310, std::numeric_limits<double>::infinity(), -7.25,
               std::numeric_limits<double>::quiet_NaN()}};
  auto bytes = encode(f);
  CHECK(bytes.substr(0, 5) == "TOMK1");
  CHECK(bytes.size() == 5 + 8 + 2 * 24 + 6 * 8);
  // rank, then lo of the first axis, little-endian
  CHECK(bytes[5] == 2);
  CHECK(static_cast<unsigned char>(bytes[5 + 8 + 7]) == 0xbf);
  auto g = decode(bytes);
  REQUIRE(g.axes.size() == 2);
  CHECK(g.axes[0] == f.axes[0]);
  CHECK(g.axes[1] == f.axes[1]);
  REQUIRE(g.values.size() == f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    CHECK(std::bit_cast<std::uint64_t>(g.values[i]) == std::bit_cast<std::uint64_t>(f.values[i]));
  CHECK(encode(g) == bytes);

  auto dir = scratch("roundtrip");
  write_field_file(dir / "a.tmk", f);
  CHECK(slurp(dir / "a.tmk") == bytes);
  CHECK(encode(read_field_file(dir / "a.tmk")) == bytes);
  for (const auto& e : std::filesystem::directory_iterator(dir))
    CHECK(e.path().filename() == "a.tmk");
}

TEST_CASE("field file rejects damaged input") {
  FieldFile f{{{0, 1, 4}}, {1, 2, 3, 4}};
  auto bytes = encode(f);
  CHECK_THROWS_AS(decode("TOMK2" + bytes.substr(5)), ArgumentError);
  CHECK_THROWS_AS(decode(bytes.substr(0, 3)), ArgumentError);
  CHECK_THROWS_AS(decode(bytes.substr(0, 20)), ArgumentError);
  CHECK_THROWS_AS(decode(bytes.substr(0, bytes.size() - 1)), ArgumentError);
  CHECK_THROWS_AS(decode(bytes + "12345678"), ArgumentError);
  CHECK_THROWS_AS(encode(FieldFile{{{0, 1, 4}}, {1, 2}}), ArgumentError);
  CHECK_THROWS_AS(read_field_file(scratch("missing") / "none.tmk"), ArgumentError);
}

TEST_CASE("tomogram field files carry frame and X axes") {
  auto fs = radon::FrameSet::angular(8);
  numerics::Grid1D x(-1, 1, 4);
  radon::Tomogram w(fs, x, std::vector<double>(32, 0.5));
  auto f = from_tomogram(w);
  REQUIRE(f.axes.size() == 2);
  CHECK(f.axes[0] == field_axis(fs.theta_axis()));
  CHECK(f.axes[1] == field_axis(x));
  auto l = from_tomogram(radon::Tomogram(radon::FrameSet::list({{1, 0}, {0, 1}, {1, 1}}), x,
                                         std::vector<double>(12, 0.5)));
  CHECK(l.axes[0] == FieldAxis{0, 3, 3});
  CHECK(decode(encode(l)).axes[0].n == 3);
}

TEST_CASE("scenario parsing") {
  auto s = parse_scenario(kSmall);
  CHECK(s.name == "small");
  CHECK(s.particles == 1);
  CHECK(std::holds_alternative<phasespace::Harmonic>(s.potential));
  CHECK(s.phase.n == 128);
  CHECK(s.frames.kind == FrameSpec::Kind::Angular);
  CHECK(s.frames.angles == 32);
  CHECK(s.propagator == Propagator::Both);
  CHECK(s.t_final == doctest::Approx(0.2));
  REQUIRE(s.outputs.size() == 3);
  CHECK(s.outputs[1].format == OutputSpec::Format::Columns);
  CHECK_NOTHROW(validate(s));
  CHECK(tolerance(s, "commuting") == 1e-3);
  CHECK(tolerance(s, "commuting", 10) == doctest::Approx(1e-2));

  auto pair = parse_scenario(with(kSmall, "potential: {kind: harmonic, omega: 1}",
                                  "potential: {kind: pair, profile: [0, 0, 0.5], "
                                  "external: {kind: polynomial, coefficients: [0, 1]}}"));
  REQUIRE(std::holds_alternative<phasespace::Pair>(pair.potential));
  CHECK(std::holds_alternative<phasespace::Polynomial>(std::get<phasespace::Pair>(pair.potential).external));

  auto lat = parse_scenario(with(kSmall, "frames: {angular: 32}",
                                 "frames: {lattice: {mu: {half_width: 2, n: 8}, "
                                 "nu: {half_width: 1, n: 4}}}"));
  CHECK(lat.frames.build().size() == 32);
  auto tol = parse_scenario(with(kSmall, "outputs:", "tolerances: {commuting: 5.0e-3}\noutputs:"));
  CHECK(tolerance(tol, "commuting") == 5e-3);
  auto boltz = parse_scenario(with(kSmall, "initial_state:\n  gaussian:\n    mean: [0.3, -0.2]\n"
                                           "    covariance: [0.9, 0.15, 0.15, 0.8]",
                                   "initial_state: {preset: boltzmann}"));
  CHECK(boltz.initial == InitialKind::Boltzmann);
}

TEST_CASE("scenario parse rejections") {
  CHECK_THROWS_AS(parse_scenario("name: [unclosed"), ParseError);
  CHECK_THROWS_AS(parse_scenario("- a\n- b\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "t_final: 0.2", "t_final: 0.2\nfinal_time: 1")),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "{half_width: 10, n: 128}",
                                      "{half_width: 10, n: 128, dx: 1}")),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "t_final: 0.2", "t_final: soon")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "n: 128}", "n: -4}")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "propagator: both", "propagator: euler")),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "kind: harmonic", "kind: morse")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "{angular: 32}", "{angular: 32, list: [[1, 0]]}")),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "outputs:", "tolerances: {speed: 1}\noutputs:")),
                  ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "what: tomogram", "what: movie")), ParseError);
  CHECK_THROWS_AS(parse_scenario(with(kSmall, "name: small\n", "")), ParseError);
  try {
    parse_scenario(with(kSmall, "t_final: 0.2", "t_final: 0.2\nfinal_time: 1"));
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("final_time") != std::string::npos);
  }
}

TEST_CASE("scenario validation rejections") {
  auto invalid = [](const std::string& text) {
    auto s = parse_scenario(text);
    CHECK_THROWS_AS(validate(s), ValidationError);
  };
  invalid(with(kSmall, "name: small", "name: has space"));
  invalid(with(kSmall, "particles: 1", "particles: 3"));
  invalid(with(kSmall, "times: [0, 0.2]", "times: [0, 0.5]"));
  invalid(with(kSmall, "dt: 0.02", "dt: 0"));
  invalid(with(kSmall, "mean: [0.3, -0.2]", "mean: [0.3, -0.2, 0]"));
  invalid(with(kSmall, "checks: [normalization", "checks: [teleport, normalization"));
  invalid(with(kSmall, "checks: [normalization", "checks: [reduction, normalization"));
  invalid(with(kSmall, "propagator: both", "propagator: phase"));  // commuting needs both
  invalid(with(kSmall, "{angular: 32}", "{angular: 30}"));         // no (0, 1) frame
  // transform route on lattice frames
  invalid(with(with(kSmall, "{angular: 32}",
                    "{lattice: {mu: {half_width: 2, n: 8}, nu: {half_width: 2, n: 8}}}"),
               "propagator: both", "propagator: both\nroute: transform"));
  invalid(with(kSmall, "kind: harmonic, omega: 1", "kind: polynomial, coefficients: [0, 0, 1, 0, 1]"));
  invalid(with(kSmall, "outputs:", "tolerances: {commuting: -1}\noutputs:"));
  invalid(with(with(kSmall, "checks: [normalization, commuting, conservation]", "checks: []"),
               "outputs:\n  - {what: tomogram, times: [0, 0.2]}\n"
               "  - {what: density, times: [0.2], format: columns}\n  - {what: report}\n",
               "outputs: []\n"));
}

TEST_CASE("a zero frame is a validation failure naming the frame") {
  auto text = with(with(kSmall, "{angular: 32}", "{list: [[1, 0], [0, 1], [0, 0]]}"),
                   "checks: [normalization, commuting, conservation]", "checks: []");
  auto r = run_text(text, RunOptions{scratch("zero"), 1, 1});
  CHECK(r.exit_code == kValidationFailure);
  CHECK(r.message.find("frame #2") != std::string::npos);
  CHECK(r.message.find("(0, 0)") != std::string::npos);
  CHECK(r.files.empty());
}

TEST_CASE("exit codes for parse, validation and numeric failures") {
  RunOptions opt{scratch("codes"), 1, 1};
  CHECK(run_text("name: [", opt).exit_code == kParseFailure);
  CHECK(run_text(with(kSmall, "dt: 0.02", "dt: -1"), opt).exit_code == kValidationFailure);
  CHECK(run_path_or_preset("no-such-preset", opt).exit_code == kParseFailure);

  // A box too small for the start is a numeric failure of the named stage.
  auto cramped = run_text(with(kSmall, "phase: {half_width: 10", "phase: {half_width: 3"), opt);
  CHECK(cramped.exit_code == kNumericFailure);
  CHECK(cramped.message.find("initial state") == 0);

  // A tolerance failure names the check and still leaves the report.
  opt.tolerance_scale = 1e-12;
  auto tight = run_text(kSmall, opt);
  CHECK(tight.exit_code == kNumericFailure);
  CHECK(tight.message.find("check 'normalization' failed") == 0);
  CHECK(tight.report.find("status = fail") != std::string::npos);
  CHECK(std::filesystem::exists(opt.out_dir / "small" / "report.txt"));
}

TEST_CASE("identity evolution: both paths write the transformed initial data") {
  auto text = with(with(kSmall, "t_final: 0.2", "t_final: 0"),
                   "outputs:\n  - {what: tomogram, times: [0, 0.2]}\n"
                   "  - {what: density, times: [0.2], format: columns}\n",
                   "outputs:\n  - {what: tomogram}\n  - {what: density}\n");
  text = with(text, "checks: [normalization, commuting, conservation]",
              "checks: [normalization, positivity, commuting, conservation]");
  RunOptions opt{scratch("identity"), 1, 1};
  auto r = run_text(text, opt);
  REQUIRE(r.exit_code == kSuccess);
  auto dir = opt.out_dir / "small";
  auto a = read_field_file(dir / "tomogram_phase_t0.tmk");
  auto b = read_field_file(dir / "tomogram_tomo_t0.tmk");
  REQUIRE(a.values.size() == b.values.size());
  double e = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
  CHECK(e < 1e-10);
  auto d = read_field_file(dir / "density_t0.tmk");
  CHECK(d.axes.size() == 2);
  CHECK(d.axes[0] == field_axis(numerics::Grid1D::cell_centered(10, 128)));
}

TEST_CASE("report, outputs and determinism") {
  RunOptions one{scratch("det1"), 1, 1}, two{scratch("det2"), 2, 1};
  auto r1 = run_text(kSmall, one);
  auto r2 = run_text(kSmall, two);
  REQUIRE(r1.exit_code == kSuccess);
  REQUIRE(r2.exit_code == kSuccess);
  REQUIRE(r1.files.size() == r2.files.size());
  CHECK(r1.files.size() == 6);  // 2 x 2 tomograms, density columns, report
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    CHECK(r1.files[i].filename() == r2.files[i].filename());
    CHECK(slurp(r1.files[i]) == slurp(r2.files[i]));
  }
  auto rep = slurp(one.out_dir / "small" / "report.txt");
  for (const char* key : {"[normalization]", "[commuting]", "[conservation]", "t_0.2.sup = ",
                          "t_0.2.sup.limit = 0.001", "tomo.energy.drift = ", "status = pass"})
    CHECK(rep.find(key) != std::string::npos);

  std::istringstream cols(slurp(one.out_dir / "small" / "density_t0.2.dat"));
  std::string line;
  std::getline(cols, line);
  CHECK(line[0] == '#');
  std::size_t rows = 0;
  while (std::getline(cols, line)) {
    std::istringstream ls(line);
    double q, p, v;
    CHECK(static_cast<bool>(ls >> q >> p >> v));
    ++rows;
  }
  CHECK(rows == 128 * 128);
}

TEST_CASE("presets") {
  CHECK(presets().size() >= 5);
  for (const char* name : {"free-1p", "harmonic-1p", "quartic-1p", "pair-harmonic-2p",
                           "reduction-consistency-2p", "verify-gaussian"})
    CHECK(find_preset(name) != nullptr);
  CHECK(find_preset("nope") == nullptr);
  for (const auto& p : presets()) {
    CAPTURE(p.name);
    auto s = parse_scenario(p.yaml);
    CHECK(s.name == p.name);
    CHECK(s.description == p.description);
    CHECK_NOTHROW(validate(s));
  }
}

TEST_CASE("verify-gaussian preset passes with the expected report entries") {
  RunOptions opt{scratch("verify"), 1, 1};
  auto r = run_path_or_preset("verify-gaussian", opt);
  CHECK(r.exit_code == kSuccess);
  for (const char* section : {"[normalization]", "[homogeneity]", "[round_trip]", "[transform]"})
    CHECK(r.report.find(section) != std::string::npos);
  for (const auto& c : r.checks) CHECK(c.passed());
}
