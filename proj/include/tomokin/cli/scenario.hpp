#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tomokin/errors.hpp"
#include "tomokin/phasespace/density.hpp"
#include "tomokin/phasespace/potential.hpp"
#include "tomokin/radon/frames.hpp"

namespace tomokin::cli {

// Malformed text, unknown keys, wrong value types.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed but inconsistent or out of range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

struct AxisSpec {
  double half_width = 10;
  std::size_t n = 128;
  numerics::Grid1D grid() const;
};

struct FrameSpec {
  enum class Kind { Angular, Lattice, List } kind = Kind::Angular;
  std::size_t angles = 64;
  AxisSpec mu{2, 32}, nu{2, 32};
  std::vector<radon::Frame> list;
  radon::FrameSet build() const;
};

enum class Propagator { Phase, Tomo, Both };
enum class Route { Operator, Transform };
enum class InitialKind { Gaussian, Boltzmann };

struct OutputSpec {
  enum class What { Tomogram, Density, Reduced, Report } what = What::Report;
  enum class Format { Field, Columns } format = Format::Field;
  std::vector<double> times;
};

struct Scenario {
  std::string name;
  std::string description;
  int particles = 1;
  InitialKind initial = InitialKind::Gaussian;
  phasespace::GaussianSpec gaussian;
  phasespace::PotentialSpec potential = phasespace::Free{};
  AxisSpec phase{10, 128}, x{12, 128};
  FrameSpec frames;
  std::optional<FrameSpec> frames2;
  std::optional<AxisSpec> x2;
  Propagator propagator = Propagator::Both;
  Route route = Route::Operator;
  double t_final = 0, dt = 1e-2;
  std::uint64_t seed = 0;
  std::vector<double> sample_times;  // two particles, bogolyubov check
  double residual_dt = 5e-3;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;  // overrides of default_tolerances()
  std::vector<OutputSpec> outputs;
};

// Check names with their default tolerances, keyed "check" or "check.part".
const std::map<std::string, double>& default_tolerances();
const std::vector<std::string>& known_checks();

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
// Throws ValidationError; frames are built here so a zero frame is caught.
void validate(const Scenario& s);

// Tolerance of a key after overrides, times the scale.
double tolerance(const Scenario& s, const std::string& key, double scale = 1);

}  // namespace tomokin::cli
