#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tomokin/numerics/field.hpp"
#include "tomokin/radon/tomogram.hpp"

namespace tomokin::cli {

// Any (lo, hi, n); frame-index axes may hold an odd count.
struct FieldAxis {
  double lo = 0, hi = 0;
  std::uint64_t n = 0;
  bool operator==(const FieldAxis&) const = default;
};

FieldAxis field_axis(const numerics::Grid1D& g);

// Binary layout, all little-endian:
//   "TOMK1"
//   axis count            uint64
//   per axis lo, hi, n    float64, float64, uint64
//   payload               float64 x product(n), row-major
struct FieldFile {
  std::vector<FieldAxis> axes;
  std::vector<double> values;
};

inline constexpr std::string_view kFieldMagic = "TOMK1";

std::string encode(const FieldFile& f);
// Throws ArgumentError on a bad magic, truncated header or wrong payload size.
FieldFile decode(std::string_view bytes);

// Frame axes per particle (theta, (mu, nu) or a list index), then X.
FieldFile from_tomogram(const radon::Tomogram& w);
FieldFile from_field(const numerics::RealField& f);

// Temp file in the target directory, then rename.
void write_atomic(const std::filesystem::path& path, std::string_view bytes);
void write_field_file(const std::filesystem::path& path, const FieldFile& f);
FieldFile read_field_file(const std::filesystem::path& path);

}  // namespace tomokin::cli
