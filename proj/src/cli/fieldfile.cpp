#include "tomokin/cli/fieldfile.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "tomokin/errors.hpp"

namespace tomokin::cli {
namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}
  std::uint64_t u64() {
    if (s_.size() - pos_ < 8) throw ArgumentError("field file truncated");
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + b])) << (8 * b);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return s_.size() - pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = kFieldMagic.size();
};

void frame_axes(const radon::FrameSet& fs, std::vector<FieldAxis>& axes) {
  switch (fs.scheme()) {
    case radon::FrameScheme::Angular:
      axes.push_back(field_axis(fs.theta_axis()));
      return;
    case radon::FrameScheme::Lattice:
      axes.push_back(field_axis(fs.mu_axis()));
      axes.push_back(field_axis(fs.nu_axis()));
      return;
    case radon::FrameScheme::List:
      axes.push_back({0.0, static_cast<double>(fs.size()), fs.size()});
      return;
  }
}

std::size_t count_of(const std::vector<FieldAxis>& axes) {
  std::size_t c = 1;
  for (const auto& a : axes) c *= a.n;
  return c;
}

}  // namespace

FieldAxis field_axis(const numerics::Grid1D& g) { return {g.lo(), g.hi(), g.size()}; }

std::string encode(const FieldFile& f) {
  if (f.values.size() != count_of(f.axes))
    throw ArgumentError("field file payload does not match its axes");
  std::string out(kFieldMagic);
  out.reserve(out.size() + 8 + 24 * f.axes.size() + 8 * f.values.size());
  put_u64(out, f.axes.size());
  for (const auto& a : f.axes) {
    put_f64(out, a.lo);
    put_f64(out, a.hi);
    put_u64(out, a.n);
  }
  for (double v : f.values) put_f64(out, v);
  return out;
}

FieldFile decode(std::string_view bytes) {
  if (bytes.substr(0, kFieldMagic.size()) != kFieldMagic)
    throw ArgumentError("not a field file: bad magic");
  Reader r(bytes);
  std::uint64_t rank = r.u64();
  if (rank > r.remaining() / 24) throw ArgumentError("field file truncated");
  FieldFile f;
  std::size_t count = 1;
  for (std::uint64_t i = 0; i < rank; ++i) {
    double lo = r.f64(), hi = r.f64();
    std::uint64_t n = r.u64();
    if (n == 0 || count > r.remaining() / 8 / n) throw ArgumentError("field file truncated");
    f.axes.push_back({lo, hi, n});
    count *= n;
  }
  if (r.remaining() != 8 * count) {
    std::ostringstream os;
    os << "field file payload holds " << r.remaining() << " bytes, axes need " << 8 * count;
    throw ArgumentError(os.str());
  }
  f.values.resize(count);
  for (auto& v : f.values) v = r.f64();
  return f;
}

FieldFile from_tomogram(const radon::Tomogram& w) {
  FieldFile f;
  for (int j = 0; j < w.particles(); ++j) {
    frame_axes(w.frames(j), f.axes);
    f.axes.push_back(field_axis(w.x_axis(j)));
  }
  f.values = w.storage();
  return f;
}

FieldFile from_field(const numerics::RealField& field) {
  FieldFile f;
  for (const auto& a : field.axes()) f.axes.push_back(field_axis(a));
  f.values = field.storage();
  return f;
}

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw NumericError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_field_file(const std::filesystem::path& path, const FieldFile& f) {
  write_atomic(path, encode(f));
}

FieldFile read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode(ss.str());
}

}  // namespace tomokin::cli
