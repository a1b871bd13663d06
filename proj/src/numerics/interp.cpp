#include "tomokin/numerics/interp.hpp"

#include <cmath>

#include "tomokin/errors.hpp"

namespace tomokin::numerics {
namespace {

// 1 / prod_{j != k} (k - j) on nodes 0..P-1.
struct BaryTable {
  std::array<std::array<double, kMaxStencil>, kMaxStencil + 1> c{};
  BaryTable() {
    for (int P = 1; P <= kMaxStencil; ++P)
      for (int k = 0; k < P; ++k) {
        double d = 1;
        for (int j = 0; j < P; ++j)
          if (j != k) d *= static_cast<double>(k - j);
        c[P][k] = 1.0 / d;
      }
  }
};

const BaryTable& bary() {
  static const BaryTable t;
  return t;
}

}  // namespace

Stencil lagrange_stencil(double t, int order) {
  if (order < 1 || order > kMaxStencil)
    throw ArgumentError("interpolation order out of range");
  Stencil s;
  double r = std::nearbyint(t);
  if (std::abs(t - r) < 1e-9 || order == 1) {
    s.first = static_cast<long>(r);
    s.count = 1;
    s.w[0] = 1;
    return s;
  }
  long first = order % 2 == 0
                   ? static_cast<long>(std::floor(t)) - order / 2 + 1
                   : static_cast<long>(r) - (order - 1) / 2;
  double x = t - static_cast<double>(first);
  double ell = 1;
  for (int j = 0; j < order; ++j) ell *= x - j;
  const auto& c = bary().c[order];
  s.first = first;
  s.count = order;
  for (int k = 0; k < order; ++k) s.w[k] = ell * c[k] / (x - k);
  return s;
}

double sample_line(const double* v, std::size_t n, std::size_t stride, double t,
                   int order, bool periodic) {
  Stencil s = lagrange_stencil(t, order);
  long N = static_cast<long>(n);
  double acc = 0;
  for (int k = 0; k < s.count; ++k) {
    long j = s.first + k;
    if (periodic) {
      j %= N;
      if (j < 0) j += N;
    } else if (j < 0 || j >= N) {
      continue;
    }
    acc += s.w[k] * v[static_cast<std::size_t>(j) * stride];
  }
  return acc;
}

}  // namespace tomokin::numerics
