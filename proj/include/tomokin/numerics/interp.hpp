#pragma once

#include <array>
#include <cstddef>

namespace tomokin::numerics {

inline constexpr int kMaxStencil = 12;

// Lagrange weights on consecutive integer nodes first..first+count-1 for a
// fractional index t. A t within 1e-9 of a node collapses to that node.
struct Stencil {
  long first = 0;
  int count = 0;
  std::array<double, kMaxStencil> w{};
};

Stencil lagrange_stencil(double t, int order);

// Interpolates v[j*stride], j in [0, n), at fractional index t. Nodes outside
// the line read as zero unless periodic.
double sample_line(const double* v, std::size_t n, std::size_t stride, double t,
                   int order, bool periodic = false);

}  // namespace tomokin::numerics
