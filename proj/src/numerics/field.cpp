#include "tomokin/numerics/field.hpp"

namespace tomokin::numerics {

std::vector<std::size_t> shape_of(const std::vector<Grid1D>& axes) {
  std::vector<std::size_t> s;
  s.reserve(axes.size());
  for (const auto& a : axes) s.push_back(a.size());
  return s;
}

std::size_t count_of(const std::vector<Grid1D>& axes) {
  std::size_t c = 1;
  for (const auto& a : axes) c *= a.size();
  return c;
}

}  // namespace tomokin::numerics
