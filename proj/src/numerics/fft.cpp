#include "tomokin/numerics/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "tomokin/errors.hpp"

namespace tomokin::numerics {
namespace {

// FFTW's planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  std::size_t n = 0, batch = 0;
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;

  Plan(std::size_t n_, std::size_t batch_, int sign) : n(n_), batch(batch_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(n * batch);
    if (!buf) throw NumericError("fftw allocation failed");
    int len = static_cast<int>(n);
    plan = fftw_plan_many_dft(1, &len, static_cast<int>(batch), buf, nullptr, 1,
                              len, buf, nullptr, 1, len,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    if (!plan) throw NumericError("fftw planning failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf); }
  void run() { fftw_execute(plan); }
};

Plan& plan_for(std::size_t n, std::size_t batch, int sign) {
  thread_local std::map<std::tuple<std::size_t, std::size_t, int>,
                        std::unique_ptr<Plan>>
      cache;
  auto key = std::make_tuple(n, batch, sign);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Plan>(n, batch, sign)).first;
  return *it->second;
}

std::size_t batch_size(std::size_t n, std::size_t lines) {
  std::size_t b = std::max<std::size_t>(1, 16384 / n);
  return std::min(b, lines);
}

void check_multiplier(std::size_t n, std::span<const cplx> m) {
  if (m.size() != n) throw ArgumentError("multiplier length must match axis");
}

}  // namespace

LineLayout line_layout(std::span<const std::size_t> shape, std::size_t axis) {
  if (axis >= shape.size()) throw ArgumentError("axis index out of range");
  LineLayout l;
  for (std::size_t i = 0; i < axis; ++i) l.outer *= shape[i];
  l.n = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) l.inner *= shape[i];
  return l;
}

void dft_lines(std::span<cplx> data, std::span<const std::size_t> shape,
               std::size_t axis, int sign) {
  LineLayout l = line_layout(shape, axis);
  if (data.size() != l.lines() * l.n) throw ArgumentError("shape/data mismatch");
  if (l.lines() == 0 || l.n == 0) return;
  std::size_t b = batch_size(l.n, l.lines());
  Plan& p = plan_for(l.n, b, sign);
  cplx* buf = p.data();
  for (std::size_t first = 0; first < l.lines(); first += b) {
    std::size_t cnt = std::min(b, l.lines() - first);
    for (std::size_t k = 0; k < cnt; ++k) {
      const cplx* src = data.data() + l.base(first + k);
      for (std::size_t j = 0; j < l.n; ++j) buf[k * l.n + j] = src[j * l.inner];
    }
    std::fill(buf + cnt * l.n, buf + b * l.n, cplx{});
    p.run();
    for (std::size_t k = 0; k < cnt; ++k) {
      cplx* dst = data.data() + l.base(first + k);
      for (std::size_t j = 0; j < l.n; ++j) dst[j * l.inner] = buf[k * l.n + j];
    }
  }
}

void filter_lines(std::span<cplx> data, std::span<const std::size_t> shape,
                  std::size_t axis, std::span<const cplx> multiplier) {
  LineLayout l = line_layout(shape, axis);
  check_multiplier(l.n, multiplier);
  if (data.size() != l.lines() * l.n) throw ArgumentError("shape/data mismatch");
  if (l.lines() == 0) return;
  std::size_t b = batch_size(l.n, l.lines());
  Plan& fwd = plan_for(l.n, b, -1);
  Plan& bwd = plan_for(l.n, b, +1);
  const double scale = 1.0 / static_cast<double>(l.n);
  for (std::size_t first = 0; first < l.lines(); first += b) {
    std::size_t cnt = std::min(b, l.lines() - first);
    cplx* f = fwd.data();
    for (std::size_t k = 0; k < cnt; ++k) {
      const cplx* src = data.data() + l.base(first + k);
      for (std::size_t j = 0; j < l.n; ++j) f[k * l.n + j] = src[j * l.inner];
    }
    std::fill(f + cnt * l.n, f + b * l.n, cplx{});
    fwd.run();
    cplx* g = bwd.data();
    for (std::size_t k = 0; k < b; ++k)
      for (std::size_t j = 0; j < l.n; ++j)
        g[k * l.n + j] = f[k * l.n + j] * multiplier[j];
    bwd.run();
    for (std::size_t k = 0; k < cnt; ++k) {
      cplx* dst = data.data() + l.base(first + k);
      for (std::size_t j = 0; j < l.n; ++j)
        dst[j * l.inner] = g[k * l.n + j] * scale;
    }
  }
}

void filter_lines(std::span<double> data, std::span<const std::size_t> shape,
                  std::size_t axis, std::span<const cplx> multiplier) {
  LineLayout l = line_layout(shape, axis);
  check_multiplier(l.n, multiplier);
  if (data.size() != l.lines() * l.n) throw ArgumentError("shape/data mismatch");
  if (l.lines() == 0) return;
  // Line pairs (a, b) travel as a + ib.
  std::size_t pairs = (l.lines() + 1) / 2;
  std::size_t b = batch_size(l.n, pairs);
  Plan& fwd = plan_for(l.n, b, -1);
  Plan& bwd = plan_for(l.n, b, +1);
  const double scale = 1.0 / static_cast<double>(l.n);
  for (std::size_t first = 0; first < pairs; first += b) {
    std::size_t cnt = std::min(b, pairs - first);
    cplx* f = fwd.data();
    for (std::size_t k = 0; k < cnt; ++k) {
      std::size_t la = 2 * (first + k), lb = la + 1;
      const double* a = data.data() + l.base(la);
      if (lb < l.lines()) {
        const double* bb = data.data() + l.base(lb);
        for (std::size_t j = 0; j < l.n; ++j)
          f[k * l.n + j] = cplx(a[j * l.inner], bb[j * l.inner]);
      } else {
        for (std::size_t j = 0; j < l.n; ++j) f[k * l.n + j] = a[j * l.inner];
      }
    }
    std::fill(f + cnt * l.n, f + b * l.n, cplx{});
    fwd.run();
    cplx* g = bwd.data();
    for (std::size_t k = 0; k < b; ++k)
      for (std::size_t j = 0; j < l.n; ++j)
        g[k * l.n + j] = f[k * l.n + j] * multiplier[j];
    bwd.run();
    for (std::size_t k = 0; k < cnt; ++k) {
      std::size_t la = 2 * (first + k), lb = la + 1;
      double* a = data.data() + l.base(la);
      for (std::size_t j = 0; j < l.n; ++j)
        a[j * l.inner] = g[k * l.n + j].real() * scale;
      if (lb < l.lines()) {
        double* bb = data.data() + l.base(lb);
        for (std::size_t j = 0; j < l.n; ++j)
          bb[j * l.inner] = g[k * l.n + j].imag() * scale;
      }
    }
  }
}

}  // namespace tomokin::numerics
