#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tomokin::numerics {

using cplx = std::complex<double>;

// Lines of a row-major array along one axis: `outer` blocks of n*inner values,
// each holding `inner` interleaved lines of length n with stride `inner`.
struct LineLayout {
  std::size_t outer = 1, n = 1, inner = 1;
  std::size_t lines() const { return outer * inner; }
  std::size_t base(std::size_t line) const {
    return (line / inner) * n * inner + line % inner;
  }
};

LineLayout line_layout(std::span<const std::size_t> shape, std::size_t axis);

// Unnormalized DFT of every line: sign -1 is sum v_j e^{-2 pi i jm/n}, +1 the
// conjugate sum. Backed by FFTW.
void dft_lines(std::span<cplx> data, std::span<const std::size_t> shape,
               std::size_t axis, int sign);

// data <- IDFT(multiplier * DFT(data)) along the axis; multiplier is indexed
// by FFT slot.
void filter_lines(std::span<cplx> data, std::span<const std::size_t> shape,
                  std::size_t axis, std::span<const cplx> multiplier);

// Real version. The multiplier must be Hermitian (m(-k) = conj m(k), real at
// the Nyquist slot) so the result is real; two lines share one complex FFT.
void filter_lines(std::span<double> data, std::span<const std::size_t> shape,
                  std::size_t axis, std::span<const cplx> multiplier);

}  // namespace tomokin::numerics
