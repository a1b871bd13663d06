#pragma once

#include <cstddef>
#include <span>

#include "tomokin/numerics/fft.hpp"
#include "tomokin/numerics/field.hpp"

namespace tomokin::numerics {

// How (d/dX)^-1 fixes the additive constant.
//  Drop: the m = 0 coefficient is set to zero (zero-mean antiderivative).
//  Continuous: the m = 0 coefficient takes its k -> 0 limit -int X phi dX,
//  i.e. the antiderivative that vanishes at the left end of a decaying field.
enum class ZeroMode { Drop, Continuous };

RealField integrate(const RealField& field, std::size_t axis);
ComplexField integrate(const ComplexField& field, std::size_t axis);
double integrate_all(const RealField& field);

RealField spectral_derivative(const RealField& field, std::size_t axis);
ComplexField spectral_derivative(const ComplexField& field, std::size_t axis);

RealField inverse_x_derivative(const RealField& field, std::size_t axis,
                               ZeroMode zero = ZeroMode::Drop);
ComplexField inverse_x_derivative(const ComplexField& field, std::size_t axis,
                                  ZeroMode zero = ZeroMode::Drop);

// Unnormalized forward DFT and its normalized inverse along one axis.
ComplexField dft(const ComplexField& field, std::size_t axis);
ComplexField idft(const ComplexField& field, std::size_t axis);

// Raw-storage kernels, in place on a row-major array of the given shape.
void derivative_inplace(std::span<double> v, std::span<const std::size_t> shape,
                        std::size_t axis, const Grid1D& grid);
void derivative_inplace(std::span<cplx> v, std::span<const std::size_t> shape,
                        std::size_t axis, const Grid1D& grid);
void inverse_derivative_inplace(std::span<double> v,
                                std::span<const std::size_t> shape,
                                std::size_t axis, const Grid1D& grid,
                                ZeroMode zero);
void inverse_derivative_inplace(std::span<cplx> v,
                                std::span<const std::size_t> shape,
                                std::size_t axis, const Grid1D& grid,
                                ZeroMode zero);
// Band-limited translation: v(x) <- v(x + shift).
void shift_inplace(std::span<double> v, std::span<const std::size_t> shape,
                   std::size_t axis, const Grid1D& grid, double shift);

}  // namespace tomokin::numerics
