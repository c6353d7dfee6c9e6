#pragma once

#include "harp/grid.hpp"

namespace harp {

enum class FftDirection { forward, inverse };

/// Unitary discrete Fourier transform over all axes of the grid.
///
/// Forward maps physical samples f(i/N) to coefficients of e^{2*pi*i m.x}
/// indexed in FFT bin order; inverse undoes it.  Both are scaled by
/// 1/sqrt(total) so that Parseval holds exactly in the sample inner product.
/// The space tag must match the direction.
GridFunction fourier_pair(const GridFunction& f, FftDirection dir);

GridFunction forward_fourier(const GridFunction& f);
GridFunction inverse_fourier(const GridFunction& f);

namespace detail {

/// In-place radix-2 transform of length n on strided data.
/// sign = -1 forward, +1 inverse.  No normalization.
void fft_line(cplx* data, int n, std::size_t stride, int sign);

/// Transform along one flattened axis of a grid-shaped array.
void fft_axis(std::vector<cplx>& data, const ProductGrid& grid, int axis, int sign);

}  // namespace detail
}  // namespace harp
