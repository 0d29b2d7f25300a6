#pragma once

#include <complex>
#include <vector>

#include "glspace/grid_function.hpp"

namespace glspace::detail {

using cvec = std::vector<std::complex<double>>;

// out_k = sum_j in_j exp(sign i 2pi sum_a (j_a - c_a)(k_a - c_a) / N_a), c_a = N_a/2 - 1/2.
cvec centered_dft(const std::vector<std::size_t>& counts, cvec data, int sign);

// Linear convolution of two 1D sequences via zero-padded FFT.
cvec linear_convolution(const cvec& a, const cvec& b);

// int over the tail region of g(x) e^{ixy} dx.
std::complex<double> tail_transform(const PowerSumTail& tail, double y);
// Same at y = e^s for y R < 1e-6, without forming y.
std::complex<double> tail_transform_small(const PowerSumTail& tail, double s);

}  // namespace glspace::detail
