#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kickrot::fft {

using cvec = std::vector<std::complex<double>>;

// Unitary discrete Fourier transform on power-of-two sizes. The sign
// convention is fixed project-wide:
//
//   plus  : b[i] = (1/sqrt(N)) sum_n a[n] exp(+2*pi*I*i*n/N)   (momentum -> angle)
//   minus : a[n] = (1/sqrt(N)) sum_i b[i] exp(-2*pi*I*i*n/N)   (angle -> momentum)
//
// minus(plus(x)) == x up to roundoff. The gate-level QFT uses the same kernel.
void transform_plus(cvec& a);
void transform_minus(cvec& a);

} // namespace kickrot::fft
