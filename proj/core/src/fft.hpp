#pragma once

#include <complex>
#include <span>

namespace hwm::fft {

using cplx = std::complex<double>;

/// Unnormalized real-to-complex transform; `out` holds n/2 + 1 coefficients.
void forward(std::span<const double> in, std::span<cplx> out);

/// Complex-to-real inverse including the 1/n factor; `in` holds n/2 + 1
/// coefficients and is not modified.
void inverse(std::span<const cplx> in, std::span<double> out);

} // namespace hwm::fft
