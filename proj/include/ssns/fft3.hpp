#pragma once

#include <complex>
#include <vector>

#include "ssns/grid.hpp"

namespace ssns {

/// Number of complex modes in the half-spectrum (r2c layout, x halved).
inline std::size_t spectral_size(const Grid& g) {
    return static_cast<std::size_t>(g.n) * g.n * (g.n / 2 + 1);
}

/// Index into the half-spectrum; jx in [0, n/2], jy/jz in [0, n).
inline std::size_t spectral_index(const Grid& g, int jx, int jy, int jz) {
    const int nxh = g.n / 2 + 1;
    return (static_cast<std::size_t>(jz) * g.n + jy) * nxh + jx;
}

/// Real-to-complex 3D FFT pair on the periodic grid.
///
/// Forward output is normalized so that the coefficients satisfy
/// u(x) = sum_k u_hat(k) exp(i k0 k.x); backward inverts exactly.
/// Plans are cached per grid size.
void fft_forward(const Grid& g, const std::vector<double>& phys,
                 std::vector<std::complex<double>>& spec);
void fft_backward(const Grid& g, const std::vector<std::complex<double>>& spec,
                  std::vector<double>& phys);

}  // namespace ssns
