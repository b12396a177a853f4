#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ssns {

/// Uniform periodic grid on [0, L)^3 with n points per axis.
///
/// Wavenumbers are integers scaled by 2*pi/L, so that with coefficients
/// u(x) = sum_k u_hat(k) exp(i (2*pi/L) k.x) the Hdot1 norm equals
/// ||grad u||_{L2} exactly.
struct Grid {
    int n = 0;
    double box_length = 2.0 * M_PI;

    Grid() = default;
    Grid(int n_, double box_length_ = 2.0 * M_PI)
        : n(n_), box_length(box_length_) {
        if (n < 8 || n % 2 != 0)
            throw std::invalid_argument("Grid: n must be >= 8 and even");
        if (box_length <= 0.0)
            throw std::invalid_argument("Grid: box_length must be positive");
    }

    std::size_t num_points() const {
        return static_cast<std::size_t>(n) * n * n;
    }
    double dx() const { return box_length / n; }
    double cell_volume() const { return dx() * dx() * dx(); }
    double volume() const { return box_length * box_length * box_length; }

    /// Fundamental wavenumber 2*pi/L.
    double k0() const { return 2.0 * M_PI / box_length; }

    /// Signed integer wavenumber for FFT index j in [0, n).
    int wave_index(int j) const { return j <= n / 2 ? j : j - n; }

    /// Row-major index, x fastest.
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(iz) * n * n +
               static_cast<std::size_t>(iy) * n + ix;
    }

    bool operator==(const Grid& o) const {
        return n == o.n && box_length == o.box_length;
    }
};

}  // namespace ssns
