#pragma once

#include <array>

namespace ssns {

/// Symmetric 3x3 packed as (a11, a22, a33, a12, a13, a23).
using Sym3 = std::array<double, 6>;

/// Eigenvalues of a symmetric 3x3 matrix, sorted ascending.
///
/// Closed-form trigonometric solution of the characteristic cubic, with a
/// fallback to 10 Jacobi sweeps when the normalized discriminant is within
/// 1e-13 of zero (near-degenerate spectra, where the acos branch loses
/// accuracy).
std::array<double, 3> sym3_eigenvalues(const Sym3& a);

double sym3_det(const Sym3& a);

/// Frobenius norm squared, sum over all 9 entries.
double sym3_frob_sq(const Sym3& a);

}  // namespace ssns
