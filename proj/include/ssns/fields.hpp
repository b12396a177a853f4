#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssns/eig33.hpp"
#include "ssns/fft3.hpp"
#include "ssns/grid.hpp"

namespace ssns {

/// Real scalar samples on the periodic grid, x fastest.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), values(g.num_points(), fill) {}
};

/// Three-component vector field stored as half-spectrum Fourier coefficients.
///
/// Conjugate symmetry is implied by the r2c layout. The zero mode is kept at
/// zero (mean-free velocity); divergence-free fields satisfy k.u_hat(k) = 0
/// per mode.
struct SpectralVectorField {
    Grid grid;
    std::array<std::vector<std::complex<double>>, 3> coeffs;
    bool div_free = false;

    SpectralVectorField() = default;
    explicit SpectralVectorField(const Grid& g) : grid(g) {
        for (auto& c : coeffs)
            c.assign(spectral_size(g), {0.0, 0.0});
    }
};

/// Symmetric trace-free strain tensor per grid point, packed
/// (S11, S22, S33, S12, S13, S23); eigenvalue fields computed lazily.
class StrainField {
  public:
    StrainField() = default;
    explicit StrainField(const Grid& g) : grid_(g) {
        for (auto& c : comp_)
            c.assign(g.num_points(), 0.0);
    }

    const Grid& grid() const { return grid_; }
    std::vector<double>& component(int i) { eig_.reset(); return comp_[i]; }
    const std::vector<double>& component(int i) const { return comp_[i]; }

    Sym3 at(std::size_t idx) const {
        return {comp_[0][idx], comp_[1][idx], comp_[2][idx],
                comp_[3][idx], comp_[4][idx], comp_[5][idx]};
    }

    /// Sorted eigenvalue fields lambda_1 <= lambda_2 <= lambda_3.
    const std::array<ScalarField, 3>& eigenvalues() const;
    /// Positive part of the middle eigenvalue.
    ScalarField lambda2_plus() const;

    /// Pointwise Frobenius norm |S| as a scalar field.
    ScalarField frobenius() const;
    /// Integral of det(S) over the box, from the eigenvalue product.
    double det_integral() const;

  private:
    Grid grid_;
    std::array<std::vector<double>, 6> comp_;
    mutable std::optional<std::array<ScalarField, 3>> eig_;
};

// ---------------------------------------------------------------------------
// Spectral calculus
// ---------------------------------------------------------------------------

/// Leray projection: u_hat -> u_hat - k (k.u_hat)/|k|^2, zero mode cleared.
SpectralVectorField project_div_free(const SpectralVectorField& v);

/// Vorticity curl(u), computed as i k x u_hat.
SpectralVectorField curl(const SpectralVectorField& u);

/// Strain tensor, symmetric part of grad u, evaluated in physical space.
StrainField strain(const SpectralVectorField& u);

/// Max over modes of |k.u_hat| / max(|u_hat|), 0 for the zero field.
double divergence_residual(const SpectralVectorField& v);

ScalarField magnitude(const SpectralVectorField& u);
std::array<std::vector<double>, 3> to_physical(const SpectralVectorField& u);
SpectralVectorField from_physical(const Grid& g,
                                  const std::array<std::vector<double>, 3>& phys);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Quadrature L^q norm, q in [1, inf).
double lq_norm(const ScalarField& f, double q);
double linf_norm(const ScalarField& f);
double l2_norm(const ScalarField& f);

/// Spectral (Parseval) L^2 norm squared of a vector field.
double l2_sq_spectral(const SpectralVectorField& u);
/// ||grad u||_{L2}^2 computed spectrally.
double hdot1_sq(const SpectralVectorField& u);
/// ||Delta u||_{L2}^2 computed spectrally.
double hdot2_sq(const SpectralVectorField& u);
/// Spectral L^2 inner product of two vector fields.
double inner_product(const SpectralVectorField& a, const SpectralVectorField& b);

/// ||grad f||_{L2} of a scalar field, via its Fourier transform.
double scalar_hdot1(const ScalarField& f);
/// Parseval L^2 norm of a scalar field (spectral route).
double scalar_l2_spectral(const ScalarField& f);

/// Frobenius norms of the strain: ||S||_{L2}^2 by quadrature and
/// ||S||_{Hdot1}^2 spectrally.
double strain_l2_sq(const StrainField& s);
double strain_hdot1_sq(const StrainField& s);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct SobolevCheck {
    bool defined = false;  // false when grad f == 0
    double ratio = 0.0;    // ||f||_L6 / ||grad f||_L2
    bool exceeds = false;  // ratio above the sharp constant
};

/// Sharp Sobolev constant (1/sqrt(3)) (2/pi)^(2/3).
double sobolev_constant();

SobolevCheck sobolev_check(const ScalarField& f);

struct IsometryCheck {
    double grad_u_sq = 0.0;
    double omega_sq = 0.0;
    double strain_sq = 0.0;       // ||S||_{L2}^2
    double max_rel_deviation = 0.0;  // of {omega_sq, 2 strain_sq} vs grad_u_sq
};

/// Checks ||grad u||^2 = ||omega||^2 = 2 ||S||^2 for divergence-free u.
IsometryCheck isometry_check(const SpectralVectorField& u);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Taylor-Green vortex (sin x cos y cos z, -cos x sin y cos z, 0).
SpectralVectorField taylor_green(const Grid& g);

/// Random divergence-free field with binned energy spectrum
/// E(s) = C s^spectral_slope for integer shells 1 <= s <= cutoff_mode.
/// Deterministic per seed. cutoff_mode must be < n/2.
SpectralVectorField random_div_free(const Grid& g, std::uint64_t seed,
                                    double spectral_slope = -2.0,
                                    int cutoff_mode = 0);

/// Isotropic Gaussian bump exp(-|x-c|^2 / (2 w^2)), minimum-image distance.
ScalarField gaussian_bump(const Grid& g, const std::array<double, 3>& center,
                          double width);

// ---------------------------------------------------------------------------
// Snapshot files
// ---------------------------------------------------------------------------

enum class FieldKind : std::uint32_t { Scalar = 0, Velocity = 1, Vorticity = 2 };

void write_scalar_snapshot(const std::string& path, const ScalarField& f,
                           double time, FieldKind kind = FieldKind::Scalar);
void write_vector_snapshot(const std::string& path, const SpectralVectorField& u,
                           double time, FieldKind kind = FieldKind::Velocity);

struct Snapshot {
    Grid grid;
    FieldKind kind = FieldKind::Scalar;
    double time = 0.0;
    std::vector<std::vector<double>> components;  // 1 or 3 of n^3 doubles
};

Snapshot read_snapshot(const std::string& path);

}  // namespace ssns
