#include "ssns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace ssns {

namespace {

// Invokes fn(idx, kx, ky, kz, weight) over the stored half-spectrum; the
// weight is the multiplicity of the mode in the full spectrum (2 for interior
// jx, 1 on the jx = 0 and jx = n/2 planes).
template <typename Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
    const int n = g.n;
    const int nxh = n / 2 + 1;
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                const double w = (jx == 0 || jx == n / 2) ? 1.0 : 2.0;
                fn(idx, jx, ky, kz, w);
            }
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// StrainField
// ---------------------------------------------------------------------------

const std::array<ScalarField, 3>& StrainField::eigenvalues() const {
    if (!eig_) {
        std::array<ScalarField, 3> e = {ScalarField(grid_), ScalarField(grid_),
                                        ScalarField(grid_)};
        const std::size_t np = grid_.num_points();
        for (std::size_t i = 0; i < np; ++i) {
            const auto w = sym3_eigenvalues(at(i));
            e[0].values[i] = w[0];
            e[1].values[i] = w[1];
            e[2].values[i] = w[2];
        }
        eig_ = std::move(e);
    }
    return *eig_;
}

ScalarField StrainField::lambda2_plus() const {
    const auto& e = eigenvalues();
    ScalarField out(grid_);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::max(0.0, e[1].values[i]);
    return out;
}

ScalarField StrainField::frobenius() const {
    ScalarField out(grid_);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::sqrt(sym3_frob_sq(at(i)));
    return out;
}

double StrainField::det_integral() const {
    const auto& e = eigenvalues();
    double sum = 0.0;
    for (std::size_t i = 0; i < e[0].values.size(); ++i)
        sum += e[0].values[i] * e[1].values[i] * e[2].values[i];
    return sum * grid_.cell_volume();
}

// ---------------------------------------------------------------------------
// Spectral calculus
// ---------------------------------------------------------------------------

SpectralVectorField project_div_free(const SpectralVectorField& v) {
    SpectralVectorField out = v;
    for_each_mode(v.grid, [&](std::size_t idx, int kx, int ky, int kz, double) {
        const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
        if (k2 == 0.0) {
            for (int c = 0; c < 3; ++c)
                out.coeffs[c][idx] = 0.0;
            return;
        }
        const std::complex<double> kdotu =
            double(kx) * v.coeffs[0][idx] + double(ky) * v.coeffs[1][idx] +
            double(kz) * v.coeffs[2][idx];
        const std::complex<double> f = kdotu / k2;
        out.coeffs[0][idx] = v.coeffs[0][idx] - double(kx) * f;
        out.coeffs[1][idx] = v.coeffs[1][idx] - double(ky) * f;
        out.coeffs[2][idx] = v.coeffs[2][idx] - double(kz) * f;
    });
    out.div_free = true;
    return out;
}

SpectralVectorField curl(const SpectralVectorField& u) {
    SpectralVectorField out(u.grid);
    const double k0 = u.grid.k0();
    const std::complex<double> I(0.0, 1.0);
    for_each_mode(u.grid, [&](std::size_t idx, int kx, int ky, int kz, double) {
        const std::complex<double> ux = u.coeffs[0][idx];
        const std::complex<double> uy = u.coeffs[1][idx];
        const std::complex<double> uz = u.coeffs[2][idx];
        out.coeffs[0][idx] = I * k0 * (double(ky) * uz - double(kz) * uy);
        out.coeffs[1][idx] = I * k0 * (double(kz) * ux - double(kx) * uz);
        out.coeffs[2][idx] = I * k0 * (double(kx) * uy - double(ky) * ux);
    });
    out.div_free = true;
    return out;
}

StrainField strain(const SpectralVectorField& u) {
    const Grid& g = u.grid;
    StrainField s(g);
    const double k0 = g.k0();
    const std::complex<double> I(0.0, 1.0);
    // Component order matches the Sym3 packing.
    const int ia[6] = {0, 1, 2, 0, 0, 1};
    const int ib[6] = {0, 1, 2, 1, 2, 2};
    std::vector<std::complex<double>> spec(spectral_size(g));
    for (int c = 0; c < 6; ++c) {
        const int a = ia[c], b = ib[c];
        for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz, double) {
            const double k[3] = {double(kx), double(ky), double(kz)};
            spec[idx] = 0.5 * I * k0 *
                        (k[a] * u.coeffs[b][idx] + k[b] * u.coeffs[a][idx]);
        });
        fft_backward(g, spec, s.component(c));
    }
    return s;
}

double divergence_residual(const SpectralVectorField& v) {
    double res = 0.0, scale = 0.0;
    for_each_mode(v.grid, [&](std::size_t idx, int kx, int ky, int kz, double) {
        const std::complex<double> kd = double(kx) * v.coeffs[0][idx] +
                                        double(ky) * v.coeffs[1][idx] +
                                        double(kz) * v.coeffs[2][idx];
        const double kn = std::sqrt(double(kx) * kx + double(ky) * ky +
                                    double(kz) * kz);
        const double un = std::sqrt(std::norm(v.coeffs[0][idx]) +
                                    std::norm(v.coeffs[1][idx]) +
                                    std::norm(v.coeffs[2][idx]));
        res = std::max(res, std::abs(kd));
        scale = std::max(scale, kn * un);
    });
    return scale > 0.0 ? res / scale : 0.0;
}

ScalarField magnitude(const SpectralVectorField& u) {
    const auto phys = to_physical(u);
    ScalarField out(u.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::sqrt(phys[0][i] * phys[0][i] +
                                  phys[1][i] * phys[1][i] +
                                  phys[2][i] * phys[2][i]);
    return out;
}

std::array<std::vector<double>, 3> to_physical(const SpectralVectorField& u) {
    std::array<std::vector<double>, 3> phys;
    for (int c = 0; c < 3; ++c)
        fft_backward(u.grid, u.coeffs[c], phys[c]);
    return phys;
}

SpectralVectorField from_physical(const Grid& g,
                                  const std::array<std::vector<double>, 3>& phys) {
    SpectralVectorField out(g);
    for (int c = 0; c < 3; ++c)
        fft_forward(g, phys[c], out.coeffs[c]);
    return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

double lq_norm(const ScalarField& f, double q) {
    if (q < 1.0)
        throw std::invalid_argument("lq_norm: q must be >= 1");
    double sum = 0.0;
    for (double v : f.values)
        sum += std::pow(std::abs(v), q);
    return std::pow(sum * f.grid.cell_volume(), 1.0 / q);
}

double linf_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values)
        m = std::max(m, std::abs(v));
    return m;
}

double l2_norm(const ScalarField& f) {
    double sum = 0.0;
    for (double v : f.values)
        sum += v * v;
    return std::sqrt(sum * f.grid.cell_volume());
}

double l2_sq_spectral(const SpectralVectorField& u) {
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, int, int, int, double w) {
        sum += w * (std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                    std::norm(u.coeffs[2][idx]));
    });
    return sum * u.grid.volume();
}

double hdot1_sq(const SpectralVectorField& u) {
    const double k0sq = u.grid.k0() * u.grid.k0();
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, int kx, int ky, int kz, double w) {
        const double kap2 =
            k0sq * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        sum += w * kap2 *
               (std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                std::norm(u.coeffs[2][idx]));
    });
    return sum * u.grid.volume();
}

double hdot2_sq(const SpectralVectorField& u) {
    const double k0sq = u.grid.k0() * u.grid.k0();
    double sum = 0.0;
    for_each_mode(u.grid, [&](std::size_t idx, int kx, int ky, int kz, double w) {
        const double kap2 =
            k0sq * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        sum += w * kap2 * kap2 *
               (std::norm(u.coeffs[0][idx]) + std::norm(u.coeffs[1][idx]) +
                std::norm(u.coeffs[2][idx]));
    });
    return sum * u.grid.volume();
}

double inner_product(const SpectralVectorField& a, const SpectralVectorField& b) {
    double sum = 0.0;
    for_each_mode(a.grid, [&](std::size_t idx, int, int, int, double w) {
        for (int c = 0; c < 3; ++c)
            sum += w * (a.coeffs[c][idx].real() * b.coeffs[c][idx].real() +
                        a.coeffs[c][idx].imag() * b.coeffs[c][idx].imag());
    });
    return sum * a.grid.volume();
}

double scalar_hdot1(const ScalarField& f) {
    std::vector<std::complex<double>> spec;
    fft_forward(f.grid, f.values, spec);
    const double k0sq = f.grid.k0() * f.grid.k0();
    double sum = 0.0;
    for_each_mode(f.grid, [&](std::size_t idx, int kx, int ky, int kz, double w) {
        const double kap2 =
            k0sq * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        sum += w * kap2 * std::norm(spec[idx]);
    });
    return std::sqrt(sum * f.grid.volume());
}

double scalar_l2_spectral(const ScalarField& f) {
    std::vector<std::complex<double>> spec;
    fft_forward(f.grid, f.values, spec);
    double sum = 0.0;
    for_each_mode(f.grid, [&](std::size_t idx, int, int, int, double w) {
        sum += w * std::norm(spec[idx]);
    });
    return std::sqrt(sum * f.grid.volume());
}

double strain_l2_sq(const StrainField& s) {
    double sum = 0.0;
    const std::size_t np = s.grid().num_points();
    for (std::size_t i = 0; i < np; ++i)
        sum += sym3_frob_sq(s.at(i));
    return sum * s.grid().cell_volume();
}

double strain_hdot1_sq(const StrainField& s) {
    const Grid& g = s.grid();
    const double k0sq = g.k0() * g.k0();
    std::vector<std::complex<double>> spec;
    double sum = 0.0;
    for (int c = 0; c < 6; ++c) {
        fft_forward(g, s.component(c), spec);
        const double mult = c < 3 ? 1.0 : 2.0;  // off-diagonals count twice
        for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz, double w) {
            const double kap2 =
                k0sq * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
            sum += mult * w * kap2 * std::norm(spec[idx]);
        });
    }
    return sum * g.volume();
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

double sobolev_constant() {
    return std::pow(2.0 / M_PI, 2.0 / 3.0) / std::sqrt(3.0);
}

SobolevCheck sobolev_check(const ScalarField& f) {
    SobolevCheck out;
    const double grad = scalar_hdot1(f);
    if (grad == 0.0)
        return out;  // constant field, ratio undefined
    out.defined = true;
    out.ratio = lq_norm(f, 6.0) / grad;
    out.exceeds = out.ratio > sobolev_constant();
    return out;
}

IsometryCheck isometry_check(const SpectralVectorField& u) {
    if (divergence_residual(u) > 1.0e-9)
        throw std::invalid_argument("isometry_check: input not divergence-free");
    IsometryCheck out;
    out.grad_u_sq = hdot1_sq(u);
    out.omega_sq = l2_sq_spectral(curl(u));
    out.strain_sq = strain_l2_sq(strain(u));
    const double ref = out.grad_u_sq;
    if (ref > 0.0) {
        out.max_rel_deviation =
            std::max(std::abs(out.omega_sq - ref),
                     std::abs(2.0 * out.strain_sq - ref)) / ref;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

SpectralVectorField taylor_green(const Grid& g) {
    std::array<std::vector<double>, 3> phys;
    for (auto& c : phys)
        c.resize(g.num_points());
    const double dx = g.dx();
    for (int iz = 0; iz < g.n; ++iz) {
        const double z = iz * dx;
        for (int iy = 0; iy < g.n; ++iy) {
            const double y = iy * dx;
            for (int ix = 0; ix < g.n; ++ix) {
                const double x = ix * dx;
                const std::size_t i = g.index(ix, iy, iz);
                phys[0][i] = std::sin(x) * std::cos(y) * std::cos(z);
                phys[1][i] = -std::cos(x) * std::sin(y) * std::cos(z);
                phys[2][i] = 0.0;
            }
        }
    }
    SpectralVectorField u = from_physical(g, phys);
    u.div_free = true;
    return u;
}

SpectralVectorField random_div_free(const Grid& g, std::uint64_t seed,
                                    double spectral_slope, int cutoff_mode) {
    if (cutoff_mode <= 0)
        cutoff_mode = g.n / 3;
    if (cutoff_mode >= g.n / 2)
        throw std::invalid_argument("random_div_free: cutoff_mode must be < n/2");

    // Shell weights: multiplicity-weighted lattice mode count per integer shell.
    std::vector<double> shell_count(cutoff_mode + 1, 0.0);
    for_each_mode(g, [&](std::size_t, int kx, int ky, int kz, double w) {
        const double kk = std::sqrt(double(kx) * kx + double(ky) * ky +
                                    double(kz) * kz);
        const int s = int(std::lround(kk));
        if (s >= 1 && s <= cutoff_mode && kk <= cutoff_mode + 0.5)
            shell_count[s] += w;
    });

    SpectralVectorField u(g);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = g.n;

    // Visit jx = 0 plane conjugate pairs once; jx > 0 modes are free.
    auto conj_partner_first = [&](int jy, int jz) {
        const int py = (n - jy) % n, pz = (n - jz) % n;
        return std::make_pair(jz, jy) <= std::make_pair(pz, py);
    };

    for_each_mode(g, [&](std::size_t idx, int kx, int ky, int kz, double) {
        const double kk = std::sqrt(double(kx) * kx + double(ky) * ky +
                                    double(kz) * kz);
        const int s = int(std::lround(kk));
        if (s < 1 || s > cutoff_mode || kk > cutoff_mode + 0.5)
            return;
        const int jy = (ky + n) % n, jz = (kz + n) % n;
        if (kx == 0 && !conj_partner_first(jy, jz))
            return;  // filled via its conjugate partner

        // Random complex direction, projected perpendicular to k, then
        // normalized so the binned spectrum is exactly C s^slope.
        std::complex<double> v[3];
        for (auto& c : v)
            c = {gauss(rng), gauss(rng)};
        const double k2 = kk * kk;
        std::complex<double> kd = double(kx) * v[0] + double(ky) * v[1] +
                                  double(kz) * v[2];
        v[0] -= double(kx) * kd / k2;
        v[1] -= double(ky) * kd / k2;
        v[2] -= double(kz) * kd / k2;
        double vn = std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
        if (vn < 1.0e-12)
            vn = 1.0;  // pathological draw, leave tiny
        // Target per-mode energy: E(s)/count, E(s) = s^slope, with the
        // 1/2 |u|^2 and L^3 Parseval factors absorbed.
        const double amp = std::sqrt(2.0 * std::pow(double(s), spectral_slope) /
                                     (shell_count[s] * g.volume())) / vn;
        for (int c = 0; c < 3; ++c)
            u.coeffs[c][idx] = v[c] * amp;

        if (kx == 0) {
            const int pjy = (n - jy) % n, pjz = (n - jz) % n;
            const std::size_t pidx = spectral_index(g, 0, pjy, pjz);
            if (pidx != idx)
                for (int c = 0; c < 3; ++c)
                    u.coeffs[c][pidx] = std::conj(u.coeffs[c][idx]);
        }
    });
    u.div_free = true;
    return u;
}

ScalarField gaussian_bump(const Grid& g, const std::array<double, 3>& center,
                          double width) {
    ScalarField f(g);
    const double dx = g.dx();
    const double L = g.box_length;
    auto min_image = [L](double d) {
        d = std::fmod(d + L / 2.0, L);
        if (d < 0.0) d += L;
        return d - L / 2.0;
    };
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double rx = min_image(ix * dx - center[0]);
                const double ry = min_image(iy * dx - center[1]);
                const double rz = min_image(iz * dx - center[2]);
                const double r2 = rx * rx + ry * ry + rz * rz;
                f.values[g.index(ix, iy, iz)] =
                    std::exp(-r2 / (2.0 * width * width));
            }
    return f;
}

// ---------------------------------------------------------------------------
// Snapshot files
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[5] = {'S', 'S', 'N', 'S', '1'};

void write_header(std::ofstream& out, const Grid& g, FieldKind kind,
                  double time, std::uint32_t ncomp) {
    out.write(kMagic, 5);
    const std::uint32_t n = g.n;
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&g.box_length), 8);
    const std::uint32_t k = static_cast<std::uint32_t>(kind);
    out.write(reinterpret_cast<const char*>(&k), 4);
    out.write(reinterpret_cast<const char*>(&time), 8);
    out.write(reinterpret_cast<const char*>(&ncomp), 4);
}

}  // namespace

void write_scalar_snapshot(const std::string& path, const ScalarField& f,
                           double time, FieldKind kind) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open snapshot file: " + path);
    write_header(out, f.grid, kind, time, 1);
    out.write(reinterpret_cast<const char*>(f.values.data()),
              f.values.size() * sizeof(double));
}

void write_vector_snapshot(const std::string& path, const SpectralVectorField& u,
                           double time, FieldKind kind) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open snapshot file: " + path);
    write_header(out, u.grid, kind, time, 3);
    const auto phys = to_physical(u);
    for (int c = 0; c < 3; ++c)
        out.write(reinterpret_cast<const char*>(phys[c].data()),
                  phys[c].size() * sizeof(double));
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open snapshot file: " + path);
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw std::runtime_error("bad snapshot magic in " + path);
    std::uint32_t n = 0, kind = 0, ncomp = 0;
    double L = 0.0, time = 0.0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&L), 8);
    in.read(reinterpret_cast<char*>(&kind), 4);
    in.read(reinterpret_cast<char*>(&time), 8);
    in.read(reinterpret_cast<char*>(&ncomp), 4);
    if (!in || (ncomp != 1 && ncomp != 3))
        throw std::runtime_error("bad snapshot header in " + path);
    Snapshot s;
    s.grid = Grid(static_cast<int>(n), L);
    s.kind = static_cast<FieldKind>(kind);
    s.time = time;
    s.components.resize(ncomp);
    for (auto& c : s.components) {
        c.resize(s.grid.num_points());
        in.read(reinterpret_cast<char*>(c.data()), c.size() * sizeof(double));
    }
    if (!in)
        throw std::runtime_error("truncated snapshot file: " + path);
    return s;
}

}  // namespace ssns
