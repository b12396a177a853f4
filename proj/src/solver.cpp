#include "ssns/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace ssns {

namespace {

int dealias_cutoff(int n) { return n / 3; }

double max_abs_velocity(const SpectralVectorField& u) {
    return linf_norm(magnitude(u));
}

// Viscous integrating factor e^(-nu |kappa|^2 dt) applied per mode.
void apply_semigroup(SpectralVectorField& u, double nu, double dt) {
    const Grid& g = u.grid;
    const double k0sq = g.k0() * g.k0();
    const int n = g.n;
    const int nxh = n / 2 + 1;
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                const double k2 = double(jx) * jx + double(ky) * ky +
                                  double(kz) * kz;
                const double f = std::exp(-nu * k0sq * k2 * dt);
                for (int c = 0; c < 3; ++c)
                    u.coeffs[c][idx] *= f;
            }
        }
    }
}

void axpy(SpectralVectorField& y, double a, const SpectralVectorField& x) {
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < y.coeffs[c].size(); ++i)
            y.coeffs[c][i] += a * x.coeffs[c][i];
}

}  // namespace

void apply_dealias_mask(SpectralVectorField& u) {
    const Grid& g = u.grid;
    const int kc = dealias_cutoff(g.n);
    const int n = g.n;
    const int nxh = n / 2 + 1;
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                if (jx > kc || std::abs(ky) > kc || std::abs(kz) > kc)
                    for (int c = 0; c < 3; ++c)
                        u.coeffs[c][idx] = 0.0;
            }
        }
    }
}

SpectralVectorField nonlinear_rhs(const SpectralVectorField& u, bool dealias) {
    const Grid& g = u.grid;
    const auto phys = to_physical(u);

    // Divergence form: (u.grad)u_i = d_j (u_j u_i) for div-free u.
    // Symmetric tensor T_ij = u_i u_j, packed like Sym3.
    const int ia[6] = {0, 1, 2, 0, 0, 1};
    const int ib[6] = {0, 1, 2, 1, 2, 2};
    std::array<std::vector<std::complex<double>>, 6> that;
    std::vector<double> prod(g.num_points());
    for (int c = 0; c < 6; ++c) {
        for (std::size_t i = 0; i < prod.size(); ++i) {
            const double v = phys[ia[c]][i] * phys[ib[c]][i];
            if (!std::isfinite(v))
                throw std::runtime_error("nonlinear_rhs: non-finite product");
            prod[i] = v;
        }
        fft_forward(g, prod, that[c]);
    }
    // that index by (i,j): (0,0)=0 (1,1)=1 (2,2)=2 (0,1)=3 (0,2)=4 (1,2)=5
    auto tij = [&](int i, int j) -> const std::vector<std::complex<double>>& {
        if (i == j) return that[i];
        const int a = std::min(i, j), b = std::max(i, j);
        return that[a == 0 ? (b == 1 ? 3 : 4) : 5];
    };

    SpectralVectorField out(g);
    const double k0 = g.k0();
    const std::complex<double> I(0.0, 1.0);
    const int n = g.n;
    const int nxh = n / 2 + 1;
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                const double k[3] = {double(jx), double(ky), double(kz)};
                for (int i = 0; i < 3; ++i) {
                    std::complex<double> div = 0.0;
                    for (int j = 0; j < 3; ++j)
                        div += k[j] * tij(i, j)[idx];
                    out.coeffs[i][idx] = -I * k0 * div;
                }
            }
        }
    }
    if (dealias)
        apply_dealias_mask(out);
    return project_div_free(out);
}

SimState step(const SimState& s, double dt, double nu, bool dealias) {
    const Grid& g = s.u.grid;
    const double maxu = max_abs_velocity(s.u);
    if (maxu > 1.0e6)
        throw std::runtime_error("numerical blow-up at t=" + std::to_string(s.t));
    if (maxu > 0.0 && dt > 0.5 * g.dx() / maxu)
        throw std::runtime_error("CFL violation at t=" + std::to_string(s.t));

    // Integrating-factor RK4: exact semigroup between stage evaluations.
    auto N = [&](const SpectralVectorField& v) {
        return nonlinear_rhs(v, dealias);
    };
    auto half = [&](SpectralVectorField v) {
        apply_semigroup(v, nu, dt / 2.0);
        return v;
    };

    const SpectralVectorField a = N(s.u);

    SpectralVectorField u1 = s.u;
    axpy(u1, dt / 2.0, a);
    u1 = half(std::move(u1));
    const SpectralVectorField b = N(u1);

    SpectralVectorField u2 = half(s.u);
    axpy(u2, dt / 2.0, b);
    const SpectralVectorField c = N(u2);

    SpectralVectorField u3 = half(s.u);
    apply_semigroup(u3, nu, dt / 2.0);
    SpectralVectorField ec = c;
    apply_semigroup(ec, nu, dt / 2.0);
    axpy(u3, dt, ec);
    const SpectralVectorField d = N(u3);

    SimState out;
    out.t = s.t + dt;
    out.u = s.u;
    axpy(out.u, dt / 6.0, a);
    apply_semigroup(out.u, nu, dt);  // E^2 (u + dt/6 a)
    SpectralVectorField mid = b;
    axpy(mid, 1.0, c);
    apply_semigroup(mid, nu, dt / 2.0);
    axpy(out.u, dt / 3.0, mid);
    axpy(out.u, dt / 6.0, d);
    out.u.div_free = true;
    return out;
}

TrajectorySample sample_state(const SimState& s, bool dealias) {
    TrajectorySample r;
    r.t = s.t;
    const SpectralVectorField& u = s.u;
    r.energy = 0.5 * l2_sq_spectral(u);
    r.grad_u_sq = hdot1_sq(u);
    r.lap_u_sq = hdot2_sq(u);
    r.max_u = max_abs_velocity(u);

    const SpectralVectorField om = curl(u);
    r.omega_sq = l2_sq_spectral(om);
    r.omega_h1_sq = hdot1_sq(om);

    const StrainField S = strain(u);
    r.strain_sq = strain_l2_sq(S);
    r.strain_h1_sq = strain_hdot1_sq(S);
    r.det_integral = S.det_integral();

    // <S omega, omega> by quadrature.
    const auto omp = to_physical(om);
    double sw = 0.0;
    for (std::size_t i = 0; i < omp[0].size(); ++i) {
        const Sym3 m = S.at(i);
        const double w[3] = {omp[0][i], omp[1][i], omp[2][i]};
        sw += m[0] * w[0] * w[0] + m[1] * w[1] * w[1] + m[2] * w[2] * w[2] +
              2.0 * (m[3] * w[0] * w[1] + m[4] * w[0] * w[2] +
                     m[5] * w[1] * w[2]);
    }
    r.sw_omega = sw * u.grid.cell_volume();

    // <(u.grad)u, -Delta u> = <N(u), Delta u> after projection.
    const SpectralVectorField nl = nonlinear_rhs(u, dealias);
    const Grid& g = u.grid;
    const double k0sq = g.k0() * g.k0();
    const int n = g.n;
    const int nxh = n / 2 + 1;
    double al = 0.0;
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                const double wt = (jx == 0 || jx == n / 2) ? 1.0 : 2.0;
                const double kap2 = k0sq * (double(jx) * jx + double(ky) * ky +
                                            double(kz) * kz);
                for (int cc = 0; cc < 3; ++cc)
                    al -= wt * kap2 *
                          (nl.coeffs[cc][idx].real() * u.coeffs[cc][idx].real() +
                           nl.coeffs[cc][idx].imag() * u.coeffs[cc][idx].imag());
            }
        }
    }
    r.advect_lap = al * g.volume();
    return r;
}

TrajectoryLog simulate(const SolverConfig& c) {
    if (c.dt <= 0.0 || c.nu <= 0.0 || c.t_end < 0.0 || c.sample_every < 1)
        throw std::invalid_argument("simulate: invalid config");
    const Grid g(c.n, c.box_length);
    SimState s;
    s.t = 0.0;
    if (c.init == "taylor_green")
        s.u = taylor_green(g);
    else if (c.init == "random")
        s.u = random_div_free(g, c.seed);
    else
        throw std::invalid_argument("simulate: unknown init '" + c.init + "'");
    if (c.dealias)
        apply_dealias_mask(s.u);
    s.u = project_div_free(s.u);

    TrajectoryLog log;
    log.config = c;
    const long long nsteps = std::llround(c.t_end / c.dt);
    auto record = [&](const SimState& st) {
        log.samples.push_back(sample_state(st, c.dealias));
        if (c.store_snapshots)
            log.snapshots.push_back(st.u);
    };
    record(s);
    for (long long k = 1; k <= nsteps; ++k) {
        s = step(s, c.dt, c.nu, c.dealias);
        s.t = double(k) * c.dt;  // avoid accumulated roundoff in time
        if (k % c.sample_every == 0 || k == nsteps)
            record(s);
    }
    return log;
}

ScalarField pressure(const SpectralVectorField& u) {
    const Grid& g = u.grid;
    const double k0 = g.k0();
    const std::complex<double> I(0.0, 1.0);
    // Gradient components d_i u_j in physical space.
    std::array<std::array<std::vector<double>, 3>, 3> grad;
    std::vector<std::complex<double>> spec(spectral_size(g));
    const int n = g.n;
    const int nxh = n / 2 + 1;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::size_t idx = 0;
            for (int jz = 0; jz < n; ++jz) {
                const int kz = g.wave_index(jz);
                for (int jy = 0; jy < n; ++jy) {
                    const int ky = g.wave_index(jy);
                    for (int jx = 0; jx < nxh; ++jx, ++idx) {
                        const double k[3] = {double(jx), double(ky), double(kz)};
                        spec[idx] = I * k0 * k[i] * u.coeffs[j][idx];
                    }
                }
            }
            fft_backward(g, spec, grad[i][j]);
        }

    std::vector<double> rhs(g.num_points());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                s += grad[a][b][i] * grad[b][a][i];
        rhs[i] = s;
    }
    std::vector<std::complex<double>> rhat;
    fft_forward(g, rhs, rhat);
    // -Delta p = rhs  =>  |kappa|^2 p_hat = rhs_hat.
    std::size_t idx = 0;
    for (int jz = 0; jz < n; ++jz) {
        const int kz = g.wave_index(jz);
        for (int jy = 0; jy < n; ++jy) {
            const int ky = g.wave_index(jy);
            for (int jx = 0; jx < nxh; ++jx, ++idx) {
                const double kap2 = k0 * k0 *
                                    (double(jx) * jx + double(ky) * ky +
                                     double(kz) * kz);
                rhat[idx] = kap2 > 0.0 ? rhat[idx] / kap2
                                       : std::complex<double>(0.0);
            }
        }
    }
    ScalarField p(g);
    fft_backward(g, rhat, p.values);
    return p;
}

BalanceReport balance_checks(const TrajectoryLog& log, double nu) {
    const auto& s = log.samples;
    if (s.size() < 3)
        throw std::invalid_argument("balance_checks: need at least 3 samples");

    BalanceReport rep;
    auto check = [&](const std::string& name, auto lhs_of, auto rhs_of) {
        BalanceIdentity id;
        id.name = name;
        std::vector<double> rhs(s.size());
        double rhs_scale = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            rhs[i] = rhs_of(s[i]);
            rhs_scale = std::max(rhs_scale, std::abs(rhs[i]));
        }
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            const double deriv = (lhs_of(s[i + 1]) - lhs_of(s[i - 1])) /
                                 (s[i + 1].t - s[i - 1].t);
            const double resid = std::abs(deriv - rhs[i]);
            // Centered-difference truncation ~ (dt^2/6) f'''; the second
            // difference of the rhs series estimates dt^2 f'''.
            const double curv =
                std::abs(rhs[i + 1] - 2.0 * rhs[i] + rhs[i - 1]);
            const double budget =
                std::max({1.0e-3 * std::abs(rhs[i]), 10.0 / 6.0 * curv,
                          1.0e-12 * (1.0 + rhs_scale)});
            // Track the sample that is worst relative to its budget.
            if (resid / budget >
                (id.max_budget > 0.0 ? id.max_residual / id.max_budget : -1.0)) {
                id.max_residual = resid;
                id.max_budget = budget;
                id.worst_time = s[i].t;
            }
            if (resid > budget)
                id.ok = false;
        }
        rep.identities.push_back(id);
        if (!id.ok)
            rep.all_ok = false;
    };

    check("energy", [](const TrajectorySample& x) { return x.energy; },
          [&](const TrajectorySample& x) { return -nu * x.grad_u_sq; });
    check("strain",
          [](const TrajectorySample& x) { return x.strain_sq; },
          [&](const TrajectorySample& x) {
              return -2.0 * nu * x.strain_h1_sq - 4.0 * x.det_integral;
          });
    check("vorticity",
          [](const TrajectorySample& x) { return 0.5 * x.omega_sq; },
          [&](const TrajectorySample& x) {
              return -nu * x.omega_h1_sq + x.sw_omega;
          });
    check("gradient",
          [](const TrajectorySample& x) { return 0.5 * x.grad_u_sq; },
          [&](const TrajectorySample& x) {
              return -nu * x.lap_u_sq - x.advect_lap;
          });
    return rep;
}

}  // namespace ssns
