#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssns/solver.hpp"

using namespace ssns;

namespace {

// u = (sin y, 0, 0): divergence-free with identically zero advection term,
// so time stepping reduces to exact heat decay.
SpectralVectorField shear_flow(const Grid& g) {
    std::array<std::vector<double>, 3> phys;
    for (auto& c : phys)
        c.assign(g.num_points(), 0.0);
    const double dx = g.dx();
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix)
                phys[0][g.index(ix, iy, iz)] = std::sin(iy * dx);
    SpectralVectorField u = from_physical(g, phys);
    u.div_free = true;
    return u;
}

double spectral_distance(const SpectralVectorField& a,
                         const SpectralVectorField& b) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.coeffs[c].size(); ++i)
            s += std::norm(a.coeffs[c][i] - b.coeffs[c][i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("nonlinear term: zero field, projection, energy neutrality") {
    const Grid g(16);
    const SpectralVectorField zero(g);
    CHECK(l2_sq_spectral(nonlinear_rhs(zero)) == 0.0);

    const SpectralVectorField tg = taylor_green(g);
    const SpectralVectorField n = nonlinear_rhs(tg);
    CHECK(divergence_residual(n) <= 1e-12);
    const double ip = inner_product(n, tg);
    CHECK(std::abs(ip) <= 1e-10 * (1.0 + l2_sq_spectral(tg)));

    const SpectralVectorField r = random_div_free(g, 6);
    CHECK(divergence_residual(nonlinear_rhs(r)) <= 1e-12);
    CHECK(std::abs(inner_product(nonlinear_rhs(r), r)) <=
          1e-10 * (1.0 + l2_sq_spectral(r)));
}

TEST_CASE("step reduces to the exact heat semigroup on shear flow") {
    const Grid g(16);
    const double nu = 0.3, dt = 1e-2;
    SimState s;
    s.u = shear_flow(g);
    const SimState next = step(s, dt, nu);
    // Only |k| = 1 modes are populated; each must decay by e^(-nu dt).
    const double factor = std::exp(-nu * dt);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < next.u.coeffs[c].size(); ++i) {
            const std::complex<double> want = s.u.coeffs[c][i] * factor;
            CHECK(std::abs(next.u.coeffs[c][i] - want) <= 1e-15);
        }
}

TEST_CASE("temporal convergence order of the integrating-factor RK4") {
    const Grid g(16);
    const double nu = 0.1, dt = 4e-2;
    SimState s;
    s.u = taylor_green(g);
    apply_dealias_mask(s.u);

    auto run = [&](double h, int steps) {
        SimState x = s;
        for (int i = 0; i < steps; ++i)
            x = step(x, h, nu);
        return x.u;
    };
    const SpectralVectorField u1 = run(dt, 1);
    const SpectralVectorField u2 = run(dt / 2.0, 2);
    const SpectralVectorField u4 = run(dt / 4.0, 4);
    const double e1 = spectral_distance(u1, u2);
    const double e2 = spectral_distance(u2, u4);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.8);
}

TEST_CASE("energy never increases across steps; divergence preserved") {
    const Grid g(16);
    SimState s;
    s.u = random_div_free(g, 13);
    apply_dealias_mask(s.u);
    double prev = l2_sq_spectral(s.u);
    for (int i = 0; i < 50; ++i) {
        s = step(s, 2e-3, 0.05);
        const double e = l2_sq_spectral(s.u);
        CHECK(e <= prev * (1.0 + 1e-10));
        CHECK(divergence_residual(s.u) <= 1e-12);
        prev = e;
    }
}

TEST_CASE("step aborts on CFL violation and blow-up") {
    const Grid g(16);
    SimState s;
    s.u = taylor_green(g);
    CHECK_THROWS_WITH_AS(step(s, 1.0, 0.1), doctest::Contains("CFL"),
                         std::runtime_error);

    for (int c = 0; c < 3; ++c)
        for (auto& v : s.u.coeffs[c])
            v *= 1e7;
    CHECK_THROWS_WITH_AS(step(s, 1e-9, 0.1), doctest::Contains("blow-up"),
                         std::runtime_error);
}

TEST_CASE("simulate: trivial horizon, determinism, monotone decay") {
    SolverConfig c;
    c.n = 16;
    c.nu = 0.1;
    c.dt = 2e-3;
    c.t_end = 0.0;
    const TrajectoryLog l0 = simulate(c);
    CHECK(l0.samples.size() == 1);
    CHECK(l0.samples[0].t == 0.0);

    c.t_end = 0.2;
    c.sample_every = 10;
    const TrajectoryLog a = simulate(c);
    const TrajectoryLog b = simulate(c);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].energy == b.samples[i].energy);
        CHECK(a.samples[i].grad_u_sq == b.samples[i].grad_u_sq);
        CHECK(a.samples[i].det_integral == b.samples[i].det_integral);
    }
    for (std::size_t i = 1; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].t > a.samples[i - 1].t);
        CHECK(a.samples[i].energy <= a.samples[i - 1].energy);
    }

    c.init = "bogus";
    CHECK_THROWS_AS(simulate(c), std::invalid_argument);
}

TEST_CASE("pressure solves the Poisson equation") {
    const Grid g(16);
    const SpectralVectorField zero(g);
    CHECK(linf_norm(pressure(zero)) == 0.0);
    CHECK(linf_norm(pressure(shear_flow(g))) <= 1e-12);

    // Taylor-Green has the classical closed-form pressure.
    const ScalarField p = pressure(taylor_green(g));
    const double dx = g.dx();
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double x = ix * dx, y = iy * dx, z = iz * dx;
                const double want = (std::cos(2 * x) + std::cos(2 * y)) *
                                    (2.0 + std::cos(2 * z)) / 16.0;
                CHECK(std::abs(p.values[g.index(ix, iy, iz)] - want) <= 1e-10);
            }
}

TEST_CASE("balance checks: zero, heat decay, and short nonlinear run") {
    {
        TrajectoryLog log;
        for (double t : {0.0, 0.1, 0.2, 0.3})
            log.samples.push_back(TrajectorySample{.t = t});
        const BalanceReport r = balance_checks(log, 0.1);
        CHECK(r.all_ok);
        REQUIRE(r.identities.size() == 4);
    }
    {
        const Grid g(16);
        const double nu = 0.1, dt = 1e-3;
        SimState s;
        s.u = shear_flow(g);
        TrajectoryLog log;
        log.samples.push_back(sample_state(s, true));
        for (int k = 1; k <= 100; ++k) {
            s = step(s, dt, nu);
            if (k % 10 == 0)
                log.samples.push_back(sample_state(s, true));
        }
        const BalanceReport r = balance_checks(log, nu);
        CHECK(r.all_ok);
        // pure decay: only the O(dt^2) differencing error remains
        for (const auto& id : r.identities)
            CHECK(id.max_residual <= 1e-4);
    }
    {
        SolverConfig c;
        c.n = 16;
        c.nu = 0.1;
        c.dt = 1e-3;
        c.t_end = 0.2;
        c.sample_every = 10;
        const TrajectoryLog log = simulate(c);
        const BalanceReport r = balance_checks(log, c.nu);
        for (const auto& id : r.identities) {
            INFO(id.name, " residual ", id.max_residual, " budget ",
                 id.max_budget, " at t=", id.worst_time);
            CHECK(id.ok);
        }
        CHECK(r.all_ok);
    }
}

TEST_CASE("energy equality on a short resolved run") {
    SolverConfig c;
    c.n = 16;
    c.nu = 0.1;
    c.dt = 1e-3;
    c.t_end = 0.25;
    c.sample_every = 5;
    const TrajectoryLog log = simulate(c);
    double diss = 0.0;
    for (std::size_t i = 1; i < log.samples.size(); ++i)
        diss += (log.samples[i].t - log.samples[i - 1].t) / 2.0 *
                (log.samples[i].grad_u_sq + log.samples[i - 1].grad_u_sq);
    const double e0 = log.samples.front().energy;
    const double eT = log.samples.back().energy;
    CHECK(std::abs(eT + c.nu * diss - e0) <= 1e-4 * e0);
}
