#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssns/fields.hpp"

namespace ssns {

struct SolverConfig {
    int n = 32;
    double box_length = 2.0 * M_PI;
    double nu = 0.1;
    double dt = 1.0e-3;
    double t_end = 1.0;
    int sample_every = 1;
    std::string init = "taylor_green";  // taylor_green | random
    std::uint64_t seed = 1;
    bool dealias = true;
    bool store_snapshots = true;  // keep sampled velocity fields in the log
};

struct SimState {
    double t = 0.0;
    SpectralVectorField u;
};

/// Scalar diagnostics recorded at each sample time. The last four feed the
/// vorticity and velocity-gradient balance identities.
struct TrajectorySample {
    double t = 0.0;
    double energy = 0.0;        // 1/2 ||u||^2
    double grad_u_sq = 0.0;     // ||grad u||^2
    double omega_sq = 0.0;      // ||omega||^2
    double strain_sq = 0.0;     // ||S||^2
    double strain_h1_sq = 0.0;  // ||S||_{Hdot1}^2
    double det_integral = 0.0;  // int det S
    double omega_h1_sq = 0.0;   // ||omega||_{Hdot1}^2
    double lap_u_sq = 0.0;      // ||Delta u||^2
    double sw_omega = 0.0;      // <S omega, omega>
    double advect_lap = 0.0;    // <(u.grad)u, -Delta u>
    double max_u = 0.0;         // max |u(x)|
};

struct TrajectoryLog {
    SolverConfig config;
    std::vector<TrajectorySample> samples;
    std::vector<SpectralVectorField> snapshots;  // empty unless stored
};

/// P_df(-(u.grad)u): products in physical space, divergence form, 2/3-rule
/// dealiased, projected.
SpectralVectorField nonlinear_rhs(const SpectralVectorField& u,
                                  bool dealias = true);

/// Zeroes every mode with any |k_i| > floor(n/3).
void apply_dealias_mask(SpectralVectorField& u);

/// One integrating-factor RK4 step; the viscous semigroup is exact per mode.
SimState step(const SimState& s, double dt, double nu, bool dealias = true);

/// Diagnostics of a single state, as recorded by simulate.
TrajectorySample sample_state(const SimState& s, bool dealias = true);

TrajectoryLog simulate(const SolverConfig& c);

/// Pressure from -Delta p = sum_ij du_j/dx_i du_i/dx_j, zero mean.
ScalarField pressure(const SpectralVectorField& u);

struct BalanceIdentity {
    std::string name;
    double max_residual = 0.0;  // worst |lhs - rhs| over interior samples
    double max_budget = 0.0;    // budget at the worst sample
    double worst_time = 0.0;
    bool ok = true;
};

struct BalanceReport {
    std::vector<BalanceIdentity> identities;
    bool all_ok = true;
};

/// Centered-difference verification of the energy, strain, vorticity, and
/// velocity-gradient balance identities at interior samples.
BalanceReport balance_checks(const TrajectoryLog& log, double nu);

}  // namespace ssns
