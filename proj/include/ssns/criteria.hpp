#pragma once

#include <string>
#include <vector>

#include "ssns/lorentz.hpp"
#include "ssns/solver.hpp"

namespace ssns {

enum class Variant { Velocity, Strain, Vorticity };

std::string variant_name(Variant v);

/// The scalar field each variant thresholds: |u|, lambda_2^+ of S, or |omega|.
ScalarField monitored_field(Variant v, const SpectralVectorField& u);

/// Per-time cutoff h(t) splitting the monitored field into an L^q part
/// (above) and an L^inf part (at or below).
struct CutoffRule {
    enum class Kind { Constant, Table, AllInLq, AllInLinf };
    Kind kind = Kind::Constant;
    double constant = 0.0;
    std::vector<double> times;   // Table only, must cover the trajectory
    std::vector<double> values;

    static CutoffRule make_constant(double c);
    static CutoffRule make_table(std::vector<double> t, std::vector<double> v);
    static CutoffRule all_in_lq();    // h = 0
    static CutoffRule all_in_linf();  // h = inf

    /// Evaluates h(t); linear interpolation for tables.
    double at(double t) const;
};

/// Gronwall constant reconstructed from the proof chain
/// (interpolation + sharp Sobolev + Young), with its derivation inputs.
/// The chain A F E^(1-theta) D^theta <= value * F^p E + c D is verified
/// numerically at construction over random (E, D, F).
struct CpDerivation {
    Variant variant = Variant::Velocity;
    double p = 0.0;
    double q = 0.0;
    double theta = 0.0;              // Young exponent on the dissipation
    double amplitude = 0.0;          // A, from interpolation + Sobolev
    double dissipation_coeff = 0.0;  // c: nu-multiple of D absorbed
    double value = 0.0;              // C_p
};

/// Rejects (p, q) outside the variant's scaling family
/// (velocity: 2/p + 3/q = 1, q > 3; strain/vorticity: 2/p + 3/q = 2, q > 3/2).
CpDerivation derive_cp(double p, double q, Variant v);

struct Certificate {
    std::string variant;  // velocity | ... | velocity_weak | ...
    double p = 0.0, q = 0.0;
    double p_prime = 0.0, q_prime = 0.0;  // weak variants only
    double cp = 0.0;             // C_p, or the composite weak constant
    double sigma_coeff = 0.0;    // multiplier on the L^inf-part integral
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> margin;  // (rhs - lhs) / rhs, 0 when both vanish
    double min_margin = 0.0;
    bool pass = false;
};

/// Strong-form enstrophy bound along the trajectory; requires snapshots.
Certificate certify(const TrajectoryLog& log, Variant v, double p, double q,
                    const CutoffRule& rule);

/// Weak-Lorentz variant: the above-cutoff part is measured in L^{q,inf} and
/// the composite constant C_{p'}/nu^(p'-1) (q/(q-q'))^(p'/q') + tail is used.
Certificate certify_weak(const TrajectoryLog& log, Variant v, double p,
                         double q, double q_prime, const CutoffRule& rule);

struct LevelsetSeries {
    std::vector<double> times;
    std::vector<double> cutoff;
    std::vector<double> above_lq;    // L^q norm of the above-cutoff part
    std::vector<double> below_linf;  // L^inf norm of the rest, <= h(t)
};

LevelsetSeries levelset_series(const TrajectoryLog& log, Variant v, double q,
                               const CutoffRule& h);

struct EndpointReport {
    std::string variant;
    double threshold = 0.0;          // formula value times nu
    std::vector<double> times;
    std::vector<double> restricted;  // endpoint norm of the above-h part
    std::vector<bool> below;         // restricted < threshold
    std::vector<double> residual;    // d/dt lhs - rhs at interior samples
    std::vector<double> budget;
    bool ok = true;
};

/// Endpoint lower-bound monitor: restricted endpoint norms (L^{3/2} for
/// strain/vorticity, L^3 for velocity) against the sharp thresholds, with the
/// proofs' differential inequalities checked by centered differences wherever
/// the norm stays below threshold. h must be in L^1 (L^2 for velocity).
EndpointReport endpoint_monitor(const TrajectoryLog& log, Variant v,
                                const CutoffRule& h);

struct WeakConvergenceReport {
    std::vector<double> times;
    std::vector<double> q_values;               // {1, 4/3}
    std::vector<std::vector<double>> lhs;       // ||f||_q per q
    std::vector<std::vector<double>> rhs;       // M^(3/2q) h^(1-3/2q)
    double running_max_l32 = 0.0;               // M
    bool ok = true;
};

/// L^q decay bound for the above-cutoff part of lambda_2^+ under a
/// nondecreasing cutoff h(t).
WeakConvergenceReport weak_convergence_monitor(const TrajectoryLog& log,
                                               const CutoffRule& h);

/// Max over grid points of -4 det S - 2 lambda_2^+ |S|^2 - 1e-12 (1 + |S|^3);
/// nonpositive when the pointwise determinant bound holds.
double strain_det_violation(const StrainField& s);

}  // namespace ssns
