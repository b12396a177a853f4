#pragma once

#include <cstddef>
#include <vector>

#include "ssns/fields.hpp"

namespace ssns {

/// Scale-invariance exponent tuple with k/p + m/q = 1.
struct ScalingExponents {
    double k = 0.0;  // time exponent base
    double m = 0.0;  // space exponent base
    double p = 0.0;
    double q = 0.0;
};

enum class ScalingFamily { Velocity, StrainVorticity, Other, Invalid };

struct ScalingCheck {
    bool valid = false;   // k/p + m/q = 1 within 1e-12 and q > m
    ScalingFamily family = ScalingFamily::Invalid;
};

ScalingCheck scaling_check(const ScalingExponents& e);

/// A scalar field sampled on a shared grid at increasing times.
struct SampledFunction {
    std::vector<double> times;
    std::vector<ScalarField> fields;
};

/// Measure of the super-level set {|f| > alpha}.
double distribution(const ScalarField& f, double alpha);

/// L^p norm via the layer-cake integral, evaluated in closed form over the
/// piecewise-constant empirical distribution.
double lp_norm_cavalieri(const ScalarField& f, double p);

/// Weak L^q quasinorm: (sup over distinct values a of a^q mu{|f| >= a})^(1/q).
double weak_lq_norm(const ScalarField& f, double q);

/// g = f on {|f| > R}, h = f on {|f| <= R}; g + h = f, disjoint supports.
std::pair<ScalarField, ScalarField> threshold_split(const ScalarField& f,
                                                    double R);

struct BoundReport {
    bool precondition_ok = true;
    std::size_t bad_index = 0;  // offending grid point on precondition failure
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// ||f||_p^p <= R^(p-q) ||f||_q^q for fields vanishing or exceeding R.
BoundReport check_lq_prop(const ScalarField& f, double R, double p, double q);

/// ||f||_p^p <= (q/(q-p)) R^(p-q) ||f||_{q,inf}^q, same precondition.
BoundReport check_weak_lq_prop(const ScalarField& f, double R, double p,
                               double q);

struct EmbeddingConstant {
    double minimizer = 0.0;  // optimal split level multiplier k
    double value = 0.0;      // C_{p,q}
};

/// C_{p,q} = inf_{k>0} k + (q/(q-p))^(1/p) k^(1-q/p), golden-section to 1e-10.
EmbeddingConstant sum_embedding_constant(double p, double q);

/// Space-time split of f by the per-time cutoff R(t) = ||f(.,t)||_{q,inf}^(p/k)
/// with the two mixed-norm integral bounds of the sum-space inclusion.
struct LevelSplit {
    SampledFunction g;       // above-cutoff part
    SampledFunction h;       // at-or-below part
    std::vector<double> cutoff;
    ScalingExponents exponents;
    double q_prime = 0.0;
    double p_prime = 0.0;
    double g_integral = 0.0;  // int ||g||_{q'}^{p'} dt
    double g_bound = 0.0;     // (q/(q-q'))^(p'/q') int ||f||_{q,inf}^p dt
    double h_integral = 0.0;  // int ||h||_inf^k dt
    double h_bound = 0.0;     // int ||f||_{q,inf}^p dt
    bool g_ok = false;
    bool h_ok = false;
};

/// Requires a valid scaling tuple and m < q' < q; p' solves k/p' + m/q' = 1.
LevelSplit sum_decompose(const SampledFunction& f, const ScalingExponents& e,
                         double q_prime);

/// Trapezoid weights for a strictly increasing time grid (weight 1 for a
/// single sample).
std::vector<double> trapezoid_weights(const std::vector<double>& times);

}  // namespace ssns
