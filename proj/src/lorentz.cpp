#include "ssns/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssns {

namespace {

// Sorted distinct absolute values with super-level measures, the empirical
// distribution in compressed form. levels[i] pairs a value a_i with
// mu{|f| >= a_i}; values ascend, measures descend.
struct Levels {
    std::vector<double> value;
    std::vector<double> measure_ge;  // mu{|f| >= value}
};

Levels build_levels(const ScalarField& f) {
    std::vector<double> a(f.values.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = std::abs(f.values[i]);
    std::sort(a.begin(), a.end());
    const double cell = f.grid.cell_volume();
    Levels lv;
    std::size_t i = 0;
    while (i < a.size()) {
        std::size_t j = i;
        while (j < a.size() && a[j] == a[i])
            ++j;
        if (a[i] > 0.0) {
            lv.value.push_back(a[i]);
            lv.measure_ge.push_back(double(a.size() - i) * cell);
        }
        i = j;
    }
    return lv;
}

}  // namespace

ScalingCheck scaling_check(const ScalingExponents& e) {
    ScalingCheck out;
    if (e.k < 0.0 || e.m < 0.0 || e.p < 1.0 || e.q < 1.0)
        return out;
    if (std::abs(e.k / e.p + e.m / e.q - 1.0) > 1.0e-12 || e.q <= e.m)
        return out;
    out.valid = true;
    if (e.k == 2.0 && e.m == 3.0)
        out.family = ScalingFamily::Velocity;
    else if (e.k == 1.0 && e.m == 1.5)
        out.family = ScalingFamily::StrainVorticity;
    else
        out.family = ScalingFamily::Other;
    return out;
}

double distribution(const ScalarField& f, double alpha) {
    if (alpha < 0.0)
        throw std::invalid_argument("distribution: alpha must be >= 0");
    std::size_t count = 0;
    for (double v : f.values)
        if (std::abs(v) > alpha)
            ++count;
    return double(count) * f.grid.cell_volume();
}

double lp_norm_cavalieri(const ScalarField& f, double p) {
    if (p < 1.0)
        throw std::invalid_argument("lp_norm_cavalieri: p must be >= 1");
    const Levels lv = build_levels(f);
    // p int alpha^(p-1) lambda(alpha) d alpha, where lambda is constant
    // between consecutive distinct values: on [a_i, a_{i+1}) it equals
    // mu{|f| > a_i} = mu{|f| >= a_{i+1}}.
    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < lv.value.size(); ++i) {
        // segment [prev, value_i) carries lambda = mu{|f| >= value_i}
        sum += lv.measure_ge[i] *
               (std::pow(lv.value[i], p) - std::pow(prev, p));
        prev = lv.value[i];
    }
    return std::pow(sum, 1.0 / p);
}

double weak_lq_norm(const ScalarField& f, double q) {
    if (q < 1.0)
        throw std::invalid_argument("weak_lq_norm: q must be >= 1");
    const Levels lv = build_levels(f);
    double best = 0.0;
    for (std::size_t i = 0; i < lv.value.size(); ++i)
        best = std::max(best, std::pow(lv.value[i], q) * lv.measure_ge[i]);
    return std::pow(best, 1.0 / q);
}

std::pair<ScalarField, ScalarField> threshold_split(const ScalarField& f,
                                                    double R) {
    if (R < 0.0)
        throw std::invalid_argument("threshold_split: R must be >= 0");
    ScalarField g(f.grid), h(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (std::abs(f.values[i]) > R)
            g.values[i] = f.values[i];
        else
            h.values[i] = f.values[i];
    }
    return {std::move(g), std::move(h)};
}

namespace {

BoundReport check_prop_impl(const ScalarField& f, double R, double p, double q,
                            bool weak) {
    if (R <= 0.0 || p >= q || p < 1.0)
        throw std::invalid_argument("lq prop check: need 1 <= p < q, R > 0");
    BoundReport out;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double a = std::abs(f.values[i]);
        if (a != 0.0 && a <= R) {
            out.precondition_ok = false;
            out.bad_index = i;
            return out;
        }
    }
    out.lhs = std::pow(lp_norm_cavalieri(f, p), p);
    if (weak) {
        out.rhs = (q / (q - p)) * std::pow(R, p - q) *
                  std::pow(weak_lq_norm(f, q), q);
    } else {
        out.rhs = std::pow(R, p - q) * std::pow(lp_norm_cavalieri(f, q), q);
    }
    out.holds = out.lhs <= out.rhs * (1.0 + 1.0e-12);
    return out;
}

}  // namespace

BoundReport check_lq_prop(const ScalarField& f, double R, double p, double q) {
    return check_prop_impl(f, R, p, q, false);
}

BoundReport check_weak_lq_prop(const ScalarField& f, double R, double p,
                               double q) {
    return check_prop_impl(f, R, p, q, true);
}

EmbeddingConstant sum_embedding_constant(double p, double q) {
    if (p < 1.0 || p >= q)
        throw std::invalid_argument(
            "sum_embedding_constant: need 1 <= p < q < inf");
    const double A = std::pow(q / (q - p), 1.0 / p);
    const double e = 1.0 - q / p;  // negative exponent
    auto phi = [&](double k) { return k + A * std::pow(k, e); };
    // Stationary point of the convex objective brackets the minimum.
    const double kstar = std::pow(-A * e, p / q);
    double lo = kstar / 16.0, hi = kstar * 16.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    while (hi - lo > 1.0e-10 * std::max(1.0, kstar)) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = phi(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = phi(x2);
        }
    }
    EmbeddingConstant out;
    out.minimizer = (lo + hi) / 2.0;
    out.value = phi(out.minimizer);
    return out;
}

std::vector<double> trapezoid_weights(const std::vector<double>& times) {
    const std::size_t n = times.size();
    if (n == 0)
        throw std::invalid_argument("trapezoid_weights: empty time grid");
    std::vector<double> w(n, 0.0);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double half = (times[i + 1] - times[i]) / 2.0;
        if (half <= 0.0)
            throw std::invalid_argument(
                "trapezoid_weights: times must strictly increase");
        w[i] += half;
        w[i + 1] += half;
    }
    return w;
}

LevelSplit sum_decompose(const SampledFunction& f, const ScalingExponents& e,
                         double q_prime) {
    const ScalingCheck sc = scaling_check(e);
    if (!sc.valid)
        throw std::invalid_argument("sum_decompose: invalid scaling exponents");
    if (!(q_prime > e.m) || !(q_prime < e.q))
        throw std::invalid_argument("sum_decompose: need m < q' < q");
    if (f.times.empty() || f.times.size() != f.fields.size())
        throw std::invalid_argument("sum_decompose: malformed samples");

    LevelSplit out;
    out.exponents = e;
    out.q_prime = q_prime;
    out.p_prime = e.k * q_prime / (q_prime - e.m);
    out.g.times = f.times;
    out.h.times = f.times;

    const auto w = trapezoid_weights(f.times);
    double f_integral = 0.0;
    for (std::size_t i = 0; i < f.fields.size(); ++i) {
        const double wn = weak_lq_norm(f.fields[i], e.q);
        const double R = std::pow(wn, e.p / e.k);
        out.cutoff.push_back(R);
        auto [g, h] = threshold_split(f.fields[i], R);
        out.g_integral += w[i] * std::pow(lp_norm_cavalieri(g, q_prime),
                                          out.p_prime);
        out.h_integral += w[i] * std::pow(linf_norm(h), e.k);
        f_integral += w[i] * std::pow(wn, e.p);
        out.g.fields.push_back(std::move(g));
        out.h.fields.push_back(std::move(h));
    }
    out.g_bound = std::pow(e.q / (e.q - q_prime), out.p_prime / q_prime) *
                  f_integral;
    out.h_bound = f_integral;
    out.g_ok = out.g_integral <= out.g_bound * (1.0 + 1.0e-9) + 1.0e-300;
    out.h_ok = out.h_integral <= out.h_bound * (1.0 + 1.0e-9) + 1.0e-300;
    return out;
}

}  // namespace ssns
