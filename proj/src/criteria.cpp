#include "ssns/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ssns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double family_target(Variant v) {
    return v == Variant::Velocity ? 1.0 : 2.0;
}

double family_floor(Variant v) {
    return v == Variant::Velocity ? 3.0 : 1.5;
}

double time_base(Variant v) { return v == Variant::Velocity ? 2.0 : 1.0; }

void require_in_family(double p, double q, Variant v, const char* who) {
    if (!(q > family_floor(v)) || !(p > 1.0) || !std::isfinite(q) ||
        std::abs(2.0 / p + 3.0 / q - family_target(v)) > 1.0e-9)
        throw std::invalid_argument(std::string(who) +
                                    ": exponents outside the scaling family");
}

double monitored_lhs(Variant v, const TrajectorySample& s) {
    switch (v) {
        case Variant::Velocity: return s.grad_u_sq;
        case Variant::Strain: return s.strain_sq;
        case Variant::Vorticity: return s.omega_sq;
    }
    return 0.0;
}

void require_snapshots(const TrajectoryLog& log, const char* who) {
    if (log.snapshots.size() != log.samples.size() || log.samples.empty())
        throw std::invalid_argument(std::string(who) +
                                    ": trajectory lacks field snapshots");
}

double margin_of(double lhs, double rhs) {
    if (rhs > 0.0)
        return (rhs - lhs) / rhs;
    return lhs <= 0.0 ? 0.0 : -1.0;
}

}  // namespace

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::Velocity: return "velocity";
        case Variant::Strain: return "strain";
        case Variant::Vorticity: return "vorticity";
    }
    return "?";
}

ScalarField monitored_field(Variant v, const SpectralVectorField& u) {
    switch (v) {
        case Variant::Velocity: return magnitude(u);
        case Variant::Strain: return strain(u).lambda2_plus();
        case Variant::Vorticity: return magnitude(curl(u));
    }
    return ScalarField();
}

CutoffRule CutoffRule::make_constant(double c) {
    if (c < 0.0)
        throw std::invalid_argument("cutoff: negative constant");
    CutoffRule r;
    r.kind = Kind::Constant;
    r.constant = c;
    return r;
}

CutoffRule CutoffRule::make_table(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.empty())
        throw std::invalid_argument("cutoff: malformed table");
    for (double x : v)
        if (x < 0.0)
            throw std::invalid_argument("cutoff: negative table value");
    CutoffRule r;
    r.kind = Kind::Table;
    r.times = std::move(t);
    r.values = std::move(v);
    return r;
}

CutoffRule CutoffRule::all_in_lq() {
    CutoffRule r;
    r.kind = Kind::AllInLq;
    return r;
}

CutoffRule CutoffRule::all_in_linf() {
    CutoffRule r;
    r.kind = Kind::AllInLinf;
    return r;
}

double CutoffRule::at(double t) const {
    switch (kind) {
        case Kind::Constant: return constant;
        case Kind::AllInLq: return 0.0;
        case Kind::AllInLinf: return kInf;
        case Kind::Table: break;
    }
    if (t <= times.front())
        return values.front();
    if (t >= times.back())
        return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = std::size_t(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * values[i - 1] + w * values[i];
}

CpDerivation derive_cp(double p, double q, Variant v) {
    require_in_family(p, q, v, "derive_cp");
    CpDerivation d;
    d.variant = v;
    d.p = p;
    d.q = q;
    // The dangerous term in each proof is bounded by
    //   A ||f||_q E^(1-theta) D^theta
    // with E the monitored quantity and D the dissipation quantity whose
    // viscous coefficient is c nu; Young with exponents (p, p/(p-1)) then
    // absorbs D entirely.
    const double csob = sobolev_constant();
    switch (v) {
        case Variant::Velocity:
            d.theta = (1.0 + 3.0 / q) / 2.0;  // = 1 - 1/p
            d.amplitude = 2.0 * std::pow(csob, 3.0 / q);
            d.dissipation_coeff = 1.0;  // one of the two nu ||Delta u||^2
            break;
        case Variant::Strain:
            d.theta = 3.0 / (2.0 * q);
            d.amplitude = 2.0 * std::pow(csob, 3.0 / q);
            d.dissipation_coeff = 2.0;
            break;
        case Variant::Vorticity:
            d.theta = 3.0 / (2.0 * q);
            d.amplitude = std::sqrt(2.0) * std::pow(csob, 3.0 / q);
            d.dissipation_coeff = 2.0;
            break;
    }
    // 1/(1-theta) = p in every family, so Young gives
    //   C_p = (1/p) (theta/c)^(p-1) A^p.
    d.value = (1.0 / p) * std::pow(d.theta / d.dissipation_coeff, p - 1.0) *
              std::pow(d.amplitude, p);

    // Construction-time check of the Young split on random scalars, for
    // nu = 1 and two rescalings (C_p itself is nu-independent).
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u01(-6.0, 6.0);
    for (int it = 0; it < 10000; ++it) {
        const double E = std::pow(10.0, u01(rng));
        const double D = std::pow(10.0, u01(rng));
        const double F = std::pow(10.0, u01(rng));
        const double lhs =
            d.amplitude * F * std::pow(E, 1.0 - d.theta) * std::pow(D, d.theta);
        for (double nu : {1.0, 0.037, 12.5}) {
            const double rhs = d.value / std::pow(nu, p - 1.0) *
                                   std::pow(F, p) * E +
                               d.dissipation_coeff * nu * D;
            if (lhs > rhs * (1.0 + 1.0e-12))
                throw std::logic_error("derive_cp: Young split check failed");
        }
    }
    return d;
}

namespace {

// Shared trajectory walk for both certificate forms. For each sample the
// monitored field is split at h(t); main_norm measures the above part and
// sigma_norm the L^inf of the rest.
struct CertifyTerms {
    std::vector<double> main_integrand;   // per sample
    std::vector<double> sigma_integrand;
};

CertifyTerms split_terms(const TrajectoryLog& log, Variant v,
                         const CutoffRule& rule, double main_exponent,
                         double q, bool weak, double sigma_power) {
    CertifyTerms t;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const double h = rule.at(log.samples[i].t);
        double main_v = 0.0, sigma_v = 0.0;
        if (h == kInf) {
            const ScalarField f = monitored_field(v, log.snapshots[i]);
            sigma_v = linf_norm(f);
        } else {
            const ScalarField f = monitored_field(v, log.snapshots[i]);
            auto [above, below] = threshold_split(f, h);
            main_v = weak ? weak_lq_norm(above, q) : lq_norm(above, q);
            sigma_v = linf_norm(below);
        }
        t.main_integrand.push_back(std::pow(main_v, main_exponent));
        t.sigma_integrand.push_back(std::pow(sigma_v, sigma_power));
        if (!std::isfinite(t.main_integrand.back()) ||
            !std::isfinite(t.sigma_integrand.back()))
            throw std::runtime_error("certify: non-finite norm");
    }
    return t;
}

Certificate finish_certificate(const TrajectoryLog& log, Variant v,
                               Certificate c, double main_coeff,
                               const CertifyTerms& t) {
    const double lhs0 = monitored_lhs(v, log.samples.front());
    double i_main = 0.0, i_sigma = 0.0;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        if (i > 0) {
            const double half =
                (log.samples[i].t - log.samples[i - 1].t) / 2.0;
            i_main += half * (t.main_integrand[i] + t.main_integrand[i - 1]);
            i_sigma += half * (t.sigma_integrand[i] + t.sigma_integrand[i - 1]);
        }
        const double lhs = monitored_lhs(v, log.samples[i]);
        const double rhs =
            lhs0 * std::exp(main_coeff * i_main + c.sigma_coeff * i_sigma);
        c.times.push_back(log.samples[i].t);
        c.lhs.push_back(lhs);
        c.rhs.push_back(rhs);
        c.margin.push_back(margin_of(lhs, rhs));
    }
    c.min_margin = *std::min_element(c.margin.begin(), c.margin.end());
    c.pass = c.min_margin >= -1.0e-6;
    return c;
}

}  // namespace

Certificate certify(const TrajectoryLog& log, Variant v, double p, double q,
                    const CutoffRule& rule) {
    require_in_family(p, q, v, "certify");
    require_snapshots(log, "certify");
    const double nu = log.config.nu;
    const CpDerivation cp = derive_cp(p, q, v);

    Certificate c;
    c.variant = variant_name(v);
    c.p = p;
    c.q = q;
    c.cp = cp.value;
    const double sigma_power = v == Variant::Velocity ? 2.0 : 1.0;
    switch (v) {
        case Variant::Velocity: c.sigma_coeff = 1.0 / nu; break;
        case Variant::Strain: c.sigma_coeff = 2.0; break;
        case Variant::Vorticity: c.sigma_coeff = std::sqrt(2.0); break;
    }
    const CertifyTerms t =
        split_terms(log, v, rule, p, q, false, sigma_power);
    return finish_certificate(log, v, std::move(c),
                              cp.value / std::pow(nu, p - 1.0), t);
}

Certificate certify_weak(const TrajectoryLog& log, Variant v, double p,
                         double q, double q_prime, const CutoffRule& rule) {
    require_in_family(p, q, v, "certify_weak");
    require_snapshots(log, "certify_weak");
    const double m = family_floor(v);
    if (!(q_prime > m) || !(q_prime < q))
        throw std::invalid_argument("certify_weak: need m < q' < q");
    const double nu = log.config.nu;
    const double k = time_base(v);
    const double p_prime = k * q_prime / (q_prime - m);
    const CpDerivation cpp = derive_cp(p_prime, q_prime, v);

    Certificate c;
    c.variant = variant_name(v) + "_weak";
    c.p = p;
    c.q = q;
    c.p_prime = p_prime;
    c.q_prime = q_prime;
    double tail = 0.0;
    double sigma_power = 1.0;
    switch (v) {
        case Variant::Velocity:
            tail = 2.0 / nu;
            c.sigma_coeff = 2.0 / nu;
            sigma_power = 2.0;
            break;
        case Variant::Strain:
            tail = 2.0;
            c.sigma_coeff = 2.0;
            break;
        case Variant::Vorticity:
            tail = std::sqrt(2.0);
            c.sigma_coeff = std::sqrt(2.0);
            break;
    }
    c.cp = cpp.value / std::pow(nu, p_prime - 1.0) *
               std::pow(q / (q - q_prime), p_prime / q_prime) +
           tail;
    const CertifyTerms t = split_terms(log, v, rule, p, q, true, sigma_power);
    return finish_certificate(log, v, std::move(c), c.cp, t);
}

LevelsetSeries levelset_series(const TrajectoryLog& log, Variant v, double q,
                               const CutoffRule& h) {
    require_snapshots(log, "levelset_series");
    LevelsetSeries out;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const double t = log.samples[i].t;
        const double R = h.at(t);
        if (!std::isfinite(R))
            throw std::invalid_argument("levelset_series: infinite cutoff");
        const ScalarField f = monitored_field(v, log.snapshots[i]);
        auto [above, below] = threshold_split(f, R);
        out.times.push_back(t);
        out.cutoff.push_back(R);
        out.above_lq.push_back(lq_norm(above, q));
        out.below_linf.push_back(linf_norm(below));
    }
    return out;
}

EndpointReport endpoint_monitor(const TrajectoryLog& log, Variant v,
                                const CutoffRule& h) {
    require_snapshots(log, "endpoint_monitor");
    const double nu = log.config.nu;

    EndpointReport rep;
    rep.variant = variant_name(v);
    double endpoint_q = 1.5;
    switch (v) {
        case Variant::Strain:
            rep.threshold = 3.0 * std::pow(M_PI / 2.0, 4.0 / 3.0) * nu;
            break;
        case Variant::Velocity:
            rep.threshold = std::sqrt(3.0) * std::pow(M_PI / 2.0, 2.0 / 3.0) * nu;
            endpoint_q = 3.0;
            break;
        case Variant::Vorticity:
            rep.threshold =
                3.0 * std::pow(M_PI, 4.0 / 3.0) / std::pow(2.0, 5.0 / 6.0) * nu;
            break;
    }

    // Integrability of h over the horizon (L^1, or L^2 for velocity).
    const double h_power = v == Variant::Velocity ? 2.0 : 1.0;
    double h_integral = 0.0;
    std::vector<double> hv;
    for (const auto& s : log.samples) {
        const double x = h.at(s.t);
        if (!std::isfinite(x))
            throw std::invalid_argument("endpoint_monitor: cutoff not integrable");
        hv.push_back(x);
    }
    for (std::size_t i = 1; i < hv.size(); ++i)
        h_integral += (log.samples[i].t - log.samples[i - 1].t) / 2.0 *
                      (std::pow(hv[i], h_power) + std::pow(hv[i - 1], h_power));
    if (!std::isfinite(h_integral))
        throw std::invalid_argument("endpoint_monitor: cutoff not integrable");

    std::vector<double> lhs;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const ScalarField f = monitored_field(v, log.snapshots[i]);
        auto [above, below] = threshold_split(f, hv[i]);
        (void)below;
        rep.times.push_back(log.samples[i].t);
        rep.restricted.push_back(lq_norm(above, endpoint_q));
        rep.below.push_back(rep.restricted.back() < rep.threshold);
        lhs.push_back(monitored_lhs(v, log.samples[i]));
    }

    // Velocity margin epsilon from the strict threshold inequality.
    double eps = rep.threshold;
    for (std::size_t i = 0; i < rep.restricted.size(); ++i)
        if (rep.below[i])
            eps = std::min(eps, rep.threshold - rep.restricted[i]);
    eps = std::max(eps, 1.0e-6 * nu);

    const std::size_t ns = log.samples.size();
    std::vector<double> deriv(ns, 0.0);
    for (std::size_t i = 1; i + 1 < ns; ++i)
        deriv[i] = (lhs[i + 1] - lhs[i - 1]) / (rep.times[i + 1] - rep.times[i - 1]);

    double scale = 0.0;
    for (double x : lhs)
        scale = std::max(scale, std::abs(x));
    for (std::size_t i = 1; i + 1 < ns; ++i) {
        double rhs = 0.0;
        switch (v) {
            case Variant::Strain: rhs = 2.0 * hv[i] * lhs[i]; break;
            case Variant::Velocity:
                rhs = hv[i] * hv[i] / (2.0 * eps) * lhs[i];
                break;
            case Variant::Vorticity:
                rhs = std::sqrt(2.0) * hv[i] * lhs[i];
                break;
        }
        const double curv = (i >= 2 && i + 2 < ns)
                                ? std::abs(deriv[i + 1] - 2.0 * deriv[i] +
                                           deriv[i - 1])
                                : 0.0;
        const double bud = std::max({1.0e-3 * std::abs(rhs), 10.0 / 6.0 * curv,
                                     1.0e-12 * (1.0 + scale)});
        rep.residual.push_back(deriv[i] - rhs);
        rep.budget.push_back(bud);
        if (rep.below[i] && deriv[i] > rhs + bud)
            rep.ok = false;
    }
    return rep;
}

WeakConvergenceReport weak_convergence_monitor(const TrajectoryLog& log,
                                               const CutoffRule& h) {
    require_snapshots(log, "weak_convergence_monitor");
    WeakConvergenceReport rep;
    rep.q_values = {1.0, 4.0 / 3.0};
    rep.lhs.resize(2);
    rep.rhs.resize(2);
    double prev_h = -kInf;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        const double t = log.samples[i].t;
        const double ht = h.at(t);
        if (!std::isfinite(ht))
            throw std::invalid_argument("weak_convergence_monitor: infinite cutoff");
        if (ht < prev_h - 1.0e-12)
            throw std::invalid_argument(
                "weak_convergence_monitor: cutoff must be nondecreasing");
        prev_h = ht;
        const ScalarField l2p = strain(log.snapshots[i]).lambda2_plus();
        auto [above, below] = threshold_split(l2p, ht);
        (void)below;
        rep.running_max_l32 =
            std::max(rep.running_max_l32, lq_norm(above, 1.5));
        rep.times.push_back(t);
        for (int j = 0; j < 2; ++j) {
            const double q = rep.q_values[j];
            const double e = 3.0 / (2.0 * q);
            const double lhs = lq_norm(above, q);
            const double rhs = std::pow(rep.running_max_l32, e) *
                               std::pow(ht, 1.0 - e);
            rep.lhs[j].push_back(lhs);
            rep.rhs[j].push_back(rhs);
            if (!(lhs <= rhs * (1.0 + 1.0e-9) + 1.0e-300))
                rep.ok = false;
        }
    }
    return rep;
}

double strain_det_violation(const StrainField& s) {
    const auto& e = s.eigenvalues();
    double worst = -kInf;
    const std::size_t np = s.grid().num_points();
    for (std::size_t i = 0; i < np; ++i) {
        const double l1 = e[0].values[i], l2 = e[1].values[i],
                     l3 = e[2].values[i];
        const double frob2 = sym3_frob_sq(s.at(i));
        const double lhs = -4.0 * l1 * l2 * l3;
        const double rhs = 2.0 * std::max(0.0, l2) * frob2 +
                           1.0e-12 * (1.0 + std::pow(frob2, 1.5));
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

}  // namespace ssns
