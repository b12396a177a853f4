// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssns/criteria.hpp"

namespace fs = std::filesystem;
using namespace ssns;

namespace {

bool g_all_pass = true;

void report(int num, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", num,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    g_all_pass = g_all_pass && pass;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

ScalarField random_scalar(const Grid& g, std::mt19937_64& rng) {
    ScalarField f(g);
    std::lognormal_distribution<double> ln(0.0, 1.0);
    std::bernoulli_distribution sign(0.5);
    for (double& v : f.values)
        v = (sign(rng) ? 1.0 : -1.0) * ln(rng);
    return f;
}

ScalarField power_law(const Grid& g, double q, double cap,
                      const std::array<double, 3>& c) {
    ScalarField f(g);
    const double dx = g.dx();
    for (int iz = 0; iz < g.n; ++iz)
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double rx = ix * dx - c[0];
                const double ry = iy * dx - c[1];
                const double rz = iz * dx - c[2];
                const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
                f.values[g.index(ix, iy, iz)] =
                    r > 0.0 ? std::min(std::pow(r, -3.0 / q), cap) : cap;
            }
    return f;
}

// Per-time cutoff at a fixed quantile of the monitored field.
CutoffRule quantile_rule(const TrajectoryLog& log, Variant v, double pct) {
    std::vector<double> t, h;
    for (std::size_t i = 0; i < log.samples.size(); ++i) {
        ScalarField f = monitored_field(v, log.snapshots[i]);
        std::vector<double>& vals = f.values;
        const std::size_t k = std::size_t(pct * (vals.size() - 1));
        std::nth_element(vals.begin(), vals.begin() + k, vals.end());
        t.push_back(log.samples[i].t);
        h.push_back(vals[k]);
    }
    if (t.size() == 1)
        return CutoffRule::make_constant(h[0]);
    return CutoffRule::make_table(std::move(t), std::move(h));
}

// --------------------------------------------------------------------------
// 1. spectral isometry
// --------------------------------------------------------------------------
void criterion_isometry() {
    const Grid g(32);
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 20; ++s)
        worst = std::max(
            worst, isometry_check(random_div_free(g, s)).max_rel_deviation);
    report(1, "spectral isometry on random divergence-free fields",
           worst <= 1e-10, "worst relative deviation " + fmt(worst));
}

// --------------------------------------------------------------------------
// 2. sharp Sobolev inequality
// --------------------------------------------------------------------------
void criterion_sobolev() {
    const Grid g(32);
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> pos(0.0, g.box_length);
    std::uniform_real_distribution<double> wid(0.4, 1.5);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        const ScalarField f =
            gaussian_bump(g, {pos(rng), pos(rng), pos(rng)}, wid(rng));
        const SobolevCheck c = sobolev_check(f);
        if (!c.defined || c.ratio > sobolev_constant() * (1.0 + 1e-6))
            ok = false;
        worst = std::max(worst, c.ratio / sobolev_constant());
    }
    report(2, "sharp Sobolev bound on localized bumps", ok,
           "worst ratio/constant " + fmt(worst));
}

// --------------------------------------------------------------------------
// 3. pointwise strain determinant inequality
// --------------------------------------------------------------------------
void criterion_strain_pointwise(const TrajectoryLog& tg,
                                const TrajectoryLog& rnd) {
    double worst = -1e300;
    for (const TrajectoryLog* log : {&tg, &rnd})
        for (const auto& u : log->snapshots)
            worst = std::max(worst, strain_det_violation(strain(u)));
    report(3, "pointwise determinant bound on sampled strain fields",
           worst <= 0.0, "worst violation " + fmt(worst));
}

// --------------------------------------------------------------------------
// 4. layer-cake (Cavalieri) L^p formula
// --------------------------------------------------------------------------
void criterion_cavalieri() {
    const Grid g(32);
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const ScalarField f = random_scalar(g, rng);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const double a = lp_norm_cavalieri(f, p);
            const double b = lq_norm(f, p);
            worst = std::max(worst, std::abs(a - b) / b);
        }
    }
    report(4, "layer-cake Lp equals quadrature Lp", worst <= 1e-8,
           "worst relative difference " + fmt(worst));
}

// --------------------------------------------------------------------------
// 5. weak-norm value of the truncated power law
// --------------------------------------------------------------------------
void criterion_weak_powerlaw() {
    const double q = 2.0, cap = 1.0;
    const double target = std::pow(4.0 * M_PI / 3.0, 1.0 / q);
    std::vector<double> errs;
    for (int n : {32, 48, 64}) {
        const Grid g(n);
        const ScalarField f = power_law(g, q, cap, {M_PI, M_PI, M_PI});
        errs.push_back(std::abs(weak_lq_norm(f, q) - target) / target);
    }
    const bool ok = errs[2] <= 0.02 && errs[0] > errs[1] && errs[1] > errs[2];
    report(5, "weak-norm convergence on the truncated power law", ok,
           "relative errors " + fmt(errs[0]) + " > " + fmt(errs[1]) + " > " +
               fmt(errs[2]) + " vs (4pi/3)^(1/2)");
}

// --------------------------------------------------------------------------
// 6. space-time sum decomposition bounds
// --------------------------------------------------------------------------
void criterion_decomposition() {
    const Grid g(16);
    std::mt19937_64 rng(606);
    std::vector<SampledFunction> battery;
    for (int b = 0; b < 20; ++b) {
        SampledFunction sf;
        sf.times = {0.0, 0.4, 1.0};
        for (int i = 0; i < 3; ++i) {
            ScalarField f;
            if (b < 5) {
                // two-level profile
                f = ScalarField(g);
                for (std::size_t j = 0; j < f.values.size(); ++j)
                    f.values[j] = j % (5 + b) == 0 ? 3.0 + b : 1.0;
            } else if (b < 10) {
                f = power_law(g, 2.0, 4.0 + b,
                              {M_PI, M_PI * 0.9, M_PI * 1.1});
            } else {
                f = random_scalar(g, rng);
            }
            for (double& v : f.values)
                v *= 1.0 + 0.4 * i;  // time modulation
            sf.fields.push_back(std::move(f));
        }
        battery.push_back(std::move(sf));
    }

    const std::vector<std::pair<ScalingExponents, double>> configs = {
        {{2.0, 3.0, 3.0, 9.0}, 6.0},
        {{2.0, 3.0, 4.0, 6.0}, 4.5},
        {{1.0, 1.5, 2.0, 3.0}, 2.0},
        {{1.0, 1.5, 4.0, 2.0}, 1.8},
    };
    bool ok = true;
    double worst = -1.0;
    int splits = 0, nonvacuous = 0;
    for (const auto& sf : battery)
        for (const auto& [e, qp] : configs) {
            // Keep the per-time cutoff below the peak so the above part
            // is nonempty (the bounds are scale-invariant in f).
            const double beta = e.p / e.k;
            double s = 1e300;
            for (const auto& fld : sf.fields) {
                const double mx = linf_norm(fld);
                const double wn = weak_lq_norm(fld, e.q);
                if (mx > 0.0)
                    s = std::min(
                        s, std::pow(mx / std::pow(wn, beta), 1.0 / (beta - 1.0)));
            }
            SampledFunction scaled = sf;
            for (auto& fld : scaled.fields)
                for (double& v : fld.values)
                    v *= 0.5 * s;

            const LevelSplit ls = sum_decompose(scaled, e, qp);
            ++splits;

            // f = g + h exactly, disjoint supports.
            for (std::size_t i = 0; i < scaled.fields.size(); ++i)
                for (std::size_t j = 0; j < scaled.fields[i].values.size();
                     ++j) {
                    const double gv = ls.g.fields[i].values[j];
                    const double hv = ls.h.fields[i].values[j];
                    if (gv + hv != scaled.fields[i].values[j] ||
                        (gv != 0.0 && hv != 0.0))
                        ok = false;
                }

            // Brute-force quadrature oracle for all four mixed-norm
            // integrals and both stated bounds.
            const std::vector<double> w = trapezoid_weights(scaled.times);
            double gi = 0.0, hi = 0.0, fi = 0.0;
            bool any_g = false;
            for (std::size_t i = 0; i < scaled.fields.size(); ++i) {
                gi += w[i] * std::pow(lq_norm(ls.g.fields[i], ls.q_prime),
                                      ls.p_prime);
                hi += w[i] * std::pow(linf_norm(ls.h.fields[i]), e.k);
                fi += w[i] * std::pow(weak_lq_norm(scaled.fields[i], e.q), e.p);
                any_g = any_g || linf_norm(ls.g.fields[i]) > 0.0;
            }
            if (any_g)
                ++nonvacuous;
            const double gb =
                std::pow(e.q / (e.q - qp), ls.p_prime / ls.q_prime) * fi;
            if (std::abs(gi - ls.g_integral) > 1e-9 * (1.0 + gi) ||
                std::abs(hi - ls.h_integral) > 1e-9 * (1.0 + hi) ||
                std::abs(gb - ls.g_bound) > 1e-9 * (1.0 + gb) ||
                std::abs(fi - ls.h_bound) > 1e-9 * (1.0 + fi))
                ok = false;
            if (!(gi <= gb * (1.0 + 1e-9)) || !(hi <= fi * (1.0 + 1e-9)))
                ok = false;
            if (!ls.g_ok || !ls.h_ok)
                ok = false;
            if (gb > 0.0)
                worst = std::max(worst, gi / gb);
            if (fi > 0.0)
                worst = std::max(worst, hi / fi);
        }
    ok = ok && nonvacuous == splits;
    report(6, "sum-decomposition integral bounds on the synthetic battery", ok,
           std::to_string(splits) + " splits, worst bound ratio " +
               fmt(worst));
}

// --------------------------------------------------------------------------
// 7. sum-space embedding constant and realizing split
// --------------------------------------------------------------------------
void criterion_embedding() {
    const EmbeddingConstant e = sum_embedding_constant(1.0, 2.0);
    bool ok = std::abs(e.value - 2.0 * std::sqrt(2.0)) <= 1e-8;

    // Dense-scan oracle over the split-level multiplier.
    double scan = 1e300;
    for (double k = 1e-3; k <= 20.0; k += 1e-4)
        scan = std::min(scan, k + 2.0 / k);
    ok = ok && std::abs(scan - e.value) <= 1e-6;

    // The explicit split realizes the embedding on random fields.
    const Grid g(16);
    std::mt19937_64 rng(707);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const ScalarField f = random_scalar(g, rng);
        const double wq = weak_lq_norm(f, 2.0);
        auto [above, below] = threshold_split(f, e.minimizer * wq);
        const double total = lq_norm(above, 1.0) + linf_norm(below);
        worst = std::max(worst, total / (e.value * wq));
        if (total > e.value * wq * (1.0 + 1e-9))
            ok = false;
    }
    report(7, "sum-space embedding constant 2*sqrt(2) and realizing split", ok,
           "constant " + fmt(e.value) + ", worst split ratio " + fmt(worst));
}

// --------------------------------------------------------------------------
// 8. energy equality
// --------------------------------------------------------------------------
void criterion_energy_equality(const TrajectoryLog& log) {
    double diss = 0.0;
    for (std::size_t i = 1; i < log.samples.size(); ++i)
        diss += (log.samples[i].t - log.samples[i - 1].t) / 2.0 *
                (log.samples[i].grad_u_sq + log.samples[i - 1].grad_u_sq);
    const double e0 = log.samples.front().energy;
    const double defect =
        std::abs(log.samples.back().energy + log.config.nu * diss - e0);
    report(8, "energy equality on the Taylor-Green run", defect <= 1e-4 * e0,
           "defect " + fmt(defect) + " vs budget " + fmt(1e-4 * e0));
}

// --------------------------------------------------------------------------
// 9. balance identities
// --------------------------------------------------------------------------
void criterion_balances(const TrajectoryLog& log) {
    const BalanceReport r = balance_checks(log, log.config.nu);
    std::string detail;
    for (const auto& id : r.identities) {
        if (!detail.empty())
            detail += ", ";
        detail += id.name + " residual " + fmt(id.max_residual);
    }
    report(9, "finite-difference balance identities", r.all_ok, detail);
}

// --------------------------------------------------------------------------
// 10. Gronwall certificates, strong and weak
// --------------------------------------------------------------------------
void criterion_certificates(const TrajectoryLog& tg, const TrajectoryLog& rnd) {
    struct Pick {
        Variant v;
        std::vector<std::pair<double, double>> pq;
        double weak_q_prime;
    };
    const std::vector<Pick> picks = {
        {Variant::Strain, {{2.0, 3.0}, {4.0, 2.0}}, 2.0},
        {Variant::Vorticity, {{2.0, 3.0}, {4.0, 2.0}}, 1.8},
        {Variant::Velocity, {{4.0, 6.0}, {3.0, 9.0}}, 4.5},
    };
    bool ok = true;
    double worst = 1.0;
    int count = 0;
    for (const TrajectoryLog* log : {&tg, &rnd})
        for (const auto& pk : picks) {
            const std::vector<CutoffRule> rules = {
                CutoffRule::all_in_lq(), CutoffRule::all_in_linf(),
                quantile_rule(*log, pk.v, 0.5)};
            for (const auto& rule : rules) {
                for (const auto& [p, q] : pk.pq) {
                    const Certificate c = certify(*log, pk.v, p, q, rule);
                    ok = ok && c.pass;
                    worst = std::min(worst, c.min_margin);
                    ++count;
                }
                const Certificate w =
                    certify_weak(*log, pk.v, pk.pq[0].first, pk.pq[0].second,
                                 pk.weak_q_prime, rule);
                ok = ok && w.pass;
                worst = std::min(worst, w.min_margin);
                ++count;
            }
        }
    report(10, "enstrophy certificates across variants, exponents, cutoffs",
           ok, std::to_string(count) + " certificates, worst margin " +
                   fmt(worst));
}

// --------------------------------------------------------------------------
// 11. endpoint monitors
// --------------------------------------------------------------------------
void criterion_endpoints(const TrajectoryLog& tg, const TrajectoryLog& mild) {
    bool ok = true;
    std::string detail;
    const std::vector<std::tuple<const TrajectoryLog*, Variant, double>> runs =
        {{&tg, Variant::Strain, 0.995},
         {&tg, Variant::Vorticity, 0.9995},
         {&mild, Variant::Velocity, 0.95}};
    for (const auto& [log, v, pct] : runs) {
        const EndpointReport r =
            endpoint_monitor(*log, v, quantile_rule(*log, v, pct));
        double sup = 0.0;
        for (std::size_t i = 0; i < r.restricted.size(); ++i) {
            sup = std::max(sup, r.restricted[i]);
            if (!r.below[i])
                ok = false;
        }
        ok = ok && r.ok && sup > 0.0;
        if (!detail.empty())
            detail += ", ";
        detail += r.variant + " sup " + fmt(sup) + " < " + fmt(r.threshold);
    }
    report(11, "endpoint monitors below the sharp thresholds", ok, detail);
}

// --------------------------------------------------------------------------
// 12. weak-convergence decay bound
// --------------------------------------------------------------------------
void criterion_weak_convergence(const TrajectoryLog& log) {
    const double t0 = log.samples.front().t, t1 = log.samples.back().t;
    const WeakConvergenceReport r = weak_convergence_monitor(
        log, CutoffRule::make_table({t0, t1}, {0.05, 0.5}));
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < r.times.size(); ++i)
            if (r.rhs[j][i] > 0.0)
                worst = std::max(worst, r.lhs[j][i] / r.rhs[j][i]);
    report(12, "Lq decay bound under a growing cutoff", r.ok,
           "worst lhs/rhs " + fmt(worst));
}

// --------------------------------------------------------------------------
// 13. determinism of CSV output
// --------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    bool ok = true;
    std::string detail = "trajectory.csv byte-identical across reruns";
    const fs::path base = fs::temp_directory_path() / "ssns_acceptance_det";
    std::string first;
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = base / std::to_string(run);
        fs::remove_all(dir);
        fs::create_directories(dir);
        const fs::path cfg = dir / "run.cfg";
        std::ofstream(cfg) << "n = 16\nnu = 0.05\ndt = 2e-3\nt_end = 0.1\n"
                              "sample_every = 5\ninit = random\nseed = 9\n";
        const std::string cmd = std::string(SSNS_CLI_PATH) + " --config " +
                                cfg.string() + " --out " + dir.string() +
                                " --quiet simulate > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) {
            ok = false;
            detail = "CLI run failed";
            break;
        }
        const std::string csv = slurp(dir / "trajectory.csv");
        if (csv.empty())
            ok = false;
        if (run == 0)
            first = csv;
        else if (csv != first) {
            ok = false;
            detail = "outputs differ";
        }
    }
    report(13, "repeated runs give byte-identical CSV", ok, detail);
}

}  // namespace

int main() {
    SolverConfig tg_cfg;
    tg_cfg.n = 32;
    tg_cfg.nu = 0.1;
    tg_cfg.dt = 1e-3;
    tg_cfg.t_end = 1.0;
    tg_cfg.sample_every = 20;
    const TrajectoryLog tg = simulate(tg_cfg);

    SolverConfig rnd_cfg = tg_cfg;
    rnd_cfg.init = "random";
    rnd_cfg.seed = 42;
    rnd_cfg.t_end = 0.5;
    rnd_cfg.sample_every = 25;
    const TrajectoryLog rnd = simulate(rnd_cfg);

    SolverConfig mild_cfg = tg_cfg;
    mild_cfg.nu = 1.0;
    mild_cfg.t_end = 0.25;
    mild_cfg.sample_every = 10;
    const TrajectoryLog mild = simulate(mild_cfg);

    criterion_isometry();
    criterion_sobolev();
    criterion_strain_pointwise(tg, rnd);
    criterion_cavalieri();
    criterion_weak_powerlaw();
    criterion_decomposition();
    criterion_embedding();
    criterion_energy_equality(tg);
    criterion_balances(tg);
    criterion_certificates(tg, rnd);
    criterion_endpoints(tg, mild);
    criterion_weak_convergence(tg);
    criterion_determinism();

    std::printf("%s\n", g_all_pass ? "acceptance: all criteria pass"
                                   : "acceptance: FAILURES present");
    return g_all_pass ? 0 : 1;
}
