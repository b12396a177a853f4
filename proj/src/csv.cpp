#include "ssns/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace ssns {

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
}

std::string trajectory_csv_header() {
    return "t,energy,grad_u_sq,omega_sq,strain_sq,strain_h1_sq,det_integral,"
           "omega_h1_sq,lap_u_sq,sw_omega,advect_lap,max_u";
}

std::string certificate_csv_header() { return "t,lhs,rhs,margin"; }

std::string levelset_csv_header() { return "t,cutoff,above_lq,below_linf"; }

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
    auto out = open_out(path);
    out << trajectory_csv_header() << "\n";
    for (const auto& s : log.samples) {
        out << format_double(s.t) << ',' << format_double(s.energy) << ','
            << format_double(s.grad_u_sq) << ',' << format_double(s.omega_sq)
            << ',' << format_double(s.strain_sq) << ','
            << format_double(s.strain_h1_sq) << ','
            << format_double(s.det_integral) << ','
            << format_double(s.omega_h1_sq) << ','
            << format_double(s.lap_u_sq) << ',' << format_double(s.sw_omega)
            << ',' << format_double(s.advect_lap) << ','
            << format_double(s.max_u) << "\n";
    }
}

void write_certificate_csv(const std::string& path, const Certificate& c) {
    auto out = open_out(path);
    out << certificate_csv_header() << "\n";
    for (std::size_t i = 0; i < c.times.size(); ++i)
        out << format_double(c.times[i]) << ',' << format_double(c.lhs[i])
            << ',' << format_double(c.rhs[i]) << ','
            << format_double(c.margin[i]) << "\n";
    out << "# summary,variant=" << c.variant << ",p=" << format_double(c.p)
        << ",q=" << format_double(c.q);
    if (c.q_prime > 0.0)
        out << ",p_prime=" << format_double(c.p_prime)
            << ",q_prime=" << format_double(c.q_prime);
    out << ",cp=" << format_double(c.cp)
        << ",sigma_coeff=" << format_double(c.sigma_coeff)
        << ",min_margin=" << format_double(c.min_margin)
        << ",pass=" << (c.pass ? "true" : "false") << "\n";
}

void write_levelset_csv(const std::string& path, const LevelsetSeries& s) {
    auto out = open_out(path);
    out << levelset_csv_header() << "\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        out << format_double(s.times[i]) << ',' << format_double(s.cutoff[i])
            << ',' << format_double(s.above_lq[i]) << ','
            << format_double(s.below_linf[i]) << "\n";
}

}  // namespace ssns
