#pragma once

#include <string>

#include "ssns/criteria.hpp"
#include "ssns/solver.hpp"

namespace ssns {

/// Shortest round-trip decimal representation of a 64-bit float.
std::string format_double(double x);

std::string trajectory_csv_header();
std::string certificate_csv_header();
std::string levelset_csv_header();

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log);

/// Rows (t, lhs, rhs, margin) followed by a "# summary" line with the
/// variant, exponents, constants, and pass/fail.
void write_certificate_csv(const std::string& path, const Certificate& c);

void write_levelset_csv(const std::string& path, const LevelsetSeries& s);

}  // namespace ssns
