#pragma once

#include <string>

#include "ssns/solver.hpp"

namespace ssns {

/// Parses a flat key=value config file. Keys: n, nu, dt, t_end, sample_every,
/// init, seed, dealias. Blank lines and '#' comments are skipped; unknown
/// keys are hard errors naming the key.
SolverConfig parse_config_file(const std::string& path);

SolverConfig parse_config_text(const std::string& text);

}  // namespace ssns
