#include "ssns/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssns {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "yes")
        return true;
    if (v == "0" || v == "false" || v == "no")
        return false;
    throw std::invalid_argument("config: bad boolean for key '" + key + "'");
}

int to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for key '" + key + "'");
    }
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for key '" + key + "'");
    }
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad value for key '" + key + "'");
    }
}

}  // namespace

SolverConfig parse_config_text(const std::string& text) {
    SolverConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config: empty key or value on line " +
                                        std::to_string(lineno));
        if (key == "n")
            c.n = to_int(val, key);
        else if (key == "nu")
            c.nu = to_double(val, key);
        else if (key == "dt")
            c.dt = to_double(val, key);
        else if (key == "t_end")
            c.t_end = to_double(val, key);
        else if (key == "sample_every")
            c.sample_every = to_int(val, key);
        else if (key == "init")
            c.init = val;
        else if (key == "seed")
            c.seed = to_u64(val, key);
        else if (key == "dealias")
            c.dealias = parse_bool(val, key);
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return c;
}

SolverConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace ssns
