#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "ssns_cli_out.txt";
    const std::string cmd = std::string(SSNS_CLI_PATH) + " " + args + " > " +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("ssns_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "run.cfg";
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_manifest(const fs::path& dir) {
    return json::parse(slurp(dir / "manifest.json"));
}

const std::string kShortRun =
    "n = 16\nnu = 0.1\ndt = 2e-3\nt_end = 0.1\nsample_every = 10\n";

}  // namespace

TEST_CASE("selftest passes against the shipped schema") {
    const fs::path dir = fresh_dir("selftest");
    const RunResult r =
        run_cli("--schema " + std::string(SSNS_SOURCE_DIR) +
                "/docs/csv_schema.json --out " + dir.string() + " selftest");
    CHECK(r.exit_code == 0);
    const json m = load_manifest(dir);
    CHECK(m["pass"] == true);
    CHECK(m["checks"].size() == 7);
    for (const auto& c : m["checks"])
        CHECK(c["pass"] == true);
}

TEST_CASE("selftest catches schema drift and missing schema") {
    const fs::path dir = fresh_dir("schema_drift");
    json schema =
        json::parse(slurp(fs::path(SSNS_SOURCE_DIR) / "docs/csv_schema.json"));
    schema["files"]["trajectory.csv"]["columns"][1] = "renamed";
    const fs::path bad = dir / "bad_schema.json";
    std::ofstream(bad) << schema.dump(2);
    const RunResult r = run_cli("--schema " + bad.string() + " --out " +
                                dir.string() + " selftest");
    CHECK(r.exit_code == 2);
    CHECK(load_manifest(dir)["pass"] == false);
    CHECK(r.output.find("csv-schema") != std::string::npos);

    const RunResult miss =
        run_cli("--schema /nonexistent/schema.json selftest");
    CHECK(miss.exit_code == 1);
}

TEST_CASE("simulate writes the trajectory and snapshot files") {
    const fs::path dir = fresh_dir("simulate");
    const fs::path cfg = write_config(dir, kShortRun);
    const RunResult r = run_cli("--config " + cfg.string() + " --out " +
                                dir.string() + " simulate");
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "u_init.ssns"));
    CHECK(fs::exists(dir / "u_final.ssns"));
    const std::string csv = slurp(dir / "trajectory.csv");
    CHECK(csv.rfind("t,energy,", 0) == 0);
    // 50 steps sampled every 10, plus t = 0 and the header line.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("simulate with a zero horizon emits exactly one sample") {
    const fs::path dir = fresh_dir("zero_horizon");
    const fs::path cfg = write_config(dir, "n = 16\nt_end = 0\n");
    const RunResult r = run_cli("--config " + cfg.string() + " --out " +
                                dir.string() + " simulate");
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "trajectory.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("repeated runs produce byte-identical CSV output") {
    const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    const std::string cfg_text =
        "n = 16\nnu = 0.05\ndt = 2e-3\nt_end = 0.1\nsample_every = 5\n"
        "init = random\nseed = 77\n";
    const fs::path c1 = write_config(d1, cfg_text);
    const fs::path c2 = write_config(d2, cfg_text);
    CHECK(run_cli("--config " + c1.string() + " --out " + d1.string() +
                  " simulate")
              .exit_code == 0);
    CHECK(run_cli("--config " + c2.string() + " --out " + d2.string() +
                  " simulate")
              .exit_code == 0);
    const std::string a = slurp(d1 / "trajectory.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(d2 / "trajectory.csv"));
}

TEST_CASE("bad configs exit 1 and name the offender") {
    const fs::path dir = fresh_dir("badcfg");
    const fs::path unknown = write_config(dir, "n = 16\nbogus_key = 3\n");
    RunResult r = run_cli("--config " + unknown.string() + " simulate");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("bogus_key") != std::string::npos);

    const fs::path badval = dir / "badval.cfg";
    std::ofstream(badval) << "nu = fast\n";
    r = run_cli("--config " + badval.string() + " simulate");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("nu") != std::string::npos);

    CHECK(run_cli("simulate").exit_code == 1);  // --config required
    CHECK(run_cli("--config /nonexistent.cfg simulate").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);  // unknown subcommand
}

TEST_CASE("certify evaluates the full certificate battery") {
    const fs::path dir = fresh_dir("certify");
    const fs::path cfg = write_config(dir, kShortRun);
    const RunResult r = run_cli("--config " + cfg.string() + " --out " +
                                dir.string() + " certify");
    CHECK(r.exit_code == 0);
    const json m = load_manifest(dir);
    CHECK(m["pass"] == true);
    // 3 variants x (2 exponent pairs + 1 weak form) x 3 cutoff rules.
    CHECK(m["checks"].size() == 27);
    int csvs = 0;
    for (const auto& f : fs::directory_iterator(dir))
        if (f.path().filename().string().rfind("cert_", 0) == 0)
            ++csvs;
    CHECK(csvs == 27);
    // Every certificate CSV carries the summary footer.
    CHECK(slurp(dir / "cert_strain_p2_q3_all_lq.csv").find("# summary,") !=
          std::string::npos);
}

TEST_CASE("injected faults surface as exit 2 with a named violation") {
    const fs::path dir = fresh_dir("fault_cert");
    const fs::path cfg = write_config(dir, kShortRun);
    RunResult r = run_cli("--config " + cfg.string() + " --out " +
                          dir.string() + " --inject-fault certificate-bound "
                          "certify");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("violation: gronwall-") != std::string::npos);
    CHECK(load_manifest(dir)["pass"] == false);

    const fs::path dir2 = fresh_dir("fault_lorentz");
    r = run_cli("--out " + dir2.string() +
                " --inject-fault lorentz-bound verify-lorentz");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("violation: sum-decomposition-bounds") !=
          std::string::npos);
}

TEST_CASE("verify-lorentz battery passes clean") {
    const fs::path dir = fresh_dir("lorentz");
    const RunResult r = run_cli("--out " + dir.string() + " verify-lorentz");
    CHECK(r.exit_code == 0);
    const json m = load_manifest(dir);
    CHECK(m["pass"] == true);
    CHECK(m["checks"].size() == 7);
}
