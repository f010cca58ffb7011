// End-to-end tests for the command-line tool. The binary path arrives as the
// first command-line argument (wired up by CMake).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_tmp;

int run(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dir(const std::string& name) { return (g_tmp / name).string(); }

}  // namespace

TEST_CASE("gen: p = 0 seed solution has omega1 = sin(t) at every s") {
    const std::string out = dir("gen_trivial");
    REQUIRE(run("--out-dir " + out +
                " gen --a 0 --b 0 --c 0 --f1 \"sin(t)\" --f2 0 --f3 0"
                " --grid 0,1,11,0,1,11 --emit-residual") == 0);
    std::ifstream csv(fs::path(out) / "solution.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "s,t,omega1,omega2,omega3,kappa1,kappa2,kappa3,residual");
    int rows = 0;
    while (std::getline(csv, line)) {
        double s, t, w1, w2, w3, k1, k2, k3, res;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s,
                            &t, &w1, &w2, &w3, &k1, &k2, &k3, &res) == 9);
        CHECK(w1 == doctest::Approx(std::sin(t)).epsilon(1e-15));
        CHECK(w2 == 0.0);
        CHECK(k1 == 0.0);
        CHECK(res <= 1e-9);
        ++rows;
    }
    CHECK(rows == 121);
    CHECK(fs::exists(fs::path(out) / "gen_manifest.json"));
}

TEST_CASE("gen: missing seed components is a usage error (exit 2)") {
    CHECK(run("--out-dir " + dir("gen_missing") + " gen --a 0") == 2);
}

TEST_CASE("gen: malformed expression reports a parse error (exit 2)") {
    CHECK(run("--out-dir " + dir("gen_parse") +
              " gen --f1 \"sin(t\" --f2 0 --f3 0") == 2);
}

TEST_CASE("gen: evaluation hitting a pole is a domain error (exit 3)") {
    CHECK(run("--out-dir " + dir("gen_domain") +
              " gen --f1 \"1/(t-0.5)\" --f2 0 --f3 0 --grid 0,1,3,0,1,3") == 3);
}

TEST_CASE("determinism: same seed twice gives byte-identical outputs") {
    const std::string o1 = dir("det1"), o2 = dir("det2");
    REQUIRE(run("--out-dir " + o1 + " --seed 42 gen --random --emit-residual") == 0);
    REQUIRE(run("--out-dir " + o2 + " --seed 42 gen --random --emit-residual") == 0);
    const std::string a = slurp(fs::path(o1) / "solution.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(fs::path(o2) / "solution.csv"));
    CHECK(slurp(fs::path(o1) / "gen_manifest.json") ==
          slurp(fs::path(o2) / "gen_manifest.json"));
}

TEST_CASE("manifest replay reproduces the run bit-identically") {
    const std::string o1 = dir("rep1"), o2 = dir("rep2");
    REQUIRE(run("--out-dir " + o1 + " --seed 7 gen --random") == 0);
    REQUIRE(run("--out-dir " + o2 + " gen --manifest " + o1 +
                "/gen_manifest.json") == 0);
    CHECK(slurp(fs::path(o1) / "solution.csv") == slurp(fs::path(o2) / "solution.csv"));
}

TEST_CASE("verify: accepts a gen manifest and exits 0 within tolerance") {
    const std::string og = dir("ver_gen"), ov = dir("ver_out");
    REQUIRE(run("--out-dir " + og +
                " gen --a \"0.3*s*t\" --b \"0.2*sin(s)\" --c \"0.1*t^2\""
                " --f1 \"cos(t)\" --f2 t --f3 1") == 0);
    CHECK(run("--out-dir " + ov + " verify --manifest " + og +
              "/gen_manifest.json --grid 0,1,31,0,1,31") == 0);
    CHECK(slurp(fs::path(ov) / "report.json").find("\"max_norm\"") !=
          std::string::npos);
}

TEST_CASE("transform: symmetry image still verifies (exit 0)") {
    CHECK(run("--out-dir " + dir("tr") +
              " transform --a \"0.3*s*t\" --b \"0.2*sin(s)\" --c \"0.1*t^2\""
              " --f1 \"cos(t)\" --f2 t --f3 1 --pb \"0.2*s\" --pc \"0.1*t\""
              " --shift-s 0.1") == 0);
}

TEST_CASE("reconstruct: round-trip fixture exits 0 with small errors") {
    const std::string out = dir("rec");
    REQUIRE(run("--out-dir " + out +
                " reconstruct --a \"0.2+0.3*s*t\" --b \"0.1*sin(s)\""
                " --c \"0.05*t\" --f1 \"cos(t)\" --f2 t --f3 1") == 0);
    const std::string diag = slurp(fs::path(out) / "diagnostics.json");
    CHECK(diag.find("\"singular\": false") != std::string::npos);
    CHECK(fs::exists(fs::path(out) / "p.csv"));
    CHECK(fs::exists(fs::path(out) / "f.csv"));
}

TEST_CASE("reconstruct: |p| crossing 2*pi exits 4 and keeps the manifest") {
    const std::string out = dir("rec_sing");
    CHECK(run("--out-dir " + out +
              " reconstruct --ka 7 --kb 0 --kc 0 --p0a 0 --grid 0,1,51,0,0.1,2") == 4);
    // manifest and diagnostics were written before the failure surfaced
    CHECK(slurp(fs::path(out) / "diagnostics.json").find("\"singular\": true") !=
          std::string::npos);
    CHECK(fs::exists(fs::path(out) / "reconstruct_manifest.json"));
}

TEST_CASE("simulate: a CFL-violating hard config exits 5") {
    const fs::path cfg = g_tmp / "sim_cfl.json";
    std::ofstream(cfg) << R"json({"material":{}, "grid":{"L":1.0,"N":32},
        "t_end":0.1, "dt":0.1, "cfl_hard":true, "boundary":"periodic",
        "initial":{"kappa":["0","0","0"],"nu":["0","0","1"],
                   "omega":["0","0","0"],"ups":["0","0","0"]}})json";
    CHECK(run("--out-dir " + dir("sim_cfl") + " simulate --config " +
              cfg.string()) == 5);
}

TEST_CASE("simulate: smooth periodic run writes fields and frame CSVs") {
    const fs::path cfg = g_tmp / "sim_ok.json";
    std::ofstream(cfg) << R"json({"material":{}, "grid":{"L":1.0,"N":32},
        "t_end":0.05, "boundary":"periodic",
        "initial":{"kappa":["0.1*sin(6.283185307179586*s)","0","0"],
                   "nu":["0","0","1"],"omega":["0","0","0"],"ups":["0","0","0"]}})json";
    const std::string out = dir("sim_ok");
    REQUIRE(run("--out-dir " + out + " simulate --config " + cfg.string()) == 0);
    CHECK(slurp(fs::path(out) / "fields.csv")
              .rfind("t,s,kappa1,kappa2,kappa3,nu1,nu2,nu3,omega1", 0) == 0);
    CHECK(fs::exists(fs::path(out) / "frame.csv"));
    CHECK(slurp(fs::path(out) / "simulate_manifest.json").find("\"cfl_violations\": 0") !=
          std::string::npos);
}

TEST_CASE("simulate: broken config JSON exits 2") {
    const fs::path cfg = g_tmp / "sim_bad.json";
    std::ofstream(cfg) << "{not json";
    CHECK(run("--out-dir " + dir("sim_bad") + " simulate --config " +
              cfg.string()) == 2);
}

TEST_CASE("convergence: observed order is written and near 2") {
    const std::string out = dir("conv");
    REQUIRE(run("--out-dir " + out + " convergence --grids 41 81") == 0);
    const std::string rep = slurp(fs::path(out) / "orders.json");
    const auto pos = rep.find("\"observed_orders\"");
    REQUIRE(pos != std::string::npos);
    double order = 0.0;
    REQUIRE(std::sscanf(rep.c_str() + pos, "\"observed_orders\": [ %lf", &order) == 1);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
}

TEST_CASE("help exits 0") { CHECK(run("--help") == 0); }

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli> [doctest args]\n", argv[0]);
        return 1;
    }
    g_cli = argv[1];
    g_tmp = fs::temp_directory_path() / "crod_cli_tests";
    fs::remove_all(g_tmp);
    fs::create_directories(g_tmp);

    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    const int rc = ctx.run();
    fs::remove_all(g_tmp);
    return rc;
}
