#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "maflow/io.hpp"
#include "maflow/suites.hpp"
#include "test_helpers.hpp"

using namespace maflow;
using namespace maflow::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("maflow_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MAFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("measure subcommand on affine data writes a zero measure") {
    TempDir tmp;
    NodeSet ns = grid_nodes(5, 0.0, 1.0);
    PLFunction f(ns, sample_values(ns, [](const Vec2& x) { return 3.0 * x.x() - x.y(); }));
    write_node_csv(tmp.file("nodes.csv"), f);
    REQUIRE(run_cli("measure --nodes " + tmp.file("nodes.csv") + " --out " + tmp.file("out")) == 0);
    PLFunction check = read_node_csv(tmp.file("nodes.csv"));
    const std::string measure = slurp(tmp.file("out/measure.csv"));
    CHECK(measure.find("x,y,mass") == 0);
    // Every mass is 0.
    std::istringstream lines(measure);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::stod(line.substr(pos + 1)) == 0.0);
    }
    CHECK(fs::exists(tmp.file("out/manifest.txt")));
}

TEST_CASE("solve subcommand round-trips a quadratic problem") {
    TempDir tmp;
    NodeSet ns = grid_nodes(5, 0.0, 1.0);
    VecX exact = sample_values(ns, [](const Vec2& x) {
        return 0.5 * (x - Vec2(0.5, 0.5)).squaredNorm();
    });
    PLFunction interp(ns, exact);
    DirichletProblem p{ns, ma_measure(interp), exact};
    write_problem_csv(tmp.file("problem.csv"), p);
    REQUIRE(run_cli("solve --problem " + tmp.file("problem.csv") +
                    " --tol 1e-8 --max-iters 5000 --out " + tmp.file("out")) == 0);
    PLFunction sol = read_node_csv(tmp.file("out/solution.csv"));
    CHECK((sol.values - exact).cwiseAbs().maxCoeff() <= 1e-7);
    auto report = read_key_value(tmp.file("out/report.txt"));
    CHECK(report.at("converged") == "true");
}

TEST_CASE("envelope subcommand sandwiches a sampled bowl") {
    TempDir tmp;
    GridField g(8, 8, 0.125, Vec2::Zero());
    g.fill([](Scalar x, Scalar y) { return 0.5 * (x * x + y * y); });
    write_grid_csv(tmp.file("field.csv"), g);
    REQUIRE(run_cli("envelope --field " + tmp.file("field.csv") + " --tol 1e-6 --out " +
                    tmp.file("out")) == 0);
    PLFunction lower = read_node_csv(tmp.file("out/envelope_convex.csv"));
    PLFunction upper = read_node_csv(tmp.file("out/envelope_concave.csv"));
    for (int i = 0; i < lower.nodes.size(); ++i)
        CHECK(lower.values[i] <= upper.values[i] + 1e-5);
    auto report = read_key_value(tmp.file("out/report.txt"));
    CHECK(report.at("convex_converged") == "true");
    CHECK(report.at("concave_converged") == "true");
}

TEST_CASE("certify subcommand certifies f = -1") {
    TempDir tmp;
    GridField rhs(8, 8, 0.125, Vec2::Zero());
    rhs.fill([](Scalar, Scalar) { return -1.0; });
    write_grid_csv(tmp.file("rhs.csv"), rhs);
    REQUIRE(run_cli("certify --rhs " + tmp.file("rhs.csv") + " --boundary-constant 0 --out " +
                    tmp.file("out")) == 0);
    auto cert = read_key_value(tmp.file("out/certificate.txt"));
    CHECK(cert.at("certified") == "true");
    CHECK(std::stod(cert.at("contradiction_mass")) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("certify rejects a vanishing right-hand side with exit 2") {
    TempDir tmp;
    GridField rhs(8, 8, 0.125, Vec2::Zero());
    write_grid_csv(tmp.file("rhs.csv"), rhs);
    CHECK(run_cli("certify --rhs " + tmp.file("rhs.csv") + " --boundary-constant 0 --out " +
                  tmp.file("out")) == 2);
}

TEST_CASE("verify subcommand writes deterministic verdicts") {
    TempDir tmp;
    const std::string base = "verify --suite comparison --instances 6 --seed 42 --out ";
    REQUIRE(run_cli(base + tmp.file("a")) == 0);
    REQUIRE(run_cli(base + tmp.file("b")) == 0);
    const std::string va = slurp(tmp.file("a/verdicts.csv"));
    CHECK(va == slurp(tmp.file("b/verdicts.csv")));
    CHECK(va.find("case_id,holds,margin,interior_min,boundary_min") == 0);
    CHECK(run_cli("verify --suite bogus --instances 1 --seed 1 --out " + tmp.file("c")) == 2);
}

TEST_CASE("malformed input exits with code 2") {
    TempDir tmp;
    std::ofstream(tmp.file("bad.csv")) << "x,y,boundary_flag,value\n0,oops,1,0\n";
    CHECK(run_cli("measure --nodes " + tmp.file("bad.csv") + " --out " + tmp.file("out")) == 2);
}

TEST_CASE("ns-run produces the time series and heatmaps") {
    TempDir tmp;
    std::ofstream(tmp.file("config.txt"))
        << "nx=16\nny=16\nlx=1\nly=1\ndt=0.0004\nboundary=no_slip_box\n"
        << "ic=taylor_green\nic_amplitude=1\n";
    REQUIRE(run_cli("ns-run --config " + tmp.file("config.txt") + " --steps 5 --diag-every 2 --out " +
                    tmp.file("out")) == 0);
    const std::string series = slurp(tmp.file("out/series.csv"));
    CHECK(series.find("t,energy,identity_residual_inf,min_abs_delta_p,frac_delta_p_positive") == 0);
    CHECK(fs::exists(tmp.file("out/stream.pgm")));
    CHECK(fs::exists(tmp.file("out/delta_p.csv")));
    auto final_kv = read_key_value(tmp.file("out/final.txt"));
    CHECK(std::stod(final_kv.at("divergence_inf")) <= 1e-8);
}
