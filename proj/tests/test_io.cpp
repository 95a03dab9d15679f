#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "maflow/errors.hpp"
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
               ("maflow_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("node CSV round trip") {
    TempDir tmp;
    NodeSet ns = grid_nodes(6, -0.5, 1.5);
    std::mt19937_64 rng(5);
    PLFunction f = random_convex(ns, rng);
    const std::string path = tmp.file("nodes.csv");
    write_node_csv(path, f);
    PLFunction g = read_node_csv(path);
    REQUIRE(g.nodes.size() == ns.size());
    for (int i = 0; i < ns.size(); ++i) {
        CHECK((g.nodes.point(i) - ns.point(i)).norm() == 0.0);
        CHECK(g.nodes.is_boundary(i) == ns.is_boundary(i));
        CHECK(g.values[i] == f.values[i]);
    }
}

TEST_CASE("problem CSV round trip") {
    TempDir tmp;
    NodeSet ns = grid_nodes(5, 0.0, 1.0);
    VecX g = sample_values(ns, [](const Vec2& x) { return x.squaredNorm(); });
    VecX m = VecX::Zero(ns.size());
    for (int i = 0; i < ns.size(); ++i)
        if (!ns.is_boundary(i)) m[i] = 0.01 * (i + 1);
    DirichletProblem p{ns, AtomicMeasure(m), g};
    const std::string path = tmp.file("problem.csv");
    write_problem_csv(path, p);
    DirichletProblem q = read_problem_csv(path);
    REQUIRE(q.nodes.size() == ns.size());
    for (int i = 0; i < ns.size(); ++i) {
        CHECK(q.target.masses[i] == (ns.is_boundary(i) ? 0.0 : m[i]));
        if (ns.is_boundary(i)) CHECK(q.boundary_values[i] == g[i]);
    }
    CHECK_NOTHROW(q.validate());
}

TEST_CASE("grid CSV round trip with mask") {
    TempDir tmp;
    const int n = 8;
    GridField g(n, n, 0.125, Vec2(0.25, -0.5), l_shaped_mask(n, n));
    g.fill([](Scalar x, Scalar y) { return std::sin(x) + y * y; });
    const std::string path = tmp.file("grid.csv");
    write_grid_csv(path, g);
    GridField h = read_grid_csv(path);
    REQUIRE(h.nx() == n);
    REQUIRE(h.ny() == n);
    CHECK(h.h() == doctest::Approx(g.h()).epsilon(1e-15));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CHECK(h.in_domain(i, j) == g.in_domain(i, j));
            if (g.in_domain(i, j)) CHECK(h(i, j) == g(i, j));
        }
}

TEST_CASE("malformed CSVs raise ParseError with the offending row") {
    TempDir tmp;
    SUBCASE("wrong header") {
        const std::string path = tmp.file("bad.csv");
        std::ofstream(path) << "x,y,value\n0,0,1\n";
        CHECK_THROWS_AS((void)read_node_csv(path), ParseError);
    }
    SUBCASE("non-numeric field carries row and field names") {
        const std::string path = tmp.file("bad2.csv");
        std::ofstream(path) << "x,y,boundary_flag,value\n0,zero,1,0\n";
        try {
            (void)read_node_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.row == 2);
            CHECK(e.field == "y");
        }
    }
    SUBCASE("bad boundary flag") {
        const std::string path = tmp.file("bad3.csv");
        std::ofstream(path) << "x,y,boundary_flag,value\n0,0,2,0\n";
        CHECK_THROWS_AS((void)read_node_csv(path), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_node_csv(tmp.file("nope.csv")), ParseError);
    }
}

TEST_CASE("key=value files with comments") {
    TempDir tmp;
    const std::string path = tmp.file("config.txt");
    std::ofstream(path) << "# comment line\nnx = 64\nboundary=channel_periodic_x\n\n  dt =1e-4\n";
    auto kv = read_key_value(path);
    CHECK(kv.at("nx") == "64");
    CHECK(kv.at("boundary") == "channel_periodic_x");
    CHECK(kv.at("dt") == "1e-4");
}

TEST_CASE("PGM output is deterministic and well-formed") {
    TempDir tmp;
    const int n = 8;
    GridField g(n, n, 0.125, Vec2::Zero(), l_shaped_mask(n, n));
    g.fill([](Scalar x, Scalar y) { return x - y; });
    write_pgm(tmp.file("a.pgm"), g);
    write_pgm(tmp.file("b.pgm"), g);
    const std::string a = slurp(tmp.file("a.pgm"));
    CHECK(a == slurp(tmp.file("b.pgm")));
    CHECK(a.substr(0, 3) == "P5\n");
    CHECK(a.find("65535") != std::string::npos);
    // Header + 2 bytes per pixel.
    const std::size_t header = a.find("65535\n") + 6;
    CHECK(a.size() == header + 2u * n * n);
}

TEST_CASE("format_double survives round trips") {
    for (Scalar v : {0.0, 1.0, -1.5, 3.141592653589793, 1e-300, 6.02e23}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
