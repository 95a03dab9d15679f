#include <doctest.h>

#include <cmath>
#include <random>

#include "maflow/comparison.hpp"
#include "maflow/errors.hpp"
#include "maflow/suites.hpp"
#include "test_helpers.hpp"

using namespace maflow;
using namespace maflow::testing;

namespace {

GridField quadratic_field(int n, Scalar a, Scalar b, Scalar c, const Vec2& lin = Vec2::Zero()) {
    GridField g(n, n, 2.0 / n, Vec2(-1.0, -1.0));
    g.fill([&](Scalar x, Scalar y) { return a * x * x + b * x * y + c * y * y + lin.dot(Vec2(x, y)); });
    return g;
}

} // namespace

TEST_CASE("hessian_det is exact on quadratics, including mask boundaries") {
    SUBCASE("0.5(x^2+y^2) gives 1 everywhere") {
        GridField det = hessian_det(quadratic_field(12, 0.5, 0.0, 0.5, Vec2(0.3, -0.7)));
        for (int i = 0; i < det.nx(); ++i)
            for (int j = 0; j < det.ny(); ++j) CHECK(std::abs(det(i, j) - 1.0) < 1e-12);
    }
    SUBCASE("saddle x^2-y^2 gives -4") {
        GridField det = hessian_det(quadratic_field(12, 1.0, 0.0, -1.0));
        for (int i = 0; i < det.nx(); ++i)
            for (int j = 0; j < det.ny(); ++j) CHECK(std::abs(det(i, j) + 4.0) < 1e-12);
    }
    SUBCASE("general quadratic on the L-shaped mask") {
        const int n = 12;
        GridField g(n, n, 2.0 / n, Vec2(-1.0, -1.0), l_shaped_mask(n, n));
        const Scalar a = 1.3, b = 0.4, c = -0.6;
        g.fill([&](Scalar x, Scalar y) { return a * x * x + b * x * y + c * y * y + x; });
        GridField det = hessian_det(g);
        const Scalar expected = 4.0 * a * c - b * b;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (det.in_domain(i, j)) CHECK(std::abs(det(i, j) - expected) < 1e-11);
    }
}

TEST_CASE("hessian_det of x^4+y^4 matches the exact stencil value at (1,1)") {
    // Centered second difference of x^4 is exactly 12x^2 + 2h^2, and the
    // mixed derivative vanishes, so det at the cell sitting on (1,1) is
    // (12 + 2h^2)^2.
    const Scalar h = 1.0 / 64;
    const int n = 68;
    GridField g(n, n, h, Vec2(-h / 2, -h / 2)); // centers at i*h
    g.fill([](Scalar x, Scalar y) { return x * x * x * x + y * y * y * y; });
    GridField det = hessian_det(g);
    const int i1 = 64;
    REQUIRE(g.x(i1) == doctest::Approx(1.0).epsilon(1e-14));
    const Scalar expected = (12.0 + 2.0 * h * h) * (12.0 + 2.0 * h * h);
    CHECK(det(i1, i1) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(det(i1, i1) == doctest::Approx(144.0117).epsilon(1e-5));
}

TEST_CASE("hessian_det rejects too-coarse grids") {
    CHECK_THROWS_AS((void)GridField(4, 4, 0.25, Vec2::Zero()), std::invalid_argument);
}

TEST_CASE("signed part measures") {
    SUBCASE("convex bowl: positive part ~ |Omega|, negative part zero") {
        const int n = 16;
        GridField g(n, n, 1.0 / n, Vec2::Zero());
        g.fill([](Scalar x, Scalar y) { return 0.5 * (x * x + y * y); });
        CHECK(positive_part_measure(g).total() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(negative_part_measure(g).total() == 0.0);
    }
    SUBCASE("saddle: both parts vanish") {
        GridField g = quadratic_field(12, 1.0, 0.0, -1.0);
        CHECK(positive_part_measure(g).total() == 0.0);
        CHECK(negative_part_measure(g).total() == 0.0);
    }
    SUBCASE("affine: both parts vanish") {
        GridField g = quadratic_field(12, 0.0, 0.0, 0.0, Vec2(2.0, -1.0));
        CHECK(positive_part_measure(g).total() == 0.0);
        CHECK(negative_part_measure(g).total() == 0.0);
    }
    SUBCASE("concave bowl: positive part zero, negative part ~ |Omega|") {
        const int n = 16;
        GridField g(n, n, 1.0 / n, Vec2::Zero());
        g.fill([](Scalar x, Scalar y) { return -0.5 * (x * x + y * y); });
        CHECK(positive_part_measure(g).total() == 0.0);
        CHECK(negative_part_measure(g).total() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("positive part total converges at second order") {
    // f = x^4 + y^4 + 3x^2 + 3y^2 on the unit square: det = (12x^2+6)(12y^2+6)
    // integrates to 100, and the leading discrete error is exactly 20 h^2
    // (stencils are exact on cubics, midpoint error exact on quadratics).
    const Scalar exact = 100.0;
    auto total = [&](int n) {
        GridField g(n, n, 1.0 / n, Vec2::Zero());
        g.fill([](Scalar x, Scalar y) {
            return x * x * x * x + y * y * y * y + 3 * x * x + 3 * y * y;
        });
        return positive_part_measure(g).total();
    };
    const Scalar e1 = std::abs(total(16) - exact);
    const Scalar e2 = std::abs(total(32) - exact);
    const Scalar e3 = std::abs(total(64) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(e3 <= 30.0 / (64.0 * 64.0));
}

TEST_CASE("lump_to_nodes preserves total mass exactly") {
    const int n = 16;
    GridField g(n, n, 1.0 / n, Vec2::Zero());
    g.fill([](Scalar x, Scalar y) { return std::exp(x + y) + 0.3 * x * x; });
    AtomicMeasure cells = positive_part_measure(g);
    NodeSet ns = grid_nodes(6, 0.0, 1.0);
    AtomicMeasure lumped = lump_to_nodes(cells, g, ns);
    CHECK(lumped.total() == doctest::Approx(cells.total()).epsilon(1e-14));
    for (int i = 0; i < ns.size(); ++i)
        if (ns.is_boundary(i)) CHECK(lumped.masses[i] == 0.0);
}

TEST_CASE("check_comparison on analytic pairs") {
    NodeSet ns = grid_nodes(9, 0.0, 1.0);
    PLFunction quad(ns, sample_values(ns, [](const Vec2& x) {
                        return 0.5 * (x - Vec2(0.5, 0.5)).squaredNorm();
                    }));
    SUBCASE("affine phi against quadratic psi holds") {
        PLFunction affine(ns, sample_values(ns, [](const Vec2& x) { return 0.2 * x.x() - 0.1; }));
        ComparisonVerdict v = check_comparison(affine, quad, 1e-9);
        CHECK(v.holds);
        // Brute-force minimization oracle.
        Scalar min_all = std::numeric_limits<Scalar>::infinity();
        Scalar min_bdry = std::numeric_limits<Scalar>::infinity();
        for (int i = 0; i < ns.size(); ++i) {
            const Scalar d = affine.values[i] - quad.values[i];
            min_all = std::min(min_all, d);
            if (ns.is_boundary(i)) min_bdry = std::min(min_bdry, d);
        }
        CHECK(min_all == doctest::Approx(std::min(min_bdry, v.interior_min)));
        CHECK(v.boundary_min == doctest::Approx(min_bdry));
        CHECK(min_all >= min_bdry - 1e-9);
    }
    SUBCASE("phi == psi holds with zero margin") {
        ComparisonVerdict v = check_comparison(quad, quad, 1e-9);
        CHECK(v.holds);
        CHECK(v.margin >= -1e-12);
    }
    SUBCASE("measure-order violation raises PreconditionFailed") {
        PLFunction affine(ns, sample_values(ns, [](const Vec2& x) { return 0.2 * x.x(); }));
        CHECK_THROWS_AS((void)check_comparison(quad, affine, 1e-9), PreconditionFailedError);
    }
    SUBCASE("non-convex input raises PreconditionFailed") {
        PLFunction saddle(ns, sample_values(ns, [](const Vec2& x) {
                              return x.x() * x.x() - x.y() * x.y();
                          }));
        CHECK_THROWS_AS((void)check_comparison(saddle, quad, 1e-9), PreconditionFailedError);
    }
}

TEST_CASE("check_strong_comparison examples") {
    NodeSet ns = grid_nodes(9, 0.0, 1.0);
    PLFunction quad(ns, sample_values(ns, [](const Vec2& x) {
                        return 0.5 * (x - Vec2(0.5, 0.5)).squaredNorm();
                    }));
    SUBCASE("phi == psi with a centered quadratic perturbation") {
        ComparisonVerdict v = check_strong_comparison(quad, quad, 0.1, Vec2(0.5, 0.5), 1e-9);
        CHECK(v.holds);
        // The perturbed difference -delta|x-x0|^2 is minimized at the
        // farthest boundary node.
        CHECK(v.boundary_min == doctest::Approx(-0.1 * 0.5));
    }
    SUBCASE("affine phi against quadratic psi") {
        PLFunction affine(ns, sample_values(ns, [](const Vec2& x) { return 0.2 * x.x() - 0.1; }));
        ComparisonVerdict v = check_strong_comparison(affine, quad, 0.05, Vec2(0.3, 0.7), 1e-9);
        CHECK(v.holds);
    }
    SUBCASE("delta must be positive") {
        CHECK_THROWS_AS((void)check_strong_comparison(quad, quad, 0.0, Vec2(0.5, 0.5), 1e-9),
                        std::invalid_argument);
    }
}

TEST_CASE("check_generalised: saddle cases including the L-shaped domain") {
    NodeSet ns = grid_nodes(9, -1.0, 1.0);
    SUBCASE("saddle vs constant on the square") {
        const int n = 20;
        GridField phi(n, n, 2.0 / n, Vec2(-1.0, -1.0));
        phi.fill([](Scalar x, Scalar y) { return x * x - y * y; });
        // psi constant at the saddle's boundary minimum.
        PLFunction psi(ns, VecX::Constant(ns.size(), -1.0));
        ComparisonVerdict v = check_generalised(phi, psi, 1e-9);
        CHECK(v.holds);
    }
    SUBCASE("saddle vs constant on the L-shaped domain") {
        const int n = 20;
        GridField phi(n, n, 2.0 / n, Vec2(-1.0, -1.0), l_shaped_mask(n, n));
        phi.fill([](Scalar x, Scalar y) { return x * x - y * y; });
        PLFunction psi(ns, VecX::Constant(ns.size(), -1.0));
        ComparisonVerdict v = check_generalised(phi, psi, 1e-9);
        CHECK(v.holds);
    }
    SUBCASE("disk mask with the closed-form difference 2 - 2y^2") {
        const int n = 24;
        MaskXX disk(n, n);
        GridField probe(n, n, 2.0 / n, Vec2(-1.0, -1.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                disk(i, j) = probe.cell_center(i, j).norm() <= 1.0;
        GridField phi(n, n, 2.0 / n, Vec2(-1.0, -1.0), disk);
        phi.fill([](Scalar x, Scalar y) { return x * x - y * y; });
        PLFunction psi(ns, sample_values(ns, [](const Vec2& x) {
                           return x.squaredNorm() - 2.0;
                       }));
        ComparisonVerdict v = check_generalised(phi, psi, 1e-9);
        CHECK(v.holds);
        // min(phi - psi) = 0 at (0, +-1); the boundary cells sit O(h) inside.
        CHECK(v.boundary_min == doctest::Approx(0.0).epsilon(0.5));
        CHECK(v.boundary_min >= 0.0);
    }
}

TEST_CASE("generalised concave variant mirrors the convex one") {
    NodeSet ns = grid_nodes(9, 0.0, 1.0);
    const int n = 20;
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<Scalar> unif(0.2, 0.8);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec2 c(unif(rng), unif(rng));
        const Scalar dpsi = 1.0 + unif(rng);
        PLFunction psi(ns, sample_values(ns, [&](const Vec2& x) {
                           return dpsi * (x - c).squaredNorm();
                       }));
        GridField phi(n, n, 1.0 / n, Vec2::Zero());
        const Scalar dphi = 0.4 * dpsi;
        const Scalar ah = unif(rng);
        phi.fill([&](Scalar x, Scalar y) {
            return dphi * ((x - c.x()) * (x - c.x()) + (y - c.y()) * (y - c.y())) +
                   ah * (x * x - y * y);
        });
        ComparisonVerdict convex_side = check_generalised(phi, psi, 1e-9);
        GridField neg = phi;
        neg.values() = -phi.values();
        PLFunction neg_psi(ns, -psi.values);
        ComparisonVerdict concave_side = check_generalised_concave(neg, neg_psi, 1e-9);
        CHECK(convex_side.holds == concave_side.holds);
        CHECK(convex_side.margin == doctest::Approx(concave_side.margin).epsilon(1e-9));
    }
}

TEST_CASE("randomized comparison suites hold on every valid instance") {
    SuiteResult comparison = run_comparison_suite(25, 123);
    CHECK(comparison.all_hold());
    SuiteResult strong = run_strong_suite(25, 456);
    CHECK(strong.all_hold());
    SuiteResult generalised = run_generalised_suite(10, 789);
    CHECK(generalised.all_hold());
}

TEST_CASE("grid connectivity validation") {
    MaskXX split = MaskXX::Constant(8, 8, true);
    for (int j = 0; j < 8; ++j) split(4, j) = false; // two components
    CHECK_THROWS_AS((void)GridField(8, 8, 0.125, Vec2::Zero(), split), std::invalid_argument);
}
