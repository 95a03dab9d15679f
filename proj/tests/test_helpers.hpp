#pragma once

// Shared fixtures and independent oracles for the test suites.  The
// envelope oracle enumerates supporting planes through node triples and
// never goes through the half-plane machinery it is used to check.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "maflow/monge_ampere.hpp"

namespace maflow::testing {

inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;

// 5-node cross {0, +-e1, +-e2} with the diamond hull as domain.
inline NodeSet cross_nodes() {
    std::vector<Vec2> pts = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    std::vector<bool> bnd = {false, true, true, true, true};
    ConvexPolygon diamond({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)});
    return NodeSet(std::move(pts), std::move(bnd), std::move(diamond));
}

// Regular n-gon boundary of the unit disk around c, a center node, and
// optional interior rings.
inline NodeSet disk_mesh(const Vec2& c, int ngon, const std::vector<Scalar>& ring_radii,
                         int ring_count) {
    std::vector<Vec2> pts;
    std::vector<bool> bnd;
    pts.push_back(c);
    bnd.push_back(false);
    for (Scalar r : ring_radii)
        for (int k = 0; k < ring_count; ++k) {
            const Scalar a = 2.0 * kPi * (k + 0.5) / ring_count;
            pts.emplace_back(c.x() + r * std::cos(a), c.y() + r * std::sin(a));
            bnd.push_back(false);
        }
    std::vector<Vec2> corners;
    for (int k = 0; k < ngon; ++k) {
        const Scalar a = 2.0 * kPi * k / ngon;
        corners.emplace_back(c.x() + std::cos(a), c.y() + std::sin(a));
    }
    for (const Vec2& p : corners) {
        pts.push_back(p);
        bnd.push_back(true);
    }
    return NodeSet(std::move(pts), std::move(bnd), ConvexPolygon(corners));
}

// Exact convex envelope of the boundary data at a query point: maximize
// m.x + b over planes below every boundary node, enumerating basic
// solutions from node triples (plus edge and flat cases).  O(B^3) per
// call; test scale only.
inline Scalar envelope_of_boundary_lp(const PLFunction& f, const Vec2& query) {
    std::vector<Vec2> xs;
    std::vector<Scalar> vs;
    for (int i = 0; i < f.nodes.size(); ++i)
        if (f.nodes.is_boundary(i)) {
            xs.push_back(f.nodes.point(i));
            vs.push_back(f.values[i]);
        }
    const std::size_t n = xs.size();

    auto feasible = [&](const Vec2& m, Scalar b) {
        for (std::size_t k = 0; k < n; ++k)
            if (m.dot(xs[k]) + b > vs[k] + 1e-9) return false;
        return true;
    };

    Scalar best = -std::numeric_limits<Scalar>::infinity();
    // Flat candidates through one node.
    for (std::size_t i = 0; i < n; ++i)
        if (feasible(Vec2::Zero(), vs[i])) best = std::max(best, vs[i]);
    // Planes through three nodes.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Eigen::Matrix3d A;
                A << xs[i].x(), xs[i].y(), 1, xs[j].x(), xs[j].y(), 1, xs[k].x(), xs[k].y(), 1;
                if (std::abs(A.determinant()) < 1e-12) continue;
                Eigen::Vector3d rhs(vs[i], vs[j], vs[k]);
                Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
                const Vec2 m(sol[0], sol[1]);
                if (feasible(m, sol[2])) best = std::max(best, m.dot(query) + sol[2]);
            }
    // Planes through two nodes, tilted only along the edge direction.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 d = xs[j] - xs[i];
            const Scalar len2 = d.squaredNorm();
            if (len2 < 1e-20) continue;
            const Vec2 m = d * ((vs[j] - vs[i]) / len2);
            const Scalar b = vs[i] - m.dot(xs[i]);
            if (feasible(m, b)) best = std::max(best, m.dot(query) + b);
        }
    return best;
}

inline VecX sample_values(const NodeSet& ns, const std::function<Scalar(const Vec2&)>& f) {
    VecX v(ns.size());
    for (int i = 0; i < ns.size(); ++i) v[i] = f(ns.point(i));
    return v;
}

} // namespace maflow::testing
