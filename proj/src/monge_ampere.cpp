#include "maflow/monge_ampere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "maflow/errors.hpp"

namespace maflow {

NodeSet::NodeSet(std::vector<Vec2> points, std::vector<bool> boundary_flags, ConvexPolygon domain)
    : points_(std::move(points)), boundary_(std::move(boundary_flags)), domain_(std::move(domain)) {
    if (points_.size() != boundary_.size())
        throw std::invalid_argument("NodeSet: points/boundary_flags size mismatch");
    if (points_.empty()) throw std::invalid_argument("NodeSet: empty");

    int nb = 0;
    Vec2 lo = points_[0], hi = points_[0];
    for (std::size_t i = 0; i < points_.size(); ++i) {
        lo = lo.cwiseMin(points_[i]);
        hi = hi.cwiseMax(points_[i]);
        if (boundary_[i]) {
            ++nb;
            if (boundary_distance(domain_, points_[i]) >= 1e-9)
                throw std::invalid_argument("NodeSet: boundary-flagged node off the domain boundary");
        }
    }
    if (nb < 3) throw std::invalid_argument("NodeSet: fewer than 3 boundary nodes");
    interior_count_ = size() - nb;

    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            if ((points_[i] - points_[j]).norm() <= 1e-10)
                throw std::invalid_argument("NodeSet: duplicate points");

    center_ = 0.5 * (lo + hi);
    scale_ = std::max({(hi - lo).x() * 0.5, (hi - lo).y() * 0.5, 1e-30});
}

PLFunction::PLFunction(NodeSet n, VecX v) : nodes(std::move(n)), values(std::move(v)) {
    if (values.size() != nodes.size()) throw std::invalid_argument("PLFunction: size mismatch");
    if (!values.allFinite()) throw std::invalid_argument("PLFunction: non-finite values");
}

namespace detail {

ConvexPolygon node_subdifferential(const std::vector<Vec2>& pts, const VecX& vals, int i,
                                   Scalar slack, std::span<const int> order) {
    const std::size_t n = pts.size();
    const Vec2 xi = pts[static_cast<std::size_t>(i)];
    const Scalar fi = vals[i];

    // Lipschitz-style gradient bound: half-width max|df| / min|dx| + 1.
    Scalar max_df = 0.0;
    Scalar min_dx = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        if (static_cast<int>(j) == i) continue;
        max_df = std::max(max_df, std::abs(vals[static_cast<Eigen::Index>(j)] - fi));
        min_dx = std::min(min_dx, (pts[j] - xi).norm());
    }
    const Scalar half_width = max_df / min_dx + 1.0;
    ConvexPolygon poly = make_box(Vec2(-half_width, -half_width), Vec2(half_width, half_width));

    auto clip_against = [&](std::size_t j) {
        const Vec2 d = pts[j] - xi;
        poly = clip(poly, HalfPlane{d, vals[static_cast<Eigen::Index>(j)] - fi + slack});
    };

    if (!order.empty()) {
        for (int j : order) {
            if (poly.empty()) break;
            clip_against(static_cast<std::size_t>(j));
        }
    } else {
        // Near nodes carry the binding constraints; clipping them first keeps
        // the polygon small for the rest of the sweep.
        std::vector<int> idx;
        idx.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (static_cast<int>(j) != i) idx.push_back(static_cast<int>(j));
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return (pts[static_cast<std::size_t>(a)] - xi).squaredNorm() <
                   (pts[static_cast<std::size_t>(b)] - xi).squaredNorm();
        });
        for (int j : idx) {
            if (poly.empty()) break;
            clip_against(static_cast<std::size_t>(j));
        }
    }
    return poly;
}

NeighborOrder neighbor_order(const std::vector<Vec2>& pts, int i) {
    NeighborOrder ord;
    const std::size_t n = pts.size();
    ord.idx.reserve(n - 1);
    const Vec2 xi = pts[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < n; ++j)
        if (static_cast<int>(j) != i) ord.idx.push_back(static_cast<int>(j));
    std::sort(ord.idx.begin(), ord.idx.end(), [&](int a, int b) {
        return (pts[static_cast<std::size_t>(a)] - xi).squaredNorm() <
               (pts[static_cast<std::size_t>(b)] - xi).squaredNorm();
    });
    ord.dist.reserve(ord.idx.size());
    for (int j : ord.idx) ord.dist.push_back((pts[static_cast<std::size_t>(j)] - xi).norm());
    return ord;
}

Scalar SubdiffArea::operator()(const std::vector<Vec2>& pts, const VecX& vals, int i, Scalar slack,
                               const NeighborOrder& order) {
    const Vec2 xi = pts[static_cast<std::size_t>(i)];
    const Scalar fi = vals[i];

    Scalar max_df = 0.0;
    for (Eigen::Index j = 0; j < vals.size(); ++j)
        if (j != i) max_df = std::max(max_df, std::abs(vals[j] - fi));
    const Scalar half_width = max_df / order.dist.front() + 1.0;

    cur_.assign({Vec2(-half_width, -half_width), Vec2(half_width, -half_width),
                 Vec2(half_width, half_width), Vec2(-half_width, half_width)});
    Scalar radius = half_width * std::numbers::sqrt2_v<Scalar>;

    for (std::size_t k = 0; k < order.idx.size() && !cur_.empty(); ++k) {
        const std::size_t j = static_cast<std::size_t>(order.idx[k]);
        const Scalar rhs = vals[static_cast<Eigen::Index>(j)] - fi + slack;
        if (radius * order.dist[k] <= rhs) continue; // cannot cut
        const Vec2 d = pts[j] - xi;

        // Sign scan first; most planes leave the polygon untouched.
        bool any_out = false, any_in = false;
        for (const Vec2& v : cur_) {
            if (d.dot(v) - rhs > 0)
                any_out = true;
            else
                any_in = true;
        }
        if (!any_out) continue;
        if (!any_in) {
            cur_.clear();
            break;
        }

        next_.clear();
        const std::size_t m = cur_.size();
        for (std::size_t a = 0; a < m; ++a) {
            const Vec2& p = cur_[a];
            const Vec2& q = cur_[(a + 1) % m];
            const Scalar dp = d.dot(p) - rhs;
            const Scalar dq = d.dot(q) - rhs;
            if (dp <= 0) next_.push_back(p);
            if ((dp <= 0) != (dq <= 0)) next_.push_back(p + (dp / (dp - dq)) * (q - p));
        }
        cur_.swap(next_);
        radius = 0.0;
        for (const Vec2& v : cur_) radius = std::max(radius, v.norm());
    }

    const std::size_t m = cur_.size();
    if (m < 3) return 0.0;
    Scalar s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        const Vec2& p = cur_[a];
        const Vec2& q = cur_[(a + 1) % m];
        s += p.x() * q.y() - p.y() * q.x();
    }
    return std::abs(s) * 0.5;
}

} // namespace detail

namespace {

// Positions normalized, polygon mapped back to original gradient units.
ConvexPolygon subdifferential_impl(const PLFunction& f, int i, Scalar slack) {
    const NodeSet& ns = f.nodes;
    std::vector<Vec2> scaled(static_cast<std::size_t>(ns.size()));
    for (int j = 0; j < ns.size(); ++j) scaled[static_cast<std::size_t>(j)] = ns.normalized(j);
    ConvexPolygon poly = detail::node_subdifferential(scaled, f.values, i, slack, {});
    for (Vec2& v : poly.vertices) v /= ns.scale();
    return poly;
}

} // namespace

ConvexPolygon subdifferential_at_node(const PLFunction& f, int node_index) {
    if (node_index < 0 || node_index >= f.nodes.size())
        throw std::out_of_range("subdifferential_at_node: bad index");
    if (f.nodes.is_boundary(node_index)) throw BoundaryNodeError(node_index);
    return subdifferential_impl(f, node_index, 0.0);
}

AtomicMeasure ma_measure(const PLFunction& f) {
    AtomicMeasure mu = AtomicMeasure::zeros(f.nodes.size());
    const Scalar s2 = f.nodes.scale() * f.nodes.scale();
    std::vector<Vec2> scaled(static_cast<std::size_t>(f.nodes.size()));
    for (int j = 0; j < f.nodes.size(); ++j) scaled[static_cast<std::size_t>(j)] = f.nodes.normalized(j);
    detail::SubdiffArea area;
    for (int i = 0; i < f.nodes.size(); ++i) {
        if (f.nodes.is_boundary(i)) continue;
        mu.masses[i] = area(scaled, f.values, i, 0.0, detail::neighbor_order(scaled, i)) / s2;
    }
    return mu;
}

bool is_nodal_convex(const PLFunction& f, Scalar tol) {
    if (tol < 0) throw std::invalid_argument("is_nodal_convex: tol < 0");
    std::vector<Vec2> scaled(static_cast<std::size_t>(f.nodes.size()));
    for (int j = 0; j < f.nodes.size(); ++j) scaled[static_cast<std::size_t>(j)] = f.nodes.normalized(j);
    for (int i = 0; i < f.nodes.size(); ++i) {
        if (f.nodes.is_boundary(i)) continue;
        if (detail::node_subdifferential(scaled, f.values, i, tol, {}).empty()) return false;
    }
    return true;
}

std::vector<ConvexPolygon> normal_mapping_image(const PLFunction& f,
                                                std::span<const int> node_subset) {
    std::vector<ConvexPolygon> out;
    out.reserve(node_subset.size());
    for (int i : node_subset) out.push_back(subdifferential_at_node(f, i));
    return out;
}

EnvelopeEvaluator::EnvelopeEvaluator(const PLFunction& f) {
    const NodeSet& ns = f.nodes;
    for (int i = 0; i < ns.size(); ++i) {
        ConvexPolygon sd = subdifferential_impl(f, i, 0.0);
        for (const Vec2& m : sd.vertices)
            planes_.push_back({m, f.values[i] - m.dot(ns.point(i))});
    }
    if (planes_.empty()) throw std::invalid_argument("EnvelopeEvaluator: no supporting planes");
}

Scalar EnvelopeEvaluator::operator()(const Vec2& x) const {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (const Plane& p : planes_) best = std::max(best, p.gradient.dot(x) + p.intercept);
    return best;
}

} // namespace maflow
