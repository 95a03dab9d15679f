#pragma once

/// Piecewise-linear functions on planar node sets, their normal mappings
/// (subdifferentials) and Monge-Ampere measures.
///
/// A PLFunction is interpreted through the lower convex envelope of its
/// nodal point cloud {(x_i, f_i)}.  The subdifferential of the envelope at
/// an interior node is computed exactly as a half-plane intersection over
/// all other nodes; its area is the node's Monge-Ampere atom.  Nodes that
/// float strictly above the envelope have an empty subdifferential and
/// carry mass zero.

#include <vector>

#include "maflow/geometry.hpp"
#include "maflow/types.hpp"

namespace maflow {

/// Planar node set with boundary flags and a convex polygonal domain.
/// Positions are rescaled internally so the domain fits in [-1,1]^2;
/// all public interfaces speak original coordinates.
class NodeSet {
public:
    NodeSet() = default;
    /// Validates: pairwise-distinct points (> 1e-10), boundary-flagged
    /// points on the domain boundary (< 1e-9), at least 3 boundary nodes.
    NodeSet(std::vector<Vec2> points, std::vector<bool> boundary_flags, ConvexPolygon domain);

    [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
    [[nodiscard]] const Vec2& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const std::vector<Vec2>& points() const { return points_; }
    [[nodiscard]] bool is_boundary(int i) const { return boundary_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const ConvexPolygon& domain() const { return domain_; }
    [[nodiscard]] int interior_count() const { return interior_count_; }

    /// Internal normalization map x -> (x - center) / scale.
    [[nodiscard]] const Vec2& center() const { return center_; }
    [[nodiscard]] Scalar scale() const { return scale_; }
    [[nodiscard]] Vec2 normalized(int i) const { return (points_[static_cast<std::size_t>(i)] - center_) / scale_; }

    bool operator==(const NodeSet& other) const {
        return points_ == other.points_ && boundary_ == other.boundary_;
    }

private:
    std::vector<Vec2> points_;
    std::vector<bool> boundary_;
    ConvexPolygon domain_;
    Vec2 center_ = Vec2::Zero();
    Scalar scale_ = 1.0;
    int interior_count_ = 0;
};

/// Nodal values over a NodeSet.
struct PLFunction {
    NodeSet nodes;
    VecX values;

    PLFunction() = default;
    PLFunction(NodeSet n, VecX v);
};

/// Nonnegative masses indexed like the nodes; boundary nodes carry none.
struct AtomicMeasure {
    VecX masses;

    AtomicMeasure() = default;
    explicit AtomicMeasure(VecX m) : masses(std::move(m)) {}
    static AtomicMeasure zeros(int n) { return AtomicMeasure(VecX::Zero(n)); }

    [[nodiscard]] Scalar total() const { return masses.size() ? masses.sum() : 0.0; }
};

/// Subdifferential of the nodal convex envelope at an interior node, as a
/// convex polygon in gradient space (possibly empty).  Throws
/// BoundaryNodeError for boundary nodes.
ConvexPolygon subdifferential_at_node(const PLFunction& f, int node_index);

/// Monge-Ampere measure: atom at interior node i is the area of
/// subdifferential_at_node(f, i); boundary nodes carry mass zero.
AtomicMeasure ma_measure(const PLFunction& f);

/// True iff no node floats more than tol above the convex envelope of the
/// others, checked through nonemptiness of the tol-relaxed subdifferential
/// at every interior node.
bool is_nodal_convex(const PLFunction& f, Scalar tol);

/// Per-node subdifferential polygons for a subset of interior nodes.
std::vector<ConvexPolygon> normal_mapping_image(const PLFunction& f,
                                                std::span<const int> node_subset);

/// Exact evaluator for the lower convex envelope of a PLFunction's nodal
/// cloud: the max over supporting planes collected from every node with a
/// nonempty subdifferential.  Values at nodes of a nodal-convex function
/// reproduce the nodal data.
class EnvelopeEvaluator {
public:
    explicit EnvelopeEvaluator(const PLFunction& f);
    [[nodiscard]] Scalar operator()(const Vec2& x) const;

private:
    struct Plane {
        Vec2 gradient;
        Scalar intercept;
    };
    std::vector<Plane> planes_;
};

namespace detail {
/// Subdifferential polygon with all constraint offsets relaxed by slack;
/// node positions and values given directly (solver hot path).  Positions
/// must already be normalized to O(1); result is in the same gradient
/// units.  order, if nonempty, lists the other-node indices sorted by
/// distance from node i.
ConvexPolygon node_subdifferential(const std::vector<Vec2>& pts, const VecX& vals, int i,
                                   Scalar slack, std::span<const int> order);

/// Other-node indices sorted by distance from node i, with the distances.
struct NeighborOrder {
    std::vector<int> idx;
    std::vector<Scalar> dist;
};
NeighborOrder neighbor_order(const std::vector<Vec2>& pts, int i);

/// Allocation-free area of the subdifferential polygon.  Constraints from
/// far nodes that cannot cut the current polygon (max vertex norm times
/// distance below the offset) are skipped in O(1).
class SubdiffArea {
public:
    Scalar operator()(const std::vector<Vec2>& pts, const VecX& vals, int i, Scalar slack,
                      const NeighborOrder& order);

private:
    std::vector<Vec2> cur_, next_;
};
} // namespace detail

} // namespace maflow
