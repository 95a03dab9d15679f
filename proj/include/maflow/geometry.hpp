#pragma once

/// Exact planar convex geometry kernel: half-plane intersection, polygon
/// areas, point membership.  All types are value-semantic and immutable
/// after construction; all operations are pure.

#include <span>
#include <vector>

#include "maflow/types.hpp"

namespace maflow {

/// Closed half-plane { p : normal . p <= offset }.  normal need not be unit
/// length but must be nonzero.
struct HalfPlane {
    Vec2 normal;
    Scalar offset = 0.0;
};

/// Convex polygon as a counterclockwise vertex list.  An empty vertex list
/// represents the empty set; 1- or 2-vertex lists are degenerate (area 0).
struct ConvexPolygon {
    std::vector<Vec2> vertices;

    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> v) : vertices(std::move(v)) {}

    [[nodiscard]] bool empty() const { return vertices.empty(); }
    [[nodiscard]] std::size_t size() const { return vertices.size(); }
};

/// Axis-aligned box as a ConvexPolygon (CCW).
ConvexPolygon make_box(const Vec2& lo, const Vec2& hi);

/// Vertex dedup / collinearity tolerance, absolute in coordinate units.
/// Callers keep coordinates O(1).
inline constexpr Scalar kGeomTol = 1e-12;

/// Intersection of all half-planes clipped to bounding_box, via incremental
/// Sutherland-Hodgman clipping, O(V) per plane.  Empty intersection is a
/// valid result, not an error.
ConvexPolygon halfplane_intersect(std::span<const HalfPlane> planes,
                                  const ConvexPolygon& bounding_box);

/// Clip a convex polygon against one half-plane.
ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& plane);

/// Nonnegative shoelace area; 0 for empty or degenerate polygons.
Scalar polygon_area(const ConvexPolygon& poly);

/// True iff point is within tol of the closed polygon.
bool contains(const ConvexPolygon& poly, const Vec2& point, Scalar tol);

/// All interior angles strictly below pi - angle_tol (no straight or
/// reflex vertices), at least 3 vertices.
bool is_strictly_convex(const ConvexPolygon& poly, Scalar angle_tol = 1e-9);

/// Distance from a point to the polygon boundary (edges and vertices).
Scalar boundary_distance(const ConvexPolygon& poly, const Vec2& point);

/// Convex hull of a point cloud (monotone chain), CCW, collinear points
/// dropped.
ConvexPolygon convex_hull(std::span<const Vec2> points);

} // namespace maflow
