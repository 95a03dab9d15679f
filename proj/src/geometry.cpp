#include "maflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maflow {

namespace {

Scalar cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Scalar point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const Scalar len2 = ab.squaredNorm();
    if (len2 <= 0.0) return (p - a).norm();
    Scalar t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// Drop consecutive duplicates (absolute tolerance) and collinear middle
// vertices (turn angle relative to the edge lengths, so genuinely tiny
// polygons keep their interior).
void tidy(std::vector<Vec2>& v) {
    if (v.size() < 2) return;
    std::vector<Vec2> out;
    out.reserve(v.size());
    for (const Vec2& p : v) {
        if (out.empty() || (p - out.back()).norm() > kGeomTol) out.push_back(p);
    }
    while (out.size() > 1 && (out.front() - out.back()).norm() <= kGeomTol) out.pop_back();
    if (out.size() >= 3) {
        std::vector<Vec2> slim;
        slim.reserve(out.size());
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& prev = out[(i + n - 1) % n];
            const Vec2& cur = out[i];
            const Vec2& next = out[(i + 1) % n];
            const Vec2 e0 = cur - prev;
            const Vec2 e1 = next - cur;
            const Scalar scale = std::max(e0.norm() * e1.norm(), kGeomTol);
            if (std::abs(cross2(e0, e1)) > kGeomTol * scale) slim.push_back(cur);
        }
        if (slim.size() >= 3) {
            out = std::move(slim);
        } else if (out.size() >= 3 && polygon_area(ConvexPolygon(out)) <= kGeomTol * kGeomTol) {
            // A genuinely flat ring degenerates to its extreme points.
            auto [mn, mx] = std::minmax_element(
                out.begin(), out.end(), [](const Vec2& a, const Vec2& b) {
                    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
                });
            out = {*mn, *mx};
        }
    }
    v = std::move(out);
}

} // namespace

ConvexPolygon make_box(const Vec2& lo, const Vec2& hi) {
    return ConvexPolygon({Vec2(lo.x(), lo.y()), Vec2(hi.x(), lo.y()), Vec2(hi.x(), hi.y()),
                          Vec2(lo.x(), hi.y())});
}

ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& plane) {
    const std::size_t n = poly.vertices.size();
    if (n == 0) return {};
    std::vector<Vec2> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        const Scalar da = plane.normal.dot(a) - plane.offset;
        const Scalar db = plane.normal.dot(b) - plane.offset;
        const bool ina = da <= kGeomTol;
        const bool inb = db <= kGeomTol;
        if (ina) out.push_back(a);
        if (ina != inb && std::abs(da - db) > 0.0) {
            const Scalar t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    ConvexPolygon res(std::move(out));
    tidy(res.vertices);
    return res;
}

ConvexPolygon halfplane_intersect(std::span<const HalfPlane> planes,
                                  const ConvexPolygon& bounding_box) {
    ConvexPolygon poly = bounding_box;
    for (const HalfPlane& hp : planes) {
        if (poly.empty()) break;
        poly = clip(poly, hp);
    }
    return poly;
}

Scalar polygon_area(const ConvexPolygon& poly) {
    const std::size_t n = poly.vertices.size();
    if (n < 3) return 0.0;
    Scalar s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        s += cross2(a, b);
    }
    return std::abs(s) * 0.5;
}

Scalar boundary_distance(const ConvexPolygon& poly, const Vec2& point) {
    const std::size_t n = poly.vertices.size();
    if (n == 0) return std::numeric_limits<Scalar>::infinity();
    if (n == 1) return (point - poly.vertices[0]).norm();
    Scalar d = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        d = std::min(d, point_segment_distance(point, poly.vertices[i], poly.vertices[(i + 1) % n]));
    }
    return d;
}

bool contains(const ConvexPolygon& poly, const Vec2& point, Scalar tol) {
    const std::size_t n = poly.vertices.size();
    if (n == 0) return false;
    if (n < 3) return boundary_distance(poly, point) <= tol;
    // CCW polygon: inside iff not on the outside of any edge line.  Signed
    // edge distance handles the tol band; corner regions overshoot by at
    // most a factor sqrt(2), immaterial at the tolerances used here.
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.vertices[i];
        const Vec2& b = poly.vertices[(i + 1) % n];
        const Vec2 e = b - a;
        const Scalar len = e.norm();
        if (len <= kGeomTol) continue;
        const Scalar signed_dist = cross2(e, point - a) / len;
        if (signed_dist < -tol) return false;
    }
    return true;
}

ConvexPolygon convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return (a - b).norm() <= kGeomTol; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return ConvexPolygon(std::move(pts));

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower chain
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kGeomTol) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) { // upper chain
        while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= kGeomTol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return ConvexPolygon(std::move(hull));
}

bool is_strictly_convex(const ConvexPolygon& poly, Scalar angle_tol) {
    const std::size_t n = poly.vertices.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& prev = poly.vertices[(i + n - 1) % n];
        const Vec2& cur = poly.vertices[i];
        const Vec2& next = poly.vertices[(i + 1) % n];
        const Vec2 e0 = cur - prev;
        const Vec2 e1 = next - cur;
        // Exterior turn angle must exceed angle_tol (interior < pi - angle_tol).
        const Scalar turn = std::atan2(cross2(e0, e1), e0.dot(e1));
        if (!(turn > angle_tol)) return false;
    }
    return true;
}

} // namespace maflow
