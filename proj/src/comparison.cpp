#include "maflow/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "maflow/errors.hpp"

namespace maflow {

GridField::GridField(int nx, int ny, Scalar h, Vec2 origin)
    : GridField(nx, ny, h, origin, MaskXX::Constant(nx, ny, true)) {}

GridField::GridField(int nx, int ny, Scalar h, Vec2 origin, MaskXX mask)
    : nx_(nx), ny_(ny), h_(h), origin_(origin), mask_(std::move(mask)) {
    if (nx_ < 5 || ny_ < 5) throw std::invalid_argument("GridField: nx, ny must be >= 5");
    if (h_ <= 0.0) throw std::invalid_argument("GridField: h must be positive");
    if (mask_.rows() != nx_ || mask_.cols() != ny_)
        throw std::invalid_argument("GridField: mask shape mismatch");
    values_ = ArrXX::Zero(nx_, ny_);
    in_domain_count_ = static_cast<int>(mask_.count());
    validate();
}

void GridField::validate() const {
    if (in_domain_count_ == 0) throw std::invalid_argument("GridField: empty mask");
    // Connectivity sweep over the masked region.
    MaskXX seen = MaskXX::Constant(nx_, ny_, false);
    std::deque<std::pair<int, int>> queue;
    for (int i = 0; i < nx_ && queue.empty(); ++i)
        for (int j = 0; j < ny_ && queue.empty(); ++j)
            if (mask_(i, j)) {
                queue.emplace_back(i, j);
                seen(i, j) = true;
            }
    int reached = 0;
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        ++reached;
        const int di[] = {1, -1, 0, 0};
        const int dj[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int a = i + di[k], b = j + dj[k];
            if (a >= 0 && a < nx_ && b >= 0 && b < ny_ && mask_(a, b) && !seen(a, b)) {
                seen(a, b) = true;
                queue.emplace_back(a, b);
            }
        }
    }
    if (reached != in_domain_count_)
        throw std::invalid_argument("GridField: masked region is disconnected");
}

MaskXX l_shaped_mask(int nx, int ny) {
    MaskXX m = MaskXX::Constant(nx, ny, true);
    for (int i = nx / 2; i < nx; ++i)
        for (int j = ny / 2; j < ny; ++j) m(i, j) = false;
    return m;
}

namespace {

enum class Axis { X, Y };

// Second derivative along one axis: centered where possible, else a
// one-sided stencil (third-order 5-point, then second-order 4-point, then
// the 3-point fallback; all exact on quadratics).  Returns false if no
// stencil fits (run too short).
bool second_derivative(const GridField& f, int i, int j, Axis ax, Scalar& out) {
    const Scalar inv_h2 = 1.0 / (f.h() * f.h());
    auto at = [&](int k) { return ax == Axis::X ? f(i + k, j) : f(i, j + k); };
    auto ok = [&](int k) {
        return ax == Axis::X ? f.in_domain(i + k, j) : f.in_domain(i, j + k);
    };
    if (ok(-1) && ok(1)) {
        out = (at(1) - 2.0 * at(0) + at(-1)) * inv_h2;
        return true;
    }
    for (int s : {1, -1}) {
        if (!ok(s) || !ok(2 * s)) continue;
        if (ok(3 * s) && ok(4 * s)) {
            out = (35.0 * at(0) - 104.0 * at(s) + 114.0 * at(2 * s) - 56.0 * at(3 * s) +
                   11.0 * at(4 * s)) *
                  inv_h2 / 12.0;
            return true;
        }
        if (ok(3 * s)) {
            out = (2.0 * at(0) - 5.0 * at(s) + 4.0 * at(2 * s) - at(3 * s)) * inv_h2;
            return true;
        }
        out = (at(0) - 2.0 * at(s) + at(2 * s)) * inv_h2;
        return true;
    }
    return false;
}

// First derivative, same stencil policy (centered, else one-sided 3-point).
bool first_derivative_of(const GridField& g, const GridField& domain, int i, int j, Axis ax,
                         Scalar& out) {
    const Scalar inv_2h = 0.5 / g.h();
    auto at = [&](int k) { return ax == Axis::X ? g(i + k, j) : g(i, j + k); };
    auto ok = [&](int k) {
        return ax == Axis::X ? domain.in_domain(i + k, j) : domain.in_domain(i, j + k);
    };
    if (ok(-1) && ok(1)) {
        out = (at(1) - at(-1)) * inv_2h;
        return true;
    }
    for (int s : {1, -1}) {
        if (!ok(s) || !ok(2 * s)) continue;
        out = s * (-3.0 * at(0) + 4.0 * at(s) - at(2 * s)) * inv_2h;
        return true;
    }
    return false;
}

} // namespace

GridField hessian_det(const GridField& f) {
    if (f.nx() < 5 || f.ny() < 5) throw TooCoarseError("hessian_det: grid smaller than 5x5");

    // f_y on the whole domain first, so the mixed derivative is the
    // composition D_x(D_y f) with per-cell stencil choice.
    GridField fy(f.nx(), f.ny(), f.h(), f.origin(), f.mask());
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            if (!f.in_domain(i, j)) continue;
            Scalar d;
            if (!first_derivative_of(f, f, i, j, Axis::Y, d))
                throw TooCoarseError("hessian_det: in-domain run too short in y");
            fy(i, j) = d;
        }

    GridField out(f.nx(), f.ny(), f.h(), f.origin(), f.mask());
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            if (!f.in_domain(i, j)) continue;
            Scalar fxx, fyy, fxy;
            if (!second_derivative(f, i, j, Axis::X, fxx) ||
                !second_derivative(f, i, j, Axis::Y, fyy) ||
                !first_derivative_of(fy, f, i, j, Axis::X, fxy))
                throw TooCoarseError("hessian_det: in-domain run too short");
            out(i, j) = fxx * fyy - fxy * fxy;
        }
    return out;
}

namespace {

constexpr Scalar kDefinitenessTol = 1e-12;

AtomicMeasure signed_part_measure(const GridField& f, bool positive_definite) {
    const GridField det = hessian_det(f);
    const Scalar cell_area = f.h() * f.h();
    VecX masses = VecX::Zero(static_cast<Eigen::Index>(f.nx()) * f.ny());
    for (int i = 0; i < f.nx(); ++i)
        for (int j = 0; j < f.ny(); ++j) {
            if (!f.in_domain(i, j)) continue;
            Scalar fxx;
            if (!second_derivative(f, i, j, Axis::X, fxx)) continue;
            const Scalar d = det(i, j);
            if (d <= kDefinitenessTol) continue;
            const bool pd = fxx > kDefinitenessTol;
            const bool nd = fxx < -kDefinitenessTol;
            if ((positive_definite && pd) || (!positive_definite && nd))
                masses[static_cast<Eigen::Index>(i) * f.ny() + j] = d * cell_area;
        }
    return AtomicMeasure(std::move(masses));
}

} // namespace

AtomicMeasure positive_part_measure(const GridField& f) { return signed_part_measure(f, true); }

AtomicMeasure negative_part_measure(const GridField& f) { return signed_part_measure(f, false); }

AtomicMeasure lump_to_nodes(const AtomicMeasure& cell_atoms, const GridField& grid,
                            const NodeSet& ns) {
    std::vector<int> interior;
    for (int k = 0; k < ns.size(); ++k)
        if (!ns.is_boundary(k)) interior.push_back(k);
    if (interior.empty()) throw std::invalid_argument("lump_to_nodes: no interior nodes");

    AtomicMeasure out = AtomicMeasure::zeros(ns.size());
    for (int i = 0; i < grid.nx(); ++i)
        for (int j = 0; j < grid.ny(); ++j) {
            const Scalar m = cell_atoms.masses[static_cast<Eigen::Index>(i) * grid.ny() + j];
            if (m == 0.0) continue;
            const Vec2 c = grid.cell_center(i, j);
            int best = interior.front();
            Scalar best_d = std::numeric_limits<Scalar>::infinity();
            for (int k : interior) {
                const Scalar d = (ns.point(k) - c).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            out.masses[best] += m;
        }
    return out;
}

namespace {

void require_same_nodes(const PLFunction& a, const PLFunction& b, const char* who) {
    if (!(a.nodes == b.nodes))
        throw PreconditionFailedError(std::string(who) + ": functions on different node sets");
}

void require_measure_order(const VecX& lo, const VecX& hi, Scalar tol, const char* who) {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i] + tol)
            throw PreconditionFailedError(std::string(who) + ": measure ordering fails at node " +
                                          std::to_string(i) + " by " +
                                          std::to_string(lo[i] - hi[i]));
}

ComparisonVerdict min_location_verdict(const PLFunction& phi, const VecX& psi_values, Scalar tol) {
    const NodeSet& ns = phi.nodes;
    Scalar interior_min = std::numeric_limits<Scalar>::infinity();
    Scalar boundary_min = std::numeric_limits<Scalar>::infinity();
    int interior_argmin = -1;
    for (int i = 0; i < ns.size(); ++i) {
        const Scalar d = phi.values[i] - psi_values[i];
        if (ns.is_boundary(i)) {
            boundary_min = std::min(boundary_min, d);
        } else if (d < interior_min) {
            interior_min = d;
            interior_argmin = i;
        }
    }
    ComparisonVerdict v;
    v.boundary_min = boundary_min;
    v.interior_min = interior_min;
    v.margin = interior_min - boundary_min;
    v.holds = v.margin >= -tol;
    if (!v.holds && interior_argmin >= 0) v.interior_min_location = ns.point(interior_argmin);
    return v;
}

} // namespace

ComparisonVerdict check_comparison(const PLFunction& phi, const PLFunction& psi, Scalar tol) {
    require_same_nodes(phi, psi, "check_comparison");
    if (!is_nodal_convex(phi, 1e-9) || !is_nodal_convex(psi, 1e-9))
        throw PreconditionFailedError("check_comparison: input not nodal-convex");
    require_measure_order(ma_measure(phi).masses, ma_measure(psi).masses, tol, "check_comparison");
    return min_location_verdict(phi, psi.values, tol);
}

ComparisonVerdict check_strong_comparison(const PLFunction& phi, const PLFunction& psi,
                                          Scalar delta, const Vec2& x0, Scalar tol) {
    if (delta <= 0.0) throw std::invalid_argument("check_strong_comparison: delta must be > 0");
    require_same_nodes(phi, psi, "check_strong_comparison");
    if (!is_nodal_convex(phi, 1e-9) || !is_nodal_convex(psi, 1e-9))
        throw PreconditionFailedError("check_strong_comparison: input not nodal-convex");
    require_measure_order(ma_measure(phi).masses, ma_measure(psi).masses, tol,
                          "check_strong_comparison");
    VecX lifted = psi.values;
    for (int i = 0; i < psi.nodes.size(); ++i)
        lifted[i] += delta * (psi.nodes.point(i) - x0).squaredNorm();
    return min_location_verdict(phi, lifted, tol);
}

namespace {

ComparisonVerdict grid_extremum_verdict(const GridField& phi, const PLFunction& psi, Scalar tol,
                                        bool maximum) {
    // Concave psi is evaluated through the concave envelope -env(-psi).
    const EnvelopeEvaluator eval(maximum ? PLFunction(psi.nodes, -psi.values) : psi);
    const Scalar sign = maximum ? -1.0 : 1.0;
    auto psi_at = [&](const Vec2& c) { return maximum ? -eval(c) : eval(c); };
    Scalar interior_min = std::numeric_limits<Scalar>::infinity();
    Scalar boundary_min = std::numeric_limits<Scalar>::infinity();
    Vec2 interior_argmin = Vec2::Zero();
    for (int i = 0; i < phi.nx(); ++i)
        for (int j = 0; j < phi.ny(); ++j) {
            if (!phi.in_domain(i, j)) continue;
            const Vec2 c = phi.cell_center(i, j);
            const Scalar d = sign * (phi(i, j) - psi_at(c));
            if (phi.is_boundary_cell(i, j)) {
                boundary_min = std::min(boundary_min, d);
            } else if (d < interior_min) {
                interior_min = d;
                interior_argmin = c;
            }
        }
    ComparisonVerdict v;
    v.boundary_min = sign * boundary_min;
    v.interior_min = sign * interior_min;
    v.margin = interior_min - boundary_min;
    v.holds = v.margin >= -tol;
    if (!v.holds) v.interior_min_location = interior_argmin;
    return v;
}

} // namespace

ComparisonVerdict check_generalised(const GridField& phi, const PLFunction& psi, Scalar tol) {
    if (!is_nodal_convex(psi, 1e-9))
        throw PreconditionFailedError("check_generalised: psi not nodal-convex");
    const AtomicMeasure lumped = lump_to_nodes(positive_part_measure(phi), phi, psi.nodes);
    require_measure_order(lumped.masses, ma_measure(psi).masses, tol, "check_generalised");
    return grid_extremum_verdict(phi, psi, tol, false);
}

ComparisonVerdict check_generalised_concave(const GridField& phi, const PLFunction& psi,
                                            Scalar tol) {
    PLFunction neg_psi(psi.nodes, -psi.values);
    if (!is_nodal_convex(neg_psi, 1e-9))
        throw PreconditionFailedError("check_generalised_concave: psi not nodal-concave");
    const AtomicMeasure lumped = lump_to_nodes(negative_part_measure(phi), phi, psi.nodes);
    require_measure_order(lumped.masses, ma_measure(neg_psi).masses, tol,
                          "check_generalised_concave");
    return grid_extremum_verdict(phi, psi, tol, true);
}

} // namespace maflow
