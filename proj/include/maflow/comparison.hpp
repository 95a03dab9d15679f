#pragma once

/// Grid fields, discrete Hessian determinants, the signed parts of the
/// Monge-Ampere measure, and verifiers for the comparison principles
/// (classical, strong, and the generalised form that also covers
/// nonconvex masked domains).

#include <optional>
#include <vector>

#include "maflow/monge_ampere.hpp"
#include "maflow/types.hpp"

namespace maflow {

/// Scalar field sampled at cell centers of a uniform grid: cell (i,j) sits
/// at origin + ((i+1/2)h, (j+1/2)h).  A per-cell mask carves nonconvex
/// (e.g. L-shaped) domains out of the rectangle; masked-out cells hold no
/// data.  The in-domain region must be connected.
class GridField {
public:
    GridField() = default;
    GridField(int nx, int ny, Scalar h, Vec2 origin);
    GridField(int nx, int ny, Scalar h, Vec2 origin, MaskXX mask);

    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] Scalar h() const { return h_; }
    [[nodiscard]] const Vec2& origin() const { return origin_; }

    [[nodiscard]] Scalar x(int i) const { return origin_.x() + (i + 0.5) * h_; }
    [[nodiscard]] Scalar y(int j) const { return origin_.y() + (j + 0.5) * h_; }
    [[nodiscard]] Vec2 cell_center(int i, int j) const { return {x(i), y(j)}; }

    [[nodiscard]] Scalar operator()(int i, int j) const { return values_(i, j); }
    Scalar& operator()(int i, int j) { return values_(i, j); }
    [[nodiscard]] const ArrXX& values() const { return values_; }
    ArrXX& values() { return values_; }

    [[nodiscard]] bool in_domain(int i, int j) const {
        return i >= 0 && i < nx_ && j >= 0 && j < ny_ && mask_(i, j);
    }
    /// In-domain cell with an out-of-domain 4-neighbor (or grid edge).
    [[nodiscard]] bool is_boundary_cell(int i, int j) const {
        return in_domain(i, j) && !(in_domain(i - 1, j) && in_domain(i + 1, j) &&
                                    in_domain(i, j - 1) && in_domain(i, j + 1));
    }
    [[nodiscard]] const MaskXX& mask() const { return mask_; }
    [[nodiscard]] int in_domain_count() const { return in_domain_count_; }

    /// Fill values from a function of the cell center (in-domain cells only).
    template <typename F>
    void fill(F&& f) {
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j)
                if (mask_(i, j)) values_(i, j) = f(x(i), y(j));
    }

private:
    void validate() const;

    int nx_ = 0, ny_ = 0;
    Scalar h_ = 0.0;
    Vec2 origin_ = Vec2::Zero();
    ArrXX values_;
    MaskXX mask_;
    int in_domain_count_ = 0;
};

/// L-shaped mask: the rectangle minus its upper-right quadrant.
MaskXX l_shaped_mask(int nx, int ny);

/// Outcome of a minimum-location comparison.
struct ComparisonVerdict {
    bool holds = false;
    std::optional<Vec2> interior_min_location;
    Scalar boundary_min = 0.0;
    Scalar interior_min = 0.0;
    Scalar margin = 0.0; // interior_min - boundary_min
};

/// Central-difference f_xx f_yy - f_xy^2 on all in-domain cells;
/// second-order one-sided stencils where centered neighbors are masked.
/// Throws TooCoarse if nx or ny < 5 or an in-domain run is shorter than 3.
GridField hessian_det(const GridField& f);

/// [Mf]^+: density (det D^2 f)^+ restricted to cells where the discrete
/// Hessian is positive definite (f_xx > 0 and det > 0), one atom of
/// det * h^2 per cell.  Ties within 1e-12 of zero count as indefinite.
AtomicMeasure positive_part_measure(const GridField& f);

/// [Mf]^-: density (det D^2(-f))^+, i.e. det * h^2 over negative-definite
/// cells (f_xx < 0 and det > 0).
AtomicMeasure negative_part_measure(const GridField& f);

/// Cell atoms reassigned to the nearest interior node of ns (ties to the
/// lowest index).  Total mass is preserved exactly.
AtomicMeasure lump_to_nodes(const AtomicMeasure& cell_atoms, const GridField& grid,
                            const NodeSet& ns);

/// Comparison principle: with M(phi) <= M(psi) atomwise (pre), min(phi-psi)
/// over all nodes is attained on the boundary.  Throws PreconditionFailed
/// if the measure ordering fails by more than tol or an input is not
/// nodal-convex.
ComparisonVerdict check_comparison(const PLFunction& phi, const PLFunction& psi, Scalar tol);

/// Strong form: phi - (psi + delta|x - x0|^2) must not attain its minimum
/// at an interior node.
ComparisonVerdict check_strong_comparison(const PLFunction& phi, const PLFunction& psi,
                                          Scalar delta, const Vec2& x0, Scalar tol);

/// Generalised principle on a (possibly nonconvex) masked grid:
/// [M(phi)]^+ lumped onto psi's interior nodes must be <= M(psi) atomwise
/// (pre); then min(phi - psi) over in-domain cells is attained at a
/// boundary cell.  psi is evaluated at cell centers through its envelope.
ComparisonVerdict check_generalised(const GridField& phi, const PLFunction& psi, Scalar tol);

/// Concave variant: [M(phi)]^- <= M(-psi) and maxima instead of minima.
ComparisonVerdict check_generalised_concave(const GridField& phi, const PLFunction& psi,
                                            Scalar tol);

} // namespace maflow
