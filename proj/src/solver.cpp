#include "maflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maflow/errors.hpp"

namespace maflow {

void DirichletProblem::validate() const {
    if (target.masses.size() != nodes.size())
        throw std::invalid_argument("DirichletProblem: target size mismatch");
    if (boundary_values.size() != nodes.size())
        throw std::invalid_argument("DirichletProblem: boundary_values size mismatch");
    for (int i = 0; i < nodes.size(); ++i) {
        if (nodes.is_boundary(i)) {
            if (!std::isfinite(boundary_values[i]))
                throw std::invalid_argument("DirichletProblem: non-finite boundary value");
            if (target.masses[i] != 0.0)
                throw std::invalid_argument("DirichletProblem: target mass on a boundary node");
        } else if (!(target.masses[i] >= 0.0) || !std::isfinite(target.masses[i])) {
            throw std::invalid_argument("DirichletProblem: target masses must be >= 0 and finite");
        }
    }
    if (!is_strictly_convex(nodes.domain()))
        throw InfeasibleDomainError("DirichletProblem: domain polygon is not strictly convex");
}

namespace {

// Gauss-Seidel nodal lifting in normalized coordinates.  Masses and value
// updates are tracked in normalized units (areas scale by scale^2) and
// mapped back on exit.
class LiftingSolver {
public:
    LiftingSolver(const DirichletProblem& p, const SolverOptions& opt)
        : problem_(p), opt_(opt), n_(p.nodes.size()) {
        scale2_ = p.nodes.scale() * p.nodes.scale();
        pts_.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) pts_[static_cast<std::size_t>(i)] = p.nodes.normalized(i);
        target_ = p.target.masses * scale2_; // atoms in normalized gradient units
        order_.resize(static_cast<std::size_t>(n_));
        value_tol_ = opt.value_tol > 0 ? opt.value_tol : opt.tol / 10.0;
    }

    std::pair<PLFunction, SolverReport> run() {
        initialize();
        SolverReport report;
        for (int sweep = 0; sweep < opt_.max_iters; ++sweep) {
            const Scalar max_update = do_sweep();
            report.iterations = sweep + 1;
            // The residual pass costs a full set of atom evaluations; only
            // candidate-final sweeps pay for it.
            if (max_update < opt_.tol / 10.0) {
                report.max_residual = max_residual() / scale2_;
                if (report.max_residual <= opt_.tol) {
                    report.converged = true;
                    return {PLFunction(problem_.nodes, values_), report};
                }
            }
        }
        report.max_residual = max_residual() / scale2_;
        report.converged = false;
        throw NotConvergedError(report, PLFunction(problem_.nodes, values_));
    }

private:
    const detail::NeighborOrder& neighbor_order(int i) {
        auto& ord = order_[static_cast<std::size_t>(i)];
        if (ord.idx.empty()) ord = detail::neighbor_order(pts_, i);
        return ord;
    }

    Scalar atom(int i) { return area_(pts_, values_, i, 0.0, neighbor_order(i)); }

    // Steep initial paraboloid K(|x - c|^2 - R^2) + min g on interior
    // nodes, boundary data exact.  K doubles until every atom clears its
    // target, which makes the start a subsolution.
    void initialize() {
        values_ = VecX::Zero(n_);
        Scalar min_g = std::numeric_limits<Scalar>::infinity();
        for (int i = 0; i < n_; ++i)
            if (problem_.nodes.is_boundary(i)) min_g = std::min(min_g, problem_.boundary_values[i]);

        Vec2 c = Vec2::Zero();
        for (const Vec2& p : pts_) c += p;
        c /= static_cast<Scalar>(n_);
        Scalar R2 = 0.0;
        for (const Vec2& p : pts_) R2 = std::max(R2, (p - c).squaredNorm());

        Scalar K = 1.0;
        for (int attempt = 0; attempt < 60; ++attempt) {
            for (int i = 0; i < n_; ++i) {
                values_[i] = problem_.nodes.is_boundary(i)
                                 ? problem_.boundary_values[i]
                                 : K * ((pts_[static_cast<std::size_t>(i)] - c).squaredNorm() - R2) +
                                       min_g;
            }
            bool subsolution = true;
            for (int i = 0; i < n_ && subsolution; ++i) {
                if (problem_.nodes.is_boundary(i)) continue;
                if (atom(i) < target_[i]) subsolution = false;
            }
            if (subsolution) return;
            K *= 2.0;
        }
        throw InfeasibleDomainError("solve_convex: could not construct an initial subsolution");
    }

    // Largest lift of node i keeping atom(i) >= target_i, by doubling then
    // bisection on the value.  For mu = 0 the root is the envelope of the
    // other nodes, approached to value_tol; the mass band would stop
    // O(sqrt(tol)) short of it.
    Scalar lift_node(int i) {
        const Scalar start = values_[i];
        const Scalar mu = target_[i];
        const Scalar mass_tol = opt_.tol / 10.0 * scale2_;

        const Scalar a0 = atom(i);
        if (mu > 0.0 && std::abs(a0 - mu) <= mass_tol) return 0.0;
        if (mu == 0.0 && a0 <= 0.0) return 0.0;

        Scalar lo = start;
        Scalar hi = std::max(values_.maxCoeff(), start) + 1.0;
        Scalar step = std::max(2.0 * last_step_[static_cast<std::size_t>(i)], 16.0 * value_tol_);
        Scalar probe = start;
        while (probe < hi) {
            probe = std::min(probe + step, hi);
            values_[i] = probe;
            const Scalar a = atom(i);
            if (a < mu || (mu == 0.0 && a <= 0.0)) break;
            lo = probe;
            step *= 2.0;
        }
        hi = probe;

        // At most 10 halvings per sweep: early lifts only need to make
        // progress, and the final sweeps arrive with brackets already near
        // value_tol, so full precision is still reached.
        const Scalar width_floor = std::max(value_tol_, (hi - lo) / 1024.0);
        while (hi - lo > width_floor) {
            const Scalar mid = 0.5 * (lo + hi);
            values_[i] = mid;
            const Scalar a = atom(i);
            if (a >= mu && !(mu == 0.0 && a <= 0.0)) {
                lo = mid;
                if (mu > 0.0 && std::abs(a - mu) <= mass_tol) break;
            } else {
                hi = mid;
            }
        }
        values_[i] = lo;
        last_step_[static_cast<std::size_t>(i)] = std::max(lo - start, 1e-12);
        return lo - start;
    }

    Scalar do_sweep() {
        if (last_step_.empty()) last_step_.assign(static_cast<std::size_t>(n_), 1.0);
        Scalar max_update = 0.0;
        for (int i = 0; i < n_; ++i) {
            if (problem_.nodes.is_boundary(i)) continue;
            const Scalar d = lift_node(i);
            if (d < -1e-12)
                throw std::logic_error("solve_convex: lifting decreased a nodal value");
            max_update = std::max(max_update, d);
        }
        return max_update;
    }

    Scalar max_residual() {
        Scalar r = 0.0;
        for (int i = 0; i < n_; ++i) {
            if (problem_.nodes.is_boundary(i)) continue;
            r = std::max(r, std::abs(atom(i) - target_[i]));
        }
        return r;
    }

    const DirichletProblem& problem_;
    SolverOptions opt_;
    int n_;
    Scalar scale2_ = 1.0;
    Scalar value_tol_ = 1e-9;
    std::vector<Vec2> pts_;
    VecX values_;
    VecX target_;
    std::vector<detail::NeighborOrder> order_;
    std::vector<Scalar> last_step_;
    detail::SubdiffArea area_;
};

} // namespace

std::pair<PLFunction, SolverReport> solve_convex(const DirichletProblem& p,
                                                 const SolverOptions& opt) {
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_convex: tol must be > 0");
    p.validate();
    LiftingSolver solver(p, opt);
    return solver.run();
}

std::pair<PLFunction, SolverReport> solve_convex(const DirichletProblem& p, Scalar tol,
                                                 int max_iters) {
    return solve_convex(p, SolverOptions{tol, max_iters, 0.0});
}

std::pair<PLFunction, SolverReport> solve_concave(const DirichletProblem& p,
                                                  const SolverOptions& opt) {
    DirichletProblem neg{p.nodes, p.target, -p.boundary_values};
    auto [f, report] = solve_convex(neg, opt);
    return {PLFunction(f.nodes, -f.values), report};
}

std::pair<PLFunction, SolverReport> solve_concave(const DirichletProblem& p, Scalar tol,
                                                  int max_iters) {
    return solve_concave(p, SolverOptions{tol, max_iters, 0.0});
}

EnvelopePair envelopes(const PLFunction& f, Scalar tol, int max_iters) {
    const NodeSet& ns = f.nodes;
    VecX g = f.values;

    AtomicMeasure pos = ma_measure(f);
    AtomicMeasure neg = ma_measure(PLFunction(ns, -f.values));

    DirichletProblem lower{ns, pos, g};
    DirichletProblem upper{ns, neg, g};
    auto [lo, lo_rep] = solve_convex(lower, SolverOptions{tol, max_iters, 0.0});
    auto [hi, hi_rep] = solve_concave(upper, SolverOptions{tol, max_iters, 0.0});
    return {std::move(lo), std::move(hi), lo_rep, hi_rep};
}

NodeSet nodeset_from_grid(const GridField& g) {
    if (g.in_domain_count() != g.nx() * g.ny())
        throw InfeasibleDomainError("nodeset_from_grid: masked grids are not strictly convex");
    std::vector<Vec2> pts;
    std::vector<bool> bnd;
    pts.reserve(static_cast<std::size_t>(g.nx()) * g.ny());
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            pts.push_back(g.cell_center(i, j));
            bnd.push_back(i == 0 || i == g.nx() - 1 || j == 0 || j == g.ny() - 1);
        }
    ConvexPolygon domain = make_box(g.cell_center(0, 0), g.cell_center(g.nx() - 1, g.ny() - 1));
    return NodeSet(std::move(pts), std::move(bnd), std::move(domain));
}

namespace {

// Cell values and signed-part atoms transferred onto the center-lattice
// node set; cell (i,j) maps to node i*ny + j.
VecX grid_values_as_nodes(const GridField& g) {
    VecX v(static_cast<Eigen::Index>(g.nx()) * g.ny());
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) v[static_cast<Eigen::Index>(i) * g.ny() + j] = g(i, j);
    return v;
}

} // namespace

EnvelopePair envelopes(const GridField& f, Scalar tol, int max_iters) {
    NodeSet ns = nodeset_from_grid(f);
    VecX g = grid_values_as_nodes(f);

    // Signed parts of the discrete density; boundary-cell mass moves to the
    // nearest interior node so nothing is lost.
    AtomicMeasure pos = lump_to_nodes(positive_part_measure(f), f, ns);
    AtomicMeasure neg = lump_to_nodes(negative_part_measure(f), f, ns);

    DirichletProblem lower{ns, pos, g};
    DirichletProblem upper{ns, neg, g};
    auto [lo, lo_rep] = solve_convex(lower, SolverOptions{tol, max_iters, 0.0});
    auto [hi, hi_rep] = solve_concave(upper, SolverOptions{tol, max_iters, 0.0});
    return {std::move(lo), std::move(hi), lo_rep, hi_rep};
}

CertificateReport nonexistence_certificate(const GridField& f_rhs, Scalar boundary_constant,
                                           Scalar tol) {
    Scalar max_val = -std::numeric_limits<Scalar>::infinity();
    Scalar neg_mass = 0.0;
    for (int i = 0; i < f_rhs.nx(); ++i)
        for (int j = 0; j < f_rhs.ny(); ++j) {
            if (!f_rhs.in_domain(i, j)) continue;
            max_val = std::max(max_val, f_rhs(i, j));
            neg_mass += std::max(-f_rhs(i, j), 0.0) * f_rhs.h() * f_rhs.h();
        }
    if (max_val > 1e-12)
        throw HypothesisViolatedError("nonexistence_certificate: right-hand side has a positive part");
    if (neg_mass <= 1e-12)
        throw HypothesisViolatedError("nonexistence_certificate: right-hand side vanishes");

    NodeSet ns = nodeset_from_grid(f_rhs);
    VecX g = VecX::Constant(ns.size(), boundary_constant);
    DirichletProblem p{ns, AtomicMeasure::zeros(ns.size()), g};

    // The certificate asserts machine-level collapse to the constant, so the
    // envelope solves run far below the caller's tolerance.
    SolverOptions opt{std::min(tol, 1e-13), 100000, 1e-15 * std::max(1.0, std::abs(boundary_constant))};
    auto [lo, lo_rep] = solve_convex(p, opt);
    auto [hi, hi_rep] = solve_concave(p, opt);

    CertificateReport rep;
    rep.lower_report = lo_rep;
    rep.upper_report = hi_rep;
    rep.contradiction_mass = neg_mass;
    rep.max_deviation_lower = (lo.values.array() - boundary_constant).abs().maxCoeff();
    rep.max_deviation_upper = (hi.values.array() - boundary_constant).abs().maxCoeff();
    rep.certified = rep.max_deviation_lower < 1e-12 && rep.max_deviation_upper < 1e-12;
    return rep;
}

} // namespace maflow
