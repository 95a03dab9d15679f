#pragma once

/// Dirichlet solver for convex and concave generalized solutions of
/// det D^2 f = mu on strictly convex polygonal domains, by monotone
/// nodal lifting: start from a steep convex paraboloid below the data and
/// raise each interior node until its Monge-Ampere atom matches the
/// target.  Also: envelope bounds for sign-changing right-hand sides and
/// the nonexistence certificate for nonpositive ones.

#include <utility>

#include "maflow/comparison.hpp"
#include "maflow/monge_ampere.hpp"

namespace maflow {

struct DirichletProblem {
    NodeSet nodes;          // domain polygon must be strictly convex
    AtomicMeasure target;   // nonnegative atom per interior node
    VecX boundary_values;   // indexed like nodes; interior entries ignored

    /// Throws InfeasibleDomain / invalid_argument on violated invariants.
    void validate() const;
};

struct SolverReport {
    int iterations = 0;        // completed Gauss-Seidel sweeps
    Scalar max_residual = 0.0; // max |atom - target| over interior nodes
    bool converged = false;
};

struct NotConvergedError : std::runtime_error {
    NotConvergedError(SolverReport r, PLFunction partial_)
        : std::runtime_error("solver did not converge: max residual " +
                             std::to_string(r.max_residual) + " after " +
                             std::to_string(r.iterations) + " sweeps"),
          report(r), partial(std::move(partial_)) {}
    SolverReport report;
    PLFunction partial;
};

struct SolverOptions {
    Scalar tol = 1e-8;   // atom residual tolerance
    int max_iters = 5000;
    /// Bisection stops when the value bracket shrinks below this (absolute,
    /// in value units) and the atom is within tol/10 of its target.
    Scalar value_tol = 0.0; // 0 -> tol / 10
};

/// Convex generalized solution: nodal-convex f with f = g on the boundary
/// and |atom_i - mu_i| <= tol at every interior node.  Throws
/// NotConverged (carrying the report and partial iterate) or
/// InfeasibleDomain.
std::pair<PLFunction, SolverReport> solve_convex(const DirichletProblem& p,
                                                 const SolverOptions& opt);
std::pair<PLFunction, SolverReport> solve_convex(const DirichletProblem& p, Scalar tol,
                                                 int max_iters);

/// Concave counterpart, by negating boundary data, solving convex, and
/// negating the result.
std::pair<PLFunction, SolverReport> solve_concave(const DirichletProblem& p,
                                                  const SolverOptions& opt);
std::pair<PLFunction, SolverReport> solve_concave(const DirichletProblem& p, Scalar tol,
                                                  int max_iters);

struct EnvelopePair {
    PLFunction lower; // convex solution, below the input
    PLFunction upper; // concave solution, above the input
    SolverReport lower_report;
    SolverReport upper_report;
};

/// Convex/concave solutions sandwiching a PL function: targets are the
/// measures of f and -f, boundary values those of f.
EnvelopePair envelopes(const PLFunction& f, Scalar tol, int max_iters);

/// Grid variant: nodes are the cell centers (full-rectangle mask
/// required), targets the positive/negative parts of the discrete
/// Monge-Ampere density.
EnvelopePair envelopes(const GridField& f, Scalar tol, int max_iters);

struct CertificateReport {
    Scalar max_deviation_lower = 0.0; // max |Phi_conv - C|
    Scalar max_deviation_upper = 0.0; // max |Phi_conc - C|
    Scalar contradiction_mass = 0.0;  // integral of (f_rhs)^-
    bool certified = false;
    SolverReport lower_report;
    SolverReport upper_report;
};

/// Nonexistence certificate for det D^2 f = f_rhs <= 0 (not identically
/// zero) with constant boundary value C: both envelope solutions for the
/// vanishing positive part collapse to the constant C, so any solution
/// would be constant, contradicting f_rhs != 0.  Throws
/// HypothesisViolated if f_rhs has a positive part above 1e-12 or
/// vanishes identically.
CertificateReport nonexistence_certificate(const GridField& f_rhs, Scalar boundary_constant,
                                           Scalar tol);

/// NodeSet over the cell centers of a full-rectangle grid; the outermost
/// ring is the boundary.
NodeSet nodeset_from_grid(const GridField& g);

} // namespace maflow
