#pragma once

/// 2D incompressible Navier-Stokes at unit viscosity on a staggered MAC
/// grid, with stream-function and pressure diagnostics: the identity
/// det D^2 phi = (1/2) Delta p, the location of an interior zero of
/// Delta p, and one-signedness verdicts.
///
/// Grid layout: p at cell centers (nx x ny); u at vertical faces, v at
/// horizontal faces.  For the no-slip box u is (nx+1) x ny with the wall
/// columns pinned to zero; for the x-periodic channel u is nx x ny and
/// face i sits between cells i-1 and i (mod nx).  v is nx x (ny+1) with
/// wall rows pinned in both modes.

#include <utility>

#include "maflow/comparison.hpp"
#include "maflow/types.hpp"

namespace maflow {

enum class BoundaryKind { NoSlipBox, ChannelPeriodicX };

struct InitialCondition {
    enum class Kind { Rest, Shear, TaylorGreen };
    Kind kind = Kind::Rest;
    int mode_n = 1;        // shear mode number
    Scalar amplitude = 1.0;
};

struct FluidConfig {
    int nx = 16, ny = 16;
    Scalar lx = 1.0, ly = 1.0;
    Scalar dt = 1e-4;
    BoundaryKind boundary = BoundaryKind::NoSlipBox;
    InitialCondition ic;

    [[nodiscard]] Scalar h() const { return lx / nx; }
    /// nx, ny >= 16, square cells, diffusive CFL dt <= 0.25 h^2 (unit
    /// viscosity), initial condition compatible with the boundary kind.
    void validate() const;
};

struct FluidState {
    ArrXX u, v, p;
    Scalar t = 0.0;
};

struct SignSummary {
    Scalar min = 0.0, max = 0.0, fraction_positive = 0.0;
};

struct PressureDiagnostics {
    GridField delta_p;
    GridField stream;
    GridField det_hess_stream;
    // Discrete Laplacian of the stream function in the wall-consistent
    // (ghost-reflected) form, i.e. minus the vorticity; its cell sums
    // telescope to the boundary circulation, which vanishes for H^1_0
    // states.
    GridField stream_laplacian;
    Scalar identity_residual_inf = 0.0;
    Vec2 zero_location = Vec2::Zero();
    SignSummary sign_summary;
};

struct SignVerdict {
    enum class Outcome { ZeroLocated, ImpossibleNegative, ImpossiblePositive };
    Outcome outcome = Outcome::ZeroLocated;
    Vec2 zero_location = Vec2::Zero();
    Scalar min_abs_delta_p = 0.0;
    // Divergence-theorem pair, reported for one-signed positive fields:
    // the integral of Delta(stream) over cells (must be ~0) against the
    // integral of its absolute value.
    Scalar stream_laplacian_integral = 0.0;
    Scalar stream_laplacian_abs_integral = 0.0;
};

/// Fields sampled from the configured initial condition; discretely
/// divergence-free by construction.
FluidState initial_state(const FluidConfig& cfg);

/// One explicit advection-diffusion step followed by a pressure-Poisson
/// projection.  Throws CFLViolation or PoissonNotConverged.
FluidState step(const FluidState& state, const FluidConfig& cfg);

/// Max-norm discrete divergence over cells.
Scalar divergence_inf(const FluidState& state, const FluidConfig& cfg);

/// Kinetic energy sum(u^2 + v^2) h^2 over faces.
Scalar kinetic_energy(const FluidState& state, const FluidConfig& cfg);

/// Stream function phi with u = (phi_y, -phi_x), at cell centers:
/// Delta phi = -omega with phi = 0 on no-slip walls; for the channel,
/// periodic in x with phi pinned to 0 at the bottom wall and to the
/// volume flux at the top.
GridField stream_function(const FluidState& state, const FluidConfig& cfg);

/// Delta p = -div[(u . grad) u] by second-order differencing of the
/// face-based advection term (not by differentiating the projection
/// pressure).
GridField pressure_laplacian(const FluidState& state, const FluidConfig& cfg);

/// Full diagnostics: stream, det D^2(stream), Delta p, and the inf-norm
/// of det D^2 phi - (1/2) Delta p over cells.
PressureDiagnostics ma_identity_residual(const FluidState& state, const FluidConfig& cfg);

/// In-domain cell center minimizing |Delta p| and the minimum value.
std::pair<Vec2, Scalar> find_zero_of_laplacian(const PressureDiagnostics& diag);

/// Sign verdict for Delta p: one-signed negative or positive fields are
/// flagged impossible (the latter with the divergence-theorem pair);
/// otherwise the located zero is reported.
SignVerdict sign_diagnostic(const PressureDiagnostics& diag, Scalar tol);

/// Decaying shear profile amplitude * exp(-(n pi)^2 t) * sin(n pi y).
Scalar shear_flow_reference(Scalar y, Scalar t, int mode_n, Scalar amplitude);

} // namespace maflow
