#pragma once

#include <span>

#include "fbenn/diffusion.hpp"
#include "fbenn/field.hpp"
#include "fbenn/fracops.hpp"

namespace fbenn {

/// Parameters of phi_t + 1/2 D^p (D^{1-p} phi)^2 - alpha phi_xx = 0.
/// D is the Caputo derivative on the given side and terminal, scaled by lam^{order-1}.
struct ModelParams {
    double alpha = 1.0;
    double p = 0.0;
    double b = 0.0;
    double lam = 1.0;
    Terminal terminal = Terminal::unbounded();
    Side side = Side::Left;

    void validate() const;
    FracSpec derivative(double order) const;
    /// +1 on the left side, -1 on the right side (sign of D^1 relative to d/dx).
    double orientation() const { return side == Side::Left ? 1.0 : -1.0; }
};

/// phi = -2 alpha D^p log(b + w).
Field transform(const Field& w, const ModelParams& params);

/// phi = -2 alpha D^p w, valid for max|w| <= small_amplitude_limit.
inline constexpr double small_amplitude_limit = 0.01;
Field transform_small_amplitude(const Field& w, const ModelParams& params);

/// w0 = exp(-I^p phi0 / (2 alpha)), with I^0 the identity.
Field initial_condition_map(const Field& phi0, const ModelParams& params);

/// Maps phi0 to w0, evolves w0 with the heat kernel and transforms back with the given shift.
Field solve_fbenn_via_transform(const Field& phi0, const ModelParams& params, double t,
                                double shift = 1.0);

/// Transform (with b = 0) of a superposition of exponential modes.
Field interact(std::span<const ExpMode> modes, const ModelParams& params, const Grid& grid,
               double t);

/// Closed form of -2 alpha D^p log(b + sum w_i) for p in {0, 1}, evaluated without overflow.
Field mode_transform_exact(std::span<const ExpMode> modes, const ModelParams& params,
                           const Grid& grid, double t);

/// D^p phi0 for a solution phi0 of the p = 0 equation.
Field order_shift_from_nde(const Field& phi0, double p, const ModelParams& params);
/// D^{p-1} phi1 (a fractional integral of order 1 - p) for a solution phi1 of the p = 1 equation.
Field order_shift_from_burgers(const Field& phi1, double p, const ModelParams& params);

/// Relative residual of u_t + (D^{1-p} v) u_x - alpha u_xx = 0 over consecutive slices.
double companion_residual(const Trajectory& v, const Trajectory& u, const ModelParams& params);

/// phi = -2 alpha D^p log u + v slice by slice, after checking u against v.
Trajectory generate_new_solution(const Trajectory& v, const Trajectory& u,
                                 const ModelParams& params, double tolerance = 1e-4);

struct BacklundResiduals {
    double spatial = 0.0;
    double temporal = 0.0;
};

/// Relative residuals of w_x + (b+w) g/(2 alpha) = 0 and w_t + [(b+w) g]_x / 2 = 0 with
/// g = D^{1-p} phi. On the right side g carries the sign of D^1 = -d/dx, which is compensated.
BacklundResiduals backlund_check(const Trajectory& w, const Trajectory& phi,
                                 const ModelParams& params);

}  // namespace fbenn
