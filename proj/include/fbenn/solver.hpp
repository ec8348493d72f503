#pragma once

#include <functional>
#include <utility>

#include "fbenn/field.hpp"
#include "fbenn/hopf_cole.hpp"

namespace fbenn {

/// phi_t = -1/2 D^p (D^{1-p} phi)^2 + alpha phi_xx.
Field fbenn_rhs(const Field& phi, const ModelParams& params);

/// Largest admissible time step 0.25 dx^2 / alpha.
double stability_limit(const Grid& grid, double alpha);

/// Dirichlet values (left, right) at time t.
using BoundaryProvider = std::function<std::pair<double, double>(double t)>;

struct IntegrateOptions {
    /// Keep every k-th step (the final step is always kept).
    std::size_t record_every = 1;
    /// Defaults to holding the end values of phi0.
    BoundaryProvider boundary;
    /// Called with the state after every step, and once with phi0.
    std::function<void(const Field&)> on_step;
};

/// Crank-Nicolson diffusion with Adams-Bashforth nonlinearity (Euler first step).
/// The step is shrunk so that it divides t_end.
Trajectory integrate(const Field& phi0, const ModelParams& params, double t_end, double dt,
                     const IntegrateOptions& options = {});

/// Max over consecutive slices of |(phi_{k+1} - phi_k)/dt - (rhs_k + rhs_{k+1})/2| on the interior.
double trajectory_residual(const Trajectory& traj, const ModelParams& params);

/// psi_t = -phi_bar_x D^{1-p} psi + alpha psi_xx (on the right side the sign of D^1 is compensated).
Field linearized_rhs(const Field& psi, const Field& phi_bar, const ModelParams& params);

/// Evolves psi0 with the linearized scheme along phi_bar, which must hold every time step.
Trajectory integrate_linearized(const Field& psi0, const Trajectory& phi_bar,
                                const ModelParams& params);

/// Solves u_t + (D^{1-p} v) u_x - alpha u_xx = 0 with the same time scheme as integrate.
Trajectory solve_companion(const Field& u0, const std::function<Field(double)>& v_at,
                           const ModelParams& params, double t_end, double dt,
                           std::size_t record_every = 1);

enum class Nonlocality { NearZero, NearOne };

/// First-order expansions in the order parameter using the log operator N:
/// NearZero (p = eps): -phi_x^2/2 + alpha phi_xx + eps [phi_x (N phi)_x - N(phi_x^2)/2]
/// NearOne (p = 1 - eps): -phi phi_x + alpha phi_xx + (1 - eps) [N(phi^2) - phi N phi]_x
Field weak_nonlocality_rhs(const Field& phi, const ModelParams& params, Nonlocality kind,
                           double eps);

/// Profiles phi(xi), xi = x - u t, of the travelling-wave equation
/// 1/2 D^p (D^{1-p} phi)^2 = alpha phi'' + u phi'.
struct TravellingWave {
    double p = 1.0;
    double u = 0.0;
    double alpha = 1.0;
    double C = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double a = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;

    /// p = 0: 2 u xi - 2 alpha log(exp(u (c + xi)/alpha) - 1) + C2.
    static TravellingWave nde(double u, double alpha, double c, double C2 = 0.0);
    /// p = 1: phi1 + (phi2 - phi1)/(1 + exp((phi2 - phi1) xi/(2 alpha))), speed (phi1 + phi2)/2.
    static TravellingWave burgers(double phi1, double phi2, double alpha);
    /// 0 < p < 1: -2/Gamma(2-p) (u xi + p u^2/alpha - (1-p) C) / (xi - a)^p.
    static TravellingWave fractional(double p, double u, double alpha, double C, double a);
};

double travelling_wave_eval(const TravellingWave& tw, double xi);
Field travelling_wave_field(const TravellingWave& tw, const Grid& xi);
/// Interior max of |1/2 D^p (D^{1-p} phi)^2 - alpha phi'' - u phi'|. For 0 < p < 1 the operators
/// use the terminal a, which must lie at least 10 dx left of the grid.
double travelling_wave_residual(const TravellingWave& tw, const Grid& xi);

struct SubstitutionReport {
    double original = 0.0;
    double substituted = 0.0;
    bool consistent = false;
};

/// Applies x -> y + A (t + B) with D^p phi -> D^p phi + A and compares FBENN residuals.
SubstitutionReport translation_substitution_check(const Trajectory& traj, double A, double B,
                                                  const ModelParams& params);

}  // namespace fbenn
