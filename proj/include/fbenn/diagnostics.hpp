#pragma once

#include <vector>

#include "fbenn/field.hpp"
#include "fbenn/hopf_cole.hpp"

namespace fbenn {

/// I = integral of D^{1-p} phi over the grid (trapezoid).
double mass_invariant(const Field& phi, const ModelParams& params);
/// K = 1/2 integral of (D^{1-p} phi)^2.
double energy(const Field& phi, const ModelParams& params);
/// alpha integral of (D^{2-p} phi)^2, with D^{2-p} phi taken as d/dx D^{1-p} phi.
double dissipation_rate(const Field& phi, const ModelParams& params);
/// True when D^{1-p} phi and its derivative vanish at both ends to tol relative to their scale.
bool decay_conditions_hold(const Field& phi, const ModelParams& params, double tol = 1e-6);

struct ConservationReport {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    /// max |I(t) - I(0)| / max(|I(0)|, scale of D^{1-p} phi).
    double mass_drift = 0.0;
    bool energy_monotone = true;
    /// False when some slice violates the decay conditions; the invariants are then indicative only.
    bool decay_ok = true;
};

/// Energy monotonicity uses K(t_{k+1}) <= K(t_k) + 1e-12 K(0).
ConservationReport conservation_report(const Trajectory& traj, const ModelParams& params);

/// Re = phi x^p / (alpha lam^{1+p}).
double reynolds_number(double phi_scale, double x_scale, const ModelParams& params);

struct AsymptoticFit {
    double exponent_x = 0.0;
    double exponent_t = 0.0;
    /// Reynolds number from the final peak of D^{1-p} phi and the ramp length.
    double reynolds = 0.0;
    /// Foot of the ramp and its length at the final time.
    double foot = 0.0;
    double ramp_length = 0.0;
};

/// Fits phi_max ~ t^e over t in [t_end/10, t_end] and the ramp profile of the final slice.
/// The ramp of g = D^{1-p} phi is located by a linear fit of g on [foot, peak]; phi on
/// s = x - foot in [10 dx, L/2] is then fitted by A s^e + B s^{-p}.
AsymptoticFit asymptotic_profile_fit(const Trajectory& traj, const ModelParams& params);

/// Log-log fit of phi_max(t) over t in [t_end/10, t_end].
double peak_decay_exponent(const Trajectory& traj);

/// Ramp exponent of a single slice (see asymptotic_profile_fit).
struct RampFit {
    double exponent = 0.0;
    double foot = 0.0;
    double length = 0.0;
    double peak = 0.0;
};
RampFit ramp_fit(const Field& phi, const ModelParams& params);

/// Coefficients of phi_t + alpha_nl phi phi_x - beta phi_xx = 0.
struct RawCoefficients {
    double alpha_nl = 1.0;
    double beta = 1.0;
};

/// Raw quantities are scale times normalized ones: phi = scale_phi psi, t = scale_t tau.
struct NormalizationScales {
    double scale_phi = 1.0;
    double scale_t = 1.0;
};

NormalizationScales normalize(const RawCoefficients& raw);
/// Raw field from a normalized one (values and time scaled).
Field denormalize_field(const Field& psi, const NormalizationScales& s);
/// Normalized field from a raw one.
Field normalize_field(const Field& phi, const NormalizationScales& s);

}  // namespace fbenn
