#pragma once

#include <span>

#include "fbenn/field.hpp"

namespace fbenn {

/// w(x,t) = a exp(-c x/(2 alpha) + c^2 t/(4 alpha) - b), an exact solution of w_t = alpha w_xx.
struct ExpMode {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
};

struct DiffusionParams {
    double alpha = 1.0;
};

/// Natural log of the mode value at (x, t); finite even where the value itself overflows.
double exp_mode_log(const ExpMode& mode, double alpha, double x, double t);

Field exp_mode_eval(const ExpMode& mode, const DiffusionParams& params, const Grid& grid, double t);
Field superpose(std::span<const ExpMode> modes, const DiffusionParams& params, const Grid& grid,
                double t);

/// Evolves w0 by time t with the heat kernel; the result carries time w0.t() + t.
Field heat_kernel_solve(const Field& w0, const DiffusionParams& params, double t);

/// Interior L-infinity norm of (w2 - w1)/dt - alpha (w1_xx + w2_xx)/2.
double diffusion_residual(const Field& w1, const Field& w2, const DiffusionParams& params);

}  // namespace fbenn
