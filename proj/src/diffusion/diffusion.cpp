#include "fbenn/diffusion.hpp"

#include <cfloat>
#include <cmath>
#include <string>

#include "core/numerics.hpp"
#include "fbenn/error.hpp"
#include "fbenn/fracops.hpp"

namespace fbenn {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(Errc::invalid_input, "diffusivity alpha must be positive");
}

void check_mode(const ExpMode& m) {
    if (!(m.a > 0.0) || !std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c))
        throw Error(Errc::invalid_input, "mode amplitude must be positive and finite");
}

}  // namespace

double exp_mode_log(const ExpMode& m, double alpha, double x, double t) {
    return std::log(m.a) - m.c * x / (2.0 * alpha) + m.c * m.c * t / (4.0 * alpha) - m.b;
}

Field exp_mode_eval(const ExpMode& mode, const DiffusionParams& params, const Grid& grid, double t) {
    check_alpha(params.alpha);
    check_mode(mode);
    if (!(t >= 0.0)) throw Error(Errc::invalid_time, "time must be non-negative");
    const double limit = std::log(DBL_MAX);
    std::vector<double> w(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double e = exp_mode_log(mode, params.alpha, grid.x(i), t);
        if (e >= limit)
            throw Error(Errc::overflow_at_point,
                        "exponential mode overflows at x = " + std::to_string(grid.x(i)));
        w[i] = std::exp(e);
    }
    return Field(grid, std::move(w), t);
}

Field superpose(std::span<const ExpMode> modes, const DiffusionParams& params, const Grid& grid,
                double t) {
    if (modes.empty()) throw Error(Errc::invalid_input, "superpose needs at least one mode");
    std::vector<double> sum(grid.n, 0.0);
    for (const auto& m : modes) {
        const auto w = exp_mode_eval(m, params, grid, t);
        for (std::size_t i = 0; i < grid.n; ++i) sum[i] += w[i];
    }
    for (std::size_t i = 0; i < grid.n; ++i)
        if (!std::isfinite(sum[i]))
            throw Error(Errc::overflow_at_point,
                        "mode sum overflows at x = " + std::to_string(grid.x(i)));
    return Field(grid, std::move(sum), t);
}

Field heat_kernel_solve(const Field& w0, const DiffusionParams& params, double t) {
    check_alpha(params.alpha);
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error(Errc::invalid_time, "time must be non-negative");
    const Grid& g = w0.grid();
    const auto v = w0.values();
    const std::size_t n = g.n;

    const double scale = std::max(max_abs(v), 1e-300);
    double dev = 0.0;
    for (std::size_t k = 1; k < 3; ++k)
        dev = std::max({dev, std::abs(v[k] - v[0]), std::abs(v[n - 1 - k] - v[n - 1])});
    if (dev > 1e-6 * scale)
        throw Error(Errc::tail_violation, "initial field must be flat at both grid ends");

    const double t_out = w0.t() + t;
    // A kernel narrower than one cell is not resolved by the grid.
    if (2.0 * params.alpha * t < g.dx * g.dx) return w0.at_time(t_out);

    const double four_at = 4.0 * params.alpha * t;
    const double sigma = std::sqrt(2.0 * params.alpha * t);
    const auto M = static_cast<std::size_t>(std::ceil(8.0 * sigma / g.dx));
    std::vector<double> kernel(2 * M + 1);
    double mass = 0.0;
    for (std::size_t q = 0; q < kernel.size(); ++q) {
        const double r = (static_cast<double>(q) - static_cast<double>(M)) * g.dx;
        kernel[q] = std::exp(-r * r / four_at);
        mass += kernel[q];
    }
    for (auto& k : kernel) k /= mass;

    std::vector<double> ext(n + 2 * M);
    for (std::size_t i = 0; i < M; ++i) {
        ext[i] = v[0];
        ext[M + n + i] = v[n - 1];
    }
    std::copy(v.begin(), v.end(), ext.begin() + static_cast<std::ptrdiff_t>(M));
    const auto full = detail::convolve(ext, kernel);
    std::vector<double> out(full.begin() + static_cast<std::ptrdiff_t>(2 * M),
                            full.begin() + static_cast<std::ptrdiff_t>(2 * M + n));
    return Field(g, std::move(out), t_out);
}

double diffusion_residual(const Field& w1, const Field& w2, const DiffusionParams& params) {
    check_alpha(params.alpha);
    if (!(w1.grid() == w2.grid())) throw Error(Errc::invalid_input, "grid mismatch");
    const double dt = w2.t() - w1.t();
    if (!(dt > 0.0)) throw Error(Errc::invalid_input, "second field must be later than the first");
    const auto& g = w1.grid();
    const auto a = second_derivative(w1.values(), g.dx);
    const auto b = second_derivative(w2.values(), g.dx);
    const auto r = interior(g);
    double res = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const double rate = (w2[i] - w1[i]) / dt;
        res = std::max(res, std::abs(rate - 0.5 * params.alpha * (a[i] + b[i])));
    }
    return res;
}

}  // namespace fbenn
