#include "fbenn/hopf_cole.hpp"

#include <cfloat>
#include <cmath>
#include <string>

#include "fbenn/error.hpp"

namespace fbenn {

namespace {

const double log_max = std::log(DBL_MAX);

std::vector<double> scaled(std::span<const double> v, double c) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

std::vector<double> log_shifted(const Field& w, double b) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double s = b + w[i];
        if (!(s > 0.0))
            throw Error(Errc::log_domain_violation,
                        "b + w is not positive at x = " + std::to_string(w.grid().x(i)));
        out[i] = std::log(s);
    }
    return out;
}

// Applies D^order of the model to raw samples.
std::vector<double> apply_derivative(const Grid& g, const ModelParams& params, double order,
                                     std::span<const double> f) {
    std::vector<double> out(f.size());
    FracDerivative(g, params.derivative(order)).apply(f, out);
    return out;
}

void check_pair(const Trajectory& a, const Trajectory& b) {
    if (a.empty() || a.size() != b.size())
        throw Error(Errc::invalid_input, "trajectories must be non-empty and of equal length");
    if (!(a.grid() == b.grid())) throw Error(Errc::invalid_input, "trajectory grids differ");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].t() != b[k].t())
            throw Error(Errc::invalid_input, "trajectory times differ at slice " + std::to_string(k));
}

double ratio(double num, double scale) { return num == 0.0 ? 0.0 : num / scale; }

// Accumulates max |residual| and the largest term magnitude over the interior.
struct RelativeNorm {
    double num = 0.0;
    double scale = 0.0;
    void add_term(double v) { scale = std::max(scale, std::abs(v)); }
    void add_residual(double r) { num = std::max(num, std::abs(r)); }
    double value() const { return ratio(num, scale); }
};

}  // namespace

void ModelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw Error(Errc::invalid_input, "alpha must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_order, "p must lie in [0, 1]");
    if (!(lam > 0.0) || !std::isfinite(lam)) throw Error(Errc::invalid_input, "lambda must be positive");
    if (!std::isfinite(b)) throw Error(Errc::invalid_input, "b must be finite");
}

FracSpec ModelParams::derivative(double order) const {
    return FracSpec{order, OperatorKind::Caputo, side, terminal, lam};
}

Field transform(const Field& w, const ModelParams& params) {
    params.validate();
    const auto L = log_shifted(w, params.b);
    if (params.p == 0.0) return w.with_values(scaled(L, -2.0 * params.alpha));
    const auto d = apply_derivative(w.grid(), params, params.p, L);
    return w.with_values(scaled(d, -2.0 * params.alpha));
}

Field transform_small_amplitude(const Field& w, const ModelParams& params) {
    params.validate();
    if (max_abs(w.values()) > small_amplitude_limit)
        throw Error(Errc::amplitude_too_large,
                    "max |w| exceeds " + std::to_string(small_amplitude_limit));
    const auto d = apply_derivative(w.grid(), params, params.p, w.values());
    return w.with_values(scaled(d, -2.0 * params.alpha));
}

Field initial_condition_map(const Field& phi0, const ModelParams& params) {
    params.validate();
    std::vector<double> e(phi0.data());
    if (params.p > 0.0) {
        const auto I = frac_integral(phi0, FracSpec{params.p, OperatorKind::Integral, params.side,
                                                    params.terminal, params.lam});
        const double s = std::pow(params.lam, 1.0 - params.p);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = s * I[i];
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double arg = -e[i] / (2.0 * params.alpha);
        if (arg >= log_max)
            throw Error(Errc::overflow_at_point,
                        "initial map overflows at x = " + std::to_string(phi0.grid().x(i)));
        e[i] = std::exp(arg);
    }
    return phi0.with_values(std::move(e));
}

Field solve_fbenn_via_transform(const Field& phi0, const ModelParams& params, double t,
                                double shift) {
    if (!(t >= 0.0)) throw Error(Errc::invalid_time, "time must be non-negative");
    const auto w0 = initial_condition_map(phi0, params);
    const auto w = heat_kernel_solve(w0, DiffusionParams{params.alpha}, t);
    auto shifted = params;
    shifted.b = shift;
    return transform(w, shifted);
}

Field interact(std::span<const ExpMode> modes, const ModelParams& params, const Grid& grid,
               double t) {
    auto unshifted = params;
    unshifted.b = 0.0;
    return transform(superpose(modes, DiffusionParams{params.alpha}, grid, t), unshifted);
}

Field mode_transform_exact(std::span<const ExpMode> modes, const ModelParams& params,
                           const Grid& grid, double t) {
    params.validate();
    if (params.p != 0.0 && params.p != 1.0)
        throw Error(Errc::unsupported_order, "closed form exists only for p = 0 and p = 1");
    if (modes.empty()) throw Error(Errc::invalid_input, "at least one mode is required");
    if (params.b < 0.0) throw Error(Errc::log_domain_violation, "closed form needs b >= 0");
    const double alpha = params.alpha;
    std::vector<double> out(grid.n), e(modes.size());
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        double m = params.b > 0.0 ? std::log(params.b) : -INFINITY;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            e[k] = exp_mode_log(modes[k], alpha, x, t);
            m = std::max(m, e[k]);
        }
        // log(b + sum w) = m + log(b e^{-m} + sum e^{e_k - m})
        double den = params.b > 0.0 ? params.b * std::exp(-m) : 0.0;
        double num = 0.0;
        for (std::size_t k = 0; k < modes.size(); ++k) {
            const double r = std::exp(e[k] - m);
            den += r;
            num += modes[k].c * r;
        }
        if (params.p == 0.0)
            out[i] = -2.0 * alpha * (m + std::log(den));
        else
            out[i] = params.orientation() * num / den;
    }
    return Field(grid, std::move(out), t);
}

Field order_shift_from_nde(const Field& phi0, double p, const ModelParams& params) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_order, "p must lie in [0, 1]");
    return frac_derivative(phi0, params.derivative(p));
}

Field order_shift_from_burgers(const Field& phi1, double p, const ModelParams& params) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_order, "p must lie in [0, 1]");
    if (p == 1.0) return phi1;
    const auto I = frac_integral(
        phi1, FracSpec{1.0 - p, OperatorKind::Integral, params.side, params.terminal, params.lam});
    return I.with_values(scaled(I.values(), std::pow(params.lam, p - 1.0)));
}

double companion_residual(const Trajectory& v, const Trajectory& u, const ModelParams& params) {
    params.validate();
    check_pair(v, u);
    const Grid& g = u.grid();
    const auto band = interior(g);
    const double s = params.orientation();
    const FracDerivative D(g, params.derivative(1.0 - params.p));

    // Spatial operator (D^{1-p} v) u_x - alpha u_xx per slice, with its two terms.
    struct Terms {
        std::vector<double> adv, diff;
    };
    const auto terms = [&](std::size_t k) {
        std::vector<double> gv(g.n);
        D.apply(v[k].values(), gv);
        const auto ux = centered_derivative(u[k].values(), g.dx);
        auto uxx = second_derivative(u[k].values(), g.dx);
        Terms t{std::vector<double>(g.n), std::move(uxx)};
        for (std::size_t i = 0; i < g.n; ++i) {
            t.adv[i] = s * gv[i] * ux[i];
            t.diff[i] *= params.alpha;
        }
        return t;
    };

    RelativeNorm norm;
    if (u.size() < 2) return 0.0;
    auto prev = terms(0);
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
        auto next = terms(k + 1);
        const double dt = u[k + 1].t() - u[k].t();
        for (std::size_t i = band.begin; i < band.end; ++i) {
            const double ut = (u[k + 1][i] - u[k][i]) / dt;
            const double adv = 0.5 * (prev.adv[i] + next.adv[i]);
            const double diff = 0.5 * (prev.diff[i] + next.diff[i]);
            norm.add_term(ut);
            norm.add_term(adv);
            norm.add_term(diff);
            norm.add_residual(ut + adv - diff);
        }
        prev = std::move(next);
    }
    return norm.value();
}

Trajectory generate_new_solution(const Trajectory& v, const Trajectory& u,
                                 const ModelParams& params, double tolerance) {
    params.validate();
    check_pair(v, u);
    for (const auto& slice : u)
        for (std::size_t i = 0; i < slice.size(); ++i)
            if (!(slice[i] > 0.0))
                throw Error(Errc::log_domain_violation,
                            "u is not positive at x = " + std::to_string(slice.grid().x(i)));
    const double r = companion_residual(v, u, params);
    if (r > tolerance)
        throw Error(Errc::not_a_companion_solution,
                    "companion equation residual " + std::to_string(r) + " exceeds tolerance");
    auto unshifted = params;
    unshifted.b = 0.0;
    Trajectory out;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const auto phi = transform(u[k], unshifted);
        std::vector<double> sum(phi.data());
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[k][i];
        out.push_back(phi.with_values(std::move(sum)));
    }
    return out;
}

BacklundResiduals backlund_check(const Trajectory& w, const Trajectory& phi,
                                 const ModelParams& params) {
    params.validate();
    check_pair(w, phi);
    const Grid& g = w.grid();
    const auto band = interior(g);
    const double s = params.orientation();
    const double two_alpha = 2.0 * params.alpha;
    const FracDerivative D(g, params.derivative(1.0 - params.p));

    // flux = s (b + w) D^{1-p} phi
    const auto flux = [&](std::size_t k) {
        std::vector<double> f(g.n);
        D.apply(phi[k].values(), f);
        for (std::size_t i = 0; i < g.n; ++i) f[i] *= s * (params.b + w[k][i]);
        return f;
    };

    RelativeNorm spatial, temporal;
    std::vector<std::vector<double>> flux_x;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const auto f = flux(k);
        const auto wx = centered_derivative(w[k].values(), g.dx);
        for (std::size_t i = band.begin; i < band.end; ++i) {
            spatial.add_term(wx[i]);
            spatial.add_term(f[i] / two_alpha);
            spatial.add_residual(wx[i] + f[i] / two_alpha);
        }
        flux_x.push_back(centered_derivative(f, g.dx));
    }
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        const double dt = w[k + 1].t() - w[k].t();
        for (std::size_t i = band.begin; i < band.end; ++i) {
            const double wt = (w[k + 1][i] - w[k][i]) / dt;
            const double fx = 0.25 * (flux_x[k][i] + flux_x[k + 1][i]);
            temporal.add_term(wt);
            temporal.add_term(fx);
            temporal.add_residual(wt + fx);
        }
    }
    return {spatial.value(), temporal.value()};
}

}  // namespace fbenn
