#include "fbenn/diagnostics.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "fbenn/error.hpp"
#include "fbenn/fracops.hpp"

namespace fbenn {

namespace {

double trapezoid(std::span<const double> f, double dx) {
    if (f.size() < 2) return 0.0;
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * dx;
}

std::vector<double> fractional_gradient(const Field& phi, const ModelParams& params) {
    params.validate();
    std::vector<double> g(phi.size());
    FracDerivative(phi.grid(), params.derivative(1.0 - params.p)).apply(phi.values(), g);
    return g;
}

// Least-squares slope of y against x.
double slope(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace

double mass_invariant(const Field& phi, const ModelParams& params) {
    return trapezoid(fractional_gradient(phi, params), phi.grid().dx);
}

double energy(const Field& phi, const ModelParams& params) {
    auto g = fractional_gradient(phi, params);
    for (auto& v : g) v *= v;
    return 0.5 * trapezoid(g, phi.grid().dx);
}

double dissipation_rate(const Field& phi, const ModelParams& params) {
    auto gx = centered_derivative(fractional_gradient(phi, params), phi.grid().dx);
    for (auto& v : gx) v *= v;
    return params.alpha * trapezoid(gx, phi.grid().dx);
}

bool decay_conditions_hold(const Field& phi, const ModelParams& params, double tol) {
    const auto g = fractional_gradient(phi, params);
    const auto gx = centered_derivative(g, phi.grid().dx);
    const auto small = [&](const std::vector<double>& v) {
        const double scale = max_abs(v);
        return scale == 0.0 || (std::abs(v.front()) <= tol * scale && std::abs(v.back()) <= tol * scale);
    };
    return small(g) && small(gx);
}

ConservationReport conservation_report(const Trajectory& traj, const ModelParams& params) {
    if (traj.empty()) throw Error(Errc::invalid_input, "empty trajectory");
    ConservationReport r;
    double scale = 0.0;
    for (const auto& s : traj) {
        r.times.push_back(s.t());
        r.mass.push_back(mass_invariant(s, params));
        r.energy.push_back(energy(s, params));
        r.decay_ok = r.decay_ok && decay_conditions_hold(s, params);
    }
    {
        auto g = fractional_gradient(traj.front(), params);
        for (auto& v : g) v = std::abs(v);
        scale = std::max(std::abs(r.mass.front()), trapezoid(g, traj.grid().dx));
    }
    for (double m : r.mass)
        r.mass_drift = std::max(r.mass_drift, scale > 0.0 ? std::abs(m - r.mass.front()) / scale : 0.0);
    const double tol = 1e-12 * r.energy.front();
    for (std::size_t k = 1; k < r.energy.size(); ++k)
        if (r.energy[k] > r.energy[k - 1] + tol) r.energy_monotone = false;
    return r;
}

double reynolds_number(double phi_scale, double x_scale, const ModelParams& params) {
    params.validate();
    if (!(phi_scale > 0.0) || !(x_scale > 0.0))
        throw Error(Errc::invalid_input, "scales must be positive");
    return phi_scale * std::pow(x_scale, params.p) /
           (params.alpha * std::pow(params.lam, 1.0 + params.p));
}

double peak_decay_exponent(const Trajectory& traj) {
    if (traj.empty()) throw Error(Errc::invalid_input, "empty trajectory");
    const double t_end = traj.back().t();
    std::vector<double> lt, lp;
    for (const auto& s : traj) {
        if (s.t() < t_end / 10.0 * (1.0 - 1e-9) || s.t() <= 0.0) continue;
        const double peak = *std::max_element(s.values().begin(), s.values().end());
        if (!(peak > 0.0)) throw Error(Errc::fit_unreliable, "peak is not positive");
        lt.push_back(std::log(s.t()));
        lp.push_back(std::log(peak));
    }
    if (lt.size() < 3 || lt.back() - lt.front() < std::log(10.0) * (1.0 - 1e-9))
        throw Error(Errc::fit_unreliable, "fewer than three slices or less than one decade in t");
    return slope(lt, lp);
}

RampFit ramp_fit(const Field& phi, const ModelParams& params) {
    const Grid& grid = phi.grid();
    const auto g = fractional_gradient(phi, params);
    const auto ip = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
    const double peak = g[ip];
    if (!(peak > 0.0) || ip < 4) throw Error(Errc::fit_unreliable, "no positive ramp in the field");

    // Rising part of the ramp: contiguous samples left of the peak with g in [0.3, 0.8] peak.
    std::vector<double> xs, gs;
    for (std::size_t i = ip; i-- > 0;) {
        if (g[i] < 0.3 * peak) break;
        if (g[i] <= 0.8 * peak) {
            xs.push_back(grid.x(i));
            gs.push_back(g[i]);
        }
    }
    if (xs.size() < 4) throw Error(Errc::fit_unreliable, "ramp is resolved by fewer than four samples");
    const double k = slope(xs, gs);
    double mx = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        mg += gs[i];
    }
    mx /= static_cast<double>(xs.size());
    mg /= static_cast<double>(xs.size());
    const double foot = mx - mg / k;
    const double length = grid.x(ip) - foot;
    if (!(k > 0.0) || !(length > 0.0)) throw Error(Errc::fit_unreliable, "ramp has no rising part");

    std::vector<double> s, y;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double si = grid.x(i) - foot;
        if (si >= 10.0 * grid.dx && si <= 0.5 * length) {
            s.push_back(si);
            y.push_back(phi[i]);
        }
    }
    if (s.size() < 8) throw Error(Errc::fit_unreliable, "ramp is too short for a profile fit");
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(y.size()));
    const auto misfit = [&](double e) {
        Eigen::MatrixXd A(static_cast<Eigen::Index>(s.size()), 2);
        for (std::size_t i = 0; i < s.size(); ++i) {
            A(static_cast<Eigen::Index>(i), 0) = std::pow(s[i], e);
            A(static_cast<Eigen::Index>(i), 1) = std::pow(s[i], -params.p);
        }
        const Eigen::VectorXd c = A.colPivHouseholderQr().solve(Y);
        return (A * c - Y).squaredNorm();
    };
    const auto best = boost::math::tools::brent_find_minima(misfit, 0.1, 4.0, 40);
    return {best.first, foot, length, peak};
}

AsymptoticFit asymptotic_profile_fit(const Trajectory& traj, const ModelParams& params) {
    params.validate();
    AsymptoticFit fit;
    fit.exponent_t = peak_decay_exponent(traj);
    const auto ramp = ramp_fit(traj.back(), params);
    fit.exponent_x = ramp.exponent;
    fit.foot = ramp.foot;
    fit.ramp_length = ramp.length;
    fit.reynolds = reynolds_number(ramp.peak, ramp.length, params);
    return fit;
}

NormalizationScales normalize(const RawCoefficients& raw) {
    if (!(raw.beta > 0.0) || !std::isfinite(raw.beta))
        throw Error(Errc::invalid_input, "beta must be positive");
    if (raw.alpha_nl == 0.0)
        throw Error(Errc::degenerate, "alpha_nl = 0 gives a linear equation; nothing to normalize");
    return {raw.beta / raw.alpha_nl, 1.0 / raw.beta};
}

Field denormalize_field(const Field& psi, const NormalizationScales& s) {
    std::vector<double> v(psi.data());
    for (auto& x : v) x *= s.scale_phi;
    return Field(psi.grid(), std::move(v), psi.t() * s.scale_t);
}

Field normalize_field(const Field& phi, const NormalizationScales& s) {
    std::vector<double> v(phi.data());
    for (auto& x : v) x /= s.scale_phi;
    return Field(phi.grid(), std::move(v), phi.t() / s.scale_t);
}

}  // namespace fbenn
