#include "fbenn/solver.hpp"

#include <cmath>
#include <string>

#include "core/numerics.hpp"
#include "fbenn/error.hpp"
#include "fbenn/fracops.hpp"

namespace fbenn {

namespace {

// N(phi) = -1/2 D^p (D^{1-p} phi)^2
class Nonlinear {
public:
    Nonlinear(const Grid& g, const ModelParams& m)
        : dq_(g, m.derivative(1.0 - m.p)), dp_(g, m.derivative(m.p)), n_(g.n) {}

    std::vector<double> operator()(std::span<const double> phi) const {
        std::vector<double> g(n_), out(n_);
        dq_.apply(phi, g);
        for (auto& v : g) v *= v;
        dp_.apply(g, out);
        for (auto& v : out) v *= -0.5;
        return out;
    }

private:
    FracDerivative dq_, dp_;
    std::size_t n_;
};

// (I - h alpha/2 L) u^{n+1} = (I + h alpha/2 L) u^n + h E with Dirichlet end rows,
// L the three-point Laplacian.
class CrankNicolson {
public:
    CrankNicolson(const Grid& g, double alpha, double h)
        : r_(alpha * h / (g.dx * g.dx)), h_(h), solver_(make(g.n, r_)) {}

    std::vector<double> step(std::span<const double> u, std::span<const double> explicit_term,
                             std::pair<double, double> ends) const {
        const std::size_t n = u.size();
        std::vector<double> rhs(n);
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = u[i] + 0.5 * r_ * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + h_ * explicit_term[i];
        rhs[0] = ends.first;
        rhs[n - 1] = ends.second;
        solver_.solve(rhs);
        return rhs;
    }

private:
    static detail::Tridiagonal make(std::size_t n, double r) {
        std::vector<double> lo(n, -0.5 * r), di(n, 1.0 + r), up(n, -0.5 * r);
        di[0] = di[n - 1] = 1.0;
        up[0] = 0.0;
        lo[n - 1] = 0.0;
        return detail::Tridiagonal(std::move(lo), std::move(di), std::move(up));
    }

    double r_, h_;
    detail::Tridiagonal solver_;
};

std::size_t step_count(double t_end, double dt) {
    return static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
}

void check_steps(const Grid& g, double alpha, double t_end, double dt) {
    if (!(t_end > 0.0) || !std::isfinite(t_end))
        throw Error(Errc::invalid_time, "t_end must be positive");
    const double limit = stability_limit(g, alpha);
    if (!(dt > 0.0) || !(dt <= limit * (1.0 + 1e-9)))
        throw Error(Errc::invalid_step, "dt = " + std::to_string(dt) +
                                            " must lie in (0, " + std::to_string(limit) + "]");
}

std::vector<double> ab2(const std::vector<double>& now, const std::vector<double>* before) {
    if (!before) return now;
    std::vector<double> out(now.size());
    for (std::size_t i = 0; i < now.size(); ++i) out[i] = 1.5 * now[i] - 0.5 * (*before)[i];
    return out;
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw Error(Errc::invalid_input, "grid mismatch");
}

// Four-point Lagrange interpolation at fractional index q; constant beyond the grid ends.
double interpolate(const Field& f, double q) {
    const std::size_t n = f.size();
    if (q <= 0.0) return f.front();
    if (q >= static_cast<double>(n - 1)) return f.back();
    const auto i = static_cast<std::ptrdiff_t>(std::floor(q));
    const double s = q - static_cast<double>(i);
    if (s == 0.0) return f[static_cast<std::size_t>(i)];
    const auto at = [&](std::ptrdiff_t j) {
        j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(n) - 1);
        return f[static_cast<std::size_t>(j)];
    };
    return -s * (s - 1.0) * (s - 2.0) / 6.0 * at(i - 1) + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * at(i) -
           (s + 1.0) * s * (s - 2.0) / 2.0 * at(i + 1) + (s + 1.0) * s * (s - 1.0) / 6.0 * at(i + 2);
}

}  // namespace

Field fbenn_rhs(const Field& phi, const ModelParams& params) {
    params.validate();
    const auto nl = Nonlinear(phi.grid(), params)(phi.values());
    const auto xx = second_derivative(phi.values(), phi.grid().dx);
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nl[i] + params.alpha * xx[i];
    return phi.with_values(std::move(out));
}

double stability_limit(const Grid& grid, double alpha) { return 0.25 * grid.dx * grid.dx / alpha; }

Trajectory integrate(const Field& phi0, const ModelParams& params, double t_end, double dt,
                     const IntegrateOptions& options) {
    params.validate();
    const Grid& g = phi0.grid();
    check_steps(g, params.alpha, t_end, dt);
    if (options.record_every == 0) throw Error(Errc::invalid_input, "record_every must be positive");
    const std::size_t steps = step_count(t_end, dt);
    const double h = t_end / static_cast<double>(steps);
    const double t0 = phi0.t();

    const Nonlinear N(g, params);
    const CrankNicolson cn(g, params.alpha, h);
    const auto fixed = std::make_pair(phi0.front(), phi0.back());
    const auto ends = [&](double t) { return options.boundary ? options.boundary(t) : fixed; };

    Trajectory out;
    out.push_back(phi0);
    if (options.on_step) options.on_step(phi0);
    std::vector<double> phi(phi0.data());
    std::vector<double> prev_n;
    double norm = max_abs(phi);
    for (std::size_t k = 1; k <= steps; ++k) {
        auto now_n = N(phi);
        const auto e = ab2(now_n, prev_n.empty() ? nullptr : &prev_n);
        const double t = t0 + static_cast<double>(k) * h;
        const auto bc = ends(t);
        auto next = cn.step(phi, e, bc);

        const double next_norm = max_abs(next);
        const double ref = std::max({norm, std::abs(bc.first), std::abs(bc.second), 1e-12});
        bool finite = true;
        for (double v : next) finite = finite && std::isfinite(v);
        if (!finite || next_norm > 10.0 * ref)
            throw Error(Errc::blow_up, "solution grew from " + std::to_string(norm) + " to " +
                                           std::to_string(next_norm) + " at t = " + std::to_string(t));
        norm = next_norm;
        phi = std::move(next);
        prev_n = std::move(now_n);

        if (k % options.record_every == 0 || k == steps) {
            Field slice(g, phi, t);
            if (options.on_step) options.on_step(slice);
            out.push_back(std::move(slice));
        } else if (options.on_step) {
            options.on_step(Field(g, phi, t));
        }
    }
    return out;
}

double trajectory_residual(const Trajectory& traj, const ModelParams& params) {
    if (traj.size() < 2) throw Error(Errc::invalid_input, "residual needs at least two slices");
    const auto band = interior(traj.grid());
    auto prev = fbenn_rhs(traj[0], params);
    double res = 0.0;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        auto next = fbenn_rhs(traj[k + 1], params);
        const double dt = traj[k + 1].t() - traj[k].t();
        for (std::size_t i = band.begin; i < band.end; ++i) {
            const double rate = (traj[k + 1][i] - traj[k][i]) / dt;
            res = std::max(res, std::abs(rate - 0.5 * (prev[i] + next[i])));
        }
        prev = std::move(next);
    }
    return res;
}

namespace {

// -s phi_bar_x D^{1-p} psi
std::vector<double> linear_advection(const FracDerivative& D, std::span<const double> psi,
                                     const std::vector<double>& phi_bar_x, double s) {
    std::vector<double> out(psi.size());
    D.apply(psi, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -s * phi_bar_x[i];
    return out;
}

}  // namespace

Field linearized_rhs(const Field& psi, const Field& phi_bar, const ModelParams& params) {
    params.validate();
    require_same_grid(psi, phi_bar);
    const Grid& g = psi.grid();
    const FracDerivative D(g, params.derivative(1.0 - params.p));
    auto out = linear_advection(D, psi.values(), centered_derivative(phi_bar.values(), g.dx),
                                params.orientation());
    const auto xx = second_derivative(psi.values(), g.dx);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += params.alpha * xx[i];
    return psi.with_values(std::move(out));
}

Trajectory integrate_linearized(const Field& psi0, const Trajectory& phi_bar,
                                const ModelParams& params) {
    params.validate();
    if (phi_bar.size() < 2) throw Error(Errc::invalid_input, "reference trajectory is too short");
    require_same_grid(psi0, phi_bar[0]);
    const Grid& g = psi0.grid();
    const auto times = phi_bar.times();
    const double h = times[1] - times[0];
    for (std::size_t k = 1; k + 1 < times.size(); ++k)
        if (std::abs(times[k + 1] - times[k] - h) > 1e-6 * h)
            throw Error(Errc::invalid_input, "reference trajectory must hold every time step");

    const FracDerivative D(g, params.derivative(1.0 - params.p));
    const CrankNicolson cn(g, params.alpha, h);
    const double s = params.orientation();
    const auto ends = std::make_pair(psi0.front(), psi0.back());

    Trajectory out;
    out.push_back(psi0.at_time(times[0]));
    std::vector<double> psi(psi0.data()), prev_e;
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        auto now_e = linear_advection(D, psi, centered_derivative(phi_bar[k].values(), g.dx), s);
        const auto e = ab2(now_e, prev_e.empty() ? nullptr : &prev_e);
        psi = cn.step(psi, e, ends);
        prev_e = std::move(now_e);
        out.push_back(Field(g, psi, times[k + 1]));
    }
    return out;
}

Trajectory solve_companion(const Field& u0, const std::function<Field(double)>& v_at,
                           const ModelParams& params, double t_end, double dt,
                           std::size_t record_every) {
    params.validate();
    const Grid& g = u0.grid();
    check_steps(g, params.alpha, t_end, dt);
    if (record_every == 0) throw Error(Errc::invalid_input, "record_every must be positive");
    const std::size_t steps = step_count(t_end, dt);
    const double h = t_end / static_cast<double>(steps);
    const double t0 = u0.t();
    const FracDerivative D(g, params.derivative(1.0 - params.p));
    const CrankNicolson cn(g, params.alpha, h);
    const double s = params.orientation();
    const auto ends = std::make_pair(u0.front(), u0.back());

    // -s (D^{1-p} v) u_x
    const auto advection = [&](std::span<const double> u, double t) {
        const auto v = v_at(t);
        require_same_grid(v, u0);
        std::vector<double> gv(g.n);
        D.apply(v.values(), gv);
        const auto ux = centered_derivative(u, g.dx);
        for (std::size_t i = 0; i < g.n; ++i) gv[i] *= -s * ux[i];
        return gv;
    };

    Trajectory out;
    out.push_back(u0);
    std::vector<double> u(u0.data()), prev_e;
    for (std::size_t k = 1; k <= steps; ++k) {
        auto now_e = advection(u, t0 + static_cast<double>(k - 1) * h);
        const auto e = ab2(now_e, prev_e.empty() ? nullptr : &prev_e);
        u = cn.step(u, e, ends);
        prev_e = std::move(now_e);
        if (k % record_every == 0 || k == steps)
            out.push_back(Field(g, u, t0 + static_cast<double>(k) * h));
    }
    return out;
}

Field weak_nonlocality_rhs(const Field& phi, const ModelParams& params, Nonlocality kind,
                           double eps) {
    params.validate();
    if (!(eps > 0.0 && eps <= 0.1))
        throw Error(Errc::invalid_input, "eps must lie in (0, 0.1], got " + std::to_string(eps));
    if (params.side != Side::Left)
        throw Error(Errc::invalid_input, "the log operator is defined for the left side only");
    const Grid& g = phi.grid();
    const double dx = g.dx;
    const auto v = phi.values();
    const auto N = [&](std::vector<double> f) {
        return nonlocal_log_operator(Field(g, std::move(f), phi.t()), params.terminal).data();
    };
    const auto x = centered_derivative(v, dx);
    const auto xx = second_derivative(v, dx);
    std::vector<double> out(g.n);
    if (kind == Nonlocality::NearZero) {
        const auto n_phi_x = centered_derivative(N(phi.data()), dx);
        std::vector<double> sq(g.n);
        for (std::size_t i = 0; i < g.n; ++i) sq[i] = x[i] * x[i];
        const auto n_sq = N(sq);
        for (std::size_t i = 0; i < g.n; ++i)
            out[i] = -0.5 * sq[i] + params.alpha * xx[i] + eps * (x[i] * n_phi_x[i] - 0.5 * n_sq[i]);
    } else {
        std::vector<double> sq(g.n);
        for (std::size_t i = 0; i < g.n; ++i) sq[i] = v[i] * v[i];
        const auto n_sq = N(sq);
        const auto n_phi = N(phi.data());
        std::vector<double> bracket(g.n);
        for (std::size_t i = 0; i < g.n; ++i) bracket[i] = n_sq[i] - v[i] * n_phi[i];
        const auto bx = centered_derivative(bracket, dx);
        for (std::size_t i = 0; i < g.n; ++i)
            out[i] = -v[i] * x[i] + params.alpha * xx[i] + (1.0 - eps) * bx[i];
    }
    return phi.with_values(std::move(out));
}

TravellingWave TravellingWave::nde(double u, double alpha, double c, double C2) {
    TravellingWave tw;
    tw.p = 0.0;
    tw.u = u;
    tw.alpha = alpha;
    tw.C1 = c;
    tw.C2 = C2;
    return tw;
}

TravellingWave TravellingWave::burgers(double phi1, double phi2, double alpha) {
    TravellingWave tw;
    tw.p = 1.0;
    tw.u = 0.5 * (phi1 + phi2);
    tw.alpha = alpha;
    tw.phi1 = phi1;
    tw.phi2 = phi2;
    return tw;
}

TravellingWave TravellingWave::fractional(double p, double u, double alpha, double C, double a) {
    TravellingWave tw;
    tw.p = p;
    tw.u = u;
    tw.alpha = alpha;
    tw.C = C;
    tw.a = a;
    return tw;
}

double travelling_wave_eval(const TravellingWave& tw, double xi) {
    if (!(tw.alpha > 0.0)) throw Error(Errc::invalid_input, "alpha must be positive");
    if (!(tw.p >= 0.0 && tw.p <= 1.0)) throw Error(Errc::invalid_order, "p must lie in [0, 1]");
    if (tw.p == 0.0) {
        const double z = tw.u * (tw.C1 + xi) / tw.alpha;
        if (!(z > 0.0))
            throw Error(Errc::log_domain_violation,
                        "exp(u (c + xi)/alpha) <= 1 at xi = " + std::to_string(xi));
        // log(e^z - 1) = z + log(1 - e^{-z})
        return 2.0 * tw.u * xi - 2.0 * tw.alpha * (z + std::log(-std::expm1(-z))) + tw.C2;
    }
    if (tw.p == 1.0) {
        const double jump = tw.phi2 - tw.phi1;
        return tw.phi1 + jump / (1.0 + std::exp(jump * xi / (2.0 * tw.alpha)));
    }
    if (!(xi > tw.a))
        throw Error(Errc::singular_point, "profile is singular for xi <= a, xi = " + std::to_string(xi));
    const double num = tw.u * xi + tw.p * tw.u * tw.u / tw.alpha - (1.0 - tw.p) * tw.C;
    return -2.0 * rgamma(2.0 - tw.p) * num / std::pow(xi - tw.a, tw.p);
}

Field travelling_wave_field(const TravellingWave& tw, const Grid& xi) {
    return Field::sample(xi, [&](double x) { return travelling_wave_eval(tw, x); });
}

double travelling_wave_residual(const TravellingWave& tw, const Grid& xi) {
    const bool fractional = tw.p > 0.0 && tw.p < 1.0;
    if (fractional && xi.x0 - tw.a < 10.0 * xi.dx * (1.0 - 1e-12))
        throw Error(Errc::singular_point, "grid must start at least 10 dx right of the terminal");
    const auto phi = travelling_wave_field(tw, xi);
    ModelParams m;
    m.alpha = tw.alpha;
    m.p = tw.p;
    m.terminal = fractional ? Terminal::at(tw.a) : Terminal::unbounded();
    const auto nl = Nonlinear(xi, m)(phi.values());
    const auto d1 = centered_derivative(phi.values(), xi.dx);
    const auto d2 = second_derivative(phi.values(), xi.dx);
    const auto band = interior(xi);
    double res = 0.0;
    for (std::size_t i = band.begin; i < band.end; ++i)
        res = std::max(res, std::abs(-nl[i] - tw.alpha * d2[i] - tw.u * d1[i]));
    return res;
}

SubstitutionReport translation_substitution_check(const Trajectory& traj, double A, double B,
                                                  const ModelParams& params) {
    params.validate();
    if (traj.size() < 2) throw Error(Errc::invalid_input, "check needs at least two slices");
    const Grid& g = traj.grid();
    const double s = params.orientation();

    // Offset whose D^{1-p} equals s A.
    std::vector<double> offset(g.n, s * A);
    if (params.p < 1.0 && A != 0.0) {
        if (!params.terminal.is_finite())
            throw Error(Errc::invalid_terminal,
                        "offset A I^{1-p}[1] needs a finite terminal for p < 1");
        const double q = 1.0 - params.p;
        const double c = s * A * std::pow(params.lam, q) * rgamma(q + 1.0);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double r = params.side == Side::Left ? g.x(i) - params.terminal.value()
                                                       : params.terminal.value() - g.x(i);
            offset[i] = c * std::pow(std::max(r, 0.0), q);
        }
    }

    Trajectory shifted;
    for (const auto& slice : traj) {
        const double shift = A * (slice.t() + B);
        if (std::abs(shift) > 0.05 * g.length())
            throw Error(Errc::domain_exceeded, "shift " + std::to_string(shift) +
                                                   " exceeds 5% of the domain at t = " +
                                                   std::to_string(slice.t()));
        std::vector<double> v(g.n);
        const double di = shift / g.dx;
        for (std::size_t i = 0; i < g.n; ++i)
            v[i] = interpolate(slice, static_cast<double>(i) - di) + offset[i];
        shifted.push_back(Field(g, std::move(v), slice.t()));
    }
    SubstitutionReport r;
    r.original = trajectory_residual(traj, params);
    r.substituted = trajectory_residual(shifted, params);
    r.consistent = r.substituted <= 10.0 * r.original + 1e-10;
    return r;
}

}  // namespace fbenn
