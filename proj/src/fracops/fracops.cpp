#include "fbenn/fracops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fbenn/error.hpp"
#include "core/numerics.hpp"

namespace fbenn {

namespace {

using detail::ToeplitzLower;

void require_finite(std::span<const double> f, const Grid& g) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i]))
            throw Error(Errc::invalid_field, "non-finite value at x = " + std::to_string(g.x(i)));
}

// (1+h)^s - 1 without cancellation.
double pow1pm1(double h, double s) { return std::expm1(s * std::log1p(h)); }

// Product-trapezoid weights for I^beta in grid units (dx = 1), before the 1/Gamma(beta+2) factor.
// Interior weights: (k+1)^s - 2k^s + (k-1)^s with s = beta + 1.
std::vector<double> interior_weights(std::size_t n, double beta) {
    const double s = beta + 1.0;
    std::vector<double> a(n);
    a[0] = 1.0;
    if (n > 1) a[1] = std::pow(2.0, s) - 2.0;
    for (std::size_t k = 2; k < n; ++k) {
        const double kd = static_cast<double>(k);
        a[k] = std::pow(kd, s) * (pow1pm1(1.0 / kd, s) + pow1pm1(-1.0 / kd, s));
    }
    return a;
}

// Weight of the terminal sample: (m-1)^s - (m-1-beta) m^beta.
std::vector<double> end_weights(std::size_t n, double beta) {
    const double s = beta + 1.0;
    std::vector<double> e(n, 0.0);
    if (n > 1) e[1] = beta;
    for (std::size_t m = 2; m < n; ++m) {
        const double md = static_cast<double>(m);
        e[m] = std::pow(md, s) * (pow1pm1(-1.0 / md, s) + s / md);
    }
    return e;
}

// Exponents for which the starting weights make the rule exact: (x-a)^s.
constexpr std::array<double, 6> starting_exponents{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
constexpr std::size_t min_corrected_size = 16;

// Left-sided I^beta from the first grid sample, in grid units.
class PowerQuadrature {
public:
    PowerQuadrature(std::size_t n, double beta)
        : n_(n),
          beta_(beta),
          norm_(1.0 / std::tgamma(beta + 2.0)),
          toeplitz_(interior_weights(n, beta)),
          end_(end_weights(n, beta)) {
        if (n >= min_corrected_size) build_correction();
    }

    void apply(std::span<const double> g, std::span<double> y) const {
        std::vector<double> gt(g.begin(), g.end());
        gt[0] = 0.0;
        toeplitz_.apply(gt, y);
        for (std::size_t m = 0; m < n_; ++m) y[m] = norm_ * (y[m] + end_[m] * g[0]);
        for (std::size_t j = 0; j < correction_.size(); ++j) {
            const double gj = g[j];
            if (gj == 0.0) continue;
            const auto& c = correction_[j];
            for (std::size_t m = 0; m < n_; ++m) y[m] += c[m] * gj;
        }
        y[0] = 0.0;
    }

private:
    void apply_base(std::span<const double> g, std::span<double> y) const {
        std::vector<double> gt(g.begin(), g.end());
        gt[0] = 0.0;
        toeplitz_.apply(gt, y);
        for (std::size_t m = 0; m < n_; ++m) y[m] = norm_ * (y[m] + end_[m] * g[0]);
        y[0] = 0.0;
    }

    void build_correction() {
        constexpr std::size_t J = starting_exponents.size();
        Eigen::Matrix<double, J, J> V;
        for (std::size_t r = 0; r < J; ++r)
            for (std::size_t j = 0; j < J; ++j)
                V(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                    (j == 0 && starting_exponents[r] == 0.0)
                        ? 1.0
                        : std::pow(static_cast<double>(j), starting_exponents[r]);
        const auto lu = V.fullPivLu();

        Eigen::MatrixXd R(static_cast<Eigen::Index>(J), static_cast<Eigen::Index>(n_));
        std::vector<double> basis(n_), rule(n_);
        for (std::size_t r = 0; r < J; ++r) {
            const double s = starting_exponents[r];
            for (std::size_t k = 0; k < n_; ++k)
                basis[k] = (k == 0 && s == 0.0) ? 1.0 : std::pow(static_cast<double>(k), s);
            apply_base(basis, rule);
            const double c = std::tgamma(s + 1.0) / std::tgamma(s + beta_ + 1.0);
            for (std::size_t m = 0; m < n_; ++m) {
                const double exact = m == 0 ? 0.0 : c * std::pow(static_cast<double>(m), s + beta_);
                R(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = exact - rule[m];
            }
        }
        const Eigen::MatrixXd C = lu.solve(R);
        correction_.assign(J, std::vector<double>(n_));
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t m = 0; m < n_; ++m)
                correction_[j][m] = C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m));
    }

    std::size_t n_;
    double beta_;
    double norm_;
    ToeplitzLower toeplitz_;
    std::vector<double> end_;
    std::vector<std::vector<double>> correction_;
};

std::vector<double> reversed(std::span<const double> f) { return {f.rbegin(), f.rend()}; }

// Distance between the terminal and the nearest grid end (>= 0), validated.
double terminal_gap(const Grid& g, Side side, const Terminal& t) {
    if (!t.is_finite()) return 0.0;
    const double tol = 1e-12 * std::max(1.0, std::abs(g.x0) + g.length());
    if (side == Side::Left) {
        if (t.value() > g.x0 + tol)
            throw Error(Errc::invalid_terminal, "left terminal " + std::to_string(t.value()) +
                                                    " lies inside the grid");
        return std::max(0.0, g.x0 - t.value());
    }
    if (t.value() < g.x_max() - tol)
        throw Error(Errc::invalid_terminal,
                    "right terminal " + std::to_string(t.value()) + " lies inside the grid");
    return std::max(0.0, t.value() - g.x_max());
}

// Symbol (i k)^alpha for the left side, (-i k)^alpha for the right side, principal branch.
std::vector<std::complex<double>> weyl_symbol(const Grid& g, double alpha, Side side) {
    const auto k = detail::wavenumbers(g.n, g.dx);
    std::vector<std::complex<double>> s(k.size());
    const double sign = side == Side::Left ? 1.0 : -1.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0.0) {
            s[i] = alpha == 0.0 ? 1.0 : 0.0;
            continue;
        }
        s[i] = std::pow(k[i], alpha) *
               std::polar(1.0, sign * alpha * std::numbers::pi / 2.0);
    }
    // The Nyquist mode of a real signal has no sign; keep its symbol real.
    if (g.n % 2 == 0 && alpha != 0.0) s.back() = std::pow(k.back(), alpha) *
                                                  std::cos(alpha * std::numbers::pi / 2.0);
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stencils

std::vector<double> centered_derivative(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i == 0 ? 0 : i - 1;
            const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
            d[i] = (f[hi] - f[lo]) / (static_cast<double>(hi - lo) * dx);
        }
        return d;
    }
    const double c = 1.0 / (12.0 * dx);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    const std::size_t m = n - 1;
    d[m] = -c * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    d[m - 1] = -c * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    return d;
}

std::vector<double> second_derivative(std::span<const double> f, double dx) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double c = 1.0 / (12.0 * dx * dx);
    if (n < 6) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = std::clamp<std::size_t>(i, 1, n - 2);
            d[i] = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / (dx * dx);
        }
        return d;
    }
    // One-sided 4th-order stencils for the two outermost samples.
    d[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
    d[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    const std::size_t m = n - 1;
    d[m] = c * (45.0 * f[m] - 154.0 * f[m - 1] + 214.0 * f[m - 2] - 156.0 * f[m - 3] +
                61.0 * f[m - 4] - 10.0 * f[m - 5]);
    d[m - 1] = c * (10.0 * f[m] - 15.0 * f[m - 1] - 4.0 * f[m - 2] + 14.0 * f[m - 3] -
                    6.0 * f[m - 4] + f[m - 5]);
    return d;
}

// ---------------------------------------------------------------------------
// FracIntegral

struct FracIntegral::Impl {
    Grid grid;
    double beta;
    Side side;
    Terminal terminal;
    double gap = 0.0;
    std::unique_ptr<PowerQuadrature> quad;
    std::vector<std::complex<double>> symbol;

    // Left-sided evaluation in the grid orientation of g.
    void left(std::span<const double> g, std::span<double> out) const {
        quad->apply(g, out);
        const double scale = std::pow(grid.dx, beta);
        for (auto& v : out) v *= scale;
        if (gap > 0.0 && g[0] != 0.0) {
            const double c = g[0] / std::tgamma(beta + 1.0);
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double r = static_cast<double>(i) * grid.dx;
                out[i] += c * (std::pow(r + gap, beta) - std::pow(r, beta));
            }
        }
    }
};

FracIntegral::FracIntegral(const Grid& grid, double order, Side side, Terminal terminal)
    : impl_(std::make_unique<Impl>()) {
    if (!(order > 0.0) || !std::isfinite(order))
        throw Error(Errc::invalid_order, "integral order must be positive, got " + std::to_string(order));
    impl_->grid = grid;
    impl_->beta = order;
    impl_->side = side;
    impl_->terminal = terminal;
    if (terminal.kind() == Terminal::Kind::Periodic) {
        auto s = weyl_symbol(grid, order, side);
        for (std::size_t i = 1; i < s.size(); ++i) s[i] = 1.0 / s[i];
        s[0] = 0.0;
        impl_->symbol = std::move(s);
        return;
    }
    impl_->gap = terminal_gap(grid, side, terminal);
    impl_->quad = std::make_unique<PowerQuadrature>(grid.n, order);
}

FracIntegral::~FracIntegral() = default;
FracIntegral::FracIntegral(FracIntegral&&) noexcept = default;
FracIntegral& FracIntegral::operator=(FracIntegral&&) noexcept = default;

double FracIntegral::order() const { return impl_->beta; }

void FracIntegral::apply(std::span<const double> f, std::span<double> out) const {
    const auto& I = *impl_;
    require_finite(f, I.grid);
    if (I.terminal.kind() == Terminal::Kind::Periodic) {
        const auto v = detail::apply_symbol(f, I.symbol);
        std::copy(v.begin(), v.end(), out.begin());
        return;
    }
    if (I.side == Side::Left) {
        I.left(f, out);
        return;
    }
    const auto fr = reversed(f);
    std::vector<double> tmp(fr.size());
    I.left(fr, tmp);
    std::copy(tmp.rbegin(), tmp.rend(), out.begin());
}

Field frac_integral(const Field& f, const FracSpec& spec) {
    if (spec.kind != OperatorKind::Integral)
        throw Error(Errc::invalid_input, "frac_integral needs an Integral spec");
    const FracIntegral op(f.grid(), spec.order, spec.side, spec.terminal);
    const double scale = std::max(max_abs(f.values()), 1e-300);
    if (spec.terminal.kind() == Terminal::Kind::Unbounded) {
        const double tail = spec.side == Side::Left ? f.front() : f.back();
        if (std::abs(tail) > 1e-8 * scale)
            throw Error(Errc::tail_violation,
                        "Weyl integral needs the field to vanish at the terminal end");
    } else if (spec.terminal.kind() == Terminal::Kind::Periodic) {
        double mean = 0.0;
        for (double v : f.values()) mean += v;
        mean /= static_cast<double>(f.size());
        if (std::abs(mean) > 1e-8 * scale)
            throw Error(Errc::tail_violation, "periodic Weyl integral needs a zero-mean field");
    }
    std::vector<double> out(f.size());
    op.apply(f.values(), out);
    return f.with_values(std::move(out));
}

// ---------------------------------------------------------------------------
// FracDerivative

struct FracDerivative::Impl {
    Grid grid;
    FracSpec spec;
    double scale = 1.0;
    std::unique_ptr<FracIntegral> integral;  // I^{1-frac(order)} from the grid start
    std::vector<std::complex<double>> symbol;

    // Left-sided Caputo derivative of order in (0,1) in the orientation of f.
    std::vector<double> caputo_low(std::span<const double> f) const {
        std::vector<double> shifted(f.size()), h(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) shifted[i] = f[i] - f[0];
        integral->apply(shifted, h);
        return centered_derivative(h, grid.dx);
    }

    // Left-sided derivative in the orientation of f (reflection handled by the caller).
    std::vector<double> left(std::span<const double> f) const {
        const double order = spec.order;
        const double dx = grid.dx;
        std::vector<double> out;
        double f_a = f[0], df_a = 0.0;
        if (order == 1.0) return centered_derivative(f, dx);
        if (order < 1.0) {
            out = caputo_low(f);
        } else {
            const auto g = centered_derivative(f, dx);
            df_a = g[0];
            out = caputo_low(g);
        }
        if (spec.kind == OperatorKind::RiemannLiouville && spec.terminal.is_finite()) {
            const double gap = spec.side == Side::Left ? grid.x0 - spec.terminal.value()
                                                       : spec.terminal.value() - grid.x_max();
            const bool touches = gap <= 0.0;
            if (touches && (f_a != 0.0 || (order > 1.0 && df_a != 0.0)))
                throw Error(Errc::invalid_terminal,
                            "Riemann-Liouville derivative is singular at a terminal on the grid");
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double r = static_cast<double>(i) * dx + gap;
                if (r <= 0.0) continue;
                out[i] += f_a * std::pow(r, -order) * rgamma(1.0 - order);
                if (order > 1.0) out[i] += df_a * std::pow(r, 1.0 - order) * rgamma(2.0 - order);
            }
        }
        return out;
    }
};

FracDerivative::FracDerivative(const Grid& grid, const FracSpec& spec)
    : impl_(std::make_unique<Impl>()) {
    if (spec.kind != OperatorKind::Caputo && spec.kind != OperatorKind::RiemannLiouville)
        throw Error(Errc::invalid_input, "frac_derivative needs a Caputo or Riemann-Liouville spec");
    if (!(spec.order >= 0.0 && spec.order < 2.0))
        throw Error(Errc::invalid_order,
                    "derivative order must lie in [0, 2), got " + std::to_string(spec.order));
    if (!(spec.length_scale > 0.0))
        throw Error(Errc::invalid_input, "length scale must be positive");
    impl_->grid = grid;
    impl_->spec = spec;
    impl_->scale = spec.order > 0.0 ? std::pow(spec.length_scale, spec.order - 1.0) : 1.0;
    if (spec.order == 0.0) return;
    if (spec.terminal.kind() == Terminal::Kind::Periodic) {
        impl_->symbol = weyl_symbol(grid, spec.order, spec.side);
        return;
    }
    terminal_gap(grid, spec.side, spec.terminal);
    const double frac = spec.order < 1.0 ? spec.order : spec.order - 1.0;
    if (frac > 0.0)
        impl_->integral =
            std::make_unique<FracIntegral>(grid, 1.0 - frac, Side::Left, Terminal::at(grid.x0));
}

FracDerivative::~FracDerivative() = default;
FracDerivative::FracDerivative(FracDerivative&&) noexcept = default;
FracDerivative& FracDerivative::operator=(FracDerivative&&) noexcept = default;

void FracDerivative::apply(std::span<const double> f, std::span<double> out) const {
    const auto& D = *impl_;
    require_finite(f, D.grid);
    if (D.spec.order == 0.0) {
        std::copy(f.begin(), f.end(), out.begin());
        return;
    }
    std::vector<double> r;
    if (D.spec.terminal.kind() == Terminal::Kind::Periodic) {
        r = detail::apply_symbol(f, D.symbol);
    } else if (D.spec.side == Side::Left) {
        r = D.left(f);
    } else {
        auto l = D.left(reversed(f));
        r.assign(l.rbegin(), l.rend());
    }
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = D.scale * r[i];
}

Field FracDerivative::operator()(const Field& f) const {
    if (!(f.grid() == impl_->grid)) throw Error(Errc::invalid_input, "grid mismatch");
    std::vector<double> out(f.size());
    apply(f.values(), out);
    return f.with_values(std::move(out));
}

Field frac_derivative(const Field& f, const FracSpec& spec) {
    return FracDerivative(f.grid(), spec)(f);
}

// ---------------------------------------------------------------------------
// Riesz

Field frac_derivative_riesz(const Field& f, double order, RieszBoundary boundary) {
    if (!(order > 0.0 && order <= 2.0))
        throw Error(Errc::invalid_order, "Riesz order must lie in (0, 2]");
    const auto v = f.values();
    const std::size_t n = v.size();
    double offset = 0.0;
    if (boundary == RieszBoundary::Decaying) {
        const double scale = max_abs(v);
        if (scale == 0.0) return f.with_values(std::vector<double>(n, 0.0));
        const double dev = std::max({std::abs(v[0] - v[n - 1]), std::abs(v[1] - v[0]),
                                     std::abs(v[n - 2] - v[n - 1])});
        if (dev > 1e-8 * scale)
            throw Error(Errc::tail_violation,
                        "Riesz derivative needs a field with a common constant at both ends");
        offset = 0.5 * (v[0] + v[n - 1]);
    }
    std::vector<double> g(v.begin(), v.end());
    for (auto& x : g) x -= offset;
    const auto k = detail::wavenumbers(n, f.grid().dx);
    std::vector<std::complex<double>> symbol(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) symbol[i] = i == 0 ? 0.0 : std::pow(k[i], order);
    return f.with_values(detail::apply_symbol(g, symbol));
}

// ---------------------------------------------------------------------------
// Closed forms

double rgamma(double x) {
    if (x > 0.0) return std::exp(-std::lgamma(x));
    if (x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

double AnalyticResult::operator()(double x) const {
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Exponential>)
                return amplitude * std::exp(k.rate * x + k.shift);
            else if constexpr (std::is_same_v<K, Sine>)
                return amplitude * std::sin(k.rate * x + phase);
            else if constexpr (std::is_same_v<K, Cosine>)
                return amplitude * std::cos(k.rate * x + phase);
            else
                return exponent == 0.0 ? amplitude : amplitude * std::pow(x, exponent);
        },
        base);
}

AnalyticResult analytic_frac_derivative(const AnalyticKind& kind, double order) {
    if (!std::isfinite(order)) throw Error(Errc::invalid_order, "order must be finite");
    return std::visit(
        [&](const auto& k) -> AnalyticResult {
            using K = std::decay_t<decltype(k)>;
            AnalyticResult r{kind};
            if constexpr (std::is_same_v<K, Exponential>) {
                if (!(k.rate > 0.0))
                    throw Error(Errc::invalid_input, "exponential rate must be positive");
                r.amplitude = std::pow(k.rate, order);
            } else if constexpr (std::is_same_v<K, Sine> || std::is_same_v<K, Cosine>) {
                if (!(k.rate > 0.0))
                    throw Error(Errc::invalid_input, "trigonometric rate must be positive");
                if (order <= -1.0)
                    throw Error(Errc::unsupported_order,
                                "trigonometric rule holds for order > -1 only");
                r.amplitude = std::pow(k.rate, order);
                r.phase = order * std::numbers::pi / 2.0;
            } else if constexpr (std::is_same_v<K, Power>) {
                if (!(k.beta > -1.0))
                    throw Error(Errc::invalid_input, "power exponent must exceed -1");
                r.amplitude = std::tgamma(k.beta + 1.0) * rgamma(k.beta + 1.0 - order);
                r.exponent = k.beta - order;
            } else {
                if (order > 0.0) {
                    r.amplitude = 0.0;
                } else {
                    r.amplitude = k.c * rgamma(1.0 - order);
                    r.exponent = -order;
                }
            }
            return r;
        },
        kind);
}

// ---------------------------------------------------------------------------
// Nonlocal log operator

namespace {

double xlogx(double u) { return u > 0.0 ? u * std::log(u) : 0.0; }
double L0(double u) { return xlogx(u) - u; }
double L1(double u) { return 0.5 * u * xlogx(u) - 0.25 * u * u; }

// int_{k-1}^{k+1} log(s) (1 - |s-k|) ds
double log_hat(std::size_t k) {
    const double kd = static_cast<double>(k);
    if (k > 40) {
        const double k2 = 1.0 / (kd * kd);
        return std::log(kd) - k2 / 12.0 - k2 * k2 / 60.0 - k2 * k2 * k2 / 168.0;
    }
    const double right = (kd + 1.0) * (L0(kd + 1.0) - L0(kd)) - (L1(kd + 1.0) - L1(kd));
    const double left = (L1(kd) - L1(kd - 1.0)) - (kd - 1.0) * (L0(kd) - L0(kd - 1.0));
    return right + left;
}

// int_{m-1}^{m} log(s) (s - m + 1) ds
double log_half_hat(std::size_t m) {
    const double md = static_cast<double>(m);
    if (m > 40) {
        double sum = 0.5 * std::log(md), p = 1.0;
        for (int j = 1; j <= 8; ++j) {
            p /= md;
            sum -= p / (static_cast<double>(j) * (j + 1) * (j + 2));
        }
        return sum;
    }
    return (L1(md) - L1(md - 1.0)) - (md - 1.0) * (L0(md) - L0(md - 1.0));
}

}  // namespace

Field nonlocal_log_operator(const Field& f, Terminal terminal) {
    const Grid& g = f.grid();
    if (terminal.kind() == Terminal::Kind::Periodic)
        throw Error(Errc::invalid_terminal, "log operator needs a finite or unbounded terminal");
    terminal_gap(g, Side::Left, terminal);
    const std::size_t n = g.n;
    const auto d = centered_derivative(f.values(), g.dx);

    std::vector<double> kernel(n);
    kernel[0] = -0.75;  // int_0^1 log(s)(1-s) ds
    for (std::size_t k = 1; k < n; ++k) kernel[k] = log_hat(k);
    std::vector<double> dt(d);
    dt[0] = 0.0;
    std::vector<double> conv(n);
    detail::ToeplitzLower(std::move(kernel)).apply(dt, conv);

    const double logdx = std::log(g.dx);
    std::vector<double> out(n);
    double trap = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        if (m > 0) trap += 0.5 * (d[m - 1] + d[m]);
        const double logpart = m == 0 ? 0.0 : conv[m] + log_half_hat(m) * d[0];
        const double integral = g.dx * (logdx * trap + logpart);
        out[m] = -detail::euler_gamma * f[m] - integral;
    }
    return f.with_values(std::move(out));
}

// ---------------------------------------------------------------------------
// Series

namespace {

constexpr std::size_t max_terms = 200000;

template <class LogTerm>
double sum_series(LogTerm&& log_term) {
    double sum = 0.0;
    for (std::size_t n = 0; n < max_terms; ++n) {
        const auto [logmag, sign] = log_term(n);
        if (logmag > 700.0)
            throw Error(Errc::domain_restriction, "series term overflows double precision");
        const double term = sign == 0.0 ? 0.0 : sign * std::exp(logmag);
        sum += term;
        if (n + 1 >= 5 && std::abs(term) <= 1e-15 * std::abs(sum)) return sum;
    }
    throw Error(Errc::domain_restriction, "series did not converge");
}

// log|1/Gamma(x)| and the sign of 1/Gamma(x); sign 0 at poles.
std::pair<double, double> log_rgamma(double x) {
    if (x > 0.0) return {-std::lgamma(x), 1.0};
    if (x == std::floor(x)) return {0.0, 0.0};
    const double g = std::tgamma(x);
    return {-std::log(std::abs(g)), g > 0.0 ? 1.0 : -1.0};
}

}  // namespace

double mittag_leffler(double alpha, double beta, double z) {
    if (!(alpha > 0.0)) throw Error(Errc::invalid_order, "Mittag-Leffler alpha must be positive");
    if (!(std::abs(z) <= 50.0))
        throw Error(Errc::domain_restriction, "Mittag-Leffler series limited to |z| <= 50");
    const double logz = z == 0.0 ? 0.0 : std::log(std::abs(z));
    return sum_series([&](std::size_t n) -> std::pair<double, double> {
        const double nd = static_cast<double>(n);
        auto [lr, sr] = log_rgamma(alpha * nd + beta);
        if (n > 0 && z == 0.0) return {0.0, 0.0};
        const double sz = (z < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
        return {nd * logz + lr, sz * sr};
    });
}

double generalized_exp(double alpha, double z) {
    if (!(z > 0.0)) throw Error(Errc::domain_restriction, "generalized exponential needs z > 0");
    if (!(alpha > -1.0)) throw Error(Errc::invalid_order, "generalized exponential needs alpha > -1");
    const double logz = std::log(z);
    return sum_series([&](std::size_t n) -> std::pair<double, double> {
        const double e = static_cast<double>(n) + alpha;
        auto [lr, sr] = log_rgamma(1.0 + e);
        return {e * logz + lr, sr};
    });
}

}  // namespace fbenn
