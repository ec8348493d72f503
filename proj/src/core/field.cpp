#include "fbenn/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbenn/error.hpp"

namespace fbenn {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_order: return "invalid-order";
        case Errc::invalid_terminal: return "invalid-terminal";
        case Errc::invalid_field: return "invalid-field";
        case Errc::invalid_input: return "invalid-input";
        case Errc::tail_violation: return "tail-violation";
        case Errc::unsupported_order: return "unsupported-order";
        case Errc::domain_restriction: return "domain-restriction";
        case Errc::overflow_at_point: return "overflow-at-point";
        case Errc::invalid_time: return "invalid-time";
        case Errc::log_domain_violation: return "log-domain-violation";
        case Errc::amplitude_too_large: return "amplitude-too-large";
        case Errc::not_a_companion_solution: return "not-a-companion-solution";
        case Errc::invalid_step: return "invalid-step";
        case Errc::blow_up: return "blow-up";
        case Errc::singular_point: return "singular-point";
        case Errc::domain_exceeded: return "domain-exceeded";
        case Errc::fit_unreliable: return "fit-unreliable";
        case Errc::degenerate: return "degenerate";
        case Errc::unknown_key: return "unknown-key";
        case Errc::missing_key: return "missing-key";
        case Errc::range_violation: return "range-violation";
        case Errc::io_error: return "io-error";
    }
    return "error";
}

Grid Grid::make(double x0, double dx, std::size_t n) {
    if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0))
        throw Error(Errc::invalid_input, "grid spacing must be positive and finite");
    if (n < 4) throw Error(Errc::invalid_input, "grid needs at least 4 samples");
    return Grid{x0, dx, n};
}

Grid Grid::span(double a, double b, std::size_t n) {
    if (n < 4) throw Error(Errc::invalid_input, "grid needs at least 4 samples");
    return make(a, (b - a) / static_cast<double>(n - 1), n);
}

std::vector<double> Grid::samples() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

IndexRange interior(const Grid& g) {
    const auto band = static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(g.n)));
    if (2 * band >= g.n) return {0, g.n};
    return {band, g.n - band};
}

Field::Field(Grid grid, std::vector<double> values, double t)
    : grid_(grid), values_(std::move(values)), t_(t) {
    if (values_.size() != grid_.n)
        throw Error(Errc::invalid_field, "field has " + std::to_string(values_.size()) +
                                             " values for a grid of " + std::to_string(grid_.n));
    if (!std::isfinite(t_) || t_ < 0.0) throw Error(Errc::invalid_time, "field time must be >= 0");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]))
            throw Error(Errc::invalid_field,
                        "non-finite value at x = " + std::to_string(grid_.x(i)));
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& f, double t) {
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = f(grid.x(i));
    return Field(grid, std::move(v), t);
}

Field Field::constant(const Grid& grid, double c, double t) {
    return Field(grid, std::vector<double>(grid.n, c), t);
}

Trajectory::Trajectory(std::vector<Field> slices) {
    for (auto& f : slices) push_back(std::move(f));
}

void Trajectory::push_back(Field f) {
    if (!slices_.empty()) {
        if (!(f.grid() == slices_.front().grid()))
            throw Error(Errc::invalid_input, "trajectory slices must share one grid");
        if (!(f.t() > slices_.back().t()))
            throw Error(Errc::invalid_input, "trajectory times must be strictly increasing");
    }
    slices_.push_back(std::move(f));
}

std::vector<double> Trajectory::times() const {
    std::vector<double> ts;
    ts.reserve(slices_.size());
    for (const auto& f : slices_) ts.push_back(f.t());
    return ts;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double linf_interior(const Field& a) {
    const auto r = interior(a.grid());
    double m = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

double linf_interior(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw Error(Errc::invalid_input, "grid mismatch");
    const auto r = interior(a.grid());
    double m = 0.0;
    for (std::size_t i = r.begin; i < r.end; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double linf_interior_mod_const(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw Error(Errc::invalid_input, "grid mismatch");
    const auto r = interior(a.grid());
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const double d = a[i] - b[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return 0.5 * (hi - lo);
}

}  // namespace fbenn
