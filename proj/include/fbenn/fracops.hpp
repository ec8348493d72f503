#pragma once

#include <memory>
#include <variant>

#include "fbenn/field.hpp"

namespace fbenn {

enum class OperatorKind { Caputo, RiemannLiouville, Riesz, Integral };
enum class Side { Left, Right };

/// Lower terminal of a one-sided operator.
///
/// Finite: the point a (the field is extended by its end value between a and the grid).
/// Unbounded: Weyl sense; the field is extended by its end value to infinity.
/// Periodic: Weyl sense for a field periodic over n*dx, evaluated spectrally.
class Terminal {
public:
    enum class Kind { Finite, Unbounded, Periodic };

    Terminal() : Terminal(Kind::Unbounded, 0.0) {}

    static Terminal at(double a) { return Terminal(Kind::Finite, a); }
    static Terminal unbounded() { return Terminal(Kind::Unbounded, 0.0); }
    static Terminal periodic() { return Terminal(Kind::Periodic, 0.0); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    double value() const { return a_; }

    friend bool operator==(const Terminal&, const Terminal&) = default;

private:
    Terminal(Kind k, double a) : kind_(k), a_(a) {}
    Kind kind_;
    double a_;
};

struct FracSpec {
    double order = 0.0;
    OperatorKind kind = OperatorKind::Caputo;
    Side side = Side::Left;
    Terminal terminal = Terminal::unbounded();
    double length_scale = 1.0;
};

/// Fractional integral I^order on a fixed grid with precomputed weights.
class FracIntegral {
public:
    FracIntegral(const Grid& grid, double order, Side side, Terminal terminal);
    ~FracIntegral();
    FracIntegral(FracIntegral&&) noexcept;
    FracIntegral& operator=(FracIntegral&&) noexcept;

    void apply(std::span<const double> f, std::span<double> out) const;
    double order() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// Caputo or Riemann-Liouville derivative of order in [0, 2) on a fixed grid.
class FracDerivative {
public:
    FracDerivative(const Grid& grid, const FracSpec& spec);
    ~FracDerivative();
    FracDerivative(FracDerivative&&) noexcept;
    FracDerivative& operator=(FracDerivative&&) noexcept;

    void apply(std::span<const double> f, std::span<double> out) const;
    Field operator()(const Field& f) const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

Field frac_integral(const Field& f, const FracSpec& spec);
Field frac_derivative(const Field& f, const FracSpec& spec);

enum class RieszBoundary { Decaying, Periodic };
Field frac_derivative_riesz(const Field& f, double order,
                            RieszBoundary boundary = RieszBoundary::Decaying);

/// 4th-order centred first derivative, one-sided 4th-order stencils at the ends.
std::vector<double> centered_derivative(std::span<const double> f, double dx);
/// 4th-order centred second derivative, one-sided at the ends.
std::vector<double> second_derivative(std::span<const double> f, double dx);

// Closed-form rules.

struct Exponential {
    double rate;
    double shift = 0.0;
};
struct Sine {
    double rate;
};
struct Cosine {
    double rate;
};
/// x^beta with terminal at 0.
struct Power {
    double beta;
};
struct Constant {
    double c;
};
using AnalyticKind = std::variant<Exponential, Sine, Cosine, Power, Constant>;

/// amplitude * base(x + phase/rate) for Exponential/Sine/Cosine,
/// amplitude * x^exponent for Power, amplitude for Constant.
struct AnalyticResult {
    AnalyticKind base;
    double amplitude = 1.0;
    double phase = 0.0;
    double exponent = 0.0;

    double operator()(double x) const;
};

AnalyticResult analytic_frac_derivative(const AnalyticKind& kind, double order);

/// N f = -gamma f - int_a^x f'(xi) log(x - xi) dxi.
Field nonlocal_log_operator(const Field& f, Terminal terminal);

double mittag_leffler(double alpha, double beta, double z);
double generalized_exp(double alpha, double z);

/// 1/Gamma(x), zero at the non-positive integers.
double rgamma(double x);

}  // namespace fbenn
