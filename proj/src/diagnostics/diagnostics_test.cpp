#include "fbenn/diagnostics.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fbenn/diffusion.hpp"
#include "fbenn/error.hpp"
#include "fbenn/solver.hpp"

using namespace fbenn;

namespace {

template <class E>
void expect_error(Errc code, E&& fn) {
    try {
        fn();
        FAIL() << "expected " << errc_name(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

ModelParams model(double p, double alpha = 1.0) {
    ModelParams m;
    m.alpha = alpha;
    m.p = p;
    return m;
}

Field gaussian(const Grid& g, double amp = 1.0, double width = 1.0) {
    return Field::sample(g, [&](double x) { return amp * std::exp(-x * x / (width * width)); });
}

// Heat solution 1 + A/sqrt(s) exp(-x^2/s), s = 1 + 4 alpha t; its transform has a Gaussian-decaying gradient.
Field bump_heat(const Grid& g, double alpha, double amp, double t) {
    const double s = 1.0 + 4.0 * alpha * t;
    return Field::sample(
        g, [&](double x) { return 1.0 + amp / std::sqrt(s) * std::exp(-x * x / s); }, t);
}

}  // namespace

TEST(MassInvariant, ZeroField) {
    const auto g = Grid::span(-5.0, 5.0, 201);
    for (double p : {0.0, 0.5, 1.0}) EXPECT_EQ(mass_invariant(Field::constant(g, 0.0), model(p)), 0.0);
}

TEST(MassInvariant, NdeEndpointIsPotentialDifference) {
    const auto g = Grid::span(-6.0, 6.0, 1201);
    const auto phi = Field::sample(g, [](double x) { return std::tanh(x) + 0.3 * std::exp(-x * x); });
    EXPECT_NEAR(mass_invariant(phi, model(0.0)), phi.back() - phi.front(), 1e-8);
}

TEST(MassInvariant, BurgersEndpointIsArea) {
    const auto g = Grid::span(-8.0, 8.0, 801);
    EXPECT_NEAR(mass_invariant(gaussian(g, 2.0), model(1.0)), 2.0 * std::sqrt(M_PI), 1e-10);
}

TEST(Energy, ConstantHasNone) {
    const auto g = Grid::span(-4.0, 4.0, 161);
    for (double p : {0.0, 0.25, 0.5}) EXPECT_NEAR(energy(Field::constant(g, 1.7), model(p)), 0.0, 1e-12);
}

TEST(Energy, GaussianAtBurgersEndpoint) {
    // 1/2 int a^2 exp(-2x^2/w^2) = a^2 w sqrt(pi/2) / 2
    const auto g = Grid::span(-10.0, 10.0, 2001);
    const double a = 1.5, w = 1.2;
    EXPECT_NEAR(energy(gaussian(g, a, w), model(1.0)), 0.5 * a * a * w * std::sqrt(M_PI / 2.0), 1e-6);
}

TEST(Energy, DissipationOfGaussianAtBurgersEndpoint) {
    // alpha int (d/dx a exp(-x^2))^2 = alpha a^2 sqrt(pi/2)
    const auto g = Grid::span(-10.0, 10.0, 2001);
    EXPECT_NEAR(dissipation_rate(gaussian(g, 1.0), model(1.0, 0.3)), 0.3 * std::sqrt(M_PI / 2.0), 1e-6);
}

TEST(DecayConditions, DetectsTails) {
    const auto g = Grid::span(-10.0, 10.0, 401);
    EXPECT_TRUE(decay_conditions_hold(gaussian(g), model(1.0)));
    EXPECT_FALSE(decay_conditions_hold(Field::sample(g, [](double x) { return std::exp(-0.1 * x * x); }),
                                       model(1.0)));
    // At p=0 the gradient of a step decays even though the field does not.
    EXPECT_TRUE(decay_conditions_hold(Field::sample(g, [](double x) { return std::tanh(2.0 * x); }), model(0.0)));
}

TEST(Conservation, TransformFamilyAtHalfOrder) {
    const double alpha = 0.5, amp = 3.0;
    const ModelParams m = model(0.5, alpha);
    const auto g = Grid::span(-12.0, 12.0, 513);
    IntegrateOptions opt;
    opt.record_every = 1;
    opt.boundary = [&](double t) {
        const auto f = transform(bump_heat(g, alpha, amp, t), m);
        return std::make_pair(f.front(), f.back());
    };
    std::vector<double> t, k, d;
    opt.on_step = [&](const Field& f) {
        t.push_back(f.t());
        k.push_back(energy(f, m));
        d.push_back(dissipation_rate(f, m));
    };
    const auto traj = integrate(transform(bump_heat(g, alpha, amp, 0.0), m), m, 0.5,
                                stability_limit(g, alpha), opt);
    const auto rep = conservation_report(traj, m);
    ASSERT_EQ(rep.times.size(), traj.size());
    EXPECT_LE(rep.mass_drift, 1e-3);
    EXPECT_TRUE(rep.energy_monotone);
    EXPECT_LT(rep.energy.back(), 0.6 * rep.energy.front());
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < k.size(); ++i) {
        const double rate = -(k[i + 1] - k[i - 1]) / (t[i + 1] - t[i - 1]);
        worst = std::max(worst, std::abs(rate - d[i]) / d[i]);
    }
    EXPECT_LE(worst, 0.05);
}

TEST(Conservation, EnergyIncreaseIsFlagged) {
    const auto g = Grid::span(-8.0, 8.0, 401);
    Trajectory traj;
    traj.push_back(gaussian(g, 1.0));
    traj.push_back(gaussian(g, 1.01).at_time(0.1));
    const auto rep = conservation_report(traj, model(1.0));
    EXPECT_FALSE(rep.energy_monotone);
    EXPECT_NEAR(rep.mass_drift, 0.01, 1e-9);
}

TEST(Reynolds, Examples) {
    EXPECT_DOUBLE_EQ(reynolds_number(1.0, 1.0, model(1.0)), 1.0);
    EXPECT_DOUBLE_EQ(reynolds_number(3.0, 2.0, model(1.0, 0.5)), 3.0 * 2.0 / 0.5);
    EXPECT_DOUBLE_EQ(reynolds_number(2.0, 4.0, model(0.5)), 4.0);
    expect_error(Errc::invalid_input, [] { reynolds_number(0.0, 1.0, model(1.0)); });
    expect_error(Errc::invalid_input, [] { reynolds_number(1.0, -1.0, model(1.0)); });
}

TEST(Reynolds, SmallReynoldsFollowsPureDiffusion) {
    const auto g = Grid::span(-10.0, 10.0, 401);
    const ModelParams m = model(0.5);
    const auto phi0 = gaussian(g, 1e-3);
    ASSERT_LE(reynolds_number(1e-3, 1.0, m), 0.01);
    IntegrateOptions opt;
    opt.record_every = 20;
    const auto traj = integrate(phi0, m, 0.1, stability_limit(g, 1.0), opt);
    for (const auto& s : traj) {
        if (s.t() == 0.0) continue;
        const auto heat = heat_kernel_solve(phi0, DiffusionParams{1.0}, s.t());
        EXPECT_LE(linf_interior(s, heat), 0.01 * max_abs(heat.values())) << "t=" << s.t();
    }
}

TEST(AsymptoticFit, ExactQuadraticRamp) {
    const auto g = Grid::span(-2.0, 10.0, 1201);
    const double t = 3.0;
    const auto phi = Field::sample(g, [&](double x) { return x > 0.0 ? x * x / (2.0 * t) : 0.0; }, t);
    const auto r = ramp_fit(phi, model(0.0));
    EXPECT_NEAR(r.exponent, 2.0, 0.01);
    EXPECT_NEAR(r.foot, 0.0, 1e-6);
}

TEST(AsymptoticFit, PeakDecayOfPowerLaw) {
    const auto g = Grid::span(-4.0, 4.0, 81);
    Trajectory traj;
    for (int k = 0; k <= 16; ++k) {
        const double t = std::pow(10.0, k / 8.0);
        traj.push_back(gaussian(g, std::pow(t, -0.5)).at_time(t));
    }
    EXPECT_NEAR(peak_decay_exponent(traj), -0.5, 1e-9);
}

TEST(AsymptoticFit, ShortRangeIsUnreliable) {
    const auto g = Grid::span(-4.0, 4.0, 81);
    Trajectory traj;
    for (double t : {1.0, 2.0, 4.0}) traj.push_back(gaussian(g, 1.0 / t).at_time(t));
    expect_error(Errc::fit_unreliable, [&] { peak_decay_exponent(traj); });
    expect_error(Errc::fit_unreliable, [&] { ramp_fit(Field::constant(g, -1.0), model(1.0)); });
}

TEST(AsymptoticFit, BurgersPeakDecayAtSmallViscosity) {
    const double alpha = 0.005, mass = 2.0, w = 0.3;
    const auto g = Grid::make(-3.0, 0.0025, 5201);
    const auto phi0 = gaussian(g, mass / (w * std::sqrt(M_PI)), w);
    IntegrateOptions opt;
    opt.record_every = 200;
    const auto traj = integrate(phi0, model(1.0, alpha), 10.0, stability_limit(g, alpha), opt);
    const auto fit = asymptotic_profile_fit(traj, model(1.0, alpha));
    EXPECT_NEAR(fit.exponent_t, -0.5, 0.1);
    EXPECT_GE(fit.reynolds, 100.0);
}

TEST(Normalize, Examples) {
    const auto unit = normalize({1.0, 1.0});
    EXPECT_DOUBLE_EQ(unit.scale_phi, 1.0);
    EXPECT_DOUBLE_EQ(unit.scale_t, 1.0);
    const auto s = normalize({2.0, 4.0});
    EXPECT_DOUBLE_EQ(s.scale_phi, 2.0);
    EXPECT_DOUBLE_EQ(s.scale_t, 0.25);
    expect_error(Errc::degenerate, [] { normalize({0.0, 1.0}); });
    expect_error(Errc::invalid_input, [] { normalize({1.0, 0.0}); });
}

TEST(Normalize, RoundTrip) {
    const auto g = Grid::span(-6.0, 6.0, 301);
    const auto phi = Field::sample(g, [](double x) { return 0.7 - std::tanh(1.3 * x); }, 0.37);
    const auto s = normalize({1.7, 0.3});
    const auto back = denormalize_field(normalize_field(phi, s), s);
    EXPECT_NEAR(back.t(), phi.t(), 1e-12);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_NEAR(back[i], phi[i], 1e-12);
}

TEST(Normalize, RawAndNormalizedPipelinesAgree) {
    // phi_t + a phi phi_x - b phi_xx = 0: chi = a phi solves Burgers with viscosity b.
    const RawCoefficients raw{2.0, 4.0};
    const auto s = normalize(raw);
    const auto g = Grid::span(-10.0, 10.0, 401);
    const auto psi0 = gaussian(g, 1.5);
    const double tau_end = 0.4, dtau = stability_limit(g, 1.0);

    const auto psi = integrate(psi0, model(1.0, 1.0), tau_end, dtau).back();
    const auto chi0 = Field(g, [&] {
        auto v = psi0.data();
        for (auto& x : v) x *= raw.alpha_nl * s.scale_phi;
        return v;
    }());
    const auto chi = integrate(chi0, model(1.0, raw.beta), tau_end * s.scale_t, dtau * s.scale_t).back();

    const auto phi = denormalize_field(psi, s);
    EXPECT_NEAR(phi.t(), chi.t(), 1e-12);
    for (std::size_t i = 0; i < g.n; ++i) EXPECT_NEAR(phi[i], chi[i] / raw.alpha_nl, 1e-12);
}
