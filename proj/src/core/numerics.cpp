#include "numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fbenn::detail {

namespace {

// Planner calls are not thread-safe in FFTW; execution with new-array functions is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr std::size_t direct_limit = 192;

std::size_t fft_size(std::size_t min_len) {
    std::size_t n = 1;
    while (n < min_len) n <<= 1;
    return n;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    void* ptr;
};

struct RealPlans {
    explicit RealPlans(std::size_t n) : n(n) {
        FftwBuffer r(sizeof(double) * n);
        FftwBuffer c(sizeof(fftw_complex) * (n / 2 + 1));
        std::lock_guard lock(planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), static_cast<double*>(r.ptr),
                                   static_cast<fftw_complex*>(c.ptr), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), static_cast<fftw_complex*>(c.ptr),
                                   static_cast<double*>(r.ptr), FFTW_ESTIMATE);
    }
    ~RealPlans() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    RealPlans(const RealPlans&) = delete;
    RealPlans& operator=(const RealPlans&) = delete;

    std::size_t n;
    fftw_plan fwd;
    fftw_plan bwd;
};

}  // namespace

struct ToeplitzLower::Plan {
    explicit Plan(std::size_t n) : plans(n) {}
    RealPlans plans;
    std::vector<std::complex<double>> kernel_hat;
};

ToeplitzLower::ToeplitzLower(std::vector<double> kernel) : kernel_(std::move(kernel)) {
    const std::size_t n = kernel_.size();
    if (n <= direct_limit) return;
    const std::size_t m = fft_size(2 * n);
    plan_ = std::make_unique<Plan>(m);
    FftwBuffer r(sizeof(double) * m);
    FftwBuffer c(sizeof(fftw_complex) * (m / 2 + 1));
    auto* rp = static_cast<double*>(r.ptr);
    auto* cp = static_cast<fftw_complex*>(c.ptr);
    std::fill(rp, rp + m, 0.0);
    std::copy(kernel_.begin(), kernel_.end(), rp);
    fftw_execute_dft_r2c(plan_->plans.fwd, rp, cp);
    plan_->kernel_hat.resize(m / 2 + 1);
    for (std::size_t k = 0; k <= m / 2; ++k) plan_->kernel_hat[k] = {cp[k][0], cp[k][1]};
}

ToeplitzLower::~ToeplitzLower() = default;
ToeplitzLower::ToeplitzLower(ToeplitzLower&&) noexcept = default;
ToeplitzLower& ToeplitzLower::operator=(ToeplitzLower&&) noexcept = default;

void ToeplitzLower::apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = kernel_.size();
    if (!plan_) {
        for (std::size_t m = 0; m < n; ++m) {
            double s = 0.0;
            for (std::size_t j = 0; j <= m; ++j) s += kernel_[m - j] * x[j];
            y[m] = s;
        }
        return;
    }
    const std::size_t m = plan_->plans.n;
    FftwBuffer r(sizeof(double) * m);
    FftwBuffer c(sizeof(fftw_complex) * (m / 2 + 1));
    auto* rp = static_cast<double*>(r.ptr);
    auto* cp = static_cast<fftw_complex*>(c.ptr);
    std::fill(rp, rp + m, 0.0);
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), rp);
    fftw_execute_dft_r2c(plan_->plans.fwd, rp, cp);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const std::complex<double> v(cp[k][0], cp[k][1]);
        const auto p = v * plan_->kernel_hat[k];
        cp[k][0] = p.real();
        cp[k][1] = p.imag();
    }
    fftw_execute_dft_c2r(plan_->plans.bwd, cp, rp);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i) y[i] = rp[i] * scale;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t len = a.size() + b.size() - 1;
    std::vector<double> out(len, 0.0);
    if (std::min(a.size(), b.size()) <= 64 || len <= 2 * direct_limit) {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    }
    const std::size_t m = fft_size(len);
    RealPlans plans(m);
    FftwBuffer ra(sizeof(double) * m), rb(sizeof(double) * m);
    FftwBuffer ca(sizeof(fftw_complex) * (m / 2 + 1)), cb(sizeof(fftw_complex) * (m / 2 + 1));
    auto* pa = static_cast<double*>(ra.ptr);
    auto* pb = static_cast<double*>(rb.ptr);
    auto* qa = static_cast<fftw_complex*>(ca.ptr);
    auto* qb = static_cast<fftw_complex*>(cb.ptr);
    std::fill(pa, pa + m, 0.0);
    std::fill(pb, pb + m, 0.0);
    std::copy(a.begin(), a.end(), pa);
    std::copy(b.begin(), b.end(), pb);
    fftw_execute_dft_r2c(plans.fwd, pa, qa);
    fftw_execute_dft_r2c(plans.fwd, pb, qb);
    for (std::size_t k = 0; k <= m / 2; ++k) {
        const std::complex<double> p =
            std::complex<double>(qa[k][0], qa[k][1]) * std::complex<double>(qb[k][0], qb[k][1]);
        qa[k][0] = p.real();
        qa[k][1] = p.imag();
    }
    fftw_execute_dft_c2r(plans.bwd, qa, pa);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < len; ++i) out[i] = pa[i] * scale;
    return out;
}

std::vector<double> apply_symbol(std::span<const double> f,
                                 const std::vector<std::complex<double>>& symbol) {
    const std::size_t n = f.size();
    RealPlans plans(n);
    FftwBuffer r(sizeof(double) * n);
    FftwBuffer c(sizeof(fftw_complex) * (n / 2 + 1));
    auto* rp = static_cast<double*>(r.ptr);
    auto* cp = static_cast<fftw_complex*>(c.ptr);
    std::copy(f.begin(), f.end(), rp);
    fftw_execute_dft_r2c(plans.fwd, rp, cp);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const auto p = std::complex<double>(cp[k][0], cp[k][1]) * symbol[k];
        cp[k][0] = p.real();
        cp[k][1] = p.imag();
    }
    // The Nyquist coefficient of a real signal must stay real.
    if (n % 2 == 0) cp[n / 2][1] = 0.0;
    fftw_execute_dft_c2r(plans.bwd, cp, rp);
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rp[i] * scale;
    return out;
}

std::vector<double> wavenumbers(std::size_t n, double dx) {
    std::vector<double> k(n / 2 + 1);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = base * static_cast<double>(i);
    return k;
}

Tridiagonal::Tridiagonal(std::vector<double> lower, std::vector<double> diag,
                         std::vector<double> upper)
    : lower_(std::move(lower)), cprime_(diag.size()), denom_(diag.size()) {
    const std::size_t n = diag.size();
    denom_[0] = diag[0];
    cprime_[0] = upper[0] / denom_[0];
    for (std::size_t i = 1; i < n; ++i) {
        denom_[i] = diag[i] - lower_[i] * cprime_[i - 1];
        cprime_[i] = i + 1 < n ? upper[i] / denom_[i] : 0.0;
    }
}

void Tridiagonal::solve(std::span<double> d) const {
    const std::size_t n = denom_.size();
    d[0] /= denom_[0];
    for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - lower_[i] * d[i - 1]) / denom_[i];
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= cprime_[i] * d[i + 1];
}

}  // namespace fbenn::detail
