#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fbenn::detail {

/// Lower-triangular Toeplitz product y_m = sum_{j<=m} k_{m-j} x_j.
/// Direct summation for short kernels, FFT convolution otherwise.
class ToeplitzLower {
public:
    explicit ToeplitzLower(std::vector<double> kernel);
    ~ToeplitzLower();
    ToeplitzLower(ToeplitzLower&&) noexcept;
    ToeplitzLower& operator=(ToeplitzLower&&) noexcept;

    std::size_t size() const { return kernel_.size(); }
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    struct Plan;
    std::vector<double> kernel_;
    std::unique_ptr<Plan> plan_;
};

/// Full linear convolution of a and b (length a.size() + b.size() - 1).
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

/// Multiply the discrete Fourier coefficients of a real periodic signal by symbol(k_index)
/// where k_index runs over 0..n/2 (non-negative frequencies).
std::vector<double> apply_symbol(std::span<const double> f,
                                 const std::vector<std::complex<double>>& symbol);

/// Angular wavenumbers 2*pi*k/(n*dx) for k = 0..n/2.
std::vector<double> wavenumbers(std::size_t n, double dx);

/// Solves a tridiagonal system in place (Thomas algorithm); lower[0] and upper[n-1] unused.
class Tridiagonal {
public:
    Tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);
    void solve(std::span<double> rhs) const;

private:
    std::vector<double> lower_, cprime_, denom_;
};

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace fbenn::detail
