#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fbenn {

/// Uniform 1-D sampling x_i = x0 + i*dx, 0 <= i < n.
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    std::size_t n = 4;

    static Grid make(double x0, double dx, std::size_t n);
    /// Grid with n samples spanning [a, b] inclusive.
    static Grid span(double a, double b, std::size_t n);

    double x(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double x_max() const { return x(n - 1); }
    double length() const { return static_cast<double>(n - 1) * dx; }
    std::vector<double> samples() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Half-open index range [begin, end) with the outer 5% of samples removed on each side.
struct IndexRange {
    std::size_t begin;
    std::size_t end;
};
IndexRange interior(const Grid& g);

class Field {
public:
    Field(Grid grid, std::vector<double> values, double t = 0.0);

    static Field sample(const Grid& grid, const std::function<double(double)>& f, double t = 0.0);
    static Field constant(const Grid& grid, double c, double t = 0.0);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& data() const { return values_; }
    double t() const { return t_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    Field with_values(std::vector<double> v) const { return Field(grid_, std::move(v), t_); }
    Field at_time(double t) const { return Field(grid_, values_, t); }

private:
    Grid grid_;
    std::vector<double> values_;
    double t_;
};

/// Time-ordered snapshots sharing one grid.
class Trajectory {
public:
    Trajectory() = default;
    explicit Trajectory(std::vector<Field> slices);

    void push_back(Field f);
    std::size_t size() const { return slices_.size(); }
    bool empty() const { return slices_.empty(); }
    const Field& operator[](std::size_t k) const { return slices_[k]; }
    const Field& front() const { return slices_.front(); }
    const Field& back() const { return slices_.back(); }
    std::vector<double> times() const;
    const Grid& grid() const { return slices_.front().grid(); }
    auto begin() const { return slices_.begin(); }
    auto end() const { return slices_.end(); }

private:
    std::vector<Field> slices_;
};

double max_abs(std::span<const double> v);
/// max |a_i - b_i| over the interior of the grid.
double linf_interior(const Field& a, const Field& b);
/// Same, after removing the mean difference over the interior.
double linf_interior_mod_const(const Field& a, const Field& b);
double linf_interior(const Field& a);

}  // namespace fbenn
