#pragma once

// Periodic 1D grids, grid functions, discrete norms and difference operators.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rlogkg {

/// Uniform periodic mesh on [a, b) with N points x_j = a + j*h, j = 0..N-1.
/// Index N is identified with index 0.
class Grid1D {
public:
    Grid1D(double a, double b, std::size_t n_points);

    /// Builds the grid with spacing h; (b - a) / h must be an integer.
    static Grid1D from_spacing(double a, double b, double h);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double length() const noexcept { return b_ - a_; }

    double x(std::size_t j) const noexcept { return a_ + static_cast<double>(j) * h_; }
    std::vector<double> points() const;

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
};

/// Time discretization t_n = n * tau, n = 0..n_steps, final time T = n_steps * tau.
class TimeMesh {
public:
    TimeMesh(double tau, std::size_t n_steps);

    /// T / tau must be an integer to within relative 1e-12.
    static TimeMesh from_final_time(double tau, double final_time);

    double tau() const noexcept { return tau_; }
    std::size_t n_steps() const noexcept { return n_steps_; }
    double final_time() const noexcept { return static_cast<double>(n_steps_) * tau_; }
    double time(std::size_t n) const noexcept { return static_cast<double>(n) * tau_; }

    /// Step index of time t; throws ArgumentError unless t is a multiple of tau.
    std::size_t step_of(double t) const;

private:
    double tau_;
    std::size_t n_steps_;
};

/// Returns n when value / unit is within relative 1e-12 of the integer n.
/// Throws ArgumentError otherwise. `what` names the quantity in the message.
std::size_t exact_multiple(double value, double unit, const char* what);

/// One time level of grid values with periodic index semantics.
class Field {
public:
    Field() = default;
    explicit Field(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit Field(std::vector<double> values) : values_(std::move(values)) {}

    static Field sample(const Grid1D& grid, const std::function<double(double)>& fn);

    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t j) noexcept { return values_[j]; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }

    /// Periodic access: any integer index, reduced mod N.
    double wrap(std::ptrdiff_t j) const noexcept;

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& data() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool all_finite() const noexcept;

    /// Cyclic shift: result[j] = (*this)[(j - k) mod N].
    Field rotated(std::ptrdiff_t k) const;

    friend bool operator==(const Field&, const Field&) = default;

private:
    std::vector<double> values_;
};

Field operator-(const Field& lhs, const Field& rhs);
Field operator+(const Field& lhs, const Field& rhs);
Field operator*(double c, const Field& u);

/// Discrete l2 / l-infinity / H1 errors between two fields.
struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    double h1 = 0.0;
};

/// (u_{j+1} - u_j) / h with periodic wrap.
Field forward_diff(const Field& u, const Grid1D& grid);

/// (u_{j+1} - 2 u_j + u_{j-1}) / h^2 with periodic wrap.
Field second_diff(const Field& u, const Grid1D& grid);

/// Writes second_diff(u) into out without allocating. out.size() must equal u.size().
void second_diff_into(std::span<const double> u, double h, std::span<double> out);

/// h * sum_j u_j v_j
double inner_product(const Field& u, const Field& v, const Grid1D& grid);

double norm_l2(const Field& u, const Grid1D& grid);
double norm_linf(const Field& u);
/// sqrt(||u||^2 + ||forward_diff(u)||^2)
double norm_h1(const Field& u, const Grid1D& grid);

/// Norms of numeric - reference.
ErrorReport error_report(const Field& numeric, const Field& reference, const Grid1D& grid);

}  // namespace rlogkg
