#include "rlogkg/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rlogkg/errors.hpp"

namespace rlogkg {

namespace {

constexpr double kMultipleTolerance = 1e-12;

void require_match(const Field& u, const Grid1D& grid, const char* op) {
    if (u.size() != grid.size()) {
        throw ArgumentError(std::string(op) + ": field has " + std::to_string(u.size()) +
                            " values, grid has " + std::to_string(grid.size()));
    }
}

void require_finite(const Field& u, const char* op) {
    if (!u.all_finite()) {
        throw ArgumentError(std::string(op) + ": field contains non-finite values");
    }
}

}  // namespace

Grid1D::Grid1D(double a, double b, std::size_t n_points) : a_(a), b_(b), n_(n_points), h_(0.0) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        throw ArgumentError("grid: require finite a < b");
    }
    if (n_points < 4) {
        throw ArgumentError("grid: need at least 4 points, got " + std::to_string(n_points));
    }
    h_ = (b - a) / static_cast<double>(n_points);
}

Grid1D Grid1D::from_spacing(double a, double b, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ArgumentError("grid: spacing must be positive");
    }
    if (!(b > a)) {
        throw ArgumentError("grid: require a < b");
    }
    return Grid1D(a, b, exact_multiple(b - a, h, "domain length"));
}

std::vector<double> Grid1D::points() const {
    std::vector<double> xs(n_);
    for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
    return xs;
}

std::size_t exact_multiple(double value, double unit, const char* what) {
    const double ratio = value / unit;
    const double n = std::round(ratio);
    if (!(n >= 1.0) || std::abs(ratio - n) > kMultipleTolerance * n) {
        throw ArgumentError(std::string(what) + " (" + std::to_string(value) +
                            ") is not an integer multiple of " + std::to_string(unit));
    }
    return static_cast<std::size_t>(n);
}

TimeMesh::TimeMesh(double tau, std::size_t n_steps) : tau_(tau), n_steps_(n_steps) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("tau must be positive");
    if (n_steps == 0) throw ArgumentError("time mesh needs at least one step");
}

TimeMesh TimeMesh::from_final_time(double tau, double final_time) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("tau must be positive");
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw ArgumentError("final time must be positive");
    }
    return TimeMesh(tau, exact_multiple(final_time, tau, "final time"));
}

std::size_t TimeMesh::step_of(double t) const {
    if (t == 0.0) return 0;
    const std::size_t n = exact_multiple(t, tau_, "time");
    if (n > n_steps_) throw ArgumentError("time " + std::to_string(t) + " is past the final time");
    return n;
}

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& fn) {
    Field u(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) u[j] = fn(grid.x(j));
    return u;
}

double Field::wrap(std::ptrdiff_t j) const noexcept {
    const auto n = static_cast<std::ptrdiff_t>(values_.size());
    std::ptrdiff_t r = j % n;
    if (r < 0) r += n;
    return values_[static_cast<std::size_t>(r)];
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field Field::rotated(std::ptrdiff_t k) const {
    Field out(size());
    for (std::size_t j = 0; j < size(); ++j) {
        out[j] = wrap(static_cast<std::ptrdiff_t>(j) - k);
    }
    return out;
}

Field operator-(const Field& lhs, const Field& rhs) {
    if (lhs.size() != rhs.size()) throw ArgumentError("field subtraction: length mismatch");
    Field out(lhs.size());
    for (std::size_t j = 0; j < lhs.size(); ++j) out[j] = lhs[j] - rhs[j];
    return out;
}

Field operator+(const Field& lhs, const Field& rhs) {
    if (lhs.size() != rhs.size()) throw ArgumentError("field addition: length mismatch");
    Field out(lhs.size());
    for (std::size_t j = 0; j < lhs.size(); ++j) out[j] = lhs[j] + rhs[j];
    return out;
}

Field operator*(double c, const Field& u) {
    Field out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = c * u[j];
    return out;
}

Field forward_diff(const Field& u, const Grid1D& grid) {
    require_match(u, grid, "forward_diff");
    const std::size_t n = u.size();
    const double inv_h = 1.0 / grid.spacing();
    Field out(n);
    for (std::size_t j = 0; j + 1 < n; ++j) out[j] = (u[j + 1] - u[j]) * inv_h;
    out[n - 1] = (u[0] - u[n - 1]) * inv_h;
    return out;
}

void second_diff_into(std::span<const double> u, double h, std::span<double> out) {
    const std::size_t n = u.size();
    const double inv_h2 = 1.0 / (h * h);
    out[0] = (u[1] - 2.0 * u[0] + u[n - 1]) * inv_h2;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        out[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_h2;
    }
    out[n - 1] = (u[0] - 2.0 * u[n - 1] + u[n - 2]) * inv_h2;
}

Field second_diff(const Field& u, const Grid1D& grid) {
    require_match(u, grid, "second_diff");
    Field out(u.size());
    second_diff_into(u.values(), grid.spacing(), out.values());
    return out;
}

double inner_product(const Field& u, const Field& v, const Grid1D& grid) {
    require_match(u, grid, "inner_product");
    require_match(v, grid, "inner_product");
    double sum = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) sum += u[j] * v[j];
    return grid.spacing() * sum;
}

double norm_l2(const Field& u, const Grid1D& grid) {
    require_match(u, grid, "norm_l2");
    require_finite(u, "norm_l2");
    double sum = 0.0;
    for (double v : u) sum += v * v;
    return std::sqrt(grid.spacing() * sum);
}

double norm_linf(const Field& u) {
    require_finite(u, "norm_linf");
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

double norm_h1(const Field& u, const Grid1D& grid) {
    const double l2 = norm_l2(u, grid);
    const double semi = norm_l2(forward_diff(u, grid), grid);
    return std::sqrt(l2 * l2 + semi * semi);
}

ErrorReport error_report(const Field& numeric, const Field& reference, const Grid1D& grid) {
    require_match(numeric, grid, "error_report");
    require_match(reference, grid, "error_report");
    const Field diff = reference - numeric;
    const double l2 = norm_l2(diff, grid);
    const double semi = norm_l2(forward_diff(diff, grid), grid);
    return {l2, norm_linf(diff), std::sqrt(l2 * l2 + semi * semi)};
}

}  // namespace rlogkg
