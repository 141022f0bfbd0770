#include "rlogkg/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "rlogkg/errors.hpp"

namespace rlogkg {

std::string_view to_string(Scheme scheme) noexcept {
    return scheme == Scheme::SIFD ? "sifd" : "efd";
}

Scheme parse_scheme(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "sifd") return Scheme::SIFD;
    if (lower == "efd") return Scheme::EFD;
    throw ArgumentError("unknown scheme '" + std::string(name) + "' (expected sifd or efd)");
}

SchemeParams::SchemeParams(double epsilon, double lambda, Scheme scheme)
    : epsilon_(epsilon), lambda_(lambda), scheme_(scheme) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("epsilon must be positive");
    }
    if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
}

double f_eps(double rho, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("f_eps: epsilon must be positive");
    if (!(rho >= 0.0)) throw DomainError("f_eps: rho must be non-negative");
    return std::log(epsilon * epsilon + rho);
}

double F_eps(double rho, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("F_eps: epsilon must be positive");
    if (!(rho >= 0.0)) throw DomainError("F_eps: rho must be non-negative");
    const double e2 = epsilon * epsilon;
    return rho * std::log(e2 + rho) + e2 * std::log1p(rho / e2) - rho;
}

SolverState SolverState::initial(Field u0, Field u1) {
    if (u0.size() != u1.size()) throw ArgumentError("solver state: level length mismatch");
    SolverState s;
    s.step_index = 1;
    s.amplitude_max = std::max(norm_linf(u0), norm_linf(u1));
    s.u_prev = std::move(u0);
    s.u_curr = std::move(u1);
    return s;
}

void SolverState::advance(Field u_next) {
    if (u_next.size() != u_curr.size()) throw ArgumentError("solver state: level length mismatch");
    u_prev = std::move(u_curr);
    u_curr = std::move(u_next);
    ++step_index;
    amplitude_max = std::max(amplitude_max, norm_linf(u_curr));
}

Field first_step(const Field& phi, const Field& gamma, const Grid1D& grid, double tau,
                 const SchemeParams& params) {
    if (phi.size() != grid.size() || gamma.size() != grid.size()) {
        throw ArgumentError("first_step: initial data does not match grid");
    }
    if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
    const Field lap = second_diff(phi, grid);
    const double half_tau2 = 0.5 * tau * tau;
    Field u1(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double p = phi[j];
        const double source = lap[j] - p - params.lambda() * p * f_eps(p * p, params.epsilon());
        u1[j] = p + tau * gamma[j] + half_tau2 * source;
    }
    return u1;
}

CyclicTridiagonal::CyclicTridiagonal(std::size_t n, double diag, double off)
    : n_(n), diag_(diag), off_(off), gamma_(-diag), c_prime_(n), inv_denom_(n), z_(n), vz_denom_(0.0) {
    if (n < 3) throw ArgumentError("cyclic tridiagonal: need at least 3 unknowns");
    if (!(std::abs(diag) > 2.0 * std::abs(off))) {
        throw InternalError("cyclic tridiagonal: matrix is not strictly diagonally dominant");
    }
    // B = A - u v^T with u = (gamma, 0, .., 0, off), v = (1, 0, .., 0, off / gamma).
    const double first = diag_ - gamma_;
    const double last = diag_ - off_ * off_ / gamma_;
    double prev_c = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double b = (i == 0) ? first : (i == n_ - 1 ? last : diag_);
        const double denom = (i == 0) ? b : b - off_ * prev_c;
        if (denom == 0.0 || !std::isfinite(denom)) {
            throw InternalError("cyclic tridiagonal: zero pivot");
        }
        inv_denom_[i] = 1.0 / denom;
        prev_c = off_ * inv_denom_[i];
        c_prime_[i] = prev_c;
    }
    std::fill(z_.begin(), z_.end(), 0.0);
    z_.front() = gamma_;
    z_.back() = off_;
    thomas(z_);
    vz_denom_ = 1.0 + z_.front() + off_ * z_.back() / gamma_;
    if (vz_denom_ == 0.0) throw InternalError("cyclic tridiagonal: singular correction");
}

void CyclicTridiagonal::thomas(std::span<double> r) const {
    r[0] *= inv_denom_[0];
    for (std::size_t i = 1; i < n_; ++i) {
        r[i] = (r[i] - off_ * r[i - 1]) * inv_denom_[i];
    }
    for (std::size_t i = n_ - 1; i-- > 0;) {
        r[i] -= c_prime_[i] * r[i + 1];
    }
}

void CyclicTridiagonal::solve(std::span<double> rhs) const {
    if (rhs.size() != n_) throw ArgumentError("cyclic tridiagonal: rhs length mismatch");
    thomas(rhs);
    const double fact = (rhs.front() + off_ * rhs.back() / gamma_) / vz_denom_;
    for (std::size_t i = 0; i < n_; ++i) rhs[i] -= fact * z_[i];
}

void CyclicTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) throw ArgumentError("cyclic tridiagonal: length mismatch");
    y[0] = diag_ * x[0] + off_ * (x[n_ - 1] + x[1]);
    for (std::size_t i = 1; i + 1 < n_; ++i) y[i] = diag_ * x[i] + off_ * (x[i - 1] + x[i + 1]);
    y[n_ - 1] = diag_ * x[n_ - 1] + off_ * (x[n_ - 2] + x[0]);
}

Stepper::Stepper(const Grid1D& grid, double tau, const SchemeParams& params)
    : grid_(grid), tau_(tau), params_(params) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("tau must be positive");
    if (params.scheme() == Scheme::SIFD) {
        const double h2 = grid.spacing() * grid.spacing();
        matrix_.emplace(grid.size(), 1.0 / (tau * tau) + 0.5 + 1.0 / h2, -0.5 / h2);
    }
}

const CyclicTridiagonal& Stepper::sifd_matrix() const {
    if (!matrix_) throw ArgumentError("stepper: no implicit system for the explicit scheme");
    return *matrix_;
}

void Stepper::sifd_rhs(std::span<const double> u_prev, std::span<const double> u_curr,
                       std::span<double> rhs) const {
    const std::size_t n = grid_.size();
    const double inv_tau2 = 1.0 / (tau_ * tau_);
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    const double e2 = params_.epsilon() * params_.epsilon();
    const double lambda = params_.lambda();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        const double p = u_prev[j];
        const double u = u_curr[j];
        const double lap_prev = (u_prev[jp] - 2.0 * p + u_prev[jm]) * inv_h2;
        rhs[j] = (2.0 * u - p) * inv_tau2 + 0.5 * lap_prev - 0.5 * p -
                 lambda * u * std::log(e2 + u * u);
    }
}

void Stepper::step(std::span<const double> u_prev, std::span<const double> u_curr,
                   std::span<double> out) const {
    const std::size_t n = grid_.size();
    if (u_prev.size() != n || u_curr.size() != n || out.size() != n) {
        throw ArgumentError("step: field does not match grid");
    }
    if (params_.scheme() == Scheme::SIFD) {
        sifd_rhs(u_prev, u_curr, out);
        matrix_->solve(out);
        return;
    }
    const double tau2 = tau_ * tau_;
    const double inv_h2 = 1.0 / (grid_.spacing() * grid_.spacing());
    const double e2 = params_.epsilon() * params_.epsilon();
    const double lambda = params_.lambda();
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const std::size_t jm = (j == 0) ? n - 1 : j - 1;
        const double u = u_curr[j];
        const double lap = (u_curr[jp] - 2.0 * u + u_curr[jm]) * inv_h2;
        out[j] = 2.0 * u - u_prev[j] + tau2 * (lap - u - lambda * u * std::log(e2 + u * u));
    }
}

Field Stepper::step(const SolverState& state) const {
    Field next(grid_.size());
    step(state.u_prev.values(), state.u_curr.values(), next.values());
    if (!next.all_finite()) {
        const std::size_t n = state.step_index + 1;
        throw OverflowError(n, static_cast<double>(n) * tau_);
    }
    return next;
}

Field step_efd(const SolverState& state, const Grid1D& grid, double tau, const SchemeParams& params) {
    if (params.scheme() != Scheme::EFD) throw ArgumentError("step_efd: params select SIFD");
    return Stepper(grid, tau, params).step(state);
}

Field step_sifd(const SolverState& state, const Grid1D& grid, double tau, const SchemeParams& params) {
    if (params.scheme() != Scheme::SIFD) throw ArgumentError("step_sifd: params select EFD");
    return Stepper(grid, tau, params).step(state);
}

double sigma_max(double epsilon, double amplitude_max) {
    if (!(epsilon > 0.0)) throw DomainError("sigma_max: epsilon must be positive");
    if (!(amplitude_max >= 0.0)) throw DomainError("sigma_max: amplitude must be non-negative");
    const double e2 = epsilon * epsilon;
    return std::max(std::abs(std::log(e2)), std::abs(std::log(e2 + amplitude_max * amplitude_max)));
}

StabilityReport stability_limit(const SchemeParams& params, const Grid1D& grid, double sigma,
                                double tau) {
    StabilityReport r;
    r.sigma_max = sigma;
    r.tau = tau;
    if (params.scheme() == Scheme::SIFD) {
        if (sigma > 1.0) r.tau_limit = 2.0 / std::sqrt(sigma - 1.0);
    } else {
        const double h = grid.spacing();
        r.tau_limit = 2.0 * h / std::sqrt((sigma + 1.0) * h * h + 4.0);
    }
    if (r.tau_limit) {
        r.satisfied = tau <= *r.tau_limit;
        r.margin = *r.tau_limit / tau;
    } else {
        r.satisfied = true;
        r.margin = std::numeric_limits<double>::infinity();
    }
    return r;
}

Amplification amplification_factor(const AmplificationQuery& q, Scheme scheme) {
    const long n = static_cast<long>(q.n_points);
    const long lo = -(n / 2);
    const long hi = (n + 1) / 2 - 1;
    if (n < 1 || q.mode_index < lo || q.mode_index > hi) {
        throw ArgumentError("amplification_factor: mode index out of range");
    }
    const double pi = std::acos(-1.0);
    const double s = 2.0 / q.spacing *
                     std::sin(static_cast<double>(q.mode_index) * pi / static_cast<double>(n));
    const double s2 = s * s;
    const double tau2 = q.tau * q.tau;
    Amplification out;
    if (scheme == Scheme::SIFD) {
        out.theta = (2.0 - q.alpha * tau2) / (2.0 + tau2 * (s2 + 1.0));
    } else {
        out.theta = (2.0 - tau2 * (1.0 + q.alpha + s2)) / 2.0;
    }
    const double t = std::abs(out.theta);
    out.xi_modulus = t <= 1.0 ? 1.0 : t + std::sqrt(t * t - 1.0);
    return out;
}

}  // namespace rlogkg
