#pragma once

// Regularized logarithmic nonlinearity, three-level finite-difference steppers
// and their von Neumann stability bounds.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlogkg/core.hpp"

namespace rlogkg {

enum class Scheme { SIFD, EFD };

std::string_view to_string(Scheme scheme) noexcept;
/// Accepts "sifd" / "efd" in any case.
Scheme parse_scheme(std::string_view name);

/// Regularization epsilon > 0, nonlinearity strength lambda, and scheme selector.
class SchemeParams {
public:
    SchemeParams(double epsilon, double lambda = 1.0, Scheme scheme = Scheme::EFD);

    double epsilon() const noexcept { return epsilon_; }
    double lambda() const noexcept { return lambda_; }
    Scheme scheme() const noexcept { return scheme_; }

    SchemeParams with_scheme(Scheme s) const { return SchemeParams(epsilon_, lambda_, s); }
    SchemeParams with_epsilon(double e) const { return SchemeParams(e, lambda_, scheme_); }

private:
    double epsilon_;
    double lambda_;
    Scheme scheme_;
};

/// ln(eps^2 + rho).
double f_eps(double rho, double epsilon);

/// Antiderivative of f_eps from 0:
/// rho ln(eps^2 + rho) + eps^2 ln(1 + rho/eps^2) - rho.
double F_eps(double rho, double epsilon);

/// Two consecutive time levels u^{n-1}, u^n plus a running sup-norm monitor.
struct SolverState {
    std::size_t step_index = 1;
    Field u_prev;
    Field u_curr;
    double amplitude_max = 0.0;

    /// State at n = 1 built from levels 0 and 1; amplitude_max covers both.
    static SolverState initial(Field u0, Field u1);

    /// Shifts u_curr into u_prev, installs u_next and updates the monitor.
    void advance(Field u_next);
};

/// Taylor start value u^1 = phi + tau*gamma + tau^2/2 [d_xx phi - phi - lambda phi ln(eps^2 + phi^2)].
Field first_step(const Field& phi, const Field& gamma, const Grid1D& grid, double tau,
                 const SchemeParams& params);

/// Solver for the symmetric periodic tridiagonal system
///   diag * x_j + off * (x_{j-1} + x_{j+1}) = r_j,  j = 0..N-1 (indices mod N),
/// using a Thomas factorization plus a Sherman-Morrison correction for the corners.
/// Requires |diag| > 2|off|.
class CyclicTridiagonal {
public:
    CyclicTridiagonal(std::size_t n, double diag, double off);

    std::size_t size() const noexcept { return n_; }
    double diag() const noexcept { return diag_; }
    double off() const noexcept { return off_; }

    /// Solves in place: rhs on entry, solution on return.
    void solve(std::span<double> rhs) const;

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    void thomas(std::span<double> r) const;

    std::size_t n_;
    double diag_;
    double off_;
    double gamma_;
    std::vector<double> c_prime_;
    std::vector<double> inv_denom_;
    std::vector<double> z_;
    double vz_denom_;
};

/// Per-run stepper: holds the SIFD factorization and scratch space so that
/// repeated steps on a fixed (grid, tau) do not allocate or refactor.
class Stepper {
public:
    Stepper(const Grid1D& grid, double tau, const SchemeParams& params);

    const Grid1D& grid() const noexcept { return grid_; }
    double tau() const noexcept { return tau_; }
    const SchemeParams& params() const noexcept { return params_; }

    /// Computes u^{n+1} from (u^{n-1}, u^n) into out.
    void step(std::span<const double> u_prev, std::span<const double> u_curr,
              std::span<double> out) const;

    Field step(const SolverState& state) const;

    /// The SIFD system matrix; only valid for Scheme::SIFD.
    const CyclicTridiagonal& sifd_matrix() const;

    /// Right-hand side of the SIFD system for the given levels.
    void sifd_rhs(std::span<const double> u_prev, std::span<const double> u_curr,
                  std::span<double> rhs) const;

private:
    Grid1D grid_;
    double tau_;
    SchemeParams params_;
    std::optional<CyclicTridiagonal> matrix_;
};

/// Explicit scheme:
/// u^{n+1} = 2u^n - u^{n-1} + tau^2 [d_xx u^n - u^n - lambda u^n ln(eps^2 + (u^n)^2)].
/// Throws OverflowError if the result is not finite.
Field step_efd(const SolverState& state, const Grid1D& grid, double tau, const SchemeParams& params);

/// Semi-implicit scheme: Laplacian and mass term averaged over n+1 and n-1,
/// nonlinearity explicit at n. One cyclic tridiagonal solve per step.
Field step_sifd(const SolverState& state, const Grid1D& grid, double tau, const SchemeParams& params);

/// max(|ln eps^2|, |ln(eps^2 + amplitude^2)|)
double sigma_max(double epsilon, double amplitude_max);

struct StabilityReport {
    double sigma_max = 0.0;
    std::optional<double> tau_limit;  ///< nullopt: unconditionally stable
    double tau = 0.0;
    bool satisfied = true;
    double margin = 0.0;  ///< tau_limit / tau; infinity when unbounded
};

/// SIFD: tau <= 2 / sqrt(sigma - 1), unbounded when sigma <= 1.
/// EFD:  tau <= 2h / sqrt((sigma + 1) h^2 + 4).
StabilityReport stability_limit(const SchemeParams& params, const Grid1D& grid, double sigma,
                                double tau);

/// Frozen-coefficient Fourier mode query.
struct AmplificationQuery {
    double alpha = 0.0;  ///< frozen value of ln(eps^2 + u^2)
    long mode_index = 0;
    std::size_t n_points = 0;
    double spacing = 0.0;
    double tau = 0.0;
};

struct Amplification {
    double theta = 0.0;
    double xi_modulus = 1.0;  ///< largest |xi| solving xi^2 - 2 theta xi + 1 = 0
};

/// Valid modes are -floor(N/2) <= l <= ceil(N/2) - 1.
Amplification amplification_factor(const AmplificationQuery& q, Scheme scheme);

}  // namespace rlogkg
