#pragma once

// Benchmark initial-value problems and a PDE residual oracle.

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "rlogkg/core.hpp"
#include "rlogkg/simulation.hpp"

namespace rlogkg {

enum class ProblemName { Example1, Example2 };

std::string_view to_string(ProblemName name) noexcept;
/// Accepts "example1" / "example2" in any case.
ProblemName parse_problem(std::string_view name);

/// Gausson wave speed parameters; c^2 > k^2.
struct WaveParams {
    double c = 2.0;
    double k = 1.0;
};

struct ProblemSpec {
    ProblemName name = ProblemName::Example1;
    std::function<double(double)> phi;
    std::function<double(double)> gamma;
    double a = -16.0;
    double b = 16.0;
    std::optional<std::function<double(double, double)>> exact;
    std::optional<WaveParams> wave;
};

/// Gaussian solitary wave exp(-(kx - ct)^2 / (2(c^2 - k^2))) solving the
/// unregularized equation with lambda = 1.
double example1_exact(double x, double t, double c = 2.0, double k = 1.0);

/// d/dt of example1_exact at t = 0.
double example1_velocity(double x, double c = 2.0, double k = 1.0);

/// Travelling Gausson on [-16, 16].
ProblemSpec example1(WaveParams wave = {});

/// phi(x) = 2 / (e^{-x^2} + e^{x^2}), gamma = 0 on [-16, 16]; no closed-form solution.
ProblemSpec example2();

ProblemSpec make_problem(ProblemName name);

/// Samples phi and gamma at the grid points. The grid must lie inside the problem
/// domain and the data must be below 1e-12 at the periodic seam.
InitialData sample_initial_data(const ProblemSpec& spec, const Grid1D& grid);

/// u_tt - u_xx + u + lambda u ln(eps^2 + u^2) at (x, t), derivatives by
/// fourth-order centered differences with spacing `probe`. epsilon = 0 selects
/// the unregularized ln(u^2); then u(x, t) must be nonzero.
double pde_residual(const std::function<double(double, double)>& u, double x, double t,
                    double epsilon, double lambda, double probe);

}  // namespace rlogkg
