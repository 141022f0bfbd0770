#include "rlogkg/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "rlogkg/errors.hpp"

namespace rlogkg {

namespace {

constexpr double kSeamTolerance = 1e-12;

void require_wave(double c, double k) {
    if (!(c * c > k * k)) throw DomainError("Gausson requires c^2 > k^2");
}

/// Fourth-order centered second derivative of g at 0.
template <class G>
double second_derivative(G g, double d) {
    return (-g(2.0 * d) + 16.0 * g(d) - 30.0 * g(0.0) + 16.0 * g(-d) - g(-2.0 * d)) / (12.0 * d * d);
}

}  // namespace

std::string_view to_string(ProblemName name) noexcept {
    return name == ProblemName::Example1 ? "example1" : "example2";
}

ProblemName parse_problem(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "example1") return ProblemName::Example1;
    if (lower == "example2") return ProblemName::Example2;
    throw ArgumentError("unknown problem '" + std::string(name) + "' (expected example1 or example2)");
}

double example1_exact(double x, double t, double c, double k) {
    require_wave(c, k);
    const double s = k * x - c * t;
    return std::exp(-s * s / (2.0 * (c * c - k * k)));
}

double example1_velocity(double x, double c, double k) {
    require_wave(c, k);
    const double d = c * c - k * k;
    return c * k * x / d * std::exp(-(k * x) * (k * x) / (2.0 * d));
}

ProblemSpec example1(WaveParams wave) {
    require_wave(wave.c, wave.k);
    ProblemSpec spec;
    spec.name = ProblemName::Example1;
    spec.phi = [wave](double x) { return example1_exact(x, 0.0, wave.c, wave.k); };
    spec.gamma = [wave](double x) { return example1_velocity(x, wave.c, wave.k); };
    spec.exact = [wave](double x, double t) { return example1_exact(x, t, wave.c, wave.k); };
    spec.wave = wave;
    return spec;
}

ProblemSpec example2() {
    ProblemSpec spec;
    spec.name = ProblemName::Example2;
    spec.phi = [](double x) { return 2.0 / (std::exp(-x * x) + std::exp(x * x)); };
    spec.gamma = [](double) { return 0.0; };
    return spec;
}

ProblemSpec make_problem(ProblemName name) {
    return name == ProblemName::Example1 ? example1() : example2();
}

InitialData sample_initial_data(const ProblemSpec& spec, const Grid1D& grid) {
    const double slack = 1e-12 * (spec.b - spec.a);
    if (grid.a() < spec.a - slack || grid.b() > spec.b + slack) {
        throw ArgumentError("grid extends outside the problem domain");
    }
    InitialData data{Field::sample(grid, spec.phi), Field::sample(grid, spec.gamma)};
    const std::size_t last = grid.size() - 1;
    for (const Field* f : {&data.phi, &data.gamma}) {
        if (std::abs((*f)[0]) > kSeamTolerance || std::abs((*f)[last]) > kSeamTolerance) {
            throw ArgumentError("initial data is not negligible at the periodic boundary");
        }
    }
    return data;
}

double pde_residual(const std::function<double(double, double)>& u, double x, double t,
                    double epsilon, double lambda, double probe) {
    if (!(epsilon >= 0.0)) throw DomainError("pde_residual: epsilon must be non-negative");
    if (!(probe > 0.0)) throw ArgumentError("pde_residual: probe spacing must be positive");
    const double u0 = u(x, t);
    if (epsilon == 0.0 && u0 == 0.0) {
        throw DomainError("pde_residual: ln(u^2) undefined at u = 0");
    }
    const double u_tt = second_derivative([&](double d) { return u(x, t + d); }, probe);
    const double u_xx = second_derivative([&](double d) { return u(x + d, t); }, probe);
    return u_tt - u_xx + u0 + lambda * u0 * std::log(epsilon * epsilon + u0 * u0);
}

}  // namespace rlogkg
