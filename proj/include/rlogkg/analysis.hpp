#pragma once

// Energy diagnostic, reference solutions and the convergence-study drivers.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rlogkg/core.hpp"
#include "rlogkg/problems.hpp"
#include "rlogkg/schemes.hpp"
#include "rlogkg/simulation.hpp"

namespace rlogkg {

struct EnergyParts {
    double kinetic = 0.0;
    double gradient = 0.0;
    double mass = 0.0;
    double nonlinear = 0.0;
};

/// Discrete energy evaluated between the two stored levels, at t = (n - 1/2) tau.
struct EnergySample {
    double time = 0.0;
    double total = 0.0;
    EnergyParts parts;
};

/// kinetic   = ||(u^n - u^{n-1}) / tau||^2
/// gradient  = (||d+ u^n||^2 + ||d+ u^{n-1}||^2) / 2
/// mass      = (||u^n||^2 + ||u^{n-1}||^2) / 2
/// nonlinear = lambda h/2 sum_j [F_eps((u^n_j)^2) + F_eps((u^{n-1}_j)^2)]
EnergySample discrete_energy(const SolverState& state, const Grid1D& grid, double tau,
                             const SchemeParams& params);

/// Observer appending a discrete_energy sample to `out` at the given stride.
Observer energy_observer(const Grid1D& grid, double tau, const SchemeParams& params,
                         std::vector<EnergySample>& out, std::size_t stride = 1);

/// max_n |E_n - E_0| / |E_0| over the samples.
double max_relative_energy_drift(std::span<const EnergySample> samples);

/// Injection onto a coarser grid with the same interval: coarse[j] = fine[j * ratio].
Field restrict_field(const Field& fine, const Grid1D& fine_grid, const Grid1D& coarse_grid);

enum class ReferenceQuality { Analytic, FineGrid };

/// Mesh used by fine-grid reference runs.
struct ReferenceResolution {
    double h = 1.0 / 256.0;
    double tau = 0.01 / 128.0;

    /// h = 2^-10, tau = 0.01 * 2^-9.
    static ReferenceResolution paper_exact() { return {1.0 / 1024.0, 0.01 / 512.0}; }
};

/// Serves reference fields at fixed target times, restricted onto any compatible grid.
class ReferenceSolution {
public:
    ReferenceQuality quality() const noexcept { return quality_; }
    double epsilon() const noexcept { return epsilon_; }
    /// The fine grid for FineGrid references.
    const std::optional<Grid1D>& fine_grid() const noexcept { return fine_grid_; }

    /// Reference at time t on `grid`. FineGrid references only serve the target
    /// times they were built for.
    Field at(double t, const Grid1D& grid) const;

    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    friend ReferenceSolution make_reference(const ProblemSpec&, double, std::span<const double>,
                                            ReferenceQuality, const ReferenceResolution&, double);
    ReferenceQuality quality_ = ReferenceQuality::Analytic;
    double epsilon_ = 0.0;
    std::optional<std::function<double(double, double)>> exact_;
    std::optional<Grid1D> fine_grid_;
    std::map<double, Field> snapshots_;
    std::vector<std::string> warnings_;
};

/// Analytic samples the closed-form solution (Example 1 only). FineGrid runs the
/// explicit scheme at `resolution` with the given epsilon and keeps the targets.
ReferenceSolution make_reference(const ProblemSpec& spec, double epsilon,
                                 std::span<const double> target_times, ReferenceQuality quality,
                                 const ReferenceResolution& resolution = {}, double lambda = 1.0);

enum class StudyKind { EpsilonRefinement, TemporalSpatial, SpatialOnly, TotalVsExact };

std::string_view to_string(StudyKind kind) noexcept;

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double tau = 0.0;
    double epsilon = 0.0;
    ErrorReport error;
    std::optional<double> rate_l2;
    std::optional<double> rate_linf;
    std::optional<double> rate_h1;
};

struct ConvergenceTable {
    StudyKind kind = StudyKind::TemporalSpatial;
    std::vector<ConvergenceRow> rows;
    /// Post-run stability verdicts that failed, one message per run.
    std::vector<std::string> warnings;
};

/// log(prev / curr) / log(base)
double convergence_rate(double prev, double curr, double base = 2.0);

/// Fills rate columns from consecutive rows. The log base for row i is
/// base_of(row[i-1], row[i]).
template <class BaseFn>
void fill_rates(ConvergenceTable& table, BaseFn base_of) {
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& p = table.rows[i - 1];
        auto& c = table.rows[i];
        const double base = base_of(p, c);
        c.rate_l2 = convergence_rate(p.error.l2, c.error.l2, base);
        c.rate_linf = convergence_rate(p.error.linf, c.error.linf, base);
        c.rate_h1 = convergence_rate(p.error.h1, c.error.h1, base);
    }
}

struct StudyOptions {
    ReferenceResolution reference;
    double lambda = 1.0;
    /// 0 selects default_thread_count().
    std::size_t threads = 0;
};

/// RLOGKG_THREADS if set and positive, else the hardware concurrency (at least 1).
std::size_t default_thread_count();

/// Model error u - u^eps at time T for each epsilon, all runs on the reference
/// mesh. u is a FineGrid run at `reference_epsilon` (or the closed form when
/// reference_quality is Analytic). Rates use log base eps_prev / eps_curr.
ConvergenceTable epsilon_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                           std::span<const double> eps_list, double final_time,
                                           const StudyOptions& options = {},
                                           ReferenceQuality reference_quality = ReferenceQuality::FineGrid,
                                           double reference_epsilon = 1e-7);

enum class DiscretizationMode { TemporalSpatial, SpatialOnly };

/// Discretization error u^eps - u^{eps,n} at time T against a FineGrid reference
/// at the same epsilon. Level j uses h_j = 2^-j and tau_j = 0.01 * 2^-j
/// (TemporalSpatial) or tau_j = reference tau (SpatialOnly), for
/// j = first_level .. first_level + levels - 1.
ConvergenceTable discretization_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                                  double epsilon, int levels,
                                                  DiscretizationMode mode, double final_time,
                                                  const StudyOptions& options = {},
                                                  int first_level = 1);

/// Total error u - u^{eps,n} against the closed-form solution at T, one table per
/// epsilon, halving h and tau together from (start_h, start_tau).
std::vector<ConvergenceTable> total_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                                      std::span<const double> eps_list,
                                                      double start_h, double start_tau, int levels,
                                                      double final_time,
                                                      const StudyOptions& options = {});

}  // namespace rlogkg
