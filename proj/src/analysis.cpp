#include "rlogkg/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "rlogkg/errors.hpp"

namespace rlogkg {

namespace {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception by index is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
    if (threads == 0) threads = default_thread_count();
    threads = std::min(threads, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct RunOutcome {
    Grid1D grid;
    Field solution;
    std::vector<std::string> warnings;
};

/// One study run on [spec.a, spec.b] up to final_time. Stability is advisory here:
/// the run is forced and any failed verdict is returned as a warning.
RunOutcome study_run(const ProblemSpec& spec, double h, double tau, double final_time,
                     const SchemeParams& params) {
    const Grid1D grid = Grid1D::from_spacing(spec.a, spec.b, h);
    const TimeMesh mesh = TimeMesh::from_final_time(tau, final_time);
    SimulationOptions opts;
    opts.force = true;
    opts.snapshot_times = {mesh.final_time()};
    SimulationResult r = run_simulation(sample_initial_data(spec, grid), grid, mesh, params, opts);
    std::vector<std::string> warnings;
    if (!r.pre_check.satisfied) {
        std::ostringstream os;
        os << to_string(params.scheme()) << " h=" << h << " tau=" << tau << " eps=" << params.epsilon()
           << ": tau exceeds pre-run limit " << *r.pre_check.tau_limit;
        warnings.push_back(os.str());
    }
    for (const auto& w : r.warnings) {
        std::ostringstream os;
        os << to_string(params.scheme()) << " h=" << h << " tau=" << tau << " eps=" << params.epsilon()
           << ": " << w;
        warnings.push_back(os.str());
    }
    return {grid, std::move(r.snapshots.front().values), std::move(warnings)};
}

bool same_time(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

EnergySample discrete_energy(const SolverState& state, const Grid1D& grid, double tau,
                             const SchemeParams& params) {
    const Field& u = state.u_curr;
    const Field& p = state.u_prev;
    if (u.size() != grid.size() || p.size() != grid.size()) {
        throw ArgumentError("discrete_energy: state does not match grid");
    }
    const double h = grid.spacing();
    const double inv_h = 1.0 / h;
    const double inv_tau = 1.0 / tau;
    const double eps = params.epsilon();
    const std::size_t n = grid.size();
    double kin = 0.0;
    double grad = 0.0;
    double mass = 0.0;
    double nonlin = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1 == n) ? 0 : j + 1;
        const double dt = (u[j] - p[j]) * inv_tau;
        const double du = (u[jp] - u[j]) * inv_h;
        const double dp = (p[jp] - p[j]) * inv_h;
        kin += dt * dt;
        grad += du * du + dp * dp;
        mass += u[j] * u[j] + p[j] * p[j];
        nonlin += F_eps(u[j] * u[j], eps) + F_eps(p[j] * p[j], eps);
    }
    EnergySample s;
    s.time = (static_cast<double>(state.step_index) - 0.5) * tau;
    s.parts.kinetic = h * kin;
    s.parts.gradient = 0.5 * h * grad;
    s.parts.mass = 0.5 * h * mass;
    s.parts.nonlinear = params.lambda() * 0.5 * h * nonlin;
    s.total = s.parts.kinetic + s.parts.gradient + s.parts.mass + s.parts.nonlinear;
    if (!std::isfinite(s.total)) throw ArgumentError("discrete_energy: non-finite energy");
    return s;
}

Observer energy_observer(const Grid1D& grid, double tau, const SchemeParams& params,
                         std::vector<EnergySample>& out, std::size_t stride) {
    return Observer{stride, [grid, tau, params, &out](const SolverState& s, double) {
                        out.push_back(discrete_energy(s, grid, tau, params));
                    }};
}

double max_relative_energy_drift(std::span<const EnergySample> samples) {
    if (samples.empty()) return 0.0;
    const double e0 = samples.front().total;
    if (e0 == 0.0) throw ArgumentError("energy drift: initial energy is zero");
    double drift = 0.0;
    for (const auto& s : samples) drift = std::max(drift, std::abs(s.total - e0) / std::abs(e0));
    return drift;
}

Field restrict_field(const Field& fine, const Grid1D& fine_grid, const Grid1D& coarse_grid) {
    if (fine.size() != fine_grid.size()) throw ArgumentError("restrict: field does not match fine grid");
    const double tol = 1e-12 * fine_grid.length();
    if (std::abs(fine_grid.a() - coarse_grid.a()) > tol || std::abs(fine_grid.b() - coarse_grid.b()) > tol) {
        throw ArgumentError("restrict: grids cover different intervals");
    }
    if (fine_grid.size() % coarse_grid.size() != 0) {
        throw ArgumentError("restrict: fine point count " + std::to_string(fine_grid.size()) +
                            " is not divisible by " + std::to_string(coarse_grid.size()));
    }
    const std::size_t ratio = fine_grid.size() / coarse_grid.size();
    Field coarse(coarse_grid.size());
    for (std::size_t j = 0; j < coarse.size(); ++j) coarse[j] = fine[j * ratio];
    return coarse;
}

Field ReferenceSolution::at(double t, const Grid1D& grid) const {
    if (quality_ == ReferenceQuality::Analytic) {
        const auto& u = *exact_;
        return Field::sample(grid, [&](double x) { return u(x, t); });
    }
    for (const auto& [time, field] : snapshots_) {
        if (same_time(time, t)) return restrict_field(field, *fine_grid_, grid);
    }
    throw ArgumentError("reference: time " + std::to_string(t) + " was not a target time");
}

ReferenceSolution make_reference(const ProblemSpec& spec, double epsilon,
                                 std::span<const double> target_times, ReferenceQuality quality,
                                 const ReferenceResolution& resolution, double lambda) {
    ReferenceSolution ref;
    ref.quality_ = quality;
    ref.epsilon_ = epsilon;
    if (quality == ReferenceQuality::Analytic) {
        if (!spec.exact) throw ArgumentError("analytic reference requires a closed-form solution");
        ref.exact_ = spec.exact;
        return ref;
    }
    const SchemeParams params(epsilon, lambda, Scheme::EFD);
    const Grid1D grid = Grid1D::from_spacing(spec.a, spec.b, resolution.h);
    ref.fine_grid_ = grid;
    double t_max = 0.0;
    for (double t : target_times) {
        if (!(t >= 0.0)) throw ArgumentError("reference: target times must be non-negative");
        if (t > 0.0) exact_multiple(t, resolution.tau, "reference target time");
        t_max = std::max(t_max, t);
    }
    if (t_max == 0.0) {
        if (!target_times.empty()) ref.snapshots_.emplace(0.0, Field::sample(grid, spec.phi));
        return ref;
    }
    const TimeMesh mesh = TimeMesh::from_final_time(resolution.tau, t_max);
    SimulationOptions opts;
    opts.snapshot_times.assign(target_times.begin(), target_times.end());
    SimulationResult r = run_simulation(sample_initial_data(spec, grid), grid, mesh, params, opts);
    for (std::size_t i = 0; i < target_times.size(); ++i) {
        ref.snapshots_.emplace(target_times[i], std::move(r.snapshots[i].values));
    }
    ref.warnings_ = std::move(r.warnings);
    return ref;
}

std::string_view to_string(StudyKind kind) noexcept {
    switch (kind) {
        case StudyKind::EpsilonRefinement: return "epsilon";
        case StudyKind::TemporalSpatial: return "temporal-spatial";
        case StudyKind::SpatialOnly: return "spatial-only";
        case StudyKind::TotalVsExact: return "total";
    }
    return "unknown";
}

double convergence_rate(double prev, double curr, double base) {
    return std::log(prev / curr) / std::log(base);
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("RLOGKG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ConvergenceTable epsilon_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                           std::span<const double> eps_list, double final_time,
                                           const StudyOptions& options,
                                           ReferenceQuality reference_quality, double reference_epsilon) {
    if (eps_list.empty()) throw ArgumentError("epsilon study: empty epsilon list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] >= 1e-6)) throw ArgumentError("epsilon study: every epsilon must be >= 1e-6");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
            throw ArgumentError("epsilon study: epsilon list must be strictly decreasing");
        }
    }
    // Slot 0 is the reference run, slots 1.. the epsilon runs.
    const std::size_t count = eps_list.size() + 1;
    std::vector<std::optional<RunOutcome>> runs(count);
    std::optional<ReferenceSolution> analytic;
    if (reference_quality == ReferenceQuality::Analytic) {
        analytic = make_reference(spec, reference_epsilon, {}, ReferenceQuality::Analytic);
    }
    parallel_for(count, options.threads, [&](std::size_t i) {
        if (i == 0 && analytic) return;
        const double eps = i == 0 ? reference_epsilon : eps_list[i - 1];
        const Scheme s = i == 0 ? Scheme::EFD : scheme;
        runs[i] = study_run(spec, options.reference.h, options.reference.tau, final_time,
                            SchemeParams(eps, options.lambda, s));
    });
    const Grid1D& grid = runs[1]->grid;
    const Field reference = analytic ? analytic->at(final_time, grid) : runs[0]->solution;

    ConvergenceTable table;
    table.kind = StudyKind::EpsilonRefinement;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const RunOutcome& run = *runs[i + 1];
        ConvergenceRow row;
        row.level = static_cast<int>(i);
        row.h = grid.spacing();
        row.tau = options.reference.tau;
        row.epsilon = eps_list[i];
        row.error = error_report(run.solution, reference, grid);
        table.rows.push_back(row);
    }
    for (const auto& r : runs) {
        if (r) table.warnings.insert(table.warnings.end(), r->warnings.begin(), r->warnings.end());
    }
    fill_rates(table, [](const ConvergenceRow& p, const ConvergenceRow& c) { return p.epsilon / c.epsilon; });
    return table;
}

ConvergenceTable discretization_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                                  double epsilon, int levels,
                                                  DiscretizationMode mode, double final_time,
                                                  const StudyOptions& options, int first_level) {
    if (levels < 1) throw ArgumentError("discretization study: need at least one level");
    const Grid1D ref_grid = Grid1D::from_spacing(spec.a, spec.b, options.reference.h);
    std::vector<double> hs;
    std::vector<double> taus;
    for (int l = 0; l < levels; ++l) {
        const double h = std::ldexp(1.0, -(first_level + l));
        const double tau = mode == DiscretizationMode::TemporalSpatial ? 0.01 * h : options.reference.tau;
        if (!(h > options.reference.h * (1.0 + 1e-12))) {
            throw ArgumentError("discretization study: level h = " + std::to_string(h) +
                                " is not coarser than the reference h = " +
                                std::to_string(options.reference.h));
        }
        const Grid1D g = Grid1D::from_spacing(spec.a, spec.b, h);
        if (ref_grid.size() % g.size() != 0) {
            throw ArgumentError("discretization study: reference grid does not nest level grid");
        }
        TimeMesh::from_final_time(tau, final_time);
        hs.push_back(h);
        taus.push_back(tau);
    }
    const std::size_t count = static_cast<std::size_t>(levels) + 1;
    std::vector<std::optional<RunOutcome>> runs(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        if (i == 0) {
            runs[0] = study_run(spec, options.reference.h, options.reference.tau, final_time,
                                SchemeParams(epsilon, options.lambda, Scheme::EFD));
        } else {
            runs[i] = study_run(spec, hs[i - 1], taus[i - 1], final_time,
                                SchemeParams(epsilon, options.lambda, scheme));
        }
    });

    ConvergenceTable table;
    table.kind = mode == DiscretizationMode::TemporalSpatial ? StudyKind::TemporalSpatial : StudyKind::SpatialOnly;
    for (int l = 0; l < levels; ++l) {
        const RunOutcome& run = *runs[static_cast<std::size_t>(l) + 1];
        ConvergenceRow row;
        row.level = first_level + l;
        row.h = hs[static_cast<std::size_t>(l)];
        row.tau = taus[static_cast<std::size_t>(l)];
        row.epsilon = epsilon;
        const Field reference = restrict_field(runs[0]->solution, ref_grid, run.grid);
        row.error = error_report(run.solution, reference, run.grid);
        table.rows.push_back(row);
    }
    for (const auto& r : runs) table.warnings.insert(table.warnings.end(), r->warnings.begin(), r->warnings.end());
    fill_rates(table, [](const ConvergenceRow& p, const ConvergenceRow& c) { return p.h / c.h; });
    return table;
}

std::vector<ConvergenceTable> total_convergence_study(const ProblemSpec& spec, Scheme scheme,
                                                      std::span<const double> eps_list,
                                                      double start_h, double start_tau, int levels,
                                                      double final_time, const StudyOptions& options) {
    if (!spec.exact) throw ArgumentError("total study requires the analytic solution (example1 only)");
    if (eps_list.empty()) throw ArgumentError("total study: empty epsilon list");
    if (levels < 1) throw ArgumentError("total study: need at least one level");
    for (int l = 0; l < levels; ++l) {
        const double scale = std::ldexp(1.0, -l);
        Grid1D::from_spacing(spec.a, spec.b, start_h * scale);
        TimeMesh::from_final_time(start_tau * scale, final_time);
    }
    const std::size_t per = static_cast<std::size_t>(levels);
    std::vector<std::optional<RunOutcome>> runs(eps_list.size() * per);
    parallel_for(runs.size(), options.threads, [&](std::size_t i) {
        const double eps = eps_list[i / per];
        const double scale = std::ldexp(1.0, -static_cast<int>(i % per));
        runs[i] = study_run(spec, start_h * scale, start_tau * scale, final_time,
                            SchemeParams(eps, options.lambda, scheme));
    });

    const auto& exact = *spec.exact;
    std::vector<ConvergenceTable> tables;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        ConvergenceTable table;
        table.kind = StudyKind::TotalVsExact;
        for (std::size_t l = 0; l < per; ++l) {
            const RunOutcome& run = *runs[e * per + l];
            const double scale = std::ldexp(1.0, -static_cast<int>(l));
            ConvergenceRow row;
            row.level = static_cast<int>(l);
            row.h = start_h * scale;
            row.tau = start_tau * scale;
            row.epsilon = eps_list[e];
            const Field u = Field::sample(run.grid, [&](double x) { return exact(x, final_time); });
            row.error = error_report(run.solution, u, run.grid);
            table.rows.push_back(row);
            table.warnings.insert(table.warnings.end(), run.warnings.begin(), run.warnings.end());
        }
        fill_rates(table, [](const ConvergenceRow& p, const ConvergenceRow& c) { return p.h / c.h; });
        tables.push_back(std::move(table));
    }
    return tables;
}

}  // namespace rlogkg
