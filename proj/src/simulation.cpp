#include "rlogkg/simulation.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "rlogkg/errors.hpp"

namespace rlogkg {

namespace {

std::string refusal_message(const StabilityReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << "stability condition violated: tau = " << r.tau << " exceeds tau_limit = "
       << (r.tau_limit ? *r.tau_limit : 0.0) << " (sigma_max = " << r.sigma_max
       << "); use --force to run anyway";
    return os.str();
}

}  // namespace

StabilityRefusal::StabilityRefusal(StabilityReport report)
    : std::runtime_error(refusal_message(report)), report_(report) {}

StabilityReport pre_run_stability(const Field& phi, const Grid1D& grid, double tau,
                                  const SchemeParams& params, double amplitude_safety) {
    const double amplitude = amplitude_safety * norm_linf(phi);
    return stability_limit(params, grid, sigma_max(params.epsilon(), amplitude), tau);
}

SimulationResult run_simulation(const InitialData& data, const Grid1D& grid, const TimeMesh& mesh,
                                const SchemeParams& params, const SimulationOptions& options) {
    if (data.phi.size() != grid.size() || data.gamma.size() != grid.size()) {
        throw ArgumentError("run_simulation: initial data does not match grid");
    }
    if (!data.phi.all_finite() || !data.gamma.all_finite()) {
        throw ArgumentError("run_simulation: initial data is not finite");
    }
    for (const auto& obs : options.observers) {
        if (obs.stride == 0) throw ArgumentError("observer stride must be positive");
    }
    std::vector<std::size_t> snapshot_steps;
    snapshot_steps.reserve(options.snapshot_times.size());
    for (double t : options.snapshot_times) snapshot_steps.push_back(mesh.step_of(t));

    SimulationResult result;
    result.pre_check = pre_run_stability(data.phi, grid, mesh.tau(), params, options.amplitude_safety);
    if (!result.pre_check.satisfied && !options.force) throw StabilityRefusal(result.pre_check);

    const Stepper stepper(grid, mesh.tau(), params);
    Field u1 = first_step(data.phi, data.gamma, grid, mesh.tau(), params);
    if (!u1.all_finite()) throw OverflowError(1, mesh.tau());
    SolverState state = SolverState::initial(data.phi, std::move(u1));

    result.snapshots.resize(snapshot_steps.size());
    auto record = [&](const SolverState& s) {
        for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
            const std::size_t m = snapshot_steps[i];
            if (m == s.step_index) {
                result.snapshots[i] = {mesh.time(m), m, s.u_curr};
            } else if (m == 0 && s.step_index == 1) {
                result.snapshots[i] = {0.0, 0, s.u_prev};
            }
        }
    };
    auto notify = [&](const SolverState& s) {
        const bool last = s.step_index == mesh.n_steps();
        for (const auto& obs : options.observers) {
            if (s.step_index == 1 || (s.step_index - 1) % obs.stride == 0 || last) {
                obs.callback(s, mesh.time(s.step_index));
            }
        }
    };

    record(state);
    notify(state);
    Field next(grid.size());
    while (state.step_index < mesh.n_steps()) {
        stepper.step(state.u_prev.values(), state.u_curr.values(), next.values());
        if (!next.all_finite()) {
            throw OverflowError(state.step_index + 1, mesh.time(state.step_index + 1));
        }
        // Rotate buffers: the old u_prev storage becomes the next scratch.
        std::swap(state.u_prev, state.u_curr);
        std::swap(state.u_curr, next);
        ++state.step_index;
        state.amplitude_max = std::max(state.amplitude_max, norm_linf(state.u_curr));
        record(state);
        notify(state);
    }

    result.post_check = stability_limit(params, grid, sigma_max(params.epsilon(), state.amplitude_max),
                                        mesh.tau());
    if (!result.post_check.satisfied) {
        std::ostringstream os;
        os.precision(6);
        os << "realized sigma_max = " << result.post_check.sigma_max << " gives tau_limit = "
           << *result.post_check.tau_limit << " < tau = " << mesh.tau();
        result.warnings.push_back(os.str());
    }
    result.state = std::move(state);
    return result;
}

}  // namespace rlogkg
