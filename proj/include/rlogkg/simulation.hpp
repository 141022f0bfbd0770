#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlogkg/core.hpp"
#include "rlogkg/schemes.hpp"

namespace rlogkg {

struct InitialData {
    Field phi;    ///< u(x, 0)
    Field gamma;  ///< u_t(x, 0)
};

/// Callback invoked on the state after step 1, every `stride` steps after that,
/// and on the final state.
struct Observer {
    std::size_t stride = 1;
    std::function<void(const SolverState&, double time)> callback;
};

struct SimulationOptions {
    /// Run even when the pre-run stability check fails.
    bool force = false;
    /// Multiplier on ||phi||_inf when estimating sigma_max before the run.
    double amplitude_safety = 1.2;
    /// Times (multiples of tau, 0 <= t <= T) at which u is recorded.
    std::vector<double> snapshot_times;
    std::vector<Observer> observers;
};

struct Snapshot {
    double time = 0.0;
    std::size_t step = 0;
    Field values;
};

struct SimulationResult {
    SolverState state;
    std::vector<Snapshot> snapshots;  ///< in the order of snapshot_times
    StabilityReport pre_check;
    /// Re-evaluated with the realized running amplitude.
    StabilityReport post_check;
    std::vector<std::string> warnings;
};

/// Thrown when the pre-run stability check fails and force is not set.
class StabilityRefusal : public std::runtime_error {
public:
    explicit StabilityRefusal(StabilityReport report);
    const StabilityReport& report() const noexcept { return report_; }

private:
    StabilityReport report_;
};

/// Pre-run check: sigma_max from safety * ||phi||_inf.
StabilityReport pre_run_stability(const Field& phi, const Grid1D& grid, double tau,
                                  const SchemeParams& params, double amplitude_safety = 1.2);

/// Sets u^0 = phi, u^1 from the Taylor start, then steps the selected scheme to
/// n = mesh.n_steps(). Deterministic. Throws StabilityRefusal, OverflowError.
SimulationResult run_simulation(const InitialData& data, const Grid1D& grid, const TimeMesh& mesh,
                                const SchemeParams& params, const SimulationOptions& options = {});

}  // namespace rlogkg
