// Runs every acceptance criterion at its stated tolerance and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rlogkg/analysis.hpp"
#include "rlogkg/errors.hpp"
#include "rlogkg/problems.hpp"
#include "rlogkg/schemes.hpp"
#include "rlogkg/simulation.hpp"

using namespace rlogkg;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[x] " << what << "; ";
        }
    }
    void note(const std::string& s) { detail << s << "; "; }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

bool in_band(const std::optional<double>& r, double lo, double hi) { return r && *r >= lo && *r <= hi; }

// ---------------------------------------------------------------------------

void gausson_oracle(Verdict& v) {
    const auto u = [](double x, double t) { return example1_exact(x, t); };
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> xs(-4.0, 4.0);
    std::uniform_real_distribution<double> ts(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, std::abs(pde_residual(u, xs(rng), ts(rng), 0.0, 1.0, 1e-3)));
    v.note("max |residual| = " + fmt(worst));
    v.check(worst <= 1e-6, "residual above 1e-6");
}

void table_reproduction(Verdict& v) {
    const std::vector<double> eps{1e-3};
    const double golden[] = {1.63e-3, 6.76e-4, 7.43e-4, 7.68e-4, 7.75e-4};
    const auto efd = total_convergence_study(example1(), Scheme::EFD, eps, 0.1, 0.1, 6, 1.0);
    std::string cells;
    for (std::size_t i = 0; i < 5; ++i) {
        const double e = efd[0].rows[i].error.linf;
        cells += fmt(e) + " ";
        v.check(std::abs(e - golden[i]) <= 0.15 * golden[i], "EFD level " + std::to_string(i) + " = " + fmt(e));
    }
    v.note("EFD l_inf: " + cells);
    const auto sifd = total_convergence_study(example1(), Scheme::SIFD, eps, 0.1, 0.1, 6, 1.0);
    const double s0 = sifd[0].rows[0].error.linf;
    v.note("SIFD first = " + fmt(s0));
    v.check(std::abs(s0 - 4.03e-3) <= 0.15 * 4.03e-3, "SIFD first entry off");
}

void error_floor(Verdict& v) {
    const std::vector<double> eps{1e-3 / 256.0};
    const auto t = total_convergence_study(example1(), Scheme::EFD, eps, 0.1, 0.1, 6, 1.0);
    const auto& rows = t[0].rows;
    std::string rates;
    for (std::size_t i = 1; i < rows.size(); ++i) rates += fmt(*rows[i].rate_linf, 3) + " ";
    v.note("l_inf rates: " + rates);
    for (std::size_t i = 1; i <= 4; ++i) v.check(in_band(rows[i].rate_linf, 1.7, 2.2), "rate " + std::to_string(i));
    v.check(*rows[5].rate_linf < 1.0, "final rate not below 1");
}

void check_last_two(Verdict& v, const ConvergenceTable& t, const std::string& label) {
    const std::size_t n = t.rows.size();
    std::string s;
    for (std::size_t i = n - 2; i < n; ++i) {
        const auto& r = t.rows[i];
        s += "(" + fmt(*r.rate_l2, 3) + "," + fmt(*r.rate_linf, 3) + "," + fmt(*r.rate_h1, 3) + ") ";
        const bool ok = in_band(r.rate_l2, 1.7, 2.2) && in_band(r.rate_linf, 1.7, 2.2) && in_band(r.rate_h1, 1.7, 2.2);
        v.check(ok, label + " level " + std::to_string(r.level));
    }
    v.note(label + " rates (l2,linf,h1): " + s);
}

void discretization_order(Verdict& v) {
    const auto ts = discretization_convergence_study(example1(), Scheme::EFD, 1e-7, 5,
                                                     DiscretizationMode::TemporalSpatial, 1.0);
    check_last_two(v, ts, "temporal-spatial");
    const auto so = discretization_convergence_study(example1(), Scheme::EFD, 1e-7, 5,
                                                     DiscretizationMode::SpatialOnly, 1.0);
    check_last_two(v, so, "spatial-only");
}

void regularization_order(Verdict& v) {
    const std::vector<double> eps{1e-2, 2.5e-3, 6.25e-4, 1.5625e-4};
    const auto t = epsilon_convergence_study(example1(), Scheme::EFD, eps, 0.5);
    const auto& r = t.rows.back();
    v.note("final rates l2 " + fmt(*r.rate_l2, 3) + ", linf " + fmt(*r.rate_linf, 3) + ", h1 " + fmt(*r.rate_h1, 3));
    v.check(in_band(r.rate_l2, 0.8, 1.2), "l2 rate");
    v.check(in_band(r.rate_linf, 0.8, 1.2), "linf rate");
    v.check(in_band(r.rate_h1, 0.8, 1.2), "h1 rate");
}

/// Max |u| over every step t_n <= T with the given exact tau.
double max_amplitude(const InitialData& data, const Grid1D& g, double tau, double T, const SchemeParams& p,
                     double* first_over_10 = nullptr) {
    const auto n = static_cast<std::size_t>(std::floor(T / tau * (1.0 + 1e-12)));
    SimulationOptions opts;
    opts.force = true;
    double crossing = -1.0;
    opts.observers.push_back({1, [&](const SolverState& s, double t) {
                                  if (crossing < 0.0 && norm_linf(s.u_curr) > 10.0) crossing = t;
                              }});
    try {
        const auto r = run_simulation(data, g, TimeMesh(tau, n), p, opts);
        if (first_over_10) *first_over_10 = crossing;
        return r.state.amplitude_max;
    } catch (const OverflowError&) {
        if (first_over_10) *first_over_10 = crossing;
        return INFINITY;
    }
}

void stability(Verdict& v) {
    const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, 0.125);
    const InitialData data = sample_initial_data(example1(), g);
    const SchemeParams efd(1e-3);
    const double limit = *stability_limit(efd, g, sigma_max(1e-3, 1.0), 1.0).tau_limit;
    v.note("tau_limit = " + fmt(limit, 6));

    const double stable = max_amplitude(data, g, 0.9 * limit, 1.0, efd);
    v.note("0.9x: max|u| = " + fmt(stable));
    v.check(stable <= 2.0, "0.9x limit not bounded by 2");

    double crossing = -1.0;
    const double unstable = max_amplitude(data, g, 1.5 * limit, 1.0, efd, &crossing);
    v.note("1.5x: max|u| up to T=1 = " + fmt(unstable));
    v.check(unstable > 10.0, "1.5x limit did not exceed 10 before T=1");
    double late = -1.0;
    max_amplitude(data, g, 1.5 * limit, 5.0, efd, &late);
    v.note("1.5x continued: |u| first exceeds 10 at t = " + (late > 0.0 ? fmt(late) : std::string("never (T=5)")));

    const SchemeParams sifd(0.8, 1.0, Scheme::SIFD);
    const auto pre = pre_run_stability(data.phi, g, 0.5, sifd);
    v.check(pre.satisfied && !pre.tau_limit, "SIFD eps=0.8 not unconditionally stable");
    const double s = max_amplitude(data, g, 0.5, 1.0, sifd);
    const double s_long = max_amplitude(data, g, 0.5, 50.0, sifd);
    v.note("SIFD eps=0.8 tau=0.5: max|u| = " + fmt(s) + " (T=50: " + fmt(s_long) + ")");
    v.check(s <= 2.0, "SIFD eps=0.8 unbounded");
}

void property_suite(Verdict& v) {
    const Grid1D g = Grid1D::from_spacing(-16.0, 16.0, 0.1);
    const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x / 6.0); });
    const Field gauss2 = Field::sample(g, [](double x) { return std::exp(-(x - 0.02) * (x - 0.02) / 6.0); });

    {  // time reversibility
        const Stepper st(g, 0.01, SchemeParams(1.0));
        auto s = SolverState::initial(gauss, gauss2);
        for (int i = 0; i < 500; ++i) s.advance(st.step(s));
        auto r = SolverState::initial(s.u_curr, s.u_prev);
        for (int i = 0; i < 500; ++i) r.advance(st.step(r));
        const double err = norm_linf(r.u_curr - gauss) / norm_linf(gauss);
        v.note("reversibility " + fmt(err, 3));
        v.check(err <= 1e-8, "time reversibility");
    }
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto random_field = [&](std::size_t n) {
        Field f(n);
        for (auto& x : f) x = dist(rng);
        return f;
    };
    {  // summation by parts
        const Grid1D small(-3.0, 5.0, 101);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Field a = random_field(101), b = random_field(101);
            const double lhs = inner_product(second_diff(a, small), b, small);
            const double rhs = -inner_product(forward_diff(a, small), forward_diff(b, small), small);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        v.check(worst <= 1e-12, "summation by parts " + fmt(worst));
    }
    {  // zero preservation and shift equivariance
        const auto zero = SolverState::initial(Field(g.size()), Field(g.size()));
        for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
            const Stepper st(g, 0.05, SchemeParams(1e-7, 1.0, sch));
            bool ok = true;
            for (double x : st.step(zero)) ok = ok && x == 0.0;
            v.check(ok, "zero preservation " + std::string(to_string(sch)));

            const auto s = SolverState::initial(random_field(g.size()), random_field(g.size()));
            const auto rs = SolverState::initial(s.u_prev.rotated(17), s.u_curr.rotated(17));
            const Field a = st.step(rs), b = st.step(s).rotated(17);
            if (sch == Scheme::EFD) {
                v.check(a == b, "EFD shift equivariance not bit-exact");
            } else {
                v.check(norm_linf(a - b) <= 1e-13 * norm_linf(b), "SIFD shift equivariance");
            }
        }
    }
    {  // SIFD residual
        const Stepper st(g, 0.05, SchemeParams(1e-3, 1.0, Scheme::SIFD));
        const auto s = SolverState::initial(random_field(g.size()), random_field(g.size()));
        Field rhs(g.size()), ax(g.size());
        st.sifd_rhs(s.u_prev.values(), s.u_curr.values(), rhs.values());
        const Field x = st.step(s);
        st.sifd_matrix().apply(x.values(), ax.values());
        const double rel = norm_l2(ax - rhs, g) / norm_l2(rhs, g);
        v.check(rel <= 1e-12, "SIFD residual " + fmt(rel));
    }
    {  // F / f consistency
        for (double eps : {1e-3, 1.0}) {
            for (double rho : {0.1, 1.0, 10.0}) {
                const double d = 1e-5 * rho;
                const double fd = (F_eps(rho + d, eps) - F_eps(rho - d, eps)) / (2.0 * d);
                const double f = f_eps(rho, eps);
                v.check(std::abs(fd - f) <= 1e-6 * std::max(1.0, std::abs(f)), "F/f consistency");
            }
        }
    }
    {  // energy part sum
        for (int i = 0; i < 20; ++i) {
            const auto e = discrete_energy(SolverState::initial(random_field(g.size()), random_field(g.size())), g, 0.05,
                                           SchemeParams(1e-3));
            const double sum = e.parts.kinetic + e.parts.gradient + e.parts.mass + e.parts.nonlinear;
            v.check(std::abs(e.total - sum) <= 1e-12 * std::max(1.0, std::abs(sum)), "energy part sum");
        }
    }
    {  // even symmetry of Example 2
        const Grid1D g5 = Grid1D::from_spacing(-16.0, 16.0, 1.0 / 32.0);
        const std::size_t n = g5.size();
        const InitialData data = sample_initial_data(example2(), g5);
        for (Scheme sch : {Scheme::EFD, Scheme::SIFD}) {
            const auto r = run_simulation(data, g5, TimeMesh::from_final_time(0.01 / 32.0, 1.0),
                                          SchemeParams(1e-3, 1.0, sch));
            double drift = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                drift = std::max(drift, std::abs(r.state.u_curr[j] - r.state.u_curr[(n - j) % n]));
            }
            v.note(std::string(to_string(sch)) + " symmetry drift " + fmt(drift, 3));
            v.check(drift <= 1e-10, "even symmetry");
        }
    }
}

void energy_drift(Verdict& v) {
    const ProblemSpec spec = example1();
    std::vector<double> drifts;
    for (double h : {0.125, 0.0625, 0.03125}) {
        const Grid1D g = Grid1D::from_spacing(spec.a, spec.b, h);
        const double tau = 0.01 * h;
        const SchemeParams params(1e-3);
        std::vector<EnergySample> samples;
        SimulationOptions opts;
        opts.observers.push_back(energy_observer(g, tau, params, samples, 1));
        run_simulation(sample_initial_data(spec, g), g, TimeMesh::from_final_time(tau, 1.0), params, opts);
        drifts.push_back(max_relative_energy_drift(samples));
    }
    std::string s;
    for (double d : drifts) s += fmt(d, 3) + " ";
    v.note("drifts " + s);
    for (std::size_t i = 1; i < drifts.size(); ++i) {
        const double ratio = drifts[i - 1] / drifts[i];
        v.note("ratio " + fmt(ratio, 3));
        v.check(ratio >= 3.0 && ratio <= 5.0, "ratio out of [3, 5]");
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Verdict&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Gausson oracle", 1.0, gausson_oracle},
        {2, "Table reproduction", 30.0, table_reproduction},
        {3, "Error-floor structure", 60.0, error_floor},
        {4, "Discretization order", 120.0, discretization_order},
        {5, "Regularization order", 120.0, regularization_order},
        {6, "Stability", 10.0, stability},
        {7, "Property suite", 10.0, property_suite},
        {8, "Energy drift order", 30.0, energy_drift},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) v.note("over runtime budget of " + fmt(c.budget_seconds) + " s");
        std::printf("%s  [%d] %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.str().c_str());
        std::fflush(stdout);
        if (!v.pass) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
