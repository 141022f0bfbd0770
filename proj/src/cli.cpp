#include "rlogkg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "rlogkg/errors.hpp"
#include "rlogkg/simulation.hpp"

namespace rlogkg::cli {

using nlohmann::json;

namespace {

constexpr double kEvolveSpacing = 1.0 / 128.0;
constexpr double kEvolveTau = 0.01 / 128.0;

const std::vector<double> kDefaultEpsilonStudy = {1e-2, 2.5e-3, 6.25e-4, 1.5625e-4};

[[noreturn]] void fail(const std::string& flag, const std::string& message) {
    throw ConfigError(flag + ": " + message);
}

Command parse_command(const std::string& name) {
    if (name == "evolve") return Command::Evolve;
    if (name == "study-epsilon") return Command::StudyEpsilon;
    if (name == "study-discretization") return Command::StudyDiscretization;
    if (name == "study-total") return Command::StudyTotal;
    return Command::StabilityCheck;
}

DiscretizationMode parse_mode(const std::string& s) {
    if (s == "temporal-spatial") return DiscretizationMode::TemporalSpatial;
    if (s == "spatial-only") return DiscretizationMode::SpatialOnly;
    fail("--mode", "expected temporal-spatial or spatial-only, got '" + s + "'");
}

ReferenceQuality parse_quality(const std::string& s) {
    if (s == "fine-grid") return ReferenceQuality::FineGrid;
    if (s == "analytic") return ReferenceQuality::Analytic;
    fail("--reference", "expected fine-grid or analytic, got '" + s + "'");
}

std::size_t points_for(double length, double h, const char* flag) {
    try {
        return exact_multiple(length, h, "domain length");
    } catch (const ArgumentError& e) {
        fail(flag, e.what());
    }
}

json report_json(const StabilityReport& r) {
    json j;
    j["sigma_max"] = r.sigma_max;
    j["tau"] = r.tau;
    j["tau_limit"] = r.tau_limit ? json(*r.tau_limit) : json(nullptr);
    j["satisfied"] = r.satisfied;
    j["margin"] = r.tau_limit ? json(r.margin) : json(nullptr);
    return j;
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    j["problem"] = to_string(c.problem);
    j["scheme"] = to_string(c.scheme);
    j["epsilon"] = c.epsilon;
    j["lambda"] = c.lambda;
    j["domain"] = {c.a, c.b};
    j["n_points"] = c.n_points;
    j["h"] = c.spacing();
    j["tau"] = c.tau;
    j["final_time"] = c.final_time;
    j["levels"] = c.levels;
    j["output_path"] = c.output_path;
    j["output_format"] = to_string(c.output_format);
    j["force"] = c.force;
    j["snapshot_times"] = c.snapshot_times;
    j["epsilons"] = c.eps_list;
    j["mode"] = c.mode == DiscretizationMode::TemporalSpatial ? "temporal-spatial" : "spatial-only";
    j["first_level"] = c.first_level;
    j["reference"] = {{"h", c.reference.h},
                      {"tau", c.reference.tau},
                      {"quality", c.reference_quality == ReferenceQuality::Analytic ? "analytic" : "fine-grid"}};
    j["energy_stride"] = c.energy_stride;
    return j;
}

json table_json(const ConvergenceTable& t) {
    json rows = json::array();
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    for (const auto& r : t.rows) {
        rows.push_back({{"level", r.level},
                        {"h", r.h},
                        {"tau", r.tau},
                        {"epsilon", r.epsilon},
                        {"err_l2", r.error.l2},
                        {"err_linf", r.error.linf},
                        {"err_h1", r.error.h1},
                        {"rate_l2", opt(r.rate_l2)},
                        {"rate_linf", opt(r.rate_linf)},
                        {"rate_h1", opt(r.rate_h1)}});
    }
    return {{"study_kind", to_string(t.kind)}, {"rows", rows}};
}

std::string energy_to_csv(const std::vector<EnergySample>& samples) {
    std::string s = "t,total,kinetic,gradient,mass,nonlinear\n";
    for (const auto& e : samples) {
        s += format_number(e.time) + ',' + format_number(e.total) + ',' + format_number(e.parts.kinetic) +
             ',' + format_number(e.parts.gradient) + ',' + format_number(e.parts.mass) + ',' +
             format_number(e.parts.nonlinear) + '\n';
    }
    return s;
}

std::string strip_csv_extension(const std::string& path) {
    if (path.size() > 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
        return path.substr(0, path.size() - 4);
    }
    return path;
}

ProblemSpec problem_for(const RunConfig& c) {
    ProblemSpec spec = make_problem(c.problem);
    spec.a = c.a;
    spec.b = c.b;
    return spec;
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
    if (c.output_path.empty()) {
        out << content;
    } else {
        write_atomic(c.output_path, content);
    }
}

using Clock = std::chrono::steady_clock;

/// Adds wall time only on request so that output stays byte-reproducible.
void stamp(json& meta, const RunConfig& c, Clock::time_point start) {
    if (c.record_timing) {
        meta["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    }
}

json stability_summary(const std::vector<std::string>& warnings) {
    return {{"satisfied", warnings.empty()}, {"warnings", warnings}};
}

int run_evolve(const RunConfig& c, std::ostream& out, std::ostream& err, json meta, Clock::time_point start) {
    const ProblemSpec spec = problem_for(c);
    const Grid1D grid(c.a, c.b, c.n_points);
    const TimeMesh mesh = TimeMesh::from_final_time(c.tau, c.final_time);
    const SchemeParams params(c.epsilon, c.lambda, c.scheme);
    SimulationOptions opts;
    opts.force = c.force;
    opts.snapshot_times = c.snapshot_times;
    std::vector<EnergySample> energy;
    if (c.energy_stride > 0) opts.observers.push_back(energy_observer(grid, c.tau, params, energy, c.energy_stride));

    const SimulationResult r = run_simulation(sample_initial_data(spec, grid), grid, mesh, params, opts);
    if (!r.pre_check.satisfied) err << "warning: run forced past the pre-run stability limit\n";
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';

    if (c.output_format == OutputFormat::Json) {
        meta["stability"] = {{"pre_run", report_json(r.pre_check)},
                             {"post_run", report_json(r.post_check)},
                             {"amplitude_max", r.state.amplitude_max},
                             {"warnings", r.warnings}};
        json snaps = json::array();
        const std::vector<double> xs = grid.points();
        for (const auto& s : r.snapshots) {
            snaps.push_back({{"time", s.time}, {"step", s.step}, {"x", xs}, {"u", s.values.data()}});
        }
        meta["snapshots"] = snaps;
        if (c.energy_stride > 0) {
            json e = json::array();
            for (const auto& s : energy) {
                e.push_back({{"time", s.time},
                             {"total", s.total},
                             {"kinetic", s.parts.kinetic},
                             {"gradient", s.parts.gradient},
                             {"mass", s.parts.mass},
                             {"nonlinear", s.parts.nonlinear}});
            }
            meta["energy"] = e;
        }
        stamp(meta, c, start);
        emit(c, meta.dump(2) + '\n', out);
        return kExitOk;
    }
    const std::string prefix = strip_csv_extension(c.output_path.empty() ? "snapshot" : c.output_path);
    for (const auto& s : r.snapshots) write_atomic(snapshot_path(prefix, s.time), snapshot_to_csv(grid, s.values));
    if (c.energy_stride > 0) write_atomic(prefix + "_energy.csv", energy_to_csv(energy));
    return kExitOk;
}

int run_study(const RunConfig& c, std::ostream& out, std::ostream& err, json meta, Clock::time_point start) {
    const ProblemSpec spec = problem_for(c);
    StudyOptions opts;
    opts.reference = c.reference;
    opts.lambda = c.lambda;
    std::vector<ConvergenceTable> tables;
    switch (c.command) {
        case Command::StudyEpsilon:
            tables.push_back(epsilon_convergence_study(spec, c.scheme, c.eps_list, c.final_time, opts,
                                                       c.reference_quality));
            break;
        case Command::StudyDiscretization:
            tables.push_back(discretization_convergence_study(spec, c.scheme, c.epsilon, c.levels, c.mode,
                                                              c.final_time, opts, c.first_level));
            break;
        case Command::StudyTotal:
            tables = total_convergence_study(spec, c.scheme, c.eps_list, c.spacing(), c.tau, c.levels,
                                             c.final_time, opts);
            break;
        default:
            break;
    }
    std::vector<std::string> warnings;
    for (const auto& t : tables) warnings.insert(warnings.end(), t.warnings.begin(), t.warnings.end());
    for (const auto& w : warnings) err << "warning: " << w << '\n';

    if (c.output_format == OutputFormat::Json) {
        json arr = json::array();
        for (const auto& t : tables) arr.push_back(table_json(t));
        meta["tables"] = arr;
        meta["stability"] = stability_summary(warnings);
        stamp(meta, c, start);
        emit(c, meta.dump(2) + '\n', out);
    } else {
        emit(c, tables_to_csv(tables), out);
    }
    return kExitOk;
}

int run_stability_check(const RunConfig& c, std::ostream& out, json meta, Clock::time_point start) {
    const ProblemSpec spec = problem_for(c);
    const Grid1D grid(c.a, c.b, c.n_points);
    const SchemeParams params(c.epsilon, c.lambda, c.scheme);
    const InitialData data = sample_initial_data(spec, grid);
    const StabilityReport r = pre_run_stability(data.phi, grid, c.tau, params);
    if (c.output_format == OutputFormat::Json) {
        meta["stability"] = report_json(r);
        stamp(meta, c, start);
        emit(c, meta.dump(2) + '\n', out);
    } else {
        std::string s = "scheme,h,tau,epsilon,sigma_max,tau_limit,satisfied,margin\n";
        s += std::string(to_string(c.scheme)) + ',' + format_number(grid.spacing()) + ',' + format_number(c.tau) +
             ',' + format_number(c.epsilon) + ',' + format_number(r.sigma_max) + ',' +
             (r.tau_limit ? format_number(*r.tau_limit) : std::string("inf")) + ',' +
             (r.satisfied ? "true" : "false") + ',' + (r.tau_limit ? format_number(r.margin) : std::string("inf")) +
             '\n';
        emit(c, s, out);
    }
    return kExitOk;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Evolve: return "evolve";
        case Command::StudyEpsilon: return "study-epsilon";
        case Command::StudyDiscretization: return "study-discretization";
        case Command::StudyTotal: return "study-total";
        case Command::StabilityCheck: return "stability-check";
    }
    return "unknown";
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::Csv ? "csv" : "json"; }

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Finite-difference solver and convergence studies for the regularized logarithmic "
                 "Klein-Gordon equation on periodic 1D domains",
                 "rlogkg"};
    app.fallthrough();
    // -h would clash with the --h spacing option.
    app.set_help_flag("--help", "print this help and exit");
    app.set_config("--config", "", "TOML/INI file with option defaults");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string problem = "example1";
    std::string scheme = "efd";
    double epsilon = 0.0;
    double lambda = 1.0;
    std::vector<double> domain;
    std::size_t n_points = 0;
    double h = 0.0;
    double tau = 0.0;
    double final_time = 0.0;
    int levels = 0;
    std::string output;
    std::string format = "csv";
    bool force = false;
    std::vector<double> snapshot_times;
    std::vector<double> eps_list;
    std::string mode = "temporal-spatial";
    int first_level = 1;
    double ref_h = 0.0;
    double ref_tau = 0.0;
    bool paper_exact = false;
    std::string reference = "fine-grid";
    std::size_t energy_stride = 0;
    bool record_timing = false;

    auto* o_problem = app.add_option("--problem", problem, "example1 | example2");
    auto* o_scheme = app.add_option("--scheme", scheme, "sifd | efd");
    auto* o_eps = app.add_option("--epsilon", epsilon, "regularization parameter");
    app.add_option("--lambda", lambda, "nonlinearity strength");
    auto* o_domain = app.add_option("--domain", domain, "interval endpoints a b")->expected(2);
    auto* o_n = app.add_option("--N,--n-points", n_points, "grid points (coarsest level for study-total)");
    auto* o_h = app.add_option("--h", h, "grid spacing; alternative to --N");
    auto* o_tau = app.add_option("--tau", tau, "time step (coarsest level for study-total)");
    auto* o_T = app.add_option("--T,--final-time", final_time, "final time");
    auto* o_levels = app.add_option("--levels", levels, "refinement levels");
    app.add_option("-o,--output", output, "output file (prefix for evolve CSV snapshots)");
    app.add_option("--format", format, "csv | json");
    app.add_flag("--force", force, "run even if the stability check fails");
    auto* o_snap = app.add_option("--snapshot-times", snapshot_times, "evolve: snapshot times");
    auto* o_epsl = app.add_option("--epsilons", eps_list, "epsilon list for study-epsilon / study-total");
    app.add_option("--mode", mode, "temporal-spatial | spatial-only");
    app.add_option("--first-level", first_level, "study-discretization: first level j (h = 2^-j)");
    auto* o_ref_h = app.add_option("--ref-h", ref_h, "reference mesh spacing");
    auto* o_ref_tau = app.add_option("--ref-tau", ref_tau, "reference time step");
    app.add_flag("--paper-exact", paper_exact, "reference mesh h = 2^-10, tau = 0.01*2^-9");
    app.add_option("--reference", reference, "study-epsilon reference: fine-grid | analytic");
    app.add_option("--energy-stride", energy_stride, "evolve: energy sample stride (0 = off)");
    app.add_flag("--record-timing", record_timing, "include wall time in JSON output");

    for (const char* name : {"evolve", "study-epsilon", "study-discretization", "study-total", "stability-check"}) {
        app.add_subcommand(name);
    }
    app.require_subcommand(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig c;
    c.command = parse_command(app.get_subcommands().front()->get_name());
    try {
        c.problem = parse_problem(problem);
    } catch (const ArgumentError& e) {
        fail("--problem", e.what());
    }
    try {
        c.scheme = parse_scheme(scheme);
    } catch (const ArgumentError& e) {
        fail("--scheme", e.what());
    }
    (void)o_problem;
    (void)o_scheme;
    c.lambda = lambda;
    if (o_domain->count() > 0) {
        c.a = domain[0];
        c.b = domain[1];
        if (!(c.b > c.a)) fail("--domain", "require a < b");
    }
    const double length = c.b - c.a;
    if (o_n->count() > 0 && o_h->count() > 0) fail("--h", "give either --N or --h, not both");

    const bool total = c.command == Command::StudyTotal;
    const bool discretization = c.command == Command::StudyDiscretization;

    // Per-command defaults for anything not given.
    c.epsilon = o_eps->count() > 0 ? epsilon : (discretization ? 1e-7 : 1e-3);
    if (o_n->count() > 0) {
        c.n_points = n_points;
    } else if (o_h->count() > 0) {
        if (!(h > 0.0)) fail("--h", "h must be positive");
        c.n_points = points_for(length, h, "--h");
    } else {
        c.n_points = points_for(length, total ? 0.1 : kEvolveSpacing, "--domain");
    }
    c.tau = o_tau->count() > 0 ? tau : (total ? 0.1 : kEvolveTau);
    c.final_time = o_T->count() > 0 ? final_time : (c.command == Command::StudyEpsilon ? 0.5 : 1.0);
    c.levels = o_levels->count() > 0 ? levels : (discretization ? 5 : 6);
    c.output_path = output;
    if (format == "csv") {
        c.output_format = OutputFormat::Csv;
    } else if (format == "json") {
        c.output_format = OutputFormat::Json;
    } else {
        fail("--format", "expected csv or json, got '" + format + "'");
    }
    c.force = force;
    c.snapshot_times = o_snap->count() > 0 ? snapshot_times : std::vector<double>{c.final_time};
    if (o_epsl->count() > 0) {
        c.eps_list = eps_list;
    } else if (total) {
        for (int k = 0; k < 5; ++k) c.eps_list.push_back(c.epsilon / std::pow(4.0, k));
    } else if (c.command == Command::StudyEpsilon) {
        c.eps_list = kDefaultEpsilonStudy;
    }
    c.mode = parse_mode(mode);
    c.first_level = first_level;
    if (paper_exact) c.reference = ReferenceResolution::paper_exact();
    if (o_ref_h->count() > 0) c.reference.h = ref_h;
    if (o_ref_tau->count() > 0) c.reference.tau = ref_tau;
    c.reference_quality = parse_quality(reference);
    c.energy_stride = energy_stride;
    c.record_timing = record_timing;
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon)) fail("--epsilon", "epsilon must be positive");
    if (!std::isfinite(c.lambda)) fail("--lambda", "lambda must be finite");
    if (!(c.b > c.a) || !std::isfinite(c.a) || !std::isfinite(c.b)) fail("--domain", "require finite a < b");
    if (c.n_points < 4) fail("--N", "need at least 4 grid points");
    if (!(c.tau > 0.0) || !std::isfinite(c.tau)) fail("--tau", "tau must be positive");
    if (!(c.final_time > 0.0) || !std::isfinite(c.final_time)) fail("--T", "final time must be positive");
    if (c.levels < 1) fail("--levels", "levels must be at least 1");
    if (!(c.reference.h > 0.0)) fail("--ref-h", "reference spacing must be positive");
    if (!(c.reference.tau > 0.0)) fail("--ref-tau", "reference time step must be positive");

    const ProblemSpec spec = problem_for(c);
    try {
        switch (c.command) {
            case Command::Evolve:
            case Command::StabilityCheck: {
                const Grid1D grid(c.a, c.b, c.n_points);
                sample_initial_data(spec, grid);
                if (c.command == Command::Evolve) {
                    const TimeMesh mesh = TimeMesh::from_final_time(c.tau, c.final_time);
                    for (double t : c.snapshot_times) {
                        if (!(t >= 0.0)) fail("--snapshot-times", "times must be non-negative");
                        try {
                            mesh.step_of(t);
                        } catch (const ArgumentError& e) {
                            fail("--snapshot-times", e.what());
                        }
                    }
                }
                break;
            }
            case Command::StudyTotal: {
                if (!spec.exact) {
                    fail("--problem", "study-total requires the analytic solution (example1 only)");
                }
                if (c.eps_list.empty()) fail("--epsilons", "need at least one epsilon");
                for (double e : c.eps_list) {
                    if (!(e > 0.0)) fail("--epsilons", "every epsilon must be positive");
                }
                for (int l = 0; l < c.levels; ++l) {
                    const double scale = std::ldexp(1.0, -l);
                    sample_initial_data(spec, Grid1D(c.a, c.b, c.n_points << l));
                    TimeMesh::from_final_time(c.tau * scale, c.final_time);
                }
                break;
            }
            case Command::StudyEpsilon: {
                if (c.eps_list.empty()) fail("--epsilons", "need at least one epsilon");
                for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
                    if (!(c.eps_list[i] >= 1e-6)) fail("--epsilons", "every epsilon must be >= 1e-6");
                    if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1])) {
                        fail("--epsilons", "epsilon list must be strictly decreasing");
                    }
                }
                if (c.reference_quality == ReferenceQuality::Analytic && !spec.exact) {
                    fail("--reference", "analytic reference requires example1");
                }
                Grid1D::from_spacing(c.a, c.b, c.reference.h);
                TimeMesh::from_final_time(c.reference.tau, c.final_time);
                break;
            }
            case Command::StudyDiscretization: {
                const Grid1D ref = Grid1D::from_spacing(c.a, c.b, c.reference.h);
                TimeMesh::from_final_time(c.reference.tau, c.final_time);
                for (int l = 0; l < c.levels; ++l) {
                    const double lh = std::ldexp(1.0, -(c.first_level + l));
                    if (!(lh > c.reference.h * (1.0 + 1e-12))) {
                        fail("--levels", "level spacing " + format_number(lh) +
                                             " must be strictly coarser than the reference spacing " +
                                             format_number(c.reference.h));
                    }
                    const Grid1D g = Grid1D::from_spacing(c.a, c.b, lh);
                    if (ref.size() % g.size() != 0) fail("--ref-h", "reference grid does not nest the level grids");
                    if (c.mode == DiscretizationMode::TemporalSpatial) TimeMesh::from_final_time(0.01 * lh, c.final_time);
                }
                break;
            }
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    json meta;
    meta["command"] = to_string(c.command);
    meta["scheme"] = to_string(c.scheme);
    meta["config"] = config_json(c);
    try {
        int code = kExitOk;
        switch (c.command) {
            case Command::Evolve:
                code = run_evolve(c, out, err, std::move(meta), start);
                break;
            case Command::StabilityCheck:
                code = run_stability_check(c, out, std::move(meta), start);
                break;
            default:
                code = run_study(c, out, err, std::move(meta), start);
                break;
        }
        err << to_string(c.command) << ": finished in "
            << std::chrono::duration<double>(Clock::now() - start).count() << " s\n";
        return code;
    } catch (const StabilityRefusal& e) {
        err << "error: " << e.what() << '\n';
        return kExitStability;
    } catch (const OverflowError& e) {
        err << "error: numerical overflow at step " << e.step() << ", t = " << e.time() << '\n';
        return kExitOverflow;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& h) {
        out << h.what();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(config, out, err);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_rate(double v) {
    if (!std::isfinite(v)) return format_number(v);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string tables_to_csv(const std::vector<ConvergenceTable>& tables) {
    std::string s(kTableCsvHeader);
    s += '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_rate(*v) : std::string(); };
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            s += std::to_string(r.level) + ',' + format_number(r.h) + ',' + format_number(r.tau) + ',' +
                 format_number(r.epsilon) + ',' + format_number(r.error.l2) + ',' + format_number(r.error.linf) +
                 ',' + format_number(r.error.h1) + ',' + opt(r.rate_l2) + ',' + opt(r.rate_linf) + ',' +
                 opt(r.rate_h1) + '\n';
        }
    }
    return s;
}

std::string snapshot_to_csv(const Grid1D& grid, const Field& u) {
    std::string s = "x,u\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
        s += format_number(grid.x(j)) + ',' + format_number(u[j]) + '\n';
    }
    return s;
}

std::filesystem::path snapshot_path(const std::string& prefix, double time) {
    return prefix + "_t" + format_number(time) + ".csv";
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ArgumentError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw ArgumentError("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rlogkg::cli
