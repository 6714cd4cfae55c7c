#include "hkts/commands.hpp"

#include <chrono>
#include <exception>
#include <mutex>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hkts/bounds.hpp"
#include "hkts/harness.hpp"
#include "hkts/report.hpp"
#include "hkts/verify.hpp"

namespace hkts::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

NoiseBounds require_bounds(const ModelConfig& model) {
    if (model.seeker_count() == 0) {
        throw ConfigError("m = 0: at least one truth seeker is required (1 <= |S| <= n)");
    }
    if (!model.homogeneous_alpha()) {
        throw ConfigError("bounds require a homogeneous alpha (one value shared by all agents)");
    }
    return compute_bounds(model);
}

std::optional<NoiseBounds> maybe_bounds(const ModelConfig& model) {
    if (!bounds_apply(model)) return std::nullopt;
    return compute_bounds(model);
}

/// Everything needed to reproduce the command's output files.
json manifest(std::string_view command, const CliConfig& c,
              const std::optional<NoiseBounds>& bounds, const std::vector<std::string>& artifacts,
              json seeds, double seconds) {
    json doc;
    doc["tool"] = "hkts";
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["mode"] = to_string(c.mode);
    json cfg = json::object();
    for (const auto& [k, v] : c.echo) cfg[k] = v;
    doc["config"] = std::move(cfg);
    doc["bounds"] = bounds ? report::bounds_json(*bounds) : json(nullptr);
    doc["seeds"] = std::move(seeds);
    doc["rng"] = "mt19937_64; u = (w >> 11) * 2^-53; noise = delta * (2u - 1)";
    doc["artifacts"] = artifacts;
    doc["wall_clock_seconds"] = report::rounded(seconds);
    return doc;
}

std::string run_file_name(std::size_t index) { return fmt::format("runs/run_{:05}.csv", index); }

}  // namespace

int cmd_bounds(const CliConfig& c, std::ostream& out) {
    const NoiseBounds b = require_bounds(c.model);
    json doc;
    doc["n"] = c.model.n;
    doc["m"] = c.model.seeker_count();
    doc["alpha"] = report::rounded(*c.model.homogeneous_alpha());
    doc["epsilon"] = report::rounded(c.model.epsilon);
    doc["truth"] = report::rounded(c.model.truth);
    doc["delta"] = report::rounded(c.model.delta);
    doc.update(report::bounds_json(b));
    doc["admissible"] = is_admissible(c.model.delta, b);
    if (c.model.delta > 0.0 && c.model.delta < 1.0) {
        const std::size_t block = block_length(c.model.delta);
        doc["block_length"] = block;
        doc["log_success_lower_bound"] =
            report::rounded(success_log_prob_lower_bound(c.model.n, block));
    }
    out << report::dump(doc);
    return kSuccess;
}

int cmd_simulate(const CliConfig& c, std::ostream& out) {
    const auto start = Clock::now();
    const TrajectoryRecord rec = run_trajectory(c.run_spec());

    std::vector<std::string> artifacts{"metrics.csv"};
    report::write_file(c.output_dir / "metrics.csv", report::metrics_csv(rec));
    if (c.full_states) {
        artifacts.push_back("states.csv");
        report::write_file(c.output_dir / "states.csv", report::states_csv(rec));
    }
    artifacts.push_back("manifest.json");
    report::write_file(c.output_dir / "manifest.json",
                       report::dump(manifest("simulate", c, rec.bounds, artifacts,
                                             json{{"seed", c.seed}}, seconds_since(start))));

    out << fmt::format("mode={} seed={} horizon={} tail_sup={} final_d_V={} entry_time={}\n",
                       to_string(c.mode), c.seed, c.horizon, report::number(rec.tail_sup),
                       report::number(rec.series.back().d_all),
                       rec.entry_time ? std::to_string(*rec.entry_time) : "none");
    out << "wrote " << c.output_dir.string() << "\n";
    return kSuccess;
}

int cmd_ensemble(const CliConfig& c, std::ostream& out) {
    const auto start = Clock::now();
    std::vector<std::string> artifacts{"summary.json"};

    std::mutex io_error_mutex;
    std::exception_ptr io_error;
    std::function<void(std::size_t, const TrajectoryRecord&)> per_run;
    if (c.per_run) {
        per_run = [&](std::size_t index, const TrajectoryRecord& rec) {
            try {
                report::write_file(c.output_dir / run_file_name(index), report::metrics_csv(rec));
            } catch (...) {
                std::lock_guard lock(io_error_mutex);
                if (!io_error) io_error = std::current_exception();
            }
        };
        for (std::size_t i = 0; i < c.runs; ++i) artifacts.push_back(run_file_name(i));
    }
    const EnsembleSummary s = run_ensemble(c.run_spec(), c.runs, c.seed_base, c.jobs, per_run);
    if (io_error) std::rethrow_exception(io_error);

    report::write_file(c.output_dir / "summary.json", report::dump(report::summary_json(s)));
    artifacts.push_back("manifest.json");
    const json seeds{{"seed_base", c.seed_base},
                     {"runs", c.runs},
                     {"derivation", "seed of run i = seed_base + i"}};
    report::write_file(c.output_dir / "manifest.json",
                       report::dump(manifest("ensemble", c, s.bounds, artifacts, seeds,
                                             seconds_since(start))));

    out << fmt::format("runs={} converged_fraction={} median_tail_sup={} entered_runs={}\n",
                       s.runs,
                       s.converged_fraction ? report::number(*s.converged_fraction) : "n/a",
                       report::number(s.tail_sup.median), s.entered_runs);
    out << "wrote " << c.output_dir.string() << "\n";
    return kSuccess;
}

int cmd_verify(const CliConfig& c, std::ostream& out) {
    VerifyOptions o;
    o.config = c.model;
    o.trials = c.trials;
    o.steps = c.steps;
    o.noise_draws = c.noise_draws;
    o.seed = c.seed;
    o.disable_clamp = c.fault_no_clamp;
    const auto results = run_verification(o);

    bool failed = false;
    out << fmt::format("{:<30} {:<5} {:>8} {:>14}  {}\n", "property", "", "trials", "margin",
                       "note");
    for (const PropertyResult& r : results) {
        failed = failed || r.verdict == Verdict::fail;
        out << fmt::format("{:<30} {:<5} {:>8} {:>14}  {}\n", r.name, to_string(r.verdict),
                           r.trials, report::number(r.margin), r.note);
    }
    if (c.output_given) {
        report::write_file(c.output_dir / "verify.json", report::dump(report::verify_json(results)));
    }
    out << (failed ? "verification FAILED\n" : "verification passed\n");
    return failed ? kVerificationFailed : kSuccess;
}

int cmd_sweep(const CliConfig& c, std::ostream& out) {
    if (c.grid_delta.empty() && c.grid_alpha.empty() && c.grid_m.empty() &&
        c.grid_epsilon.empty()) {
        throw ConfigError("sweep grid is empty: give at least one of --grid-delta, "
                          "--grid-alpha, --grid-m, --grid-epsilon");
    }
    const auto start = Clock::now();
    const auto base_alpha = c.model.homogeneous_alpha();
    if (!base_alpha && c.grid_alpha.empty()) {
        throw ConfigError("sweep needs a homogeneous alpha");
    }
    auto axis = [](const std::vector<double>& grid, double base) {
        return grid.empty() ? std::vector<double>{base} : grid;
    };
    const auto deltas = axis(c.grid_delta, c.model.delta);
    const auto alphas = axis(c.grid_alpha, base_alpha.value_or(0.0));
    const auto epsilons = axis(c.grid_epsilon, c.model.epsilon);
    const auto ms = c.grid_m.empty() ? std::vector<std::size_t>{c.model.seeker_count()} : c.grid_m;

    std::string csv =
        "point,delta,alpha,m,epsilon,delta1,delta2,delta_bar,delta_lower,admissible,runs,"
        "converged_fraction,median_tail_sup\n";
    std::size_t point = 0;
    for (double delta : deltas) {
        for (double alpha : alphas) {
            for (std::size_t m : ms) {
                for (double epsilon : epsilons) {
                    RunSpec spec = c.run_spec();
                    ModelConfig& model = spec.config;
                    model.delta = delta;
                    model.epsilon = epsilon;
                    model.alpha.assign(model.n, alpha);
                    if (!c.grid_m.empty()) {
                        if (m > model.n) {
                            throw ConfigError(fmt::format("grid m = {} exceeds n = {}", m, model.n));
                        }
                        model.seeker.assign(model.n, false);
                        for (std::size_t i = 0; i < m; ++i) model.seeker[i] = true;
                    }
                    try {
                        spec.validate();
                    } catch (const std::exception& e) {
                        throw ConfigError(fmt::format("grid point {}: {}", point, e.what()));
                    }
                    const NoiseBounds b = require_bounds(model);
                    const EnsembleSummary s = run_ensemble(spec, c.runs, c.seed_base, c.jobs);
                    csv += fmt::format(
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", point, report::number(delta),
                        report::number(alpha), model.seeker_count(), report::number(epsilon),
                        report::number(b.delta1), report::number(b.delta2),
                        report::number(b.delta_bar), report::number(b.delta_lower),
                        is_admissible(delta, b) ? "true" : "false", s.runs,
                        report::number(s.converged_fraction.value_or(0.0)),
                        report::number(s.tail_sup.median));
                    ++point;
                }
            }
        }
    }
    const std::vector<std::string> artifacts{"sweep.csv", "manifest.json"};
    report::write_file(c.output_dir / "sweep.csv", csv);
    const json seeds{{"seed_base", c.seed_base},
                     {"runs_per_point", c.runs},
                     {"derivation", "seed of run i = seed_base + i at every grid point"}};
    report::write_file(c.output_dir / "manifest.json",
                       report::dump(manifest("sweep", c, maybe_bounds(c.model), artifacts, seeds,
                                             seconds_since(start))));
    out << fmt::format("grid points={} runs per point={}\n", point, c.runs);
    out << "wrote " << c.output_dir.string() << "\n";
    return kSuccess;
}

namespace {

enum Scope : unsigned {
    kBounds = 1u << 0,
    kSimulate = 1u << 1,
    kEnsemble = 1u << 2,
    kVerify = 1u << 3,
    kSweep = 1u << 4,
    kAll = kBounds | kSimulate | kEnsemble | kVerify | kSweep,
    kRuns = kSimulate | kEnsemble | kSweep,
    kMany = kEnsemble | kSweep,
};

struct Flag {
    const char* names;
    const char* key;
    const char* help;
    unsigned scope;
    bool is_switch = false;
};

// clang-format off
constexpr Flag kFlags[] = {
    {"--n", "n", "number of agents", kAll},
    {"--m", "m", "number of truth seekers (agents 0..m-1)", kAll},
    {"--seekers", "seekers", "explicit comma-separated seeker indices", kAll},
    {"--alpha", "alpha", "attraction strength (one value, or one per agent)", kAll},
    {"--epsilon,--eps", "epsilon", "confidence threshold in (0,1]", kAll},
    {"-A,--truth", "truth", "truth value A in [0,1]", kAll},
    {"--delta", "delta", "noise strength", kAll},
    {"--seed", "seed", "64-bit seed", kRuns | kVerify},
    {"--horizon", "horizon", "steps per run", kRuns},
    {"--tail-window", "tail_window", "trailing steps used for the empirical limsup", kRuns},
    {"--mode", "mode", "noise-free | iid | steered", kRuns},
    {"--init", "init", "uniform-random or a comma-separated opinion vector", kRuns},
    {"--precision", "precision", "convergence threshold (default delta_bar)", kMany},
    {"--output", "output", "output directory", kRuns | kVerify},
    {"--full-states", "full_states", "also write every opinion vector", kSimulate, true},
    {"--runs", "runs", "runs per ensemble", kMany},
    {"--seed-base", "seed_base", "run i uses seed_base + i (default: --seed)", kMany},
    {"--per-run", "per_run", "write one metrics CSV per run", kEnsemble, true},
    {"--jobs", "jobs", "worker threads for ensembles", kMany},
    {"--trials", "trials", "trials per property suite", kVerify},
    {"--steps", "steps", "noisy steps per absorption trial", kVerify},
    {"--noise-draws", "noise_draws", "draws for the quarter-tail frequency check", kVerify},
    {"--grid-delta", "grid_delta", "comma-separated delta values", kSweep},
    {"--grid-alpha", "grid_alpha", "comma-separated alpha values", kSweep},
    {"--grid-m", "grid_m", "comma-separated seeker counts", kSweep},
    {"--grid-epsilon", "grid_epsilon", "comma-separated epsilon values", kSweep},
};
// clang-format on

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Noisy truth-seeking opinion dynamics: bounds, simulation and verification",
                 "hkts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    struct Sub {
        const char* name;
        const char* help;
        unsigned scope;
        int (*run)(const CliConfig&, std::ostream&);
    };
    const Sub subs[] = {
        {"bounds", "print the precision and admissible-noise bounds", kBounds, cmd_bounds},
        {"simulate", "run one trajectory and write its metrics", kSimulate, cmd_simulate},
        {"ensemble", "run seeded trajectories and summarize convergence", kEnsemble, cmd_ensemble},
        {"verify", "run the property suites", kVerify, cmd_verify},
        {"sweep", "run one ensemble per parameter grid point", kSweep, cmd_sweep},
    };

    KeyValues overrides;
    std::string config_path;
    std::vector<std::pair<CLI::App*, const Sub*>> registered;
    for (const Sub& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        cmd->add_option("--config", config_path, "key = value config file or run manifest");
        for (const Flag& f : kFlags) {
            if (!(f.scope & sub.scope)) continue;
            const std::string key = f.key;
            if (f.is_switch) {
                cmd->add_flag_callback(f.names, [&overrides, key] { overrides[key] = "true"; },
                                       f.help);
            } else {
                cmd->add_option_function<std::string>(
                    f.names, [&overrides, key](const std::string& v) { overrides[key] = v; },
                    f.help);
            }
        }
        if (sub.scope == kVerify) {
            // Negative control for the range-preservation suite.
            cmd->add_flag_callback("--inject-fault-no-clamp",
                                   [&overrides] { overrides["fault_no_clamp"] = "true"; })
                ->group("");
        }
        registered.emplace_back(cmd, &sub);
    }

    std::vector<char*> argv;
    std::vector<std::string> storage(args);
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& [cmd, sub] : registered) {
            if (cmd->parsed()) {
                err << cmd->help();
                return kUsageError;
            }
        }
        err << app.help();
        return kUsageError;
    }

    for (const auto& [cmd, sub] : registered) {
        if (!cmd->parsed()) continue;
        try {
            KeyValues values = config_path.empty() ? KeyValues{} : load_config_file(config_path);
            for (const auto& [k, v] : overrides) values[k] = v;
            return sub->run(resolve(values), out);
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << "\n";
            return kUsageError;
        } catch (const IoError& e) {
            err << "i/o error: " << e.what() << "\n";
            return kIoError;
        } catch (const std::invalid_argument& e) {
            err << "config error: " << e.what() << "\n";
            return kUsageError;
        } catch (const std::domain_error& e) {
            err << "config error: " << e.what() << "\n";
            return kUsageError;
        }
    }
    return kUsageError;
}

}  // namespace hkts::cli
