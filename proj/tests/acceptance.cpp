// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "hkts/bounds.hpp"
#include "hkts/harness.hpp"
#include "hkts/model.hpp"
#include "hkts/rng.hpp"
#include "hkts/verify.hpp"

namespace fs = std::filesystem;
using namespace hkts;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Parameters of the reference experiment.
constexpr std::size_t kN = 20;
constexpr std::size_t kM = 10;
constexpr double kAlpha = 0.5;
constexpr double kEpsilon = 0.2;
constexpr double kTruth = 0.8;
constexpr double kDelta = 0.02;

bool within_ulp(double a, double b) {
    return a == b || std::nextafter(b, a) == a;
}

Outcome bound_arithmetic() {
    const std::vector<double> deltas{0.001, 0.005, 0.01, 0.0123, 0.02, 0.025};
    std::string worst;
    bool ok = true;
    for (double d : deltas) {
        const NoiseBounds b = compute_bounds(kN, kM, kAlpha, kEpsilon, d);
        const bool good = within_ulp(b.delta_bar, 5.0 * d) && within_ulp(b.delta_lower, 0.025) &&
                          within_ulp(b.delta_lower, kEpsilon / 8.0);
        if (!good) worst += fmt::format(" delta={} -> bar={:.17g} lower={:.17g};", d, b.delta_bar,
                                        b.delta_lower);
        ok = ok && good;
    }
    return {ok, ok ? fmt::format("delta_bar = 5 delta and delta_lower = 0.025 for {} deltas",
                                 deltas.size())
                   : "mismatch:" + worst};
}

Outcome bound_consistency() {
    Rng rng(2001);
    const PropertyResult r = check_bound_consistency(rng, 10000, 50);
    return {r.verdict == Verdict::pass,
            fmt::format("{} configs, worst margin {:.3g}", r.trials, r.margin)};
}

Outcome absorption() {
    Rng rng(3001);
    std::size_t failed = 0;
    std::size_t skipped = 0;
    double margin = INFINITY;
    for (int k = 0; k < 1000; ++k) {
        const ModelConfig c = random_admissible_config(rng, 50);
        const PropertyResult r = check_absorption(c, rng, 1, 1000);
        if (r.verdict == Verdict::skip) ++skipped;
        if (r.verdict == Verdict::fail) ++failed;
        margin = std::min(margin, r.margin);
    }
    return {failed == 0 && skipped == 0,
            fmt::format("1000 configs x 1000 steps: {} with violations, {} skipped, worst margin "
                        "{:.3g}",
                        failed, skipped, margin)};
}

Outcome steered_contraction() {
    Rng rng(4001);
    std::size_t failed = 0;
    std::size_t tested = 0;
    double margin = INFINITY;
    for (int k = 0; k < 1000; ++k) {
        const ModelConfig c = random_admissible_config(rng, 50);
        const PropertyResult r = check_steered_contraction(c, rng, 1);
        if (r.verdict == Verdict::skip) continue;
        ++tested;
        if (r.verdict == Verdict::fail) ++failed;
        margin = std::min(margin, r.margin);
    }
    return {failed == 0 && tested == 1000,
            fmt::format("{} configs tested, {} failed, worst (decrease - delta/2) {:.3g}", tested,
                        failed, margin)};
}

RunSpec reference_spec(Mode mode, double delta, std::size_t horizon, std::size_t tail) {
    RunSpec spec;
    spec.config = ModelConfig::homogeneous(kN, kM, kAlpha, kEpsilon, kTruth, delta);
    spec.mode = mode;
    spec.horizon = horizon;
    spec.tail_window = tail;
    return spec;
}

Outcome convergence_ensemble() {
    const RunSpec spec = reference_spec(Mode::iid, kDelta, 20000, 2000);
    const EnsembleSummary s = run_ensemble(spec, 50, 1);
    const double threshold = 5.0 * kDelta;
    std::vector<std::uint64_t> slow;
    for (const RunOutcome& o : s.outcomes)
        if (!(o.tail_sup <= threshold)) slow.push_back(o.seed);

    // A seed failing at 2e4 steps is a defect unless it converges by 1e5.
    std::vector<std::uint64_t> defects;
    std::string resolved;
    for (std::uint64_t seed : slow) {
        RunSpec longer = reference_spec(Mode::iid, kDelta, 100000, 2000);
        longer.seed = seed;
        const TrajectoryRecord rec = run_trajectory(longer);
        if (rec.tail_sup <= threshold) {
            resolved += fmt::format(" {}(entry t={})", seed,
                                    rec.entry_time ? std::to_string(*rec.entry_time) : "none");
        } else {
            defects.push_back(seed);
        }
    }
    std::string detail = fmt::format(
        "seeds 1..50, horizon 20000: converged fraction {:.2f}, median tail_sup {:.4f}, "
        "entry violations {}",
        s.converged_fraction.value_or(0.0), s.tail_sup.median, s.entry_violations);
    if (!slow.empty()) detail += "; resolved at horizon 1e5:" + resolved;
    if (!defects.empty()) detail += fmt::format("; DEFECT seeds: {}", fmt::join(defects, ","));
    return {defects.empty() && s.entry_violations == 0, detail};
}

Outcome noise_free_failure() {
    std::size_t failures = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        RunSpec spec = reference_spec(Mode::noise_free, 0.0, 1000, 1);
        spec.seed = seed;
        const TrajectoryRecord rec = run_trajectory(spec);
        if (rec.series.back().d_non_seekers.value_or(0.0) > kEpsilon) ++failures;
    }
    return {failures >= 1,
            fmt::format("{} of 100 seeds end with a non-seeker farther than epsilon from A",
                        failures)};
}

Outcome noise_distribution() {
    Rng rng(7001);
    const PropertyResult r = check_quarter_tails(kDelta, rng, 100000, 0.005);
    return {r.verdict == Verdict::pass, r.note};
}

Outcome lemma1() {
    Rng rng(8001);
    const PropertyResult r = check_running_average_monotonicity(rng, 10000, 100);
    return {r.verdict == Verdict::pass,
            fmt::format("{} sequences, worst margin {:.3g}", r.trials, r.margin)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        std::string content = buf.str();
        if (entry.path().filename() == "manifest.json") {
            // Only the wall-clock duration may differ between invocations.
            auto doc = nlohmann::json::parse(content);
            doc.erase("wall_clock_seconds");
            content = doc.dump();
        }
        files[fs::relative(entry.path(), dir).string()] = content;
    }
    return files;
}

Outcome determinism() {
    const fs::path root = HKTS_TEST_TMP;
    const std::string cli = HKTS_CLI_PATH;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"simulate", "simulate --seed 7 --horizon 3000 --tail-window 300 --full-states"},
        {"ensemble", "ensemble --seed-base 11 --runs 6 --horizon 3000 --tail-window 300 --per-run "
                     "--jobs 3"},
    };
    std::string detail;
    bool ok = true;
    for (const auto& [name, args] : commands) {
        const fs::path out = root / ("determinism_" + name);
        std::map<std::string, std::string> first;
        for (int round = 0; round < 2; ++round) {
            fs::remove_all(out);
            const std::string cmd =
                fmt::format("\"{}\" {} --output \"{}\" > /dev/null", cli, args, out.string());
            if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
            auto files = snapshot(out);
            if (round == 0) {
                first = std::move(files);
            } else {
                const bool same = files == first;
                ok = ok && same && !files.empty();
                detail += fmt::format("{}: {} files {}; ", name, files.size(),
                                      same ? "identical" : "DIFFER");
            }
        }
    }
    return {ok, detail};
}

std::vector<double> classical_hk_step(const std::vector<double>& x, double epsilon) {
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double sum = 0.0;
        int count = 0;
        for (double y : x) {
            if (std::fabs(y - x[i]) <= epsilon) {
                sum += y;
                ++count;
            }
        }
        next[i] = sum / count;
    }
    return next;
}

Outcome degenerate_reductions() {
    Rng rng(10001);
    // All seekers with full attraction hit the truth in one step.
    bool all_truth = true;
    for (int k = 0; k < 100; ++k) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 40));
        const double truth = rng.uniform01();
        const ModelConfig c = ModelConfig::homogeneous(n, n, 1.0, 1.0 - rng.uniform01(), truth, 0.0);
        OpinionState s{0, std::vector<double>(n)};
        for (double& v : s.x) v = rng.uniform01();
        const OpinionState a = step_noise_free(s, c);
        const OpinionState b = step_noisy(s, c, NoiseVector::zero(n));
        for (std::size_t i = 0; i < n; ++i) all_truth = all_truth && a.x[i] == truth && b.x[i] == truth;
    }

    // No seekers: classical bounded-confidence averaging.
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, 40));
        RunSpec spec;
        spec.config = ModelConfig::homogeneous(n, 0, 0.5, 1.0 - rng.uniform01(), rng.uniform01(), 0.0);
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform01();
        spec.initial = x;
        spec.mode = Mode::iid;  // delta = 0, so every draw is zero
        spec.horizon = 50;
        spec.tail_window = 1;
        spec.keep_states = true;
        const TrajectoryRecord rec = run_trajectory(spec);
        for (std::size_t t = 1; t < rec.states.size(); ++t) {
            x = classical_hk_step(x, spec.config.epsilon);
            for (std::size_t i = 0; i < n; ++i)
                worst = std::max(worst, std::fabs(x[i] - rec.states[t].x[i]));
        }
    }
    return {all_truth && worst <= 1e-12,
            fmt::format("S=V,alpha=1: {}; S=empty vs reference HK over 100 states x 50 steps: "
                        "max diff {:.3g}",
                        all_truth ? "x = A exactly at t=1" : "NOT at truth", worst)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"1  bound arithmetic", bound_arithmetic},
        {"2  bound consistency", bound_consistency},
        {"3  absorption", absorption},
        {"4  steered contraction", steered_contraction},
        {"5  convergence ensemble", convergence_ensemble},
        {"6  noise-free failure", noise_free_failure},
        {"7  noise distribution", noise_distribution},
        {"8  running-average monotonicity", lemma1},
        {"9  determinism", determinism},
        {"10 degenerate reductions", degenerate_reductions},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << fmt::format("[{}] {:<34} ({:.2f}s) {}\n", o.pass ? "PASS" : "FAIL", c.label,
                                 secs, o.detail)
                  << std::flush;
        if (!o.pass) ++failures;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures,
                             criteria.size());
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
