#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hkts/bounds.hpp"
#include "hkts/model.hpp"
#include "hkts/rng.hpp"

namespace hkts {

enum class Mode { noise_free, iid, steered };

std::string_view to_string(Mode mode);
/// Accepts "noise-free", "iid" (or "iid-noise") and "steered".
Mode parse_mode(std::string_view text);

/// Each x_i(0) drawn uniform on [0, 1) from the run's stream, before any noise.
struct UniformRandomInit {};

using InitialCondition = std::variant<UniformRandomInit, std::vector<double>>;

struct RunSpec {
    ModelConfig config;
    InitialCondition initial = UniformRandomInit{};
    Mode mode = Mode::iid;
    std::size_t horizon = 1;
    std::uint64_t seed = 0;
    std::size_t tail_window = 1;
    bool keep_states = false;
    /// Convergence threshold for ensembles; defaults to delta_bar when the bounds apply.
    std::optional<double> precision;

    void validate() const;
};

struct MetricRow {
    std::size_t t = 0;
    double d_all = 0.0;
    std::optional<double> d_seekers;
    std::optional<double> d_non_seekers;
};

struct TrajectoryRecord {
    std::vector<MetricRow> series;          // horizon + 1 rows, t = 0 first
    std::vector<OpinionState> states;       // filled only when keep_states
    std::optional<std::size_t> entry_time;  // first t with lemma2_entry, when bounds apply
    /// Steps after entry_time at which the entry condition no longer held.
    std::size_t entry_violations = 0;
    double tail_sup = 0.0;
    std::uint64_t seed = 0;
    ModelConfig config;
    std::optional<NoiseBounds> bounds;
};

/// Deterministic in (spec, seed). Always runs to the horizon.
/// Throws std::domain_error for a zero horizon and std::invalid_argument for
/// any other invalid spec.
TrajectoryRecord run_trajectory(const RunSpec& spec);

/// max of d_V over the last `window` rows. Throws std::domain_error for
/// window == 0 or a window longer than the series.
double empirical_limsup(const TrajectoryRecord& record, std::size_t window);

struct Quantiles {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

/// Per-run outcome kept in the summary.
struct RunOutcome {
    std::uint64_t seed = 0;
    double tail_sup = 0.0;
    double final_deviation = 0.0;
    std::optional<std::size_t> entry_time;
    std::size_t entry_violations = 0;
};

struct EnsembleSummary {
    std::size_t runs = 0;
    std::optional<double> precision;           // threshold used for convergence
    std::size_t converged_runs = 0;
    std::optional<double> converged_fraction;  // empty when no threshold is defined
    std::size_t entered_runs = 0;
    std::optional<Quantiles> entry_time;
    Quantiles tail_sup;
    Quantiles final_deviation;
    std::size_t entry_violations = 0;
    std::optional<NoiseBounds> bounds;
    std::vector<RunOutcome> outcomes;          // ordered by run index
};

/// Seed of run `index` in an ensemble: seed_base + index (mod 2^64).
constexpr std::uint64_t ensemble_seed(std::uint64_t seed_base, std::size_t index) {
    return seed_base + static_cast<std::uint64_t>(index);
}

/// Runs `runs` trajectories of `spec` with seeds ensemble_seed(seed_base, i).
/// `jobs` > 1 spreads runs over threads; the summary does not depend on it.
/// `on_record`, when set, sees each record before it is dropped. With jobs > 1 it
/// runs on worker threads and must tolerate concurrent calls.
EnsembleSummary run_ensemble(
    const RunSpec& spec, std::size_t runs, std::uint64_t seed_base, std::size_t jobs = 1,
    const std::function<void(std::size_t, const TrajectoryRecord&)>& on_record = {});

/// Aggregates outcomes. Invariant under permutation of `outcomes` except for
/// the order of the stored outcome list.
EnsembleSummary summarize(std::vector<RunOutcome> outcomes, std::optional<double> precision,
                          std::optional<NoiseBounds> bounds);

Quantiles quantiles(std::vector<double> values);

}  // namespace hkts
