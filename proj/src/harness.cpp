#include "hkts/harness.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>

namespace hkts {

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::noise_free: return "noise-free";
        case Mode::iid: return "iid";
        case Mode::steered: return "steered";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text) {
    if (text == "noise-free") return Mode::noise_free;
    if (text == "iid" || text == "iid-noise") return Mode::iid;
    if (text == "steered") return Mode::steered;
    throw std::invalid_argument("unknown mode '" + std::string(text) +
                                "' (expected noise-free, iid or steered)");
}

void RunSpec::validate() const {
    config.validate();
    if (horizon == 0) throw std::domain_error("horizon must be at least 1 step");
    if (tail_window == 0) throw std::invalid_argument("tail window must be at least 1 step");
    if (tail_window > horizon) throw std::invalid_argument("tail window exceeds the horizon");
    if (mode == Mode::steered && !(config.delta > 0.0)) {
        throw std::invalid_argument("steered mode needs delta > 0");
    }
    if (const auto* x = std::get_if<std::vector<double>>(&initial)) {
        if (x->size() != config.n) {
            throw std::invalid_argument("initial opinion vector has " + std::to_string(x->size()) +
                                        " entries but n = " + std::to_string(config.n));
        }
        for (double v : *x) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument("initial opinions must lie in [0, 1]");
            }
        }
    }
    if (precision && !(*precision >= 0.0)) throw std::invalid_argument("precision must be >= 0");
}

namespace {

MetricRow metrics(const OpinionState& state, const ModelConfig& config) {
    const Deviations d = deviations(state, config);
    return MetricRow{state.t, d.all, d.seekers, d.non_seekers};
}

OpinionState initial_state(const RunSpec& spec, Rng& rng) {
    OpinionState s;
    if (const auto* x = std::get_if<std::vector<double>>(&spec.initial)) {
        s.x = *x;
    } else {
        s.x.resize(spec.config.n);
        for (double& v : s.x) v = rng.uniform01();
    }
    return s;
}

std::optional<double> default_precision(const RunSpec& spec,
                                        const std::optional<NoiseBounds>& bounds) {
    if (spec.precision) return spec.precision;
    if (bounds) return bounds->delta_bar;
    return std::nullopt;
}

}  // namespace

TrajectoryRecord run_trajectory(const RunSpec& spec) {
    spec.validate();
    const ModelConfig& config = spec.config;

    TrajectoryRecord rec;
    rec.seed = spec.seed;
    rec.config = config;
    if (bounds_apply(config)) rec.bounds = compute_bounds(config);
    rec.series.reserve(spec.horizon + 1);

    Rng rng(spec.seed);
    OpinionState state = initial_state(spec, rng);

    auto observe = [&](const OpinionState& s) {
        rec.series.push_back(metrics(s, config));
        if (spec.keep_states) rec.states.push_back(s);
        if (!rec.bounds) return;
        if (!rec.entry_time) {
            if (lemma2_entry(s, config, *rec.bounds)) rec.entry_time = s.t;
        } else if (!lemma2_entry(s, config, *rec.bounds, kBandSlack)) {
            ++rec.entry_violations;
        }
    };

    observe(state);
    for (std::size_t step = 0; step < spec.horizon; ++step) {
        switch (spec.mode) {
            case Mode::noise_free:
                state = step_noise_free(state, config);
                break;
            case Mode::iid:
                state = step_noisy(state, config, draw_noise(rng, config.n, config.delta));
                break;
            case Mode::steered:
                state = step_noisy(state, config, steered_noise(state, config));
                break;
        }
        observe(state);
    }
    rec.tail_sup = empirical_limsup(rec, spec.tail_window);
    return rec;
}

double empirical_limsup(const TrajectoryRecord& record, std::size_t window) {
    if (window == 0) throw std::domain_error("limsup window must be at least 1");
    if (window > record.series.size()) {
        throw std::domain_error("limsup window longer than the recorded series");
    }
    double sup = 0.0;
    for (auto it = record.series.end() - static_cast<std::ptrdiff_t>(window);
         it != record.series.end(); ++it) {
        sup = std::max(sup, it->d_all);
    }
    return sup;
}

Quantiles quantiles(std::vector<double> values) {
    if (values.empty()) throw std::domain_error("quantiles of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size();
    const double median =
        k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
    return Quantiles{values.front(), median, values.back()};
}

EnsembleSummary summarize(std::vector<RunOutcome> outcomes, std::optional<double> precision,
                          std::optional<NoiseBounds> bounds) {
    if (outcomes.empty()) throw std::domain_error("ensemble summary needs at least one run");
    EnsembleSummary s;
    s.runs = outcomes.size();
    s.precision = precision;
    s.bounds = bounds;

    std::vector<double> tails, finals, entries;
    for (const RunOutcome& o : outcomes) {
        tails.push_back(o.tail_sup);
        finals.push_back(o.final_deviation);
        if (o.entry_time) entries.push_back(static_cast<double>(*o.entry_time));
        if (precision && o.tail_sup <= *precision) ++s.converged_runs;
        s.entry_violations += o.entry_violations;
    }
    s.tail_sup = quantiles(tails);
    s.final_deviation = quantiles(finals);
    s.entered_runs = entries.size();
    if (!entries.empty()) s.entry_time = quantiles(entries);
    if (precision) {
        s.converged_fraction =
            static_cast<double>(s.converged_runs) / static_cast<double>(s.runs);
    }
    s.outcomes = std::move(outcomes);
    return s;
}

EnsembleSummary run_ensemble(
    const RunSpec& spec, std::size_t runs, std::uint64_t seed_base, std::size_t jobs,
    const std::function<void(std::size_t, const TrajectoryRecord&)>& on_record) {
    if (runs == 0) throw std::invalid_argument("an ensemble needs at least one run");
    spec.validate();

    std::optional<NoiseBounds> bounds;
    if (bounds_apply(spec.config)) bounds = compute_bounds(spec.config);

    std::vector<RunOutcome> outcomes(runs);
    auto run_one = [&](std::size_t index) {
        RunSpec local = spec;
        local.seed = ensemble_seed(seed_base, index);
        const TrajectoryRecord rec = run_trajectory(local);
        outcomes[index] = RunOutcome{rec.seed, rec.tail_sup, rec.series.back().d_all,
                                     rec.entry_time, rec.entry_violations};
        if (on_record) on_record(index, rec);
    };

    jobs = std::clamp<std::size_t>(jobs, 1, runs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < runs; ++i) run_one(i);
    } else {
        // Static striping: worker w owns runs w, w + jobs, ...
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < runs; i += jobs) run_one(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : workers) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return summarize(std::move(outcomes), default_precision(spec, bounds), bounds);
}

}  // namespace hkts
