#include "hkts/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "hkts/bounds.hpp"

namespace hkts {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::skip: return "skip";
    }
    return "unknown";
}

namespace {

constexpr double kRoundoff = 1e-12;

double open_unit(Rng& rng) { return 1.0 - rng.uniform01(); }  // (0, 1]

OpinionState advance(const OpinionState& s, const ModelConfig& c, const NoiseVector& noise,
                     bool clamp) {
    if (clamp) return step_noisy(s, c, noise);
    return OpinionState{s.t + 1, noisy_target(s, c, noise)};
}

PropertyResult finish(PropertyResult r) {
    r.verdict = r.margin < 0.0 ? Verdict::fail : Verdict::pass;
    return r;
}

PropertyResult skipped(std::string name, std::string note) {
    return PropertyResult{std::move(name), Verdict::skip, 0, 0.0, std::move(note)};
}

double uniform_in_band(Rng& rng, double center, double half_width) {
    const double lo = std::max(0.0, center - half_width);
    const double hi = std::min(1.0, center + half_width);
    // Closed band; the endpoints themselves are drawn now and then.
    switch (rng.uniform_int(0, 9)) {
        case 0: return lo;
        case 1: return hi;
        default: return rng.uniform(lo, hi);
    }
}

/// Bounded noise aimed at breaking the bands: common-sign extremes, split
/// signs between seekers and non-seekers, push-away-from-truth, and plain iid.
NoiseVector adversarial_noise(Rng& rng, const OpinionState& s, const ModelConfig& c) {
    const double d = c.delta;
    NoiseVector noise{std::vector<double>(c.n)};
    const auto pattern = rng.uniform_int(0, 5);
    for (std::size_t i = 0; i < c.n; ++i) {
        double& v = noise.xi[i];
        switch (pattern) {
            case 0: v = d; break;
            case 1: v = -d; break;
            case 2: v = rng.uniform01() < 0.5 ? d : -d; break;
            case 3: v = c.seeker[i] ? -d : d; break;
            case 4: v = s.x[i] >= c.truth ? d : -d; break;
            default: v = d * (2.0 * rng.uniform01() - 1.0); break;
        }
    }
    return noise;
}

}  // namespace

ModelConfig random_admissible_config(Rng& rng, std::size_t max_n) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, max_n));
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, n));
    const double alpha = open_unit(rng);
    const double epsilon = open_unit(rng);
    const double truth = rng.uniform01();
    const NoiseBounds b = compute_bounds(n, m, alpha, epsilon, 0.0);
    const double delta = rng.uniform_int(0, 3) == 0 ? b.delta_lower : b.delta_lower * open_unit(rng);
    return ModelConfig::homogeneous(n, m, alpha, epsilon, truth, delta);
}

PropertyResult check_bound_consistency(Rng& rng, std::size_t trials, std::size_t max_n) {
    PropertyResult r{"bound-consistency", Verdict::pass, trials,
                     std::numeric_limits<double>::infinity(), ""};
    for (std::size_t k = 0; k < trials; ++k) {
        const auto n = static_cast<std::size_t>(rng.uniform_int(1, max_n));
        const auto m = static_cast<std::size_t>(rng.uniform_int(1, n));
        const double alpha = open_unit(rng);
        const double epsilon = open_unit(rng);
        const double lower = compute_bounds(n, m, alpha, epsilon, 0.0).delta_lower;
        const NoiseBounds b = compute_bounds(n, m, alpha, epsilon, lower);
        r.margin = std::min(r.margin, epsilon + kRoundoff - (b.delta1 + b.delta2));
    }
    r.note = "delta = delta_lower; margin = eps + 1e-12 - (delta1 + delta2)";
    return finish(r);
}

PropertyResult check_running_average_monotonicity(Rng& rng, std::size_t trials,
                                                  std::size_t max_len) {
    PropertyResult r{"running-average-monotonicity", Verdict::pass, trials,
                     std::numeric_limits<double>::infinity(), ""};
    for (std::size_t k = 0; k < trials; ++k) {
        const auto len = static_cast<std::size_t>(rng.uniform_int(1, max_len));
        const bool increasing = rng.uniform01() < 0.5;
        std::vector<double> seq(len);
        double z = rng.uniform(-1.0, 1.0);
        for (double& v : seq) {
            v = z;
            // Occasional flat runs exercise the non-strict case.
            const double stepsize = rng.uniform_int(0, 4) == 0 ? 0.0 : rng.uniform01();
            z += increasing ? stepsize : -stepsize;
        }
        const auto offset = static_cast<std::size_t>(rng.uniform_int(0, len - 1));
        const auto g = running_averages(seq, offset);
        for (std::size_t j = 1; j < g.size(); ++j) {
            const double step = increasing ? g[j] - g[j - 1] : g[j - 1] - g[j];
            r.margin = std::min(r.margin, step + kRoundoff);
        }
    }
    if (std::isinf(r.margin)) r.margin = kRoundoff;
    r.note = "margin = worst step in the expected direction + 1e-12";
    return finish(r);
}

PropertyResult check_absorption(const ModelConfig& config, Rng& rng, std::size_t trials,
                                std::size_t steps, bool clamp) {
    const std::string name = "band-absorption";
    if (!bounds_apply(config)) {
        return skipped(name, "bounds need homogeneous alpha and at least one seeker");
    }
    const NoiseBounds b = compute_bounds(config);
    if (!is_admissible(config.delta, b)) {
        return skipped(name, fmt::format("delta = {:.12g} is outside (0, delta_lower = {:.12g}]; "
                                         "absorption hypothesis unmet",
                                         config.delta, b.delta_lower));
    }
    PropertyResult r{name, Verdict::pass, trials, std::numeric_limits<double>::infinity(), ""};
    std::size_t violations = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        OpinionState s{0, std::vector<double>(config.n)};
        for (std::size_t i = 0; i < config.n; ++i) {
            s.x[i] = uniform_in_band(rng, config.truth, config.seeker[i] ? b.delta1 : b.delta2);
        }
        for (std::size_t t = 0; t < steps; ++t) {
            s = advance(s, config, adversarial_noise(rng, s, config), clamp);
            const Deviations d = deviations(s, config);
            if (d.seekers) r.margin = std::min(r.margin, b.delta1 - *d.seekers);
            if (d.non_seekers) r.margin = std::min(r.margin, b.delta2 - *d.non_seekers);
            if (!lemma2_entry(s, config, b, kBandSlack)) ++violations;
        }
    }
    r.note = fmt::format("{} steps per trial, {} violations beyond {:g} roundoff; "
                         "margin = band - deviation",
                         steps, violations, kBandSlack);
    r.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
    return r;
}

PropertyResult check_steered_contraction(const ModelConfig& config, Rng& rng,
                                         std::size_t trials) {
    const std::string name = "steered-contraction";
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        return skipped(name, "steered protocol needs 0 < delta < 1");
    }
    const double delta = config.delta;
    const std::size_t block = block_length(delta);
    PropertyResult r{name, Verdict::pass, trials, std::numeric_limits<double>::infinity(), ""};
    std::size_t too_slow = 0;
    std::size_t tested = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        OpinionState s{0, std::vector<double>(config.n)};
        double d = 0.0;
        for (int attempt = 0; attempt < 100 && d <= delta; ++attempt) {
            for (double& v : s.x) v = rng.uniform01();
            d = deviations(s, config).all;
        }
        if (d <= delta) continue;  // nothing to contract
        ++tested;
        std::size_t steps = 0;
        while (d > delta && steps < block) {
            s = step_noisy(s, config, steered_noise(s, config));
            const double next = deviations(s, config).all;
            r.margin = std::min(r.margin, (d - next) - (delta / 2.0 - kRoundoff));
            d = next;
            ++steps;
        }
        if (d > delta) ++too_slow;
    }
    if (tested == 0) return skipped(name, "no sampled state had d_V > delta");
    r.trials = tested;
    r.note = fmt::format("block length L = {}; {} trials exceeded L; margin = decrease - delta/2",
                         block, too_slow);
    r.verdict = r.margin >= 0.0 && too_slow == 0 ? Verdict::pass : Verdict::fail;
    return r;
}

PropertyResult check_quarter_tails(double delta, Rng& rng, std::size_t draws, double tolerance) {
    const std::string name = "quarter-tail-frequency";
    if (!(delta > 0.0)) return skipped(name, "delta = 0 has no tails");
    if (draws == 0) return skipped(name, "no draws requested");
    std::size_t upper = 0;
    std::size_t lower = 0;
    const NoiseVector noise = draw_noise(rng, draws, delta);
    for (double v : noise.xi) {
        if (v >= delta / 2.0) ++upper;
        if (v <= -delta / 2.0) ++lower;
    }
    const double f_up = static_cast<double>(upper) / static_cast<double>(draws);
    const double f_lo = static_cast<double>(lower) / static_cast<double>(draws);
    const double worst = std::max(std::abs(f_up - 0.25), std::abs(f_lo - 0.25));
    PropertyResult r{name, Verdict::pass, draws, tolerance - worst, ""};
    r.note = fmt::format("freq[d/2,d] = {:.6f}, freq[-d,-d/2] = {:.6f}, tolerance {}", f_up, f_lo,
                         tolerance);
    return finish(r);
}

PropertyResult check_range_preservation(const ModelConfig& config, Rng& rng,
                                        std::size_t trials, bool clamp) {
    PropertyResult r{"range-preservation", Verdict::pass, trials,
                     std::numeric_limits<double>::infinity(), ""};
    for (std::size_t k = 0; k < trials; ++k) {
        OpinionState s{0, std::vector<double>(config.n)};
        for (double& v : s.x) {
            switch (rng.uniform_int(0, 3)) {
                case 0: v = 0.01 * rng.uniform01(); break;
                case 1: v = 1.0 - 0.01 * rng.uniform01(); break;
                default: v = rng.uniform01(); break;
            }
        }
        NoiseVector noise{std::vector<double>(config.n)};
        for (double& v : noise.xi) {
            v = rng.uniform01() < 0.5 ? config.delta * (rng.uniform01() < 0.5 ? 1.0 : -1.0)
                                      : config.delta * (2.0 * rng.uniform01() - 1.0);
        }
        const OpinionState next = advance(s, config, noise, clamp);
        for (double v : next.x) r.margin = std::min(r.margin, std::min(v, 1.0 - v));
    }
    r.note = clamp ? "margin = distance of the worst opinion to the unit interval's edge"
                   : "clamp disabled (fault injection)";
    return finish(r);
}

std::vector<PropertyResult> run_verification(const VerifyOptions& o) {
    o.config.validate();
    // One independent stream per suite so adding a suite never shifts another.
    auto stream = [&](std::uint64_t k) { return Rng(o.seed * 0x9E3779B97F4A7C15ULL + k); };
    std::vector<PropertyResult> out;
    {
        Rng rng = stream(1);
        out.push_back(check_bound_consistency(rng, o.trials));
    }
    {
        Rng rng = stream(2);
        out.push_back(check_running_average_monotonicity(rng, o.trials));
    }
    {
        Rng rng = stream(3);
        out.push_back(check_absorption(o.config, rng, o.trials, o.steps, !o.disable_clamp));
    }
    {
        Rng rng = stream(4);
        out.push_back(check_steered_contraction(o.config, rng, o.trials));
    }
    {
        Rng rng = stream(5);
        out.push_back(check_quarter_tails(o.config.delta, rng, o.noise_draws));
    }
    {
        Rng rng = stream(6);
        out.push_back(check_range_preservation(o.config, rng, o.trials, !o.disable_clamp));
    }
    return out;
}

}  // namespace hkts
