#include "hkts/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hkts {

NoiseBounds compute_bounds(std::size_t n, std::size_t m, double alpha, double epsilon,
                           double delta) {
    if (m == 0) throw std::domain_error("at least one truth seeker is required (|S| >= 1)");
    if (m > n) {
        throw std::domain_error("seeker count m = " + std::to_string(m) + " exceeds n = " +
                                std::to_string(n));
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::domain_error("epsilon must lie in (0, 1]");
    if (!(delta >= 0.0)) throw std::domain_error("delta must be >= 0");

    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    const double ma = md * alpha;

    NoiseBounds b;
    b.delta1 = nd * (1.0 - alpha) * delta / ma + delta;
    b.delta2 = nd * delta / ma + delta;
    b.delta_bar = std::max(b.delta1, b.delta2);
    b.delta_lower = std::min(ma * epsilon / (2.0 * nd + (2.0 * md - nd) * alpha),
                             md * epsilon / (nd + 2.0 * md));
    return b;
}

bool bounds_apply(const ModelConfig& config) {
    return config.seeker_count() >= 1 && config.homogeneous_alpha().has_value();
}

NoiseBounds compute_bounds(const ModelConfig& config) {
    const auto alpha = config.homogeneous_alpha();
    if (!alpha) throw std::domain_error("bounds require a homogeneous alpha");
    return compute_bounds(config.n, config.seeker_count(), *alpha, config.epsilon, config.delta);
}

bool is_admissible(double delta, const NoiseBounds& bounds) {
    return delta > 0.0 && delta <= bounds.delta_lower;
}

bool lemma2_entry(const OpinionState& state, const ModelConfig& config,
                  const NoiseBounds& bounds, double slack) {
    const Deviations d = deviations(state, config);
    if (d.seekers && *d.seekers > bounds.delta1 + slack) return false;
    if (d.non_seekers && *d.non_seekers > bounds.delta2 + slack) return false;
    return true;
}

NoiseVector steered_noise(const OpinionState& state, const ModelConfig& config, double fraction) {
    if (state.size() != config.n) throw std::invalid_argument("state size does not match n");
    const double magnitude = fraction * config.delta;
    NoiseVector noise{std::vector<double>(config.n)};
    for (std::size_t i = 0; i < config.n; ++i) {
        const double mean = local_mean(state, {i}, config.epsilon);
        noise.xi[i] = mean <= config.truth ? magnitude : -magnitude;
    }
    return noise;
}

std::size_t block_length(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("block length needs 0 < delta < 1");
    const double q = (1.0 - delta) / (delta / 2.0);
    // Quotients that are integers in exact arithmetic land a few ulps off.
    const double nearest = std::round(q);
    const double steps = std::abs(q - nearest) <= 1e-9 * std::max(1.0, nearest) ? nearest
                                                                                  : std::ceil(q);
    return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

double success_log_prob_lower_bound(std::size_t n, std::size_t block) {
    if (n == 0) throw std::domain_error("success bound needs n >= 1");
    if (block == 0) throw std::domain_error("success bound needs L >= 1");
    return -static_cast<double>(n) * static_cast<double>(block) * 2.0 * std::numbers::ln2;
}

std::vector<double> running_averages(std::span<const double> seq, std::size_t offset) {
    if (seq.empty()) throw std::domain_error("running averages of an empty sequence");
    if (offset >= seq.size()) {
        throw std::domain_error("offset " + std::to_string(offset) + " out of range for length " +
                                std::to_string(seq.size()));
    }
    std::vector<double> out;
    out.reserve(seq.size() - offset);
    double sum = 0.0;
    for (std::size_t k = 1; offset + k <= seq.size(); ++k) {
        sum += seq[offset + k - 1];
        out.push_back(sum / static_cast<double>(k));
    }
    return out;
}

}  // namespace hkts
