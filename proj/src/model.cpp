#include "hkts/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hkts {

namespace {

void require_agent(const OpinionState& state, AgentId i) {
    if (i.index >= state.size()) {
        throw std::domain_error("agent index " + std::to_string(i.index) +
                                " out of range for " + std::to_string(state.size()) + " agents");
    }
}

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0)) {
        throw std::domain_error("confidence threshold epsilon must be positive");
    }
}

void require_matching(const OpinionState& state, const ModelConfig& config) {
    if (state.size() != config.n) {
        throw std::invalid_argument("state has " + std::to_string(state.size()) +
                                    " opinions but config has n = " + std::to_string(config.n));
    }
}

}  // namespace

ModelConfig ModelConfig::homogeneous(std::size_t n, std::size_t m, double alpha, double epsilon,
                                     double truth, double delta) {
    ModelConfig c;
    c.n = n;
    c.epsilon = epsilon;
    c.truth = truth;
    c.alpha.assign(n, alpha);
    c.seeker.assign(n, false);
    for (std::size_t i = 0; i < std::min(m, n); ++i) c.seeker[i] = true;
    c.delta = delta;
    if (m > n) {
        throw std::invalid_argument("seeker count m = " + std::to_string(m) +
                                    " exceeds n = " + std::to_string(n));
    }
    return c;
}

ModelConfig ModelConfig::with_seekers(std::size_t n, std::span<const AgentId> seekers,
                                      double alpha, double epsilon, double truth, double delta) {
    ModelConfig c = homogeneous(n, 0, alpha, epsilon, truth, delta);
    for (AgentId s : seekers) {
        if (s.index >= n) {
            throw std::invalid_argument("seeker index " + std::to_string(s.index) +
                                        " out of range for n = " + std::to_string(n));
        }
        c.seeker[s.index] = true;
    }
    return c;
}

void ModelConfig::validate() const {
    if (n == 0) throw std::invalid_argument("n must be at least 1");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0, 1]");
    }
    if (!(truth >= 0.0 && truth <= 1.0)) throw std::invalid_argument("truth A must lie in [0, 1]");
    if (!(std::isfinite(delta) && delta >= 0.0)) {
        throw std::invalid_argument("noise strength delta must be finite and >= 0");
    }
    if (alpha.size() != n) throw std::invalid_argument("alpha must have one entry per agent");
    if (seeker.size() != n) throw std::invalid_argument("seeker mask must have one entry per agent");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0)) {
            throw std::invalid_argument("alpha[" + std::to_string(i) + "] must lie in [0, 1]");
        }
        if (seeker[i] && !(alpha[i] > 0.0)) {
            throw std::invalid_argument("seeker " + std::to_string(i) + " needs alpha > 0");
        }
    }
}

std::size_t ModelConfig::seeker_count() const {
    return static_cast<std::size_t>(std::count(seeker.begin(), seeker.end(), true));
}

std::vector<AgentId> ModelConfig::seekers() const {
    std::vector<AgentId> out;
    for (std::size_t i = 0; i < n; ++i)
        if (seeker[i]) out.push_back({i});
    return out;
}

std::vector<AgentId> ModelConfig::non_seekers() const {
    std::vector<AgentId> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!seeker[i]) out.push_back({i});
    return out;
}

std::vector<AgentId> ModelConfig::all_agents() const {
    std::vector<AgentId> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {i};
    return out;
}

std::optional<double> ModelConfig::homogeneous_alpha() const {
    if (alpha.empty()) return std::nullopt;
    const double a = alpha.front();
    if (std::all_of(alpha.begin(), alpha.end(), [a](double v) { return v == a; })) return a;
    return std::nullopt;
}

std::vector<AgentId> neighbor_set(const OpinionState& state, AgentId i, double epsilon) {
    require_agent(state, i);
    require_epsilon(epsilon);
    const double xi = state.x[i.index];
    std::vector<AgentId> out;
    for (std::size_t j = 0; j < state.size(); ++j) {
        if (std::abs(state.x[j] - xi) <= epsilon) out.push_back({j});
    }
    return out;
}

double local_mean(const OpinionState& state, AgentId i, double epsilon) {
    require_agent(state, i);
    require_epsilon(epsilon);
    const double xi = state.x[i.index];
    double sum = 0.0;
    std::size_t count = 0;
    for (double xj : state.x) {
        if (std::abs(xj - xi) <= epsilon) {
            sum += xj;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

double clamp_unit(double v) {
    if (v > 1.0) return 1.0;
    if (v < 0.0) return 0.0;
    return v;
}

OpinionState step_noise_free(const OpinionState& state, const ModelConfig& config) {
    require_matching(state, config);
    OpinionState next{state.t + 1, std::vector<double>(config.n)};
    for (std::size_t i = 0; i < config.n; ++i) {
        const double mean = local_mean(state, {i}, config.epsilon);
        const double a = config.effective_alpha({i});
        next.x[i] = a * config.truth + (1.0 - a) * mean;
    }
    return next;
}

std::vector<double> noisy_target(const OpinionState& state, const ModelConfig& config,
                                 const NoiseVector& noise) {
    require_matching(state, config);
    if (noise.xi.size() != config.n) {
        throw std::invalid_argument("noise vector length does not match n");
    }
    std::vector<double> target(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        const double mean = local_mean(state, {i}, config.epsilon);
        const double a = config.effective_alpha({i});
        target[i] = (1.0 - a) * mean + a * config.truth + noise.xi[i];
    }
    return target;
}

OpinionState step_noisy(const OpinionState& state, const ModelConfig& config,
                        const NoiseVector& noise) {
    for (std::size_t i = 0; i < noise.xi.size(); ++i) {
        if (!(std::abs(noise.xi[i]) <= config.delta)) {
            throw std::invalid_argument("noise component " + std::to_string(i) +
                                        " exceeds the configured strength delta");
        }
    }
    OpinionState next{state.t + 1, noisy_target(state, config, noise)};
    for (double& v : next.x) v = clamp_unit(v);
    return next;
}

double deviation(const OpinionState& state, std::span<const AgentId> subset, double truth) {
    if (subset.empty()) throw std::domain_error("deviation over an empty agent subset");
    double worst = 0.0;
    for (AgentId i : subset) {
        require_agent(state, i);
        worst = std::max(worst, std::abs(state.x[i.index] - truth));
    }
    return worst;
}

Deviations deviations(const OpinionState& state, const ModelConfig& config) {
    require_matching(state, config);
    Deviations d;
    for (std::size_t i = 0; i < config.n; ++i) {
        const double dev = std::abs(state.x[i] - config.truth);
        d.all = std::max(d.all, dev);
        auto& group = config.seeker[i] ? d.seekers : d.non_seekers;
        group = std::max(group.value_or(0.0), dev);
    }
    return d;
}

}  // namespace hkts
