#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hkts {

/// Index of an agent in [0, n).
struct AgentId {
    std::size_t index = 0;

    constexpr auto operator<=>(const AgentId&) const = default;
};

/// Parameters of one truth-seeking model instance.
///
/// `alpha` holds one attraction strength per agent. Agents outside the seeker
/// set never feel the truth, whatever their alpha entry says. An empty seeker
/// set is the classical bounded-confidence model.
struct ModelConfig {
    std::size_t n = 0;
    double epsilon = 0.0;
    double truth = 0.0;
    std::vector<double> alpha;
    std::vector<bool> seeker;  // membership mask, length n
    double delta = 0.0;

    /// Seekers are agents 0..m-1, all sharing the same alpha.
    static ModelConfig homogeneous(std::size_t n, std::size_t m, double alpha,
                                   double epsilon, double truth, double delta);

    /// Seekers given as an explicit list; alpha is shared by every agent.
    static ModelConfig with_seekers(std::size_t n, std::span<const AgentId> seekers,
                                    double alpha, double epsilon, double truth,
                                    double delta);

    /// Throws std::invalid_argument naming the first violated constraint.
    void validate() const;

    bool is_seeker(AgentId i) const { return seeker[i.index]; }
    double effective_alpha(AgentId i) const { return seeker[i.index] ? alpha[i.index] : 0.0; }

    std::size_t seeker_count() const;
    std::vector<AgentId> seekers() const;
    std::vector<AgentId> non_seekers() const;
    std::vector<AgentId> all_agents() const;

    /// The shared alpha when every entry is equal.
    std::optional<double> homogeneous_alpha() const;
};

/// Opinion profile x(t).
struct OpinionState {
    std::size_t t = 0;
    std::vector<double> x;

    std::size_t size() const { return x.size(); }
};

/// Per-agent perturbation applied in one noisy step.
struct NoiseVector {
    std::vector<double> xi;

    static NoiseVector zero(std::size_t n) { return NoiseVector{std::vector<double>(n, 0.0)}; }
};

/// Agents whose opinion lies within epsilon of agent i (closed ball, i included).
/// Throws std::domain_error for an out-of-range agent or a non-positive epsilon.
std::vector<AgentId> neighbor_set(const OpinionState& state, AgentId i, double epsilon);

/// Mean opinion over neighbor_set(state, i, epsilon).
double local_mean(const OpinionState& state, AgentId i, double epsilon);

double clamp_unit(double v);

/// One synchronous noise-free update.
OpinionState step_noise_free(const OpinionState& state, const ModelConfig& config);

/// Pre-clamp values x*(t) of the noisy update. Does not check the noise bound.
std::vector<double> noisy_target(const OpinionState& state, const ModelConfig& config,
                                 const NoiseVector& noise);

/// One synchronous noisy update, clamped to [0,1].
/// Throws std::invalid_argument if any |xi| exceeds config.delta.
OpinionState step_noisy(const OpinionState& state, const ModelConfig& config,
                        const NoiseVector& noise);

/// max over `subset` of |x_i - truth|. Throws std::domain_error on an empty subset.
double deviation(const OpinionState& state, std::span<const AgentId> subset, double truth);

/// The three deviation metrics of a state in one pass. Seeker and non-seeker
/// values are empty when the corresponding group is empty.
struct Deviations {
    double all = 0.0;
    std::optional<double> seekers;
    std::optional<double> non_seekers;
};

Deviations deviations(const OpinionState& state, const ModelConfig& config);

}  // namespace hkts
