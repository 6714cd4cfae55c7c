#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hkts/model.hpp"
#include "hkts/rng.hpp"

namespace hkts {

enum class Verdict { pass, fail, skip };

std::string_view to_string(Verdict v);

/// Outcome of one property suite. `margin` is the worst observed slack; a
/// negative margin means the property was violated.
struct PropertyResult {
    std::string name;
    Verdict verdict = Verdict::pass;
    std::size_t trials = 0;
    double margin = 0.0;
    std::string note;
};

/// Random config with 1 <= n <= max_n, 1 <= m <= n, alpha and epsilon in (0, 1],
/// A in [0, 1] and delta in (0, delta_lower]. About one draw in four sets delta
/// to delta_lower exactly.
ModelConfig random_admissible_config(Rng& rng, std::size_t max_n);

/// delta1 + delta2 <= epsilon + 1e-12 at delta = delta_lower, over random configs.
PropertyResult check_bound_consistency(Rng& rng, std::size_t trials, std::size_t max_n = 50);

/// Running averages of random monotone sequences stay monotone (1e-12 slack).
PropertyResult check_running_average_monotonicity(Rng& rng, std::size_t trials,
                                                  std::size_t max_len = 100);

/// Starting inside the delta1/delta2 bands, `steps` noisy steps under adversarial
/// bounded noise never leave them. Skipped when the bounds do not apply or delta
/// is not admissible.
PropertyResult check_absorption(const ModelConfig& config, Rng& rng, std::size_t trials,
                                std::size_t steps, bool clamp = true);

/// From random states with d_V > delta, steered steps shrink d_V by at least
/// delta/2 (1e-12 slack) and reach d_V <= delta within block_length(delta) steps.
PropertyResult check_steered_contraction(const ModelConfig& config, Rng& rng,
                                         std::size_t trials);

/// Each quarter band [delta/2, delta] and [-delta, -delta/2] receives 1/4 of the
/// draws, within `tolerance`.
PropertyResult check_quarter_tails(double delta, Rng& rng, std::size_t draws,
                                   double tolerance = 0.005);

/// Every noisy step keeps opinions in [0, 1]. `clamp = false` is the fault
/// injection used as a negative control.
PropertyResult check_range_preservation(const ModelConfig& config, Rng& rng,
                                        std::size_t trials, bool clamp = true);

struct VerifyOptions {
    ModelConfig config;
    std::size_t trials = 1000;
    std::size_t steps = 1000;
    std::size_t noise_draws = 100000;
    std::uint64_t seed = 1;
    bool disable_clamp = false;
};

/// Runs every suite. Each suite gets its own stream seeded from options.seed.
std::vector<PropertyResult> run_verification(const VerifyOptions& options);

}  // namespace hkts
