#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hkts/model.hpp"

namespace hkts {

/// Precision and admissible-noise bounds for a homogeneous-alpha model.
///
///   delta1      = n(1-a)d/(ma) + d     seekers settle within this of the truth
///   delta2      = n d/(ma) + d         non-seekers settle within this
///   delta_bar   = max(delta1, delta2)
///   delta_lower = min(ma e/(2n+(2m-n)a), m e/(n+2m))   largest admissible d
struct NoiseBounds {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta_bar = 0.0;
    double delta_lower = 0.0;
};

/// Throws std::domain_error unless 1 <= m <= n, 0 < alpha <= 1,
/// 0 < epsilon <= 1 and delta >= 0.
NoiseBounds compute_bounds(std::size_t n, std::size_t m, double alpha, double epsilon,
                           double delta);

/// Bounds for a config. The config must have homogeneous alpha and at least one seeker.
NoiseBounds compute_bounds(const ModelConfig& config);

/// Whether the bounds apply to this config at all (homogeneous alpha, |S| >= 1).
bool bounds_apply(const ModelConfig& config);

/// Roundoff allowance when testing states against the delta1/delta2 bands. The
/// bands are reached with equality by extreme noise, so a computed state can sit
/// an ulp or two outside them.
inline constexpr double kBandSlack = 1e-12;

/// 0 < delta <= delta_lower.
bool is_admissible(double delta, const NoiseBounds& bounds);

/// Seekers within delta1 of the truth and non-seekers within delta2.
///
/// `slack` widens both bands; it exists for callers that compare states
/// produced by floating-point arithmetic against bands that are tight in
/// exact arithmetic. The default is the exact test.
bool lemma2_entry(const OpinionState& state, const ModelConfig& config,
                  const NoiseBounds& bounds, double slack = 0.0);

/// Noise that pushes every agent toward the truth: +fraction*delta when the
/// agent's neighbourhood mean is <= A, -fraction*delta otherwise.
///
/// The default fraction 1/2 is the only magnitude in [delta/2, delta] for which
/// each step provably shrinks the max deviation by delta/2 while it exceeds
/// delta; larger magnitudes can overshoot agents whose mean is already near A.
NoiseVector steered_noise(const OpinionState& state, const ModelConfig& config,
                          double fraction = 0.5);

/// ceil((1 - delta) / (delta / 2)). Throws std::domain_error unless 0 < delta < 1.
std::size_t block_length(double delta);

/// log(4^(-n L)), the per-block success lower bound in the log domain.
double success_log_prob_lower_bound(std::size_t n, std::size_t block);

/// g_s(k) = (1/k) * sum_{i=s+1}^{s+k} z_i for k = 1 .. len - s (1-based z).
/// Throws std::domain_error for an empty sequence or s >= len.
std::vector<double> running_averages(std::span<const double> seq, std::size_t offset);

}  // namespace hkts
