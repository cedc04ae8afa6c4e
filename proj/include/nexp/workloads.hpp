#pragma once

#include "nexp/augmented.hpp"
#include "nexp/shadowing.hpp"
#include "nexp/symbolic.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace nexp {

// Description-length bounds for random eventually periodic base points.
struct BaseSampleBounds {
    std::int64_t max_period = 4;
    std::int64_t max_core = 8;
    std::int64_t max_offset = 4;
};

BiSeq random_base_point(std::mt19937_64& rng, const BaseSampleBounds& bounds = {});
std::vector<AugPoint> random_base_points(std::uint64_t seed, std::size_t count, const BaseSampleBounds& bounds = {});

// Every extra point with k <= k_extra and every orbit point of p_k, k <= k_orbit.
std::vector<AugPoint> construction_sample(const AugSystem& sys, std::int64_t k_extra, std::int64_t k_orbit);

// Drops repeated points, keeping first occurrences.
std::vector<AugPoint> deduplicate(std::vector<AugPoint> pts);

BiSeq flip_at(const BiSeq& s, std::int64_t index);

struct RandomPseudoOrbitConfig {
    std::size_t length = 100;
    Rat delta = Rat::dyadic(6);
    std::int64_t hop_k_lo = 80;  // extra orbits entered by a hop; needs 1/k + 2^{-11} < delta
    std::int64_t hop_k_hi = 100;
    double self_orbit_fraction = 0.1;  // pseudo-orbits that are one small extra orbit
    std::int64_t self_k_hi = 40;
    BaseSampleBounds bounds;
};

// Random delta-pseudo-orbit that wanders among base orbits through far
// coordinate flips, steers into the orbit of some p_k, hops onto an extra
// orbit attached to it and later leaves it again.
PseudoOrbit random_pseudo_orbit(const AugSystem& sys, std::mt19937_64& rng, const RandomPseudoOrbitConfig& cfg = {});

// Prefix of length 2^{prefix_exp} following A on segments [2^j - 1, 2^{j+1} - 1)
// with j even and B with j odd. x_t is the orbit point of its segment's
// sequence with the target's symbols copied on [t - j - 1, t + j + 1].
// Schedule (2^j - 1, 2^{-j}).
LimitPseudoOrbit switching_limit_pseudo_orbit(const BiSeq& a, const BiSeq& b, std::int64_t prefix_exp);

// Orbit of `target` with one symbol flipped at relative index ±(|t| + 2) at
// time t. Jumps at index t are at most 2^{-(|t|+1)}; future and past
// schedules (k, 2^{-k}) for k = 1..schedule_len. With flips = false it is the
// true orbit.
TwoSidedLimitPseudoOrbit perturbed_two_sided(const BiSeq& target, std::int64_t half_width, bool flips = true,
                                             std::int64_t schedule_len = 30);

// True forward orbit of x, length len, schedule (k, 2^{-k}) for k = 1..schedule_len.
LimitPseudoOrbit true_orbit_limit(const AugSystem& sys, const AugPoint& x, std::size_t len,
                                  std::int64_t schedule_len = 30);

// Base points approaching g^j(p_k) through widening agreement windows, then a
// hop onto Extra(i, k, ·) at index `hop` and its exact orbit afterwards.
LimitPseudoOrbit converging_to_extra(const AugSystem& sys, std::int64_t i, std::int64_t k, std::int64_t hop,
                                     std::size_t len);

}  // namespace nexp
