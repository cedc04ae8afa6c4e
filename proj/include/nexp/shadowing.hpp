#pragma once

#include "nexp/augmented.hpp"
#include "nexp/rational.hpp"
#include "nexp/symbolic.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nexp {

// Finite δ-pseudo-orbit: d(f(x_t), x_{t+1}) < delta for consecutive entries.
// Outside the listed window it is continued by the true orbits of its first
// and last points.
struct PseudoOrbit {
    std::vector<AugPoint> points;
    Rat delta;
};

// Throws GapViolation naming the first offending index.
void validate_pseudo_orbit(const AugSystem& sys, const PseudoOrbit& po);

// Exact jump sizes d(f(x_t), x_{t+1}).
std::vector<Rat> gaps(const AugSystem& sys, const std::vector<AugPoint>& points);

struct ScheduleEntry {
    std::int64_t k = 0;
    Rat bound;
};

// Prefix of a one-sided limit pseudo-orbit: for every entry, all jumps at
// indices t >= k are below the bound.
struct LimitPseudoOrbit {
    std::vector<AugPoint> points;
    std::vector<ScheduleEntry> schedule;
};

void validate_limit_pseudo_orbit(const AugSystem& sys, const LimitPseudoOrbit& lpo);

// Window [-T, T]; points[t + T] is x_t. A future entry (k, δ) bounds the jumps
// at indices t >= k; a past entry (k, δ) bounds the jumps with t + 1 <= -k.
struct TwoSidedLimitPseudoOrbit {
    std::int64_t half_width = 0;
    std::vector<AugPoint> points;
    std::vector<ScheduleEntry> future;
    std::vector<ScheduleEntry> past;

    const AugPoint& at(std::int64_t t) const { return points[static_cast<std::size_t>(t + half_width)]; }
};

void validate_two_sided(const AugSystem& sys, const TwoSidedLimitPseudoOrbit& ts);

struct Interval {
    std::int64_t a = 0;
    std::int64_t b = 0;
};

// P(a_i) = starts[i]; P(t) = f^{t - a_i}(starts[i]) on [a_i, b_i].
struct Specification {
    std::vector<Interval> intervals;
    std::vector<AugPoint> starts;
};

// --- moduli -----------------------------------------------------------------

// δ(ε) for the augmented system. base_level N is the least with
// 2^{-N} < ε/2 (so the base shadow is ε/2-accurate), and m is the least
// integer with 1/m < min(ε/2, 2^{-N}/3). Pseudo-orbits with jumps below
// delta = 1/m are ε-shadowed.
struct ShadowModulus {
    Rat eps;
    std::int64_t base_level = 0;
    std::int64_t m = 0;
    Rat delta;
};

ShadowModulus shadow_modulus(const Rat& eps);

// Spacing L(ε) = 2·ceil(log2(1/ε)) + 1 of the base specification.
std::int64_t specification_spacing(const Rat& eps);

// --- engines ----------------------------------------------------------------

struct ShadowReport {
    bool ok = true;
    std::size_t worst_index = 0;
    Rat worst_distance;
};

// Checks d(f^t(y), x_t) <= eps at every listed index.
ShadowReport verify_shadow(const AugSystem& sys, const std::vector<AugPoint>& points, const AugPoint& y,
                           const Rat& eps);

class DichotomyViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ShadowResult {
    AugPoint point;
    bool self_shadow = false;
    ShadowModulus modulus;
    ShadowReport report;
};

// Shadows po at accuracy eps. A pseudo-orbit that is one extra periodic
// orbit with k < m shadows itself; otherwise it is projected to the base,
// shadowed there at level 2^{-N} and lifted back as a base point.
ShadowResult aug_shadow(const AugSystem& sys, const PseudoOrbit& po, const Rat& eps);

struct SpecShadowResult {
    AugPoint point;
    std::int64_t spacing = 0;
    Rat guaranteed;  // strict bound met at every in-interval index
};

// Rejects extra points (they sit 1/k away from everything else and cannot be
// glued) and specifications that are not L(eps)-spaced.
SpecShadowResult spec_shadow(const AugSystem& sys, const Specification& spec, const Rat& eps);

struct DecayEntry {
    Rat threshold;
    // First index from which the distance stays below threshold through the
    // end of the tested range; nullopt when not achieved with enough hold.
    std::optional<std::int64_t> index;
};

struct LimitStage {
    std::int64_t j = 0;
    std::int64_t k = 0;  // first index of the stage's tail
    Rat resolution;      // eps / (j + 1)
    Rat delta;           // jump bound required by the modulus
    AugPoint pulled_back;  // y_j = f^{-k_j}(z_j)
    bool in_local_stable = false;  // f^{k_j}(y_j) ∈ W^s_eps(f^{k_j}(y_1))
};

struct LimitShadowOptions {
    Rat eps = Rat(BigInt(1), BigInt(16));
    std::vector<Rat> thresholds;  // defaults to the schedule bounds
    std::size_t min_stages = 3;
    std::size_t max_stages = 6;
    std::int64_t k_hi = 8;
    std::int64_t min_hold = 0;  // 0: a quarter of the prefix
};

struct LimitShadowResult {
    AugPoint point;
    std::vector<DecayEntry> decay;
    std::vector<LimitStage> stages;
    std::int64_t stabilization = 0;
    std::vector<AugPoint> candidates;  // f^{-l}(E(f^l(y_1), eps))
};

class LimitShadowFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Decay of d(f^t(y), x_t) over the prefix, per threshold.
std::vector<DecayEntry> decay_report(const AugSystem& sys, const std::vector<AugPoint>& points, const AugPoint& y,
                                     const std::vector<Rat>& thresholds, std::int64_t min_hold);

LimitShadowResult limit_shadow(const AugSystem& sys, const LimitPseudoOrbit& lpo,
                               const LimitShadowOptions& options = {});

// Backward limit shadowing for f^{-1}: points[i] is x_{-i} and the schedule
// bounds the f^{-1}-jumps d(f^{-1}(x_{-i}), x_{-i-1}) for i >= k. Runs the
// forward engine on the reflected sequence.
LimitShadowResult limit_shadow_past(const AugSystem& sys, const LimitPseudoOrbit& backward,
                                    const LimitShadowOptions& options = {});

struct TwoSidedResult {
    AugPoint point;
    AugPoint past_shadow;    // p_1
    AugPoint future_shadow;  // p_2
    Rat eps_past;
    Rat eps_future;
    Rat eps;
    Rat delta;
    std::int64_t spacing = 0;
    std::int64_t glue_index = 0;  // N
    Rat glue_guaranteed;
    ShadowReport glue_report;
    std::vector<DecayEntry> past_decay;    // index = |t|
    std::vector<DecayEntry> future_decay;  // index = t
    bool past_unstable = false;   // f^{-N}(z) ∈ W^u(f^{-N}(p_1))
    bool future_stable = false;   // f^{N}(z) ∈ W^s(f^{N}(p_2))
};

TwoSidedResult two_sided_limit_shadow(const AugSystem& sys, const TwoSidedLimitPseudoOrbit& ts,
                                      const LimitShadowOptions& options = {});

}  // namespace nexp
