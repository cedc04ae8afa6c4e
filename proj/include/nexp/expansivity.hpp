#pragma once

#include "nexp/augmented.hpp"
#include "nexp/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace nexp {

// ---------------------------------------------------------------------------
// Exact orbit-wise distance sups.
//
// Along any pair of orbits d(f^t x, f^t y) = C + d_0(g^t a, g^t b) where the
// case constant C does not depend on t and a, b are the projections. The d_0
// part is read off the mismatch set D = {j : a_j != b_j}:
//   over all t:    1 if D is nonempty
//   over t >= 0:   1 if D meets [0, inf), else 2^{max D}
//   over t <= 0:   1 if D meets (-inf, 0], else 2^{-min D}
// D is eventually periodic on both sides, so each query is a bounded scan.
// ---------------------------------------------------------------------------

enum class TimeRange { all, forward, backward };

Rat orbit_sup(const AugPoint& x, const AugPoint& y, TimeRange range);
Rat orbit_sup_projected(const AugPoint& x, const BiSeq& px, const AugPoint& y, const BiSeq& py, TimeRange range);

// limsup_{t -> +inf} d(f^t x, f^t y) (or t -> -inf for backward).
Rat persistent_separation(const AugPoint& x, const AugPoint& y, TimeRange direction);

bool ws_eps_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x, const Rat& eps);
bool wu_eps_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x, const Rat& eps);

bool stable_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x);
bool unstable_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x);

// ---------------------------------------------------------------------------
// Candidate universes
// ---------------------------------------------------------------------------

// Deduplicated, deterministically ordered set of points with cached
// projections and lookup by projection and by tail class.
class CandidateUniverse {
public:
    void add(const AugPoint& p, const std::string& source);
    void add_all(const std::vector<AugPoint>& pts, const std::string& source);

    std::size_t size() const { return points_.size(); }
    const AugPoint& point(std::size_t i) const { return points_[i]; }
    const BiSeq& projection(std::size_t i) const { return projections_[i]; }
    const std::vector<AugPoint>& points() const { return points_; }

    std::optional<std::size_t> find(const AugPoint& p) const;

    // Indices whose projection equals s.
    std::vector<std::size_t> with_projection(const BiSeq& s) const;
    // Indices whose projection is stable- (unstable-) equivalent to s.
    std::vector<std::size_t> with_right_tail(const BiSeq& s) const;
    std::vector<std::size_t> with_left_tail(const BiSeq& s) const;

    // "source:count" entries in insertion order of first use.
    std::string description() const;

private:
    std::vector<AugPoint> points_;
    std::vector<BiSeq> projections_;
    std::unordered_map<std::string, std::size_t> by_text_;
    std::unordered_map<BiSeq, std::vector<std::size_t>, BiSeqHash> by_projection_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_right_tail_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_left_tail_;
    std::vector<std::pair<std::string, std::size_t>> sources_;
};

// Base points that agree with proj(center) on widening windows or differ from
// it in exactly one coordinate near 0, plus the nearby orbit points of center.
std::vector<AugPoint> structured_adversaries(const AugSystem& sys, const AugPoint& center);

// Every extra point q(i,k,j) whose projection shares a tail class with s
// (at most one k per side, any size of k).
std::vector<AugPoint> tail_matched_extras(const AugSystem& sys, const BiSeq& s);

// ---------------------------------------------------------------------------
// Dynamic balls and n-expansivity
// ---------------------------------------------------------------------------

struct Exactness {
    bool exact = true;
    std::int64_t horizon = 0;  // meaningful when !exact
    std::int64_t k_hi = 0;
};

struct BallMember {
    AugPoint point;
    Rat sup_distance;
};

struct DynamicBallReport {
    AugPoint center;
    Rat radius;
    std::vector<BallMember> members;  // sorted by text, center included
    Exactness exactness;
    std::string universe;
};

// Exact mode (horizon == 0) requires radius < 1/2. Horizon mode evaluates
// the sup over |t| <= horizon by direct iteration and is labeled non-exact.
DynamicBallReport dynamic_ball(const AugSystem& sys, const AugPoint& center, const Rat& radius, std::int64_t k_hi,
                               const std::vector<AugPoint>& extra_candidates = {}, std::int64_t horizon = 0);

struct ExpansivityResult {
    bool certified = false;
    std::int64_t level = 0;
    Rat constant;
    std::size_t centers_checked = 0;
    std::size_t max_ball_size = 0;
    std::string universe;
    std::optional<DynamicBallReport> falsifier;  // ball with more than `level` members
};

// Certifies that every ball Γ(x, c), x in the sample, has at most sys.n
// members, or returns the first ball that breaks the bound.
ExpansivityResult n_expansivity_check(const AugSystem& sys, const Rat& c, const std::vector<AugPoint>& sample,
                                      std::int64_t k_hi);

// Falsifies `level`-expansivity at constant c: for k >= 3 with 1/k < c, the
// ball Γ(p_k, 1/k) ⊂ Γ(p_k, c) is returned when it has more than `level`
// members. Returns nullopt when no such ball is found.
std::optional<DynamicBallReport> falsify_expansivity(const AugSystem& sys, std::int64_t level, const Rat& c);

// ---------------------------------------------------------------------------
// Stable-set counts
// ---------------------------------------------------------------------------

struct StableClassReport {
    AugPoint base_point;
    Rat epsilon;
    std::int64_t count = 0;
    std::vector<AugPoint> representatives;  // least text per class, sorted
    std::vector<std::vector<AugPoint>> classes;
    std::string universe;
};

// n(x, eps) and E(x, eps) over the structured candidate universe. Requires
// eps < 1/2. The universe holds every tail-matched extra point and the base
// projection, so each stable class that meets W^s_eps(x) has a member in it.
StableClassReport stable_count(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi,
                               const std::vector<AugPoint>& extra_candidates = {});

// Unstable mirror: n-bar(x, eps).
StableClassReport unstable_count(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi);

class StabilizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StabilizationReport {
    std::int64_t index = 0;
    std::int64_t value = 0;
    std::vector<std::int64_t> counts;  // n(f^t x, eps) for t in [0, m_hi]
};

// Least l <= m_hi with n(f^{l+t} x, eps) constant for t in [0, m_hi - l].
// The constant run must span at least one period of the tail that governs
// the count (the right period of proj(x), or k+1 for an extra point);
// otherwise StabilizationError is thrown.
StabilizationReport stabilization_index(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t m_hi,
                                        std::int64_t k_hi);

// A horizon past which n(f^t x, eps) can no longer change: the end of the
// core, the bits needed to resolve eps - 1/k for a p_k-type tail, and two
// governing periods.
std::int64_t stabilization_horizon(const AugSystem& sys, const AugPoint& x, const Rat& eps);

struct EpsilonXReport {
    Rat value;
    std::int64_t stabilization = 0;
    StableClassReport classes;                    // at f^stabilization(x)
    std::vector<std::pair<AugPoint, Rat>> separations;  // r_z per competitor
};

// Local-stable constant along the orbit of x: a quarter of the least
// persistent separation between f^l(x) and the other representatives of
// E(f^l(x), eps), l the stabilization index; eps when there is no competitor.
EpsilonXReport epsilon_x(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi,
                         std::int64_t m_hi = 0);

struct LocalStableCheck {
    bool holds = true;
    std::optional<std::int64_t> failing_m;
    std::optional<AugPoint> witness;
};

// Every candidate in W^s_{eps}(f^m x) is stable-equivalent to f^m x for m in
// [m_lo, m_hi].
LocalStableCheck check_local_stable_inclusion(const AugSystem& sys, const AugPoint& x, const Rat& eps,
                                              std::int64_t m_lo, std::int64_t m_hi, std::int64_t k_hi);

}  // namespace nexp
