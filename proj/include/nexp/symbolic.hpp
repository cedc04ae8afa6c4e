#pragma once

#include "nexp/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nexp {

// Eventually periodic bi-infinite sequence over {0,1}:
//
//     ... L L L  core  R R R ...
//                ^ offset
//
// `core[0]` sits at global index `offset`; the left period repeats so that it
// ends at offset-1, the right period repeats starting at offset+|core|.
// Values are always canonical: periods are primitive, the core is as short as
// possible, and a purely periodic sequence is stored as L == R, empty core,
// offset 0. Two BiSeq values are equal iff they denote the same sequence.
class BiSeq {
public:
    BiSeq() : BiSeq("0", "", "0", 0) {}
    BiSeq(std::string left, std::string core, std::string right, std::int64_t offset);

    // x_i = word[(i - phase) mod |word|]
    static BiSeq periodic(std::string_view word, std::int64_t phase = 0);

    int at(std::int64_t i) const;

    const std::string& left() const { return left_; }
    const std::string& core() const { return core_; }
    const std::string& right() const { return right_; }
    std::int64_t offset() const { return offset_; }
    std::int64_t core_end() const { return offset_ + static_cast<std::int64_t>(core_.size()); }
    bool is_periodic() const;

    // Symbols on [lo, hi) as a '0'/'1' string.
    std::string window(std::int64_t lo, std::int64_t hi) const;

    // Compact text form "L|core|R@offset".
    std::string text() const;
    static BiSeq parse_text(std::string_view text);

    friend bool operator==(const BiSeq&, const BiSeq&) = default;
    friend auto operator<=>(const BiSeq&, const BiSeq&) = default;

private:
    struct Trusted {};
    BiSeq(Trusted, std::string left, std::string core, std::string right, std::int64_t offset)
        : left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset) {}
    void canonicalize();

    friend BiSeq shift(const BiSeq& x, std::int64_t t);

    std::string left_;
    std::string core_;
    std::string right_;
    std::int64_t offset_ = 0;
};

struct BiSeqHash {
    std::size_t operator()(const BiSeq& x) const;
};

// y_j = x_{j+t}
BiSeq shift(const BiSeq& x, std::int64_t t);

// y_i = x_{-i}; conjugates the shift with its inverse.
BiSeq reflect(const BiSeq& x);

// r with r_i = left_src_i for i < cut, then `middle`, then
// r_{cut+|middle|+q} = right_src_{right_start+q} for q >= 0.
BiSeq splice(const BiSeq& left_src, std::int64_t cut, std::string_view middle,
             const BiSeq& right_src, std::int64_t right_start);

// --- mismatch structure ----------------------------------------------------
// D(x,y) = {j : x_j != y_j}. All queries are exact; scans are bounded by the
// pre-period plus one lcm of the relevant tail periods.

std::optional<std::int64_t> first_mismatch_from(const BiSeq& x, const BiSeq& y, std::int64_t from);
std::optional<std::int64_t> last_mismatch_before(const BiSeq& x, const BiSeq& y, std::int64_t before);
// min |j - center| over D, or nullopt when x == y.
std::optional<std::int64_t> mismatch_radius(const BiSeq& x, const BiSeq& y, std::int64_t center = 0);

// d_0(x, y) = 2^{-min{|j| : x_j != y_j}}, 0 when equal.
Rat base_dist(const BiSeq& x, const BiSeq& y);
// d_0(shift(x,t), shift(y,t)) without materializing the shifts.
Rat base_dist_at(const BiSeq& x, const BiSeq& y, std::int64_t t);

// p_k = (0^k 1)^inf with (p_k)_0 = 0.
BiSeq periodic_point(std::int64_t k);

std::int64_t least_period(const BiSeq& x);

bool stable_eq_base(const BiSeq& x, const BiSeq& y);
bool unstable_eq_base(const BiSeq& x, const BiSeq& y);

// Canonical key of the right tail phase-aligned to global index 0: equal keys
// iff stable_eq_base.
std::string right_tail_key(const BiSeq& x);
std::string left_tail_key(const BiSeq& x);

// --- constructive shadowing and specification ------------------------------

class GapViolation : public std::invalid_argument {
public:
    GapViolation(std::size_t index, const std::string& what)
        : std::invalid_argument(what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// Shadows a finite 2^{-N}-pseudo-orbit of the shift (gaps strictly below
// 2^{-N}) by reading off 0th coordinates. Tails follow the true orbits of the
// first and last points. The returned y satisfies
// base_dist(shift(y,i), po[i]) <= 2^{-N} for every i, checked before return.
BiSeq base_shadow(const std::vector<BiSeq>& po, std::int64_t delta_exp);

// δ rounded down to a dyadic level: least N >= 1 with 2^{-N} <= delta.
std::int64_t dyadic_level(const Rat& delta);

struct OrbitSegment {
    std::int64_t a = 0;
    std::int64_t b = 0;
    BiSeq start;  // the point P(a); P(t) = shift(start, t - a) on [a, b]
};

// Shadowing error guaranteed by specification_glue for spacing L.
Rat glue_epsilon(std::int64_t spacing);

// Glues L-spaced orbit segments into one point. Each segment's coordinates
// are copied over its interval widened by floor((L-1)/2) on both sides; gaps
// and tails are 0. Verified at every in-interval index against
// glue_epsilon(L) (strict) before return.
BiSeq specification_glue(const std::vector<OrbitSegment>& segments, std::int64_t spacing);

struct Cylinder {
    std::int64_t start = 0;
    std::string word;

    bool contains(const BiSeq& x) const;
    std::int64_t end() const { return start + static_cast<std::int64_t>(word.size()); }
};

struct MixingWitness {
    std::int64_t k = 0;
    // (j, x) with x in U and shift(x, j) in V
    std::vector<std::pair<std::int64_t, BiSeq>> witnesses;
};

// k with shift^j(U) ∩ V nonempty for all j >= k, with explicit points for
// j in [k, k + 16].
MixingWitness mixing_witness(const Cylinder& u, const Cylinder& v);

}  // namespace nexp
