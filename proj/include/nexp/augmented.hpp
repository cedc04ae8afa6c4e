#pragma once

#include "nexp/rational.hpp"
#include "nexp/symbolic.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nexp {

// The extra periodic point q(i, k, j); it sits at distance 1/k from g^j(p_k).
struct ExtraPoint {
    std::int64_t i = 1;
    std::int64_t k = 1;
    std::int64_t j = 0;

    friend bool operator==(const ExtraPoint&, const ExtraPoint&) = default;
    friend auto operator<=>(const ExtraPoint&, const ExtraPoint&) = default;
};

// A point of X = M ∪ E.
class AugPoint {
public:
    AugPoint() = default;
    static AugPoint base(BiSeq seq) { return AugPoint(std::move(seq)); }
    static AugPoint extra(std::int64_t i, std::int64_t k, std::int64_t j) { return AugPoint(ExtraPoint{i, k, j}); }

    bool is_base() const { return std::holds_alternative<BiSeq>(value_); }
    bool is_extra() const { return !is_base(); }
    const BiSeq& seq() const { return std::get<BiSeq>(value_); }
    const ExtraPoint& q() const { return std::get<ExtraPoint>(value_); }

    // "base:L|core|R@offset" or "extra:i,k,j". Also the canonical
    // serialization used for deterministic tie-breaks.
    std::string text() const;
    static AugPoint parse_text(std::string_view text);

    friend bool operator==(const AugPoint&, const AugPoint&) = default;

private:
    explicit AugPoint(BiSeq s) : value_(std::move(s)) {}
    explicit AugPoint(ExtraPoint q) : value_(q) {}

    std::variant<BiSeq, ExtraPoint> value_;
};

struct AugPointTextLess {
    bool operator()(const AugPoint& a, const AugPoint& b) const { return a.text() < b.text(); }
};

enum class Variant { standard, finite_expansive };

std::string to_string(Variant v);
Variant parse_variant(std::string_view s);

struct AugSystem {
    std::int64_t n = 2;
    Variant variant = Variant::standard;
    std::int64_t k_max = 64;

    // Throws std::invalid_argument on a bad configuration.
    void validate() const;
    // Number of extra orbits attached to p_k.
    std::int64_t multiplicity(std::int64_t k) const;
    bool contains(const AugPoint& x) const;
};

// d(x, y) = constant + (base_term ? d_0(project x, project y) : 0). The case
// split is invariant along orbits, so orbit-wise sups only need the d_0 part.
struct DistanceParts {
    Rat constant;
    bool base_term = false;
};

DistanceParts distance_parts(const AugPoint& x, const AugPoint& y);

Rat aug_dist(const AugSystem& sys, const AugPoint& x, const AugPoint& y);
// Same value with projections supplied by the caller.
Rat aug_dist_projected(const AugPoint& x, const BiSeq& px, const AugPoint& y, const BiSeq& py);

AugPoint aug_map(const AugSystem& sys, const AugPoint& x);
AugPoint aug_map_inv(const AugSystem& sys, const AugPoint& x);
// f^t(x) for any integer t.
AugPoint aug_iterate(const AugSystem& sys, const AugPoint& x, std::int64_t t);

// Base(s) -> s; Extra(i,k,j) -> g^j(p_k).
BiSeq project(const AugPoint& x);

// Isometric involution with reflect_point ∘ f^{-1} = f ∘ reflect_point.
// Base(s) -> Base(reflect(s)), Extra(i,k,j) -> Extra(i,k,(k-1-j) mod (k+1)).
AugPoint reflect_point(const AugPoint& x);

// All extra points with k <= k_hi, ordered by (k, i, j).
std::vector<AugPoint> enumerate_extra(const AugSystem& sys, std::int64_t k_hi);
// Closed form for enumerate_extra(sys, k_hi).size().
std::int64_t extra_count(const AugSystem& sys, std::int64_t k_hi);

}  // namespace nexp
