#include "nexp/augmented.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace nexp {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("AugPoint: bad integer in '" + std::string(whole) + "'");
    }
    return v;
}

Rat inv(std::int64_t k) { return Rat(BigInt(1), BigInt(k)); }

}  // namespace

std::string AugPoint::text() const {
    if (is_base()) return "base:" + seq().text();
    const auto& e = q();
    return "extra:" + std::to_string(e.i) + "," + std::to_string(e.k) + "," + std::to_string(e.j);
}

AugPoint AugPoint::parse_text(std::string_view text) {
    if (text.starts_with("base:")) return base(BiSeq::parse_text(text.substr(5)));
    if (text.starts_with("extra:")) {
        auto body = text.substr(6);
        auto c1 = body.find(',');
        auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
        if (c2 == std::string_view::npos) {
            throw std::invalid_argument("AugPoint: expected 'extra:i,k,j', got '" + std::string(text) + "'");
        }
        return extra(parse_int(body.substr(0, c1), text), parse_int(body.substr(c1 + 1, c2 - c1 - 1), text),
                     parse_int(body.substr(c2 + 1), text));
    }
    throw std::invalid_argument("AugPoint: expected 'base:...' or 'extra:...', got '" + std::string(text) + "'");
}

std::string to_string(Variant v) { return v == Variant::standard ? "standard" : "finite_expansive"; }

Variant parse_variant(std::string_view s) {
    if (s == "standard") return Variant::standard;
    if (s == "finite_expansive") return Variant::finite_expansive;
    throw std::invalid_argument("unknown variant '" + std::string(s) + "'");
}

void AugSystem::validate() const {
    if (n < 1) throw std::invalid_argument("AugSystem: n must be >= 1");
    if (k_max < 3) throw std::invalid_argument("AugSystem: k_max must be >= 3");
}

std::int64_t AugSystem::multiplicity(std::int64_t k) const {
    return variant == Variant::standard ? n - 1 : std::max<std::int64_t>(0, k - 1);
}

bool AugSystem::contains(const AugPoint& x) const {
    if (x.is_base()) return true;
    const auto& e = x.q();
    return e.k >= 1 && e.i >= 1 && e.i <= multiplicity(e.k) && e.j >= 0 && e.j <= e.k;
}

DistanceParts distance_parts(const AugPoint& x, const AugPoint& y) {
    if (x == y) return {Rat(0), false};
    if (x.is_base() && y.is_base()) return {Rat(0), true};
    if (x.is_base()) return {inv(y.q().k), true};
    if (y.is_base()) return {inv(x.q().k), true};
    const auto& a = x.q();
    const auto& b = y.q();
    if (a.k == b.k && a.j == b.j) return {inv(a.k), false};
    return {inv(a.k) + inv(b.k), true};
}

Rat aug_dist_projected(const AugPoint& x, const BiSeq& px, const AugPoint& y, const BiSeq& py) {
    auto parts = distance_parts(x, y);
    if (parts.base_term) parts.constant += base_dist(px, py);
    return parts.constant;
}

Rat aug_dist(const AugSystem& sys, const AugPoint& x, const AugPoint& y) {
    if (!sys.contains(x) || !sys.contains(y)) throw std::invalid_argument("aug_dist: point outside system");
    return aug_dist_projected(x, project(x), y, project(y));
}

AugPoint aug_iterate(const AugSystem& sys, const AugPoint& x, std::int64_t t) {
    if (!sys.contains(x)) throw std::invalid_argument("aug_map: point outside system: " + x.text());
    if (x.is_base()) return AugPoint::base(shift(x.seq(), t));
    const auto& e = x.q();
    return AugPoint::extra(e.i, e.k, floor_mod(e.j + t, e.k + 1));
}

AugPoint aug_map(const AugSystem& sys, const AugPoint& x) { return aug_iterate(sys, x, 1); }
AugPoint aug_map_inv(const AugSystem& sys, const AugPoint& x) { return aug_iterate(sys, x, -1); }

BiSeq project(const AugPoint& x) {
    if (x.is_base()) return x.seq();
    return shift(periodic_point(x.q().k), x.q().j);
}

AugPoint reflect_point(const AugPoint& x) {
    if (x.is_base()) return AugPoint::base(reflect(x.seq()));
    const auto& e = x.q();
    return AugPoint::extra(e.i, e.k, floor_mod(e.k - 1 - e.j, e.k + 1));
}

std::vector<AugPoint> enumerate_extra(const AugSystem& sys, std::int64_t k_hi) {
    sys.validate();
    if (k_hi > sys.k_max) throw std::invalid_argument("enumerate_extra: k_hi exceeds k_max");
    std::vector<AugPoint> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, extra_count(sys, k_hi))));
    for (std::int64_t k = 1; k <= k_hi; ++k) {
        for (std::int64_t i = 1; i <= sys.multiplicity(k); ++i) {
            for (std::int64_t j = 0; j <= k; ++j) out.push_back(AugPoint::extra(i, k, j));
        }
    }
    return out;
}

std::int64_t extra_count(const AugSystem& sys, std::int64_t k_hi) {
    if (k_hi < 1) return 0;
    const std::int64_t K = k_hi;
    if (sys.variant == Variant::standard) return (sys.n - 1) * (K * (K + 1) / 2 + K);
    // sum (k-1)(k+1) = sum k^2 - K
    return K * (K + 1) * (2 * K + 1) / 6 - K;
}

}  // namespace nexp
