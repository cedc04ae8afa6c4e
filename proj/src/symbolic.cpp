#include "nexp/symbolic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace nexp {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t ssize(const std::string& s) { return static_cast<std::int64_t>(s.size()); }

void check_word(const std::string& w, const char* what, bool allow_empty) {
    if (!allow_empty && w.empty()) throw std::invalid_argument(std::string("BiSeq: empty ") + what);
    for (char c : w) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument(std::string("BiSeq: non-binary symbol in ") + what);
        }
    }
}

// Least d dividing |w| with w equal to its rotation by d.
std::string primitive_root(const std::string& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return w.substr(0, d);
    }
    return w;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

}  // namespace

BiSeq::BiSeq(std::string left, std::string core, std::string right, std::int64_t offset)
    : left_(std::move(left)), core_(std::move(core)), right_(std::move(right)), offset_(offset) {
    check_word(left_, "left period", false);
    check_word(core_, "core", true);
    check_word(right_, "right period", false);
    canonicalize();
}

BiSeq BiSeq::periodic(std::string_view word, std::int64_t phase) {
    std::string w(word);
    check_word(w, "periodic word", false);
    w = primitive_root(w);
    const auto p = ssize(w);
    std::string rot(w.size(), '0');
    for (std::int64_t q = 0; q < p; ++q) rot[q] = w[floor_mod(q - phase, p)];
    return BiSeq(Trusted{}, rot, "", rot, 0);
}

int BiSeq::at(std::int64_t i) const {
    if (i < offset_) return left_[floor_mod(i - offset_, ssize(left_))] - '0';
    const auto end = core_end();
    if (i < end) return core_[i - offset_] - '0';
    return right_[floor_mod(i - end, ssize(right_))] - '0';
}

bool BiSeq::is_periodic() const { return core_.empty() && offset_ == 0 && left_ == right_; }

std::string BiSeq::window(std::int64_t lo, std::int64_t hi) const {
    std::string out;
    if (hi > lo) out.reserve(static_cast<std::size_t>(hi - lo));
    for (std::int64_t i = lo; i < hi; ++i) out.push_back(static_cast<char>('0' + at(i)));
    return out;
}

void BiSeq::canonicalize() {
    left_ = primitive_root(left_);
    right_ = primitive_root(right_);
    const auto lp = ssize(left_);
    const auto rp = ssize(right_);
    const auto end = core_end();

    if (lp == rp) {
        bool periodic = true;
        for (std::int64_t i = offset_ - lp; i < end && periodic; ++i) periodic = at(i) == at(i + lp);
        if (periodic) {
            std::string w = window(0, lp);
            left_ = w;
            right_ = w;
            core_.clear();
            offset_ = 0;
            return;
        }
    }

    // Earliest start of the right-periodic tail.
    const std::int64_t guard = lp + rp + 1;
    std::int64_t s = end;
    while (at(s - 1) == right_[floor_mod(s - 1 - end, rp)] - '0') {
        --s;
        if (s < offset_ - guard) throw std::logic_error("BiSeq: right tail walk did not terminate");
    }
    // Latest end of the left-periodic tail.
    std::int64_t e = offset_;
    while (at(e) == left_[floor_mod(e - offset_, lp)] - '0') {
        ++e;
        if (e > end + guard) throw std::logic_error("BiSeq: left tail walk did not terminate");
    }

    std::int64_t new_offset = 0;
    std::int64_t new_end = 0;
    if (e <= s) {
        new_offset = e;
        new_end = s;
    } else {
        new_offset = s;
        new_end = s;
    }
    std::string new_left = window(new_offset - lp, new_offset);
    std::string new_right = window(new_end, new_end + rp);
    std::string new_core = window(new_offset, new_end);
    left_ = std::move(new_left);
    right_ = std::move(new_right);
    core_ = std::move(new_core);
    offset_ = new_offset;
}

std::string BiSeq::text() const {
    return left_ + "|" + core_ + "|" + right_ + "@" + std::to_string(offset_);
}

BiSeq BiSeq::parse_text(std::string_view text) {
    auto bar1 = text.find('|');
    auto bar2 = bar1 == std::string_view::npos ? bar1 : text.find('|', bar1 + 1);
    auto at_pos = bar2 == std::string_view::npos ? bar2 : text.find('@', bar2 + 1);
    if (at_pos == std::string_view::npos) {
        throw std::invalid_argument("BiSeq: expected 'L|core|R@offset', got '" + std::string(text) + "'");
    }
    std::int64_t offset = 0;
    try {
        std::size_t used = 0;
        std::string num(text.substr(at_pos + 1));
        offset = std::stoll(num, &used);
        if (used != num.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw std::invalid_argument("BiSeq: bad offset in '" + std::string(text) + "'");
    }
    return BiSeq(std::string(text.substr(0, bar1)), std::string(text.substr(bar1 + 1, bar2 - bar1 - 1)),
                 std::string(text.substr(bar2 + 1, at_pos - bar2 - 1)), offset);
}

std::size_t BiSeqHash::operator()(const BiSeq& x) const {
    std::size_t h = std::hash<std::string>{}(x.left());
    h ^= std::hash<std::string>{}(x.core()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(x.right()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::int64_t>{}(x.offset()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

BiSeq shift(const BiSeq& x, std::int64_t t) {
    if (t == 0) return x;
    if (x.is_periodic()) {
        const auto p = ssize(x.right_);
        std::string rot(x.right_.size(), '0');
        for (std::int64_t q = 0; q < p; ++q) rot[q] = x.right_[floor_mod(q + t, p)];
        return BiSeq(BiSeq::Trusted{}, rot, "", rot, 0);
    }
    // A non-periodic canonical form stays canonical under translation.
    return BiSeq(BiSeq::Trusted{}, x.left_, x.core_, x.right_, x.offset_ - t);
}

BiSeq reflect(const BiSeq& x) {
    std::string left(x.right().rbegin(), x.right().rend());
    std::string core(x.core().rbegin(), x.core().rend());
    std::string right(x.left().rbegin(), x.left().rend());
    return BiSeq(std::move(left), std::move(core), std::move(right), 1 - x.core_end());
}

BiSeq splice(const BiSeq& left_src, std::int64_t cut, std::string_view middle, const BiSeq& right_src,
             std::int64_t right_start) {
    const auto lp = ssize(left_src.left());
    const auto rp = ssize(right_src.right());
    const std::int64_t lo = std::min(left_src.offset(), cut);
    std::string left = left_src.window(lo - lp, lo);
    std::string core = left_src.window(lo, cut);
    core.append(middle);
    const std::int64_t src_hi = std::max(right_start, right_src.core_end());
    core += right_src.window(right_start, src_hi);
    std::string right = right_src.window(src_hi, src_hi + rp);
    return BiSeq(std::move(left), std::move(core), std::move(right), lo);
}

std::optional<std::int64_t> first_mismatch_from(const BiSeq& x, const BiSeq& y, std::int64_t from) {
    const std::int64_t settled = std::max({from, x.core_end(), y.core_end()});
    const std::int64_t hi = settled + lcm64(ssize(x.right()), ssize(y.right()));
    for (std::int64_t i = from; i < hi; ++i) {
        if (x.at(i) != y.at(i)) return i;
    }
    return std::nullopt;
}

std::optional<std::int64_t> last_mismatch_before(const BiSeq& x, const BiSeq& y, std::int64_t before) {
    const std::int64_t settled = std::min({before, x.offset(), y.offset()});
    const std::int64_t lo = settled - lcm64(ssize(x.left()), ssize(y.left()));
    for (std::int64_t i = before - 1; i >= lo; --i) {
        if (x.at(i) != y.at(i)) return i;
    }
    return std::nullopt;
}

std::optional<std::int64_t> mismatch_radius(const BiSeq& x, const BiSeq& y, std::int64_t center) {
    if (x == y) return std::nullopt;
    // Outward scan; the first hit is the minimum. Both one-sided bounds are
    // finite, so the loop ends no later than the larger of them.
    const std::int64_t right_hi =
        std::max({center, x.core_end(), y.core_end()}) + lcm64(ssize(x.right()), ssize(y.right()));
    const std::int64_t left_lo =
        std::min({center, x.offset(), y.offset()}) - lcm64(ssize(x.left()), ssize(y.left()));
    const std::int64_t reach = std::max(right_hi - center, center - left_lo);
    for (std::int64_t r = 0; r <= reach; ++r) {
        if (x.at(center + r) != y.at(center + r)) return r;
        if (r > 0 && x.at(center - r) != y.at(center - r)) return r;
    }
    throw std::logic_error("mismatch_radius: distinct canonical sequences without a mismatch");
}

Rat base_dist(const BiSeq& x, const BiSeq& y) { return base_dist_at(x, y, 0); }

Rat base_dist_at(const BiSeq& x, const BiSeq& y, std::int64_t t) {
    auto r = mismatch_radius(x, y, t);
    return r ? Rat::dyadic(*r) : Rat(0);
}

BiSeq periodic_point(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("periodic_point: k must be >= 1");
    std::string w(static_cast<std::size_t>(k), '0');
    w.push_back('1');
    return BiSeq::periodic(w, 0);
}

std::int64_t least_period(const BiSeq& x) {
    if (!x.is_periodic()) throw std::invalid_argument("least_period: sequence is not periodic");
    return ssize(x.right());
}

bool stable_eq_base(const BiSeq& x, const BiSeq& y) {
    return !first_mismatch_from(x, y, std::max(x.core_end(), y.core_end())).has_value();
}

bool unstable_eq_base(const BiSeq& x, const BiSeq& y) {
    return !last_mismatch_before(x, y, std::min(x.offset(), y.offset())).has_value();
}

std::string right_tail_key(const BiSeq& x) {
    const auto p = ssize(x.right());
    std::string key(x.right().size(), '0');
    // key[q] = x_i for large i with i ≡ q (mod p)
    for (std::int64_t q = 0; q < p; ++q) key[q] = x.right()[floor_mod(q - x.core_end(), p)];
    return key;
}

std::string left_tail_key(const BiSeq& x) {
    const auto p = ssize(x.left());
    std::string key(x.left().size(), '0');
    for (std::int64_t q = 0; q < p; ++q) key[q] = x.left()[floor_mod(q - x.offset(), p)];
    return key;
}

std::int64_t dyadic_level(const Rat& delta) {
    if (delta.is_zero()) throw std::invalid_argument("dyadic_level: delta must be positive");
    if (delta >= Rat(1)) return 1;
    return std::max<std::int64_t>(1, delta.dyadic_floor_level());
}

BiSeq base_shadow(const std::vector<BiSeq>& po, std::int64_t delta_exp) {
    if (delta_exp < 1) throw std::invalid_argument("base_shadow: delta exponent must be >= 1");
    if (po.empty()) throw std::invalid_argument("base_shadow: empty pseudo-orbit");
    for (std::size_t i = 0; i + 1 < po.size(); ++i) {
        auto r = mismatch_radius(shift(po[i], 1), po[i + 1], 0);
        if (r && *r <= delta_exp) {
            throw GapViolation(i, "base_shadow: gap at index " + std::to_string(i) + " is 2^-" +
                                      std::to_string(*r) + ", not below 2^-" + std::to_string(delta_exp));
        }
    }
    std::string middle;
    middle.reserve(po.size());
    for (const auto& x : po) middle.push_back(static_cast<char>('0' + x.at(0)));
    BiSeq y = splice(po.front(), 0, middle, po.back(), 1);

    for (std::size_t i = 0; i < po.size(); ++i) {
        auto r = mismatch_radius(shift(y, static_cast<std::int64_t>(i)), po[i], 0);
        if (r && *r < delta_exp) throw std::logic_error("base_shadow: constructed shadow misses its bound");
    }
    return y;
}

Rat glue_epsilon(std::int64_t spacing) {
    if (spacing < 1) throw std::invalid_argument("glue_epsilon: spacing must be >= 1");
    return Rat::dyadic((spacing - 1) / 2);
}

BiSeq specification_glue(const std::vector<OrbitSegment>& segments, std::int64_t spacing) {
    if (spacing < 1) throw std::invalid_argument("specification_glue: spacing must be >= 1");
    if (segments.empty()) throw std::invalid_argument("specification_glue: no segments");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].a > segments[i].b) {
            throw std::invalid_argument("specification_glue: interval " + std::to_string(i) + " has a > b");
        }
        if (i > 0 && segments[i].a < segments[i - 1].b + spacing) {
            throw std::invalid_argument("specification_glue: intervals " + std::to_string(i - 1) + " and " +
                                        std::to_string(i) + " are not " + std::to_string(spacing) +
                                        "-spaced");
        }
    }
    const std::int64_t widen = (spacing - 1) / 2;
    const std::int64_t lo = segments.front().a - widen;
    const std::int64_t hi = segments.back().b + widen + 1;
    std::string word(static_cast<std::size_t>(hi - lo), '0');
    for (const auto& seg : segments) {
        for (std::int64_t t = seg.a - widen; t <= seg.b + widen; ++t) {
            word[t - lo] = static_cast<char>('0' + seg.start.at(t - seg.a));
        }
    }
    BiSeq y("0", std::move(word), "0", lo);

    const Rat eps = glue_epsilon(spacing);
    for (const auto& seg : segments) {
        for (std::int64_t t = seg.a; t <= seg.b; ++t) {
            if (!(base_dist(shift(y, t), shift(seg.start, t - seg.a)) < eps)) {
                throw std::logic_error("specification_glue: glued point misses its bound");
            }
        }
    }
    return y;
}

bool Cylinder::contains(const BiSeq& x) const {
    for (std::size_t p = 0; p < word.size(); ++p) {
        if (x.at(start + static_cast<std::int64_t>(p)) != word[p] - '0') return false;
    }
    return true;
}

MixingWitness mixing_witness(const Cylinder& u, const Cylinder& v) {
    if (u.word.empty() || v.word.empty()) throw std::invalid_argument("mixing_witness: empty cylinder word");
    check_word(u.word, "cylinder", false);
    check_word(v.word, "cylinder", false);
    MixingWitness out;
    out.k = ssize(u.word) + ssize(v.word) + std::max<std::int64_t>(0, u.start - v.start);
    for (std::int64_t j = out.k; j <= out.k + 16; ++j) {
        // x agrees with U on its window and with V (translated by j) on V's.
        const std::int64_t lo = std::min(u.start, v.start + j);
        const std::int64_t hi = std::max(u.end(), v.end() + j);
        std::string word(static_cast<std::size_t>(hi - lo), '0');
        std::vector<bool> fixed(word.size(), false);
        for (std::int64_t p = 0; p < ssize(u.word); ++p) {
            word[u.start + p - lo] = u.word[p];
            fixed[u.start + p - lo] = true;
        }
        for (std::int64_t p = 0; p < ssize(v.word); ++p) {
            const auto idx = v.start + j + p - lo;
            if (fixed[idx] && word[idx] != v.word[p]) {
                throw std::logic_error("mixing_witness: windows overlap at j >= k");
            }
            word[idx] = v.word[p];
        }
        BiSeq x("0", word, "0", lo);
        if (!u.contains(x) || !v.contains(shift(x, j))) throw std::logic_error("mixing_witness: bad witness");
        out.witnesses.emplace_back(j, std::move(x));
    }
    return out;
}

}  // namespace nexp
