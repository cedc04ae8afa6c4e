#include "nexp/expansivity.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nexp {

namespace {

const Rat& half() {
    static const Rat h(BigInt(1), BigInt(2));
    return h;
}

BiSeq complement(const BiSeq& s) {
    auto flip = [](std::string w) {
        for (char& c : w) c = c == '0' ? '1' : '0';
        return w;
    };
    return BiSeq(flip(s.left()), flip(s.core()), flip(s.right()), s.offset());
}

BiSeq flip_at(const BiSeq& s, std::int64_t w) {
    const char flipped = s.at(w) == 0 ? '1' : '0';
    return splice(s, w, std::string(1, flipped), s, w + 1);
}

// Sup of d_0(g^t a, g^t b) over the range.
Rat base_sup(const BiSeq& a, const BiSeq& b, TimeRange range) {
    if (a == b) return Rat(0);
    switch (range) {
        case TimeRange::all:
            return Rat(1);
        case TimeRange::forward: {
            if (first_mismatch_from(a, b, 0)) return Rat(1);
            auto j = last_mismatch_before(a, b, 0);
            return Rat::dyadic(-*j);
        }
        case TimeRange::backward: {
            if (last_mismatch_before(a, b, 1)) return Rat(1);
            auto j = first_mismatch_from(a, b, 1);
            return Rat::dyadic(*j);
        }
    }
    return Rat(1);
}

// The k with the given tail word a rotation of 0^k 1, if any.
std::optional<std::int64_t> p_k_index(const std::string& period) {
    if (period.size() < 2 || std::count(period.begin(), period.end(), '1') != 1) return std::nullopt;
    return static_cast<std::int64_t>(period.size()) - 1;
}

std::vector<std::size_t> sorted_by_text(const CandidateUniverse& u, std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return u.point(a).text() < u.point(b).text();
    });
    return idx;
}

}  // namespace

Rat orbit_sup_projected(const AugPoint& x, const BiSeq& px, const AugPoint& y, const BiSeq& py, TimeRange range) {
    auto parts = distance_parts(x, y);
    if (parts.base_term) parts.constant += base_sup(px, py, range);
    return parts.constant;
}

Rat orbit_sup(const AugPoint& x, const AugPoint& y, TimeRange range) {
    return orbit_sup_projected(x, project(x), y, project(y), range);
}

Rat persistent_separation(const AugPoint& x, const AugPoint& y, TimeRange direction) {
    auto parts = distance_parts(x, y);
    if (!parts.base_term) return parts.constant;
    const BiSeq a = project(x);
    const BiSeq b = project(y);
    const bool converges = direction == TimeRange::backward ? unstable_eq_base(a, b) : stable_eq_base(a, b);
    if (!converges) parts.constant += Rat(1);
    return parts.constant;
}

bool ws_eps_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x, const Rat& eps) {
    if (!sys.contains(x) || !sys.contains(y)) throw std::invalid_argument("ws_eps_member: point outside system");
    return orbit_sup(y, x, TimeRange::forward) <= eps;
}

bool wu_eps_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x, const Rat& eps) {
    if (!sys.contains(x) || !sys.contains(y)) throw std::invalid_argument("wu_eps_member: point outside system");
    return orbit_sup(y, x, TimeRange::backward) <= eps;
}

bool stable_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x) {
    if (!sys.contains(x) || !sys.contains(y)) throw std::invalid_argument("stable_member: point outside system");
    if (x.is_base() && y.is_base()) return stable_eq_base(y.seq(), x.seq());
    if (x.is_base() != y.is_base()) return false;
    return x == y;
}

bool unstable_member(const AugSystem& sys, const AugPoint& y, const AugPoint& x) {
    if (!sys.contains(x) || !sys.contains(y)) throw std::invalid_argument("unstable_member: point outside system");
    if (x.is_base() && y.is_base()) return unstable_eq_base(y.seq(), x.seq());
    if (x.is_base() != y.is_base()) return false;
    return x == y;
}

// --- CandidateUniverse ------------------------------------------------------

void CandidateUniverse::add(const AugPoint& p, const std::string& source) {
    auto text = p.text();
    if (by_text_.contains(text)) return;
    const std::size_t idx = points_.size();
    by_text_.emplace(std::move(text), idx);
    points_.push_back(p);
    projections_.push_back(project(p));
    const BiSeq& s = projections_.back();
    by_projection_[s].push_back(idx);
    by_right_tail_[right_tail_key(s)].push_back(idx);
    by_left_tail_[left_tail_key(s)].push_back(idx);
    auto it = std::find_if(sources_.begin(), sources_.end(), [&](const auto& e) { return e.first == source; });
    if (it == sources_.end()) {
        sources_.emplace_back(source, 1);
    } else {
        ++it->second;
    }
}

void CandidateUniverse::add_all(const std::vector<AugPoint>& pts, const std::string& source) {
    for (const auto& p : pts) add(p, source);
}

std::optional<std::size_t> CandidateUniverse::find(const AugPoint& p) const {
    auto it = by_text_.find(p.text());
    if (it == by_text_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> CandidateUniverse::with_projection(const BiSeq& s) const {
    auto it = by_projection_.find(s);
    return it == by_projection_.end() ? std::vector<std::size_t>{} : it->second;
}

std::vector<std::size_t> CandidateUniverse::with_right_tail(const BiSeq& s) const {
    std::vector<std::size_t> out;
    auto it = by_right_tail_.find(right_tail_key(s));
    if (it == by_right_tail_.end()) return out;
    for (auto idx : it->second) {
        if (stable_eq_base(projections_[idx], s)) out.push_back(idx);
    }
    return out;
}

std::vector<std::size_t> CandidateUniverse::with_left_tail(const BiSeq& s) const {
    std::vector<std::size_t> out;
    auto it = by_left_tail_.find(left_tail_key(s));
    if (it == by_left_tail_.end()) return out;
    for (auto idx : it->second) {
        if (unstable_eq_base(projections_[idx], s)) out.push_back(idx);
    }
    return out;
}

std::string CandidateUniverse::description() const {
    std::string out;
    for (const auto& [source, count] : sources_) {
        if (!out.empty()) out += ", ";
        out += source + ":" + std::to_string(count);
    }
    return out;
}

std::vector<AugPoint> structured_adversaries(const AugSystem& sys, const AugPoint& center) {
    std::vector<AugPoint> out;
    const BiSeq a = project(center);
    out.push_back(AugPoint::base(a));
    for (std::int64_t w = -8; w <= 8; ++w) out.push_back(AugPoint::base(flip_at(a, w)));
    const BiSeq comp = complement(a);
    for (std::int64_t w : {0, 1, 2, 4, 8, 16}) {
        out.push_back(AugPoint::base(splice(comp, -w, a.window(-w, w + 1), comp, w + 1)));
        // agreement on [-w, inf) and on (-inf, w] separately
        out.push_back(AugPoint::base(splice(comp, -w, "", a, -w)));
        out.push_back(AugPoint::base(splice(a, w + 1, "", comp, w + 1)));
    }
    for (std::int64_t t = -2; t <= 2; ++t) out.push_back(aug_iterate(sys, center, t));
    return out;
}

std::vector<AugPoint> tail_matched_extras(const AugSystem& sys, const BiSeq& s) {
    std::vector<AugPoint> out;
    std::set<std::int64_t> ks;
    if (auto k = p_k_index(s.right())) ks.insert(*k);
    if (auto k = p_k_index(s.left())) ks.insert(*k);
    for (auto k : ks) {
        for (std::int64_t i = 1; i <= sys.multiplicity(k); ++i) {
            for (std::int64_t j = 0; j <= k; ++j) out.push_back(AugPoint::extra(i, k, j));
        }
    }
    return out;
}

// --- dynamic balls ----------------------------------------------------------

namespace {

CandidateUniverse ball_universe(const AugSystem& sys, const AugPoint& center, std::int64_t k_hi,
                                const std::vector<AugPoint>& extra_candidates) {
    CandidateUniverse u;
    u.add(center, "center");
    u.add_all(enumerate_extra(sys, k_hi), "extras(k<=" + std::to_string(k_hi) + ")");
    u.add_all(tail_matched_extras(sys, project(center)), "tail-matched-extras");
    u.add_all(structured_adversaries(sys, center), "structured-adversaries");
    u.add_all(extra_candidates, "caller");
    return u;
}

Rat horizon_sup(const AugSystem& sys, const AugPoint& x, const AugPoint& y, std::int64_t horizon) {
    Rat best(0);
    for (std::int64_t t = -horizon; t <= horizon; ++t) {
        best = max(best, aug_dist(sys, aug_iterate(sys, x, t), aug_iterate(sys, y, t)));
    }
    return best;
}

DynamicBallReport ball_in_universe(const AugSystem& sys, const CandidateUniverse& u, std::size_t center_idx,
                                   const Rat& radius, std::int64_t k_hi, std::int64_t horizon) {
    DynamicBallReport report;
    report.center = u.point(center_idx);
    report.radius = radius;
    report.exactness = Exactness{horizon == 0, horizon, k_hi};
    report.universe = u.description();

    std::vector<std::size_t> candidates;
    if (horizon == 0) {
        // Distinct projections force a sup of at least 1 > radius.
        candidates = u.with_projection(u.projection(center_idx));
    } else {
        candidates.resize(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) candidates[i] = i;
    }
    for (auto idx : sorted_by_text(u, candidates)) {
        Rat sup = horizon == 0 ? orbit_sup_projected(u.point(center_idx), u.projection(center_idx), u.point(idx),
                                                     u.projection(idx), TimeRange::all)
                               : horizon_sup(sys, u.point(center_idx), u.point(idx), horizon);
        if (sup <= radius) report.members.push_back({u.point(idx), std::move(sup)});
    }
    return report;
}

}  // namespace

DynamicBallReport dynamic_ball(const AugSystem& sys, const AugPoint& center, const Rat& radius, std::int64_t k_hi,
                               const std::vector<AugPoint>& extra_candidates, std::int64_t horizon) {
    sys.validate();
    if (!sys.contains(center)) throw std::invalid_argument("dynamic_ball: center outside system");
    if (horizon < 0) throw std::invalid_argument("dynamic_ball: negative horizon");
    if (horizon == 0 && radius >= half()) {
        throw std::invalid_argument("dynamic_ball: exact mode requires radius < 1/2");
    }
    auto u = ball_universe(sys, center, k_hi, extra_candidates);
    return ball_in_universe(sys, u, 0, radius, k_hi, horizon);
}

ExpansivityResult n_expansivity_check(const AugSystem& sys, const Rat& c, const std::vector<AugPoint>& sample,
                                      std::int64_t k_hi) {
    sys.validate();
    if (c >= half()) throw std::invalid_argument("n_expansivity_check: constant must be < 1/2");
    ExpansivityResult result;
    result.level = sys.n;
    result.constant = c;

    CandidateUniverse u;
    u.add_all(sample, "sample");
    u.add_all(enumerate_extra(sys, k_hi), "extras(k<=" + std::to_string(k_hi) + ")");
    for (const auto& x : sample) {
        u.add_all(tail_matched_extras(sys, project(x)), "tail-matched-extras");
        u.add_all(structured_adversaries(sys, x), "structured-adversaries");
    }
    result.universe = u.description();

    for (const auto& x : sample) {
        auto report = ball_in_universe(sys, u, *u.find(x), c, k_hi, 0);
        ++result.centers_checked;
        result.max_ball_size = std::max(result.max_ball_size, report.members.size());
        if (static_cast<std::int64_t>(report.members.size()) > sys.n && !result.falsifier) {
            result.falsifier = std::move(report);
        }
    }
    result.certified = !result.falsifier.has_value();
    return result;
}

std::optional<DynamicBallReport> falsify_expansivity(const AugSystem& sys, std::int64_t level, const Rat& c) {
    sys.validate();
    if (c.is_zero()) throw std::invalid_argument("falsify_expansivity: constant must be positive");
    // least k >= 3 with 1/k < c
    std::int64_t k = 3;
    while (!(Rat(BigInt(1), BigInt(k)) < c)) ++k;
    auto ball = dynamic_ball(sys, AugPoint::base(periodic_point(k)), Rat(BigInt(1), BigInt(k)), 3);
    if (static_cast<std::int64_t>(ball.members.size()) > level) return ball;
    return std::nullopt;
}

// --- stable counts ----------------------------------------------------------

namespace {

StableClassReport count_classes(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi,
                                const std::vector<AugPoint>& extra_candidates, TimeRange range) {
    sys.validate();
    if (!sys.contains(x)) throw std::invalid_argument("stable_count: point outside system");
    if (eps >= half()) throw std::invalid_argument("stable_count: eps must be < 1/2");
    auto u = ball_universe(sys, x, k_hi, extra_candidates);
    const BiSeq& px = u.projection(0);

    // A forward sup below 1/2 needs the projections to be stable-equivalent.
    auto candidates = range == TimeRange::backward ? u.with_left_tail(px) : u.with_right_tail(px);
    std::vector<AugPoint> members;
    for (auto idx : sorted_by_text(u, candidates)) {
        if (orbit_sup_projected(u.point(idx), u.projection(idx), x, px, range) <= eps) {
            members.push_back(u.point(idx));
        }
    }

    auto same_class = [&](const AugPoint& a, const AugPoint& b) {
        return range == TimeRange::backward ? unstable_member(sys, a, b) : stable_member(sys, a, b);
    };
    std::vector<std::vector<AugPoint>> classes;
    for (const auto& m : members) {
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const std::vector<AugPoint>& cls) { return same_class(m, cls.front()); });
        if (it == classes.end()) {
            classes.push_back({m});
        } else {
            it->push_back(m);
        }
    }
    // members are text-sorted, so each class front is its least element
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front().text() < b.front().text(); });

    StableClassReport report;
    report.base_point = x;
    report.epsilon = eps;
    report.count = static_cast<std::int64_t>(classes.size());
    for (const auto& cls : classes) report.representatives.push_back(cls.front());
    report.classes = std::move(classes);
    report.universe = u.description();
    return report;
}

}  // namespace

StableClassReport stable_count(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi,
                               const std::vector<AugPoint>& extra_candidates) {
    return count_classes(sys, x, eps, k_hi, extra_candidates, TimeRange::forward);
}

StableClassReport unstable_count(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi) {
    return count_classes(sys, x, eps, k_hi, {}, TimeRange::backward);
}

namespace {

std::int64_t governing_period(const AugPoint& x) {
    if (x.is_extra()) return x.q().k + 1;
    return static_cast<std::int64_t>(x.seq().right().size());
}

}  // namespace

std::int64_t stabilization_horizon(const AugSystem& sys, const AugPoint& x, const Rat& eps) {
    const std::int64_t w = governing_period(x);
    if (x.is_extra()) return 2 * w + 2;
    const BiSeq& s = x.seq();
    std::int64_t bits = 0;
    if (auto k = p_k_index(s.right()); k && sys.multiplicity(*k) > 0) {
        Rat q(BigInt(1), BigInt(*k));
        if (q < eps) bits = (eps - q).dyadic_floor_level() + 1;
    }
    return std::max<std::int64_t>(0, s.core_end()) + bits + 2 * w + 2;
}

StabilizationReport stabilization_index(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t m_hi,
                                        std::int64_t k_hi) {
    if (m_hi < 1) throw std::invalid_argument("stabilization_index: m_hi must be >= 1");
    StabilizationReport report;
    report.counts.reserve(static_cast<std::size_t>(m_hi + 1));
    for (std::int64_t t = 0; t <= m_hi; ++t) {
        report.counts.push_back(stable_count(sys, aug_iterate(sys, x, t), eps, k_hi).count);
    }
    std::int64_t l = m_hi;
    while (l > 0 && report.counts[l - 1] == report.counts[m_hi]) --l;
    if (m_hi - l < governing_period(x)) {
        throw StabilizationError("stabilization_index: count not constant over a full tail period within m_hi = " +
                                 std::to_string(m_hi));
    }
    report.index = l;
    report.value = report.counts[m_hi];
    return report;
}

EpsilonXReport epsilon_x(const AugSystem& sys, const AugPoint& x, const Rat& eps, std::int64_t k_hi,
                         std::int64_t m_hi) {
    if (m_hi <= 0) m_hi = stabilization_horizon(sys, x, eps);
    auto stab = stabilization_index(sys, x, eps, m_hi, k_hi);
    const AugPoint anchor = aug_iterate(sys, x, stab.index);

    EpsilonXReport report;
    report.stabilization = stab.index;
    report.classes = stable_count(sys, anchor, eps, k_hi);
    std::optional<Rat> least;
    for (const auto& rep : report.classes.representatives) {
        if (stable_member(sys, rep, anchor)) continue;
        Rat r = persistent_separation(rep, anchor, TimeRange::forward);
        if (!least || r < *least) least = r;
        report.separations.emplace_back(rep, std::move(r));
    }
    report.value = least ? *least / Rat(4) : eps;
    return report;
}

LocalStableCheck check_local_stable_inclusion(const AugSystem& sys, const AugPoint& x, const Rat& eps,
                                              std::int64_t m_lo, std::int64_t m_hi, std::int64_t k_hi) {
    LocalStableCheck out;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
        const AugPoint fm = aug_iterate(sys, x, m);
        auto report = stable_count(sys, fm, eps, k_hi);
        for (const auto& cls : report.classes) {
            for (const auto& y : cls) {
                if (!stable_member(sys, y, fm)) {
                    out.holds = false;
                    out.failing_m = m;
                    out.witness = y;
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace nexp
