#include "nexp/shadowing.hpp"

#include "nexp/expansivity.hpp"

#include <algorithm>
#include <string>

namespace nexp {

namespace {

Rat inverse_of(std::int64_t m) { return Rat(BigInt(1), BigInt(m)); }

void require_positive(const Rat& r, const char* what) {
    if (r.is_zero()) throw std::invalid_argument(std::string(what) + " must be positive");
}

void check_schedule(const std::vector<ScheduleEntry>& schedule, const char* what) {
    if (schedule.empty()) throw std::invalid_argument(std::string(what) + ": empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        require_positive(schedule[i].bound, "schedule bound");
        if (schedule[i].k < 0) throw std::invalid_argument(std::string(what) + ": negative schedule index");
        if (i > 0 && !(schedule[i].k > schedule[i - 1].k)) {
            throw std::invalid_argument(std::string(what) + ": schedule indices must increase strictly");
        }
        if (i > 0 && !(schedule[i].bound < schedule[i - 1].bound)) {
            throw std::invalid_argument(std::string(what) + ": schedule bounds must decrease strictly");
        }
    }
}

[[noreturn]] void gap_failure(std::size_t t, const Rat& gap, const Rat& bound) {
    throw GapViolation(t, "jump at index " + std::to_string(t) + " is " + gap.str() + ", not below " + bound.str());
}

std::vector<Rat> distances_along(const AugSystem& sys, const std::vector<AugPoint>& points, const AugPoint& y) {
    std::vector<Rat> out;
    out.reserve(points.size());
    AugPoint cur = y;
    for (std::size_t t = 0; t < points.size(); ++t) {
        if (t > 0) cur = aug_map(sys, cur);
        out.push_back(aug_dist(sys, cur, points[t]));
    }
    return out;
}

std::vector<AugPoint> reflect_all(const std::vector<AugPoint>& pts) {
    std::vector<AugPoint> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(reflect_point(p));
    return out;
}

}  // namespace

std::vector<Rat> gaps(const AugSystem& sys, const std::vector<AugPoint>& points) {
    std::vector<Rat> out;
    for (std::size_t t = 0; t + 1 < points.size(); ++t) {
        out.push_back(aug_dist(sys, aug_map(sys, points[t]), points[t + 1]));
    }
    return out;
}

void validate_pseudo_orbit(const AugSystem& sys, const PseudoOrbit& po) {
    sys.validate();
    require_positive(po.delta, "pseudo-orbit delta");
    if (po.points.empty()) throw std::invalid_argument("pseudo-orbit: no points");
    for (const auto& p : po.points) {
        if (!sys.contains(p)) throw std::invalid_argument("pseudo-orbit: point outside system: " + p.text());
    }
    const auto g = gaps(sys, po.points);
    for (std::size_t t = 0; t < g.size(); ++t) {
        if (!(g[t] < po.delta)) gap_failure(t, g[t], po.delta);
    }
}

void validate_limit_pseudo_orbit(const AugSystem& sys, const LimitPseudoOrbit& lpo) {
    sys.validate();
    check_schedule(lpo.schedule, "limit pseudo-orbit");
    if (lpo.points.size() < 2) throw std::invalid_argument("limit pseudo-orbit: need at least two points");
    for (const auto& p : lpo.points) {
        if (!sys.contains(p)) throw std::invalid_argument("limit pseudo-orbit: point outside system: " + p.text());
    }
    const auto g = gaps(sys, lpo.points);
    for (const auto& e : lpo.schedule) {
        for (std::size_t t = static_cast<std::size_t>(e.k); t < g.size(); ++t) {
            if (!(g[t] < e.bound)) gap_failure(t, g[t], e.bound);
        }
    }
}

void validate_two_sided(const AugSystem& sys, const TwoSidedLimitPseudoOrbit& ts) {
    sys.validate();
    if (ts.half_width < 1) throw std::invalid_argument("two-sided pseudo-orbit: half width must be >= 1");
    if (ts.points.size() != static_cast<std::size_t>(2 * ts.half_width + 1)) {
        throw std::invalid_argument("two-sided pseudo-orbit: expected 2T+1 points");
    }
    check_schedule(ts.future, "two-sided future");
    check_schedule(ts.past, "two-sided past");
    for (const auto& p : ts.points) {
        if (!sys.contains(p)) throw std::invalid_argument("two-sided pseudo-orbit: point outside system");
    }
    const auto g = gaps(sys, ts.points);  // g[t + T] is the jump at index t
    const std::int64_t T = ts.half_width;
    for (const auto& e : ts.future) {
        for (std::int64_t t = e.k; t < T; ++t) {
            const auto& gap = g[static_cast<std::size_t>(t + T)];
            if (!(gap < e.bound)) gap_failure(static_cast<std::size_t>(t + T), gap, e.bound);
        }
    }
    for (const auto& e : ts.past) {
        for (std::int64_t t = -T; t + 1 <= -e.k; ++t) {
            const auto& gap = g[static_cast<std::size_t>(t + T)];
            if (!(gap < e.bound)) gap_failure(static_cast<std::size_t>(t + T), gap, e.bound);
        }
    }
}

ShadowModulus shadow_modulus(const Rat& eps) {
    require_positive(eps, "shadow_modulus: eps");
    ShadowModulus mod;
    mod.eps = eps;
    const Rat half_eps = eps / Rat(2);
    while (!(Rat::dyadic(mod.base_level) < half_eps)) ++mod.base_level;
    const Rat bound = min(half_eps, Rat::dyadic(mod.base_level) / Rat(3));
    // least m with 1/m < bound
    const BigInt m = bound.den() / bound.num() + 1;
    mod.m = static_cast<std::int64_t>(m);
    mod.delta = inverse_of(mod.m);
    return mod;
}

std::int64_t specification_spacing(const Rat& eps) {
    require_positive(eps, "specification_spacing: eps");
    if (eps >= Rat(1)) return 1;
    return 2 * eps.dyadic_floor_level() + 1;
}

ShadowReport verify_shadow(const AugSystem& sys, const std::vector<AugPoint>& points, const AugPoint& y,
                           const Rat& eps) {
    ShadowReport report;
    report.worst_distance = Rat(0);
    const auto d = distances_along(sys, points, y);
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t] > report.worst_distance) {
            report.worst_distance = d[t];
            report.worst_index = t;
        }
    }
    report.ok = report.worst_distance <= eps;
    return report;
}

ShadowResult aug_shadow(const AugSystem& sys, const PseudoOrbit& po, const Rat& eps) {
    validate_pseudo_orbit(sys, po);
    ShadowResult result;
    result.modulus = shadow_modulus(eps);
    const auto& mod = result.modulus;
    if (po.delta > mod.delta) {
        throw std::invalid_argument("aug_shadow: delta " + po.delta.str() + " exceeds the modulus " +
                                    mod.delta.str() + " for eps " + eps.str());
    }

    // An extra point with k < m is more than delta away from everything else,
    // so a valid pseudo-orbit through it is its exact orbit.
    const bool small_extra = std::any_of(po.points.begin(), po.points.end(), [&](const AugPoint& p) {
        return p.is_extra() && p.q().k < mod.m;
    });
    if (small_extra) {
        for (std::size_t t = 0; t + 1 < po.points.size(); ++t) {
            if (!(aug_map(sys, po.points[t]) == po.points[t + 1])) {
                throw DichotomyViolation("aug_shadow: extra point with k < " + std::to_string(mod.m) +
                                         " off its own orbit at index " + std::to_string(t));
            }
        }
        result.point = po.points.front();
        result.self_shadow = true;
    } else {
        std::vector<BiSeq> projected;
        projected.reserve(po.points.size());
        for (const auto& p : po.points) projected.push_back(project(p));
        result.point = AugPoint::base(base_shadow(projected, mod.base_level));
    }
    result.report = verify_shadow(sys, po.points, result.point, eps);
    if (!result.report.ok) {
        throw std::logic_error("aug_shadow: shadow misses by " + result.report.worst_distance.str() + " at index " +
                               std::to_string(result.report.worst_index));
    }
    return result;
}

SpecShadowResult spec_shadow(const AugSystem& sys, const Specification& spec, const Rat& eps) {
    sys.validate();
    if (spec.intervals.size() != spec.starts.size() || spec.intervals.empty()) {
        throw std::invalid_argument("spec_shadow: need one start point per interval");
    }
    SpecShadowResult result;
    result.spacing = specification_spacing(eps);
    std::vector<OrbitSegment> segments;
    for (std::size_t i = 0; i < spec.intervals.size(); ++i) {
        const auto& p = spec.starts[i];
        if (p.is_extra()) {
            throw std::invalid_argument("spec_shadow: extra point " + p.text() +
                                        " is isolated at distance 1/k and cannot be glued");
        }
        if (!sys.contains(p)) throw std::invalid_argument("spec_shadow: point outside system");
        segments.push_back(OrbitSegment{spec.intervals[i].a, spec.intervals[i].b, p.seq()});
    }
    const BiSeq glued = specification_glue(segments, result.spacing);
    result.guaranteed = glue_epsilon(result.spacing);
    for (const auto& seg : segments) {
        for (std::int64_t t = seg.a; t <= seg.b; ++t) {
            if (!(base_dist(shift(glued, t), shift(seg.start, t - seg.a)) < eps)) {
                throw std::logic_error("spec_shadow: glued point misses at t = " + std::to_string(t));
            }
        }
    }
    result.point = AugPoint::base(glued);
    return result;
}

std::vector<DecayEntry> decay_report(const AugSystem& sys, const std::vector<AugPoint>& points, const AugPoint& y,
                                     const std::vector<Rat>& thresholds, std::int64_t min_hold) {
    const auto d = distances_along(sys, points, y);
    const auto len = static_cast<std::int64_t>(d.size());
    std::vector<DecayEntry> out;
    for (const auto& alpha : thresholds) {
        std::int64_t from = len;
        while (from > 0 && d[static_cast<std::size_t>(from - 1)] < alpha) --from;
        DecayEntry e;
        e.threshold = alpha;
        if (len - from >= std::max<std::int64_t>(1, min_hold)) e.index = from;
        out.push_back(std::move(e));
    }
    return out;
}

LimitShadowResult limit_shadow(const AugSystem& sys, const LimitPseudoOrbit& lpo, const LimitShadowOptions& options) {
    validate_limit_pseudo_orbit(sys, lpo);
    require_positive(options.eps, "limit_shadow: eps");
    if (options.eps >= Rat(BigInt(1), BigInt(2))) throw std::invalid_argument("limit_shadow: eps must be < 1/2");
    const Rat& eps = options.eps;
    const auto len = static_cast<std::int64_t>(lpo.points.size());

    LimitShadowResult result;
    for (std::size_t j = 1; j <= options.max_stages; ++j) {
        LimitStage stage;
        stage.j = static_cast<std::int64_t>(j);
        stage.resolution = eps / Rat(static_cast<std::int64_t>(j + 1));
        const auto mod = shadow_modulus(stage.resolution);
        stage.delta = mod.delta;
        auto entry = std::find_if(lpo.schedule.begin(), lpo.schedule.end(),
                                  [&](const ScheduleEntry& e) { return e.bound <= mod.delta; });
        if (entry == lpo.schedule.end() || entry->k >= len - 1) break;
        stage.k = entry->k;
        PseudoOrbit tail{std::vector<AugPoint>(lpo.points.begin() + stage.k, lpo.points.end()), mod.delta};
        const auto shadow = aug_shadow(sys, tail, stage.resolution);
        stage.pulled_back = aug_iterate(sys, shadow.point, -stage.k);
        result.stages.push_back(std::move(stage));
    }
    if (result.stages.size() < options.min_stages) {
        throw LimitShadowFailure("limit_shadow: prefix of length " + std::to_string(len) + " and its schedule give " +
                                 std::to_string(result.stages.size()) + " stages, need " +
                                 std::to_string(options.min_stages));
    }
    const AugPoint& y1 = result.stages.front().pulled_back;
    for (auto& stage : result.stages) {
        stage.in_local_stable = ws_eps_member(sys, aug_iterate(sys, stage.pulled_back, stage.k),
                                              aug_iterate(sys, y1, stage.k), eps);
    }

    const auto stab = stabilization_index(sys, y1, eps, stabilization_horizon(sys, y1, eps), options.k_hi);
    result.stabilization = stab.index;
    const auto classes = stable_count(sys, aug_iterate(sys, y1, stab.index), eps, options.k_hi);
    for (const auto& rep : classes.representatives) result.candidates.push_back(aug_iterate(sys, rep, -stab.index));

    const auto& thresholds = options.thresholds;
    std::vector<Rat> bounds;
    if (thresholds.empty()) {
        for (const auto& e : lpo.schedule) bounds.push_back(e.bound);
    }
    const std::int64_t hold = options.min_hold > 0 ? options.min_hold : std::max<std::int64_t>(1, len / 4);
    for (const auto& cand : result.candidates) {
        auto decay = decay_report(sys, lpo.points, cand, thresholds.empty() ? bounds : thresholds, hold);
        const bool all = std::all_of(decay.begin(), decay.end(), [](const DecayEntry& e) { return e.index.has_value(); });
        if (all) {
            result.point = cand;
            result.decay = std::move(decay);
            return result;
        }
    }
    throw LimitShadowFailure("limit_shadow: no candidate in E(f^l(y_1), eps) meets every decay threshold");
}

LimitShadowResult limit_shadow_past(const AugSystem& sys, const LimitPseudoOrbit& backward,
                                    const LimitShadowOptions& options) {
    LimitPseudoOrbit mirrored{reflect_all(backward.points), backward.schedule};
    auto result = limit_shadow(sys, mirrored, options);
    result.point = reflect_point(result.point);
    for (auto& stage : result.stages) stage.pulled_back = reflect_point(stage.pulled_back);
    result.candidates = reflect_all(result.candidates);
    return result;
}

TwoSidedResult two_sided_limit_shadow(const AugSystem& sys, const TwoSidedLimitPseudoOrbit& ts,
                                      const LimitShadowOptions& options) {
    validate_two_sided(sys, ts);
    const std::int64_t T = ts.half_width;
    const Rat& eps = options.eps;

    LimitPseudoOrbit future;
    for (std::int64_t t = 0; t <= T; ++t) future.points.push_back(ts.at(t));
    future.schedule = ts.future;

    // f^{-1} is 2-Lipschitz, so a past bound δ on f-jumps bounds the
    // f^{-1}-jumps of the reversed sequence by 2δ.
    LimitPseudoOrbit backward;
    for (std::int64_t i = 0; i <= T; ++i) backward.points.push_back(ts.at(-i));
    for (const auto& e : ts.past) backward.schedule.push_back(ScheduleEntry{e.k, e.bound * Rat(2)});

    const auto past_result = limit_shadow_past(sys, backward, options);
    const auto future_result = limit_shadow(sys, future, options);

    TwoSidedResult result;
    result.past_shadow = past_result.point;
    result.future_shadow = future_result.point;
    const AugPoint& p1 = result.past_shadow;
    const AugPoint& p2 = result.future_shadow;

    const auto decay_thresholds = [&] {
        if (!options.thresholds.empty()) return options.thresholds;
        std::vector<Rat> b;
        for (const auto& e : ts.future) b.push_back(e.bound);
        return b;
    }();
    const std::int64_t hold = options.min_hold > 0 ? options.min_hold : std::max<std::int64_t>(1, (T + 1) / 4);
    auto finish = [&](const AugPoint& z) {
        result.point = z;
        result.future_decay = decay_report(sys, future.points, z, decay_thresholds, hold);
        result.past_decay = decay_report(sys, reflect_all(backward.points), reflect_point(z), decay_thresholds, hold);
        result.past_unstable = unstable_member(sys, aug_iterate(sys, z, -result.glue_index),
                                               aug_iterate(sys, p1, -result.glue_index));
        result.future_stable = stable_member(sys, aug_iterate(sys, z, result.glue_index),
                                             aug_iterate(sys, p2, result.glue_index));
    };

    if (p1.is_extra() || p2.is_extra()) {
        if (p1 == p2) {
            result.eps_past = result.eps_future = result.eps = eps;
            result.glue_guaranteed = Rat(0);
            finish(p1);
            return result;
        }
        throw LimitShadowFailure("two_sided_limit_shadow: past and future shadows " + p1.text() + " and " +
                                 p2.text() + " do not lie on one extra orbit");
    }

    const auto ex1 = epsilon_x(sys, reflect_point(p1), eps, options.k_hi);
    const auto ex2 = epsilon_x(sys, p2, eps, options.k_hi);
    result.eps_past = ex1.value;
    result.eps_future = ex2.value;
    result.eps = min(ex1.value, ex2.value);
    const auto mod = shadow_modulus(result.eps);
    result.delta = mod.delta;
    result.spacing = specification_spacing(result.delta);

    std::vector<Rat> past_err, future_err;
    {
        AugPoint a = p1, b = p2;
        for (std::int64_t k = 0; k <= T; ++k) {
            if (k > 0) {
                a = aug_map_inv(sys, a);
                b = aug_map(sys, b);
            }
            past_err.push_back(aug_dist(sys, a, ts.at(-k)));
            future_err.push_back(aug_dist(sys, b, ts.at(k)));
        }
    }
    // least N past which both tails stay delta-close through the window
    std::int64_t tail_from = T + 1;
    while (tail_from > 0 && past_err[static_cast<std::size_t>(tail_from - 1)] < result.delta &&
           future_err[static_cast<std::size_t>(tail_from - 1)] < result.delta) {
        --tail_from;
    }
    const std::int64_t N = std::max({tail_from, (result.spacing + 1) / 2, ex1.stabilization, ex2.stabilization});
    if (N >= T) {
        throw LimitShadowFailure("two_sided_limit_shadow: window T = " + std::to_string(T) +
                                 " too short for the glue index " + std::to_string(N));
    }
    result.glue_index = N;

    const AugPoint left = aug_iterate(sys, p1, -N);
    const AugPoint right = aug_iterate(sys, p2, N);
    const auto glued = spec_shadow(sys, Specification{{{-N, -N}, {N, N}}, {left, right}}, result.delta);
    result.glue_guaranteed = glued.guaranteed;

    // times -N-1 .. N: the past orbit, the glued orbit, then the future orbit
    std::vector<AugPoint> ys;
    ys.push_back(aug_map_inv(sys, left));
    AugPoint cur = aug_iterate(sys, glued.point, -N);
    for (std::int64_t t = -N; t < N; ++t) {
        ys.push_back(cur);
        cur = aug_map(sys, cur);
    }
    ys.push_back(right);
    const auto shadow = aug_shadow(sys, PseudoOrbit{ys, result.delta}, result.eps);
    result.glue_report = shadow.report;
    finish(aug_iterate(sys, shadow.point, N + 1));
    return result;
}

}  // namespace nexp
