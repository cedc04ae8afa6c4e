#include "nexp/workloads.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace nexp {

namespace {

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::string random_word(std::mt19937_64& rng, std::int64_t len) {
    std::string w;
    for (std::int64_t i = 0; i < len; ++i) w.push_back(uniform(rng, 0, 1) ? '1' : '0');
    return w;
}

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// orbit point of `base` at time t with the symbols of target(u) copied on
// global positions [t - r, t + r]
template <class Target>
BiSeq windowed(const BiSeq& base, std::int64_t t, std::int64_t r, Target target) {
    std::string middle;
    for (std::int64_t u = t - r; u <= t + r; ++u) middle.push_back(target(u) ? '1' : '0');
    const BiSeq orbit = shift(base, t);
    return splice(orbit, -r, middle, orbit, r + 1);
}

}  // namespace

BiSeq random_base_point(std::mt19937_64& rng, const BaseSampleBounds& bounds) {
    const auto left = random_word(rng, uniform(rng, 1, bounds.max_period));
    const auto core = random_word(rng, uniform(rng, 0, bounds.max_core));
    const auto right = random_word(rng, uniform(rng, 1, bounds.max_period));
    return BiSeq(left, core, right, uniform(rng, -bounds.max_offset, bounds.max_offset));
}

std::vector<AugPoint> random_base_points(std::uint64_t seed, std::size_t count, const BaseSampleBounds& bounds) {
    std::mt19937_64 rng(seed);
    std::vector<AugPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(AugPoint::base(random_base_point(rng, bounds)));
    return out;
}

std::vector<AugPoint> construction_sample(const AugSystem& sys, std::int64_t k_extra, std::int64_t k_orbit) {
    auto out = enumerate_extra(sys, k_extra);
    for (std::int64_t k = 1; k <= k_orbit; ++k) {
        for (std::int64_t j = 0; j <= k; ++j) out.push_back(AugPoint::base(shift(periodic_point(k), j)));
    }
    return out;
}

std::vector<AugPoint> deduplicate(std::vector<AugPoint> pts) {
    std::set<std::string> seen;
    std::vector<AugPoint> out;
    for (auto& p : pts) {
        if (seen.insert(p.text()).second) out.push_back(std::move(p));
    }
    return out;
}

BiSeq flip_at(const BiSeq& s, std::int64_t index) {
    const std::string bit(1, s.at(index) ? '0' : '1');
    return splice(s, index, bit, s, index + 1);
}

PseudoOrbit random_pseudo_orbit(const AugSystem& sys, std::mt19937_64& rng, const RandomPseudoOrbitConfig& cfg) {
    if (cfg.length == 0) throw std::invalid_argument("random_pseudo_orbit: empty length");
    PseudoOrbit po;
    po.delta = cfg.delta;

    if (std::uniform_real_distribution<double>(0, 1)(rng) < cfg.self_orbit_fraction) {
        const auto k = uniform(rng, 3, std::min(cfg.self_k_hi, sys.k_max));
        const auto i = uniform(rng, 1, std::max<std::int64_t>(1, sys.multiplicity(k)));
        AugPoint x = AugPoint::extra(i, k, uniform(rng, 0, k));
        for (std::size_t t = 0; t < cfg.length; ++t) {
            po.points.push_back(x);
            x = aug_map(sys, x);
        }
        return po;
    }

    enum class Mode { wander, steer, ride };
    Mode mode = Mode::wander;
    std::int64_t hop_k = 0, hop_i = 1, phase = 0, steps = 0, ride_len = 0;
    po.points.push_back(AugPoint::base(random_base_point(rng, cfg.bounds)));
    while (po.points.size() < cfg.length) {
        const AugPoint image = aug_map(sys, po.points.back());
        AugPoint next = image;
        switch (mode) {
            case Mode::wander: {
                const auto roll = uniform(rng, 0, 99);
                if (roll < 15) {
                    const auto w = uniform(rng, 7, 12) * (uniform(rng, 0, 1) ? 1 : -1);
                    next = AugPoint::base(flip_at(image.seq(), w));
                } else if (roll < 25 && sys.k_max >= cfg.hop_k_lo) {
                    hop_k = uniform(rng, cfg.hop_k_lo, std::min(cfg.hop_k_hi, sys.k_max));
                    hop_i = uniform(rng, 1, std::max<std::int64_t>(1, sys.multiplicity(hop_k)));
                    phase = uniform(rng, 0, hop_k);
                    next = AugPoint::base(splice(image.seq(), 7, "", shift(periodic_point(hop_k), phase), 7));
                    mode = Mode::steer;
                    steps = 0;
                }
                break;
            }
            case Mode::steer:
                // after 18 true steps the orbit agrees with the p_k orbit on [-11, inf)
                ++steps;
                phase = mod(phase + 1, hop_k + 1);
                if (steps >= 18 && sys.multiplicity(hop_k) > 0) {
                    next = AugPoint::extra(hop_i, hop_k, phase);
                    mode = Mode::ride;
                    ride_len = uniform(rng, 3, 15);
                }
                break;
            case Mode::ride:
                if (--ride_len <= 0) {
                    const BiSeq tail = random_base_point(rng, cfg.bounds);
                    next = AugPoint::base(splice(project(image), 11, "", tail, 11));
                    mode = Mode::wander;
                }
                break;
        }
        po.points.push_back(std::move(next));
    }
    return po;
}

LimitPseudoOrbit switching_limit_pseudo_orbit(const BiSeq& a, const BiSeq& b, std::int64_t prefix_exp) {
    if (prefix_exp < 2 || prefix_exp > 20) throw std::invalid_argument("switching_limit_pseudo_orbit: bad prefix");
    const std::int64_t len = std::int64_t{1} << prefix_exp;
    auto segment = [](std::int64_t t) {
        std::int64_t j = 0;
        while ((std::int64_t{2} << j) - 1 <= t) ++j;
        return j;
    };
    auto target = [&](std::int64_t u) {
        if (u < 0) return a.at(u);
        return segment(u) % 2 == 0 ? a.at(u) : b.at(u);
    };
    LimitPseudoOrbit lpo;
    for (std::int64_t t = 0; t < len; ++t) {
        const auto j = segment(t);
        lpo.points.push_back(AugPoint::base(windowed(j % 2 == 0 ? a : b, t, j + 1, target)));
    }
    for (std::int64_t j = 1; (std::int64_t{1} << j) - 1 < len - 1; ++j) {
        lpo.schedule.push_back(ScheduleEntry{(std::int64_t{1} << j) - 1, Rat::dyadic(j)});
    }
    return lpo;
}

TwoSidedLimitPseudoOrbit perturbed_two_sided(const BiSeq& target, std::int64_t half_width, bool flips,
                                             std::int64_t schedule_len) {
    if (half_width < 1) throw std::invalid_argument("perturbed_two_sided: half width must be >= 1");
    TwoSidedLimitPseudoOrbit ts;
    ts.half_width = half_width;
    for (std::int64_t t = -half_width; t <= half_width; ++t) {
        BiSeq x = shift(target, t);
        if (flips) {
            const std::int64_t r = (t < 0 ? -t : t) + 2;
            x = flip_at(x, mod(t, 2) == 0 ? r : -r);
        }
        ts.points.push_back(AugPoint::base(std::move(x)));
    }
    for (std::int64_t k = 1; k <= schedule_len; ++k) {
        ts.future.push_back(ScheduleEntry{k, Rat::dyadic(k)});
        ts.past.push_back(ScheduleEntry{k, Rat::dyadic(k)});
    }
    return ts;
}

LimitPseudoOrbit true_orbit_limit(const AugSystem& sys, const AugPoint& x, std::size_t len,
                                  std::int64_t schedule_len) {
    LimitPseudoOrbit lpo;
    AugPoint cur = x;
    for (std::size_t t = 0; t < len; ++t) {
        lpo.points.push_back(cur);
        cur = aug_map(sys, cur);
    }
    for (std::int64_t k = 1; k <= schedule_len; ++k) lpo.schedule.push_back(ScheduleEntry{k, Rat::dyadic(k)});
    return lpo;
}

LimitPseudoOrbit converging_to_extra(const AugSystem& sys, std::int64_t i, std::int64_t k, std::int64_t hop,
                                     std::size_t len) {
    if (k < 2 || hop < 1 || static_cast<std::size_t>(hop) >= len) {
        throw std::invalid_argument("converging_to_extra: need k >= 2 and 1 <= hop < len");
    }
    // right of 0 it is p_k, left of 0 all ones; x_t also carries a flip at t + 2
    const BiSeq z = splice(BiSeq::periodic("1"), 0, "", periodic_point(k), 0);
    LimitPseudoOrbit lpo;
    for (std::int64_t t = 0; t < hop; ++t) lpo.points.push_back(AugPoint::base(flip_at(shift(z, t), t + 2)));
    AugPoint q = AugPoint::extra(i, k, mod(hop, k + 1));
    if (!sys.contains(q)) throw std::invalid_argument("converging_to_extra: extra point outside system");
    while (lpo.points.size() < len) {
        lpo.points.push_back(q);
        q = aug_map(sys, q);
    }
    lpo.schedule.push_back(ScheduleEntry{0, Rat(1)});
    for (std::int64_t e = 1; e <= 30; ++e) lpo.schedule.push_back(ScheduleEntry{hop + e, Rat::dyadic(e)});
    return lpo;
}

}  // namespace nexp
