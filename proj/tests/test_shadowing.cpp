#include "nexp/expansivity.hpp"
#include "nexp/json_io.hpp"
#include "nexp/shadowing.hpp"
#include "nexp/workloads.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nexp;

namespace {

Rat inv(std::int64_t k) { return Rat(BigInt(1), BigInt(k)); }

std::vector<AugPoint> orbit(const AugSystem& sys, const AugPoint& x, std::size_t len) {
    std::vector<AugPoint> out{x};
    while (out.size() < len) out.push_back(aug_map(sys, out.back()));
    return out;
}

// worst d(f^t y, x_t) over the list, by the oracle metric
Rat oracle_worst(const std::vector<AugPoint>& points, const AugPoint& y, std::int64_t from = 0) {
    Rat worst(0);
    for (std::int64_t t = from; t < static_cast<std::int64_t>(points.size()); ++t) {
        worst = max(worst, oracle::aug_dist(oracle::step(y, t), points[static_cast<std::size_t>(t)]));
    }
    return worst;
}

bool oracle_jumps_below(const std::vector<AugPoint>& points, const Rat& delta) {
    for (std::size_t t = 0; t + 1 < points.size(); ++t) {
        if (!(oracle::aug_dist(oracle::step(points[t], 1), points[t + 1]) < delta)) return false;
    }
    return true;
}

const BiSeq switch_target = splice(periodic_point(2), 0, "", BiSeq::periodic("011"), 0);

}  // namespace

TEST_CASE("shadow modulus") {
    for (std::int64_t den = 2; den <= 200; ++den) {
        const Rat eps = inv(den);
        std::int64_t level = 0;
        while (!(Rat::dyadic(level) < eps / Rat(2))) ++level;
        const Rat bound = min(eps / Rat(2), Rat::dyadic(level) / Rat(3));
        std::int64_t m = 1;
        while (!(inv(m) < bound)) ++m;
        const auto mod = shadow_modulus(eps);
        CHECK(mod.base_level == level);
        CHECK(mod.m == m);
        CHECK(mod.delta == inv(m));
    }
    CHECK(shadow_modulus(Rat::parse("1/4")).m == 49);
    CHECK(shadow_modulus(Rat::parse("1/16")).m == 193);
    CHECK(shadow_modulus(Rat::parse("1/16")).base_level == 6);
    CHECK(shadow_modulus(Rat::parse("1/32")).m == 385);
    CHECK(shadow_modulus(Rat::parse("1/64")).m == 769);
    CHECK_THROWS(shadow_modulus(Rat(0)));
    CHECK(specification_spacing(Rat::parse("1/8")) == 7);
    CHECK(specification_spacing(Rat::parse("1/5")) == 7);
    CHECK(specification_spacing(Rat(1)) == 1);
}

TEST_CASE("gaps and validation") {
    const AugSystem sys{3, Variant::standard, 100};
    const auto pts = orbit(sys, AugPoint::extra(1, 4, 0), 6);
    for (const auto& g : gaps(sys, pts)) CHECK(g.is_zero());
    const std::vector<AugPoint> jump{AugPoint::extra(1, 4, 0), AugPoint::extra(2, 4, 1)};
    CHECK(gaps(sys, jump).front() == inv(4));
    try {
        validate_pseudo_orbit(sys, PseudoOrbit{jump, inv(4)});
        FAIL("expected a gap violation");
    } catch (const GapViolation& e) {
        CHECK(e.index() == 0);
    }
    CHECK_NOTHROW(validate_pseudo_orbit(sys, PseudoOrbit{jump, inv(3)}));
    LimitPseudoOrbit bad{pts, {{2, inv(4)}, {1, inv(8)}}};
    CHECK_THROWS_AS(validate_limit_pseudo_orbit(sys, bad), std::invalid_argument);
}

TEST_CASE("aug_shadow on exact orbits") {
    const AugSystem sys{3, Variant::standard, 100};
    const AugPoint x = AugPoint::base(BiSeq("10", "0111", "001", -3));
    const auto r = aug_shadow(sys, PseudoOrbit{orbit(sys, x, 40), Rat::dyadic(6)}, Rat::parse("1/4"));
    CHECK(!r.self_shadow);
    CHECK(oracle_worst(orbit(sys, x, 40), r.point) <= Rat::parse("1/4"));

    const auto self = aug_shadow(sys, PseudoOrbit{orbit(sys, AugPoint::extra(1, 5, 0), 30), Rat::dyadic(6)},
                                 Rat::parse("1/4"));
    CHECK(self.self_shadow);
    CHECK(self.point == AugPoint::extra(1, 5, 0));
    CHECK(self.report.worst_distance.is_zero());
}

TEST_CASE("aug_shadow rejects loose deltas and broken small extra orbits") {
    const AugSystem sys{3, Variant::standard, 100};
    const auto pts = orbit(sys, AugPoint::extra(1, 5, 0), 10);
    CHECK_THROWS_AS(aug_shadow(sys, PseudoOrbit{pts, Rat::parse("1/16")}, Rat::parse("1/4")), std::invalid_argument);
    // Extra(1,60,0) and p_60 are 1/60 apart, below delta = 1/49, but k = 60 >= m
    std::vector<AugPoint> hop = orbit(sys, AugPoint::base(shift(periodic_point(60), 60)), 2);
    hop.back() = AugPoint::extra(1, 60, 0);
    CHECK_NOTHROW(aug_shadow(sys, PseudoOrbit{hop, inv(49)}, Rat::parse("1/4")));
    // at eps = 1/8 the modulus is 1/97 and the same hop is no longer a valid jump
    CHECK(shadow_modulus(Rat::parse("1/8")).m == 97);
    CHECK_THROWS_AS(aug_shadow(sys, PseudoOrbit{hop, inv(97)}, Rat::parse("1/8")), GapViolation);
}

TEST_CASE("aug_shadow over random pseudo-orbits") {
    const AugSystem sys{3, Variant::standard, 100};
    std::mt19937_64 rng(2024);
    const Rat eps = Rat::parse("1/4");
    std::size_t self_shadows = 0, hops = 0;
    for (int it = 0; it < 120; ++it) {
        const auto po = random_pseudo_orbit(sys, rng);
        CHECK(po.points.size() == 100);
        CHECK(oracle_jumps_below(po.points, po.delta));
        const auto r = aug_shadow(sys, po, eps);
        CHECK(r.report.ok);
        CHECK(oracle_worst(po.points, r.point) <= eps);
        if (r.self_shadow) ++self_shadows;
        if (std::any_of(po.points.begin(), po.points.end(), [](const AugPoint& p) { return p.is_extra(); }) &&
            !r.self_shadow) {
            ++hops;
        }
    }
    CHECK(self_shadows > 0);
    CHECK(hops > 0);
}

TEST_CASE("verify_shadow") {
    const AugSystem sys{3, Variant::standard, 100};
    const AugPoint x = AugPoint::base(BiSeq("1", "0110", "01", 0));
    const auto pts = orbit(sys, x, 12);
    CHECK(verify_shadow(sys, pts, x, Rat(0)).ok);
    const AugPoint off = AugPoint::base(flip_at(x.seq(), 0));
    const auto miss = verify_shadow(sys, pts, off, Rat::parse("1/2"));
    CHECK(!miss.ok);
    CHECK(miss.worst_index == 0);
    CHECK(miss.worst_distance == Rat(1));
    CHECK(verify_shadow(sys, pts, off, Rat(1)).ok);
}

TEST_CASE("specification shadowing") {
    const AugSystem sys{3, Variant::standard, 100};
    const AugPoint zeros = AugPoint::base(BiSeq::periodic("0"));
    const AugPoint ones = AugPoint::base(BiSeq::periodic("1"));
    const AugPoint mixed = AugPoint::base(BiSeq("01", "1101", "0011", 1));
    SUBCASE("one interval") {
        const Specification spec{{{0, 5}}, {mixed}};
        const auto r = spec_shadow(sys, spec, Rat::parse("1/8"));
        for (std::int64_t t = 0; t <= 5; ++t) {
            CHECK(oracle::aug_dist(oracle::step(r.point, t), oracle::step(mixed, t)) < r.guaranteed);
        }
    }
    SUBCASE("three intervals") {
        const Rat eps = Rat::parse("1/8");
        const std::int64_t gap = specification_spacing(eps);
        const Specification spec{{{-4, -1}, {-1 + gap, 3 + gap}, {3 + 2 * gap, 6 + 2 * gap}}, {zeros, mixed, ones}};
        const auto r = spec_shadow(sys, spec, eps);
        CHECK(r.spacing == 7);
        CHECK(r.guaranteed <= eps);
        for (std::size_t i = 0; i < spec.intervals.size(); ++i) {
            for (std::int64_t t = spec.intervals[i].a; t <= spec.intervals[i].b; ++t) {
                const AugPoint target = oracle::step(spec.starts[i], t - spec.intervals[i].a);
                CHECK(oracle::aug_dist(oracle::step(r.point, t), target) < eps);
            }
        }
    }
    CHECK_THROWS(spec_shadow(sys, Specification{{{0, 2}, {4, 6}}, {zeros, ones}}, Rat::parse("1/8")));
    CHECK_THROWS(spec_shadow(sys, Specification{{{0, 2}}, {AugPoint::extra(1, 3, 0)}}, Rat::parse("1/8")));
    CHECK_THROWS(spec_shadow(sys, Specification{{{0, 2}}, {}}, Rat::parse("1/8")));
}

TEST_CASE("decay report") {
    const AugSystem sys{3, Variant::standard, 100};
    const AugPoint x = AugPoint::base(BiSeq::periodic("0"));
    std::vector<AugPoint> pts;
    for (std::int64_t t = 0; t < 20; ++t) pts.push_back(AugPoint::base(flip_at(BiSeq::periodic("0"), t < 10 ? 0 : 40)));
    const auto decay = decay_report(sys, pts, x, {Rat::parse("1/2"), Rat::parse("1/8")}, 5);
    REQUIRE(decay.size() == 2);
    CHECK(decay[0].index == 10);
    CHECK(decay[1].index == 10);
    CHECK(!decay_report(sys, pts, x, {Rat::parse("1/8")}, 11).front().index);
}

TEST_CASE("limit shadowing of a true orbit") {
    const AugSystem sys{3, Variant::standard, 100};
    const AugPoint x = AugPoint::base(BiSeq("1", "011", "0011", 0));
    const auto lpo = true_orbit_limit(sys, x, 256);
    const auto r = limit_shadow(sys, lpo);
    CHECK(r.stages.size() >= 3);
    CHECK(stable_member(sys, r.point, x));
    for (const auto& e : r.decay) CHECK(e.index.has_value());
    CHECK(oracle_worst(lpo.points, r.point, 128) < Rat::dyadic(20));
}

TEST_CASE("limit shadowing of a switching pseudo-orbit") {
    const AugSystem sys{3, Variant::standard, 64};
    const BiSeq a = BiSeq::periodic("0011"), b = BiSeq::periodic("011");
    const auto lpo = switching_limit_pseudo_orbit(a, b, 11);
    CHECK(lpo.points.size() == 2048);
    CHECK_NOTHROW(validate_limit_pseudo_orbit(sys, lpo));
    LimitShadowOptions opt;
    for (std::int64_t e = 1; e <= 5; ++e) opt.thresholds.push_back(Rat::dyadic(e));
    const auto r = limit_shadow(sys, lpo, opt);
    for (const auto& e : r.decay) {
        REQUIRE(e.index.has_value());
        CHECK(oracle_worst(lpo.points, r.point, *e.index) < e.threshold);
    }
    for (const auto& s : r.stages) CHECK(s.in_local_stable);
    CHECK(std::find(r.candidates.begin(), r.candidates.end(), r.point) != r.candidates.end());
}

TEST_CASE("limit shadowing converges onto an extra orbit") {
    const AugSystem sys{3, Variant::standard, 64};
    const std::int64_t hop = 40;
    const auto lpo = converging_to_extra(sys, 2, 5, hop, 256);
    CHECK_NOTHROW(validate_limit_pseudo_orbit(sys, lpo));
    LimitShadowOptions opt;
    opt.thresholds = {Rat::parse("1/2"), Rat::parse("1/8"), Rat::parse("1/32")};
    const auto r = limit_shadow(sys, lpo, opt);
    REQUIRE(r.point.is_extra());
    CHECK(r.point.q().i == 2);
    CHECK(r.point.q().k == 5);
    CHECK(aug_iterate(sys, r.point, hop) == lpo.points[hop]);
}

TEST_CASE("past limit shadowing mirrors the future engine") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto forward = switching_limit_pseudo_orbit(BiSeq::periodic("0011"), BiSeq::periodic("011"), 11);
    LimitShadowOptions opt;
    opt.thresholds = {Rat::parse("1/2"), Rat::parse("1/4"), Rat::parse("1/8")};
    const auto fr = limit_shadow(sys, forward, opt);

    // x_{-i} = reflect(forward x_i): f^{-1}-jumps equal the forward f-jumps
    LimitPseudoOrbit backward{{}, forward.schedule};
    for (const auto& p : forward.points) backward.points.push_back(reflect_point(p));
    const auto br = limit_shadow_past(sys, backward, opt);
    CHECK(br.point == reflect_point(fr.point));
    for (std::size_t e = 0; e < opt.thresholds.size(); ++e) {
        REQUIRE(br.decay[e].index.has_value());
        for (std::int64_t i = *br.decay[e].index; i < static_cast<std::int64_t>(backward.points.size()); ++i) {
            CHECK(oracle::aug_dist(oracle::step(br.point, -i), backward.points[static_cast<std::size_t>(i)]) <
                  opt.thresholds[e]);
        }
    }
}

TEST_CASE("two-sided limit shadowing") {
    const AugSystem sys{3, Variant::standard, 64};
    LimitShadowOptions opt;
    opt.thresholds = {Rat::parse("1/2"), Rat::parse("1/4"), Rat::parse("1/8"), Rat::parse("1/16")};
    SUBCASE("true orbit") {
        const auto ts = perturbed_two_sided(switch_target, 128, false);
        const auto r = two_sided_limit_shadow(sys, ts, opt);
        CHECK(r.point == AugPoint::base(switch_target));
        CHECK(r.past_unstable);
        CHECK(r.future_stable);
    }
    SUBCASE("perturbed switching orbit") {
        const auto ts = perturbed_two_sided(switch_target, 128);
        CHECK_NOTHROW(validate_two_sided(sys, ts));
        const auto r = two_sided_limit_shadow(sys, ts, opt);
        CHECK(r.glue_report.ok);
        CHECK(r.past_unstable);
        CHECK(r.future_stable);
        CHECK(r.glue_index < 128);
        CHECK(r.eps == min(r.eps_past, r.eps_future));
        for (std::size_t e = 0; e < opt.thresholds.size(); ++e) {
            REQUIRE(r.future_decay[e].index.has_value());
            REQUIRE(r.past_decay[e].index.has_value());
            for (std::int64_t t = *r.future_decay[e].index; t <= 128; ++t) {
                CHECK(oracle::aug_dist(oracle::step(r.point, t), ts.at(t)) < opt.thresholds[e]);
            }
            for (std::int64_t t = *r.past_decay[e].index; t <= 128; ++t) {
                CHECK(oracle::aug_dist(oracle::step(r.point, -t), ts.at(-t)) < opt.thresholds[e]);
            }
        }
    }
    SUBCASE("one extra orbit") {
        TwoSidedLimitPseudoOrbit ts;
        ts.half_width = 64;
        for (std::int64_t t = -64; t <= 64; ++t) ts.points.push_back(aug_iterate(sys, AugPoint::extra(1, 6, 0), t));
        for (std::int64_t k = 1; k <= 20; ++k) {
            ts.future.push_back({k, Rat::dyadic(k)});
            ts.past.push_back({k, Rat::dyadic(k)});
        }
        const auto r = two_sided_limit_shadow(sys, ts, opt);
        CHECK(r.point == AugPoint::extra(1, 6, 0));
    }
    SUBCASE("window too short") {
        const auto ts = perturbed_two_sided(switch_target, 8);
        CHECK_THROWS_AS(two_sided_limit_shadow(sys, ts, opt), LimitShadowFailure);
    }
}

TEST_CASE("JSON round trips") {
    const AugSystem sys{3, Variant::finite_expansive, 40};
    const Json js = sys;
    const auto back = js.get<AugSystem>();
    CHECK(back.n == 3);
    CHECK(back.variant == Variant::finite_expansive);
    CHECK(back.k_max == 40);

    for (const auto& p : {AugPoint::extra(2, 7, 3), AugPoint::base(BiSeq("01", "1", "0", -4))}) {
        CHECK(Json(p).get<AugPoint>() == p);
    }
    CHECK(Json(Rat::parse("6/8")).get<std::string>() == "3/4");

    std::mt19937_64 rng(5);
    const AugSystem big{3, Variant::standard, 100};
    const auto po = random_pseudo_orbit(big, rng);
    const auto po_back = Json(po).get<PseudoOrbit>();
    CHECK(po_back.delta == po.delta);
    CHECK(po_back.points == po.points);

    const auto lpo = converging_to_extra(big, 1, 4, 10, 40);
    const auto lpo_back = Json(lpo).get<LimitPseudoOrbit>();
    CHECK(lpo_back.points == lpo.points);
    REQUIRE(lpo_back.schedule.size() == lpo.schedule.size());
    CHECK(lpo_back.schedule.back().bound == lpo.schedule.back().bound);

    const auto ts = perturbed_two_sided(switch_target, 16);
    const auto ts_back = Json(ts).get<TwoSidedLimitPseudoOrbit>();
    CHECK(ts_back.half_width == 16);
    CHECK(ts_back.points == ts.points);
    CHECK(ts_back.past.size() == ts.past.size());

    CHECK_THROWS(Json::parse(R"({"type":"extra","i":1})").get<AugPoint>());
    CHECK_THROWS(Json::parse(R"("1/0")").get<Rat>());
}
