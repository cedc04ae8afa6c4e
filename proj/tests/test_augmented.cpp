#include "nexp/augmented.hpp"
#include "nexp/workloads.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nexp;

namespace {

Rat inv(std::int64_t k) { return Rat(BigInt(1), BigInt(k)); }

std::vector<AugPoint> mixed_pool(const AugSystem& sys, std::uint64_t seed) {
    auto pool = construction_sample(sys, 10, 6);
    auto random = random_base_points(seed, 150);
    pool.insert(pool.end(), random.begin(), random.end());
    return deduplicate(std::move(pool));
}

}  // namespace

TEST_CASE("system configuration") {
    AugSystem sys{3, Variant::standard, 64};
    CHECK_NOTHROW(sys.validate());
    CHECK(sys.multiplicity(7) == 2);
    CHECK_THROWS(AugSystem({0, Variant::standard, 64}).validate());
    CHECK_THROWS(AugSystem({2, Variant::standard, 2}).validate());
    AugSystem fe{2, Variant::finite_expansive, 64};
    CHECK(fe.multiplicity(1) == 0);
    CHECK(fe.multiplicity(5) == 4);
    CHECK(parse_variant("finite_expansive") == Variant::finite_expansive);
    CHECK_THROWS(parse_variant("other"));
    CHECK(sys.contains(AugPoint::extra(2, 5, 5)));
    CHECK(!sys.contains(AugPoint::extra(3, 5, 0)));
    CHECK(!sys.contains(AugPoint::extra(1, 5, 6)));
}

TEST_CASE("metric cases") {
    const AugSystem sys{3, Variant::standard, 64};
    for (std::int64_t k = 1; k <= 12; ++k) {
        for (std::int64_t j = 0; j <= k; ++j) CHECK(aug_dist(sys, AugPoint::extra(1, k, j), AugPoint::extra(2, k, j)) == inv(k));
    }
    CHECK(aug_dist(sys, AugPoint::extra(1, 5, 0), AugPoint::base(periodic_point(5))) == inv(5));
    const AugPoint a = AugPoint::extra(1, 2, 0), b = AugPoint::extra(1, 3, 0);
    const Rat d0 = oracle::base_dist(periodic_point(2), periodic_point(3));
    CHECK(d0 == Rat::dyadic(2));
    CHECK(aug_dist(sys, a, b) == inv(2) + inv(3) + d0);
    CHECK(aug_dist(sys, a, b) == Rat::parse("13/12"));
    CHECK(aug_dist(sys, a, a) == Rat(0));
}

TEST_CASE("metric agrees with the case-formula oracle") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto pool = mixed_pool(sys, 7);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int it = 0; it < 20000; ++it) {
        const auto& x = pool[pick(rng)];
        const auto& y = pool[pick(rng)];
        const Rat d = aug_dist(sys, x, y);
        CHECK(d == oracle::aug_dist(x, y));
        CHECK(d == aug_dist(sys, y, x));
        CHECK(d.is_zero() == (x == y));
    }
}

TEST_CASE("triangle inequality over random mixed triples") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto pool = mixed_pool(sys, 9);
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::int64_t failures = 0;
    for (int it = 0; it < 100000; ++it) {
        const auto& x = pool[pick(rng)];
        const auto& y = pool[pick(rng)];
        const auto& z = pool[pick(rng)];
        if (aug_dist(sys, x, z) > aug_dist(sys, x, y) + aug_dist(sys, y, z)) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("map and inverse") {
    const AugSystem sys{3, Variant::standard, 64};
    CHECK(aug_map(sys, AugPoint::extra(1, 2, 2)) == AugPoint::extra(1, 2, 0));
    CHECK(aug_map_inv(sys, AugPoint::extra(1, 2, 0)) == AugPoint::extra(1, 2, 2));
    for (const auto& x : mixed_pool(sys, 11)) {
        CHECK(aug_map_inv(sys, aug_map(sys, x)) == x);
        CHECK(aug_map(sys, aug_map_inv(sys, x)) == x);
        CHECK(aug_iterate(sys, x, 5) == oracle::step(x, 5));
        CHECK(aug_iterate(sys, x, -3) == oracle::step(x, -3));
    }
    for (std::int64_t k = 1; k <= 15; ++k) {
        AugPoint q = AugPoint::extra(1, k, 0);
        std::int64_t len = 0;
        do {
            q = aug_map(sys, q);
            ++len;
        } while (!(q == AugPoint::extra(1, k, 0)));
        CHECK(len == k + 1);
    }
}

TEST_CASE("projection") {
    const AugSystem sys{3, Variant::standard, 64};
    const BiSeq s("0", "1101", "01", 2);
    CHECK(project(AugPoint::base(s)) == s);
    CHECK(project(AugPoint::extra(1, 5, 0)) == periodic_point(5));
    CHECK(project(AugPoint::extra(1, 5, 2)) == shift(periodic_point(5), 2));
    for (std::int64_t i = -10; i <= 10; ++i) CHECK(project(AugPoint::extra(1, 5, 2)).at(i) == oracle::p_k_symbol(5, 2, i));
    CHECK(aug_dist(sys, AugPoint::extra(1, 5, 2), AugPoint::base(shift(periodic_point(5), 2))) == inv(5));
}

TEST_CASE("orbit identity for extra pairs") {
    const AugSystem sys{3, Variant::standard, 64};
    for (std::int64_t k = 3; k <= 6; ++k) {
        for (std::int64_t m = 3; m <= 6; ++m) {
            const AugPoint q = AugPoint::extra(1, k, 1), r = AugPoint::extra(2, m, 3 % (m + 1));
            for (std::int64_t s = -6; s <= 6; ++s) {
                const Rat lhs = aug_dist(sys, aug_iterate(sys, q, s), aug_iterate(sys, r, s));
                const Rat d0 = base_dist(shift(project(q), s), shift(project(r), s));
                CHECK(lhs == inv(k) + inv(m) + d0);
            }
        }
    }
}

TEST_CASE("extra points are isolated at distance 1/k") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto pool = mixed_pool(sys, 12);
    for (const auto& q : pool) {
        if (!q.is_extra()) continue;
        for (const auto& y : pool) {
            if (y == q) continue;
            CHECK(aug_dist(sys, q, y) >= inv(q.q().k));
        }
    }
}

TEST_CASE("reflection conjugates the inverse to the map") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto pool = mixed_pool(sys, 13);
    for (const auto& x : pool) {
        CHECK(reflect_point(reflect_point(x)) == x);
        CHECK(reflect_point(aug_map_inv(sys, x)) == aug_map(sys, reflect_point(x)));
    }
    for (std::size_t a = 0; a < pool.size(); a += 7) {
        for (std::size_t b = 0; b < pool.size(); b += 5) {
            CHECK(aug_dist(sys, reflect_point(pool[a]), reflect_point(pool[b])) == aug_dist(sys, pool[a], pool[b]));
        }
    }
}

TEST_CASE("enumeration counts") {
    const AugSystem sys{3, Variant::standard, 64};
    CHECK(enumerate_extra(sys, 2).size() == 10);
    CHECK(extra_count(sys, 2) == 10);
    CHECK(enumerate_extra(AugSystem{1, Variant::standard, 64}, 5).empty());
    const AugSystem fe{2, Variant::finite_expansive, 64};
    CHECK(enumerate_extra(fe, 3).size() == 11);
    for (std::int64_t k_hi = 1; k_hi <= 20; ++k_hi) {
        std::int64_t expected = 0;
        for (std::int64_t k = 1; k <= k_hi; ++k) expected += sys.multiplicity(k) * (k + 1);
        CHECK(static_cast<std::int64_t>(enumerate_extra(sys, k_hi).size()) == expected);
        CHECK(extra_count(sys, k_hi) == expected);
        CHECK(static_cast<std::int64_t>(enumerate_extra(fe, k_hi).size()) == extra_count(fe, k_hi));
    }
    const auto list = enumerate_extra(sys, 6);
    CHECK(deduplicate(list).size() == list.size());
    CHECK_THROWS(enumerate_extra(sys, 65));
}

TEST_CASE("text round trip") {
    for (const auto& p : {AugPoint::extra(2, 7, 3), AugPoint::base(BiSeq("01", "1", "0", -4))}) {
        CHECK(AugPoint::parse_text(p.text()) == p);
    }
    CHECK_THROWS(AugPoint::parse_text("extra:1,2"));
    CHECK_THROWS(AugPoint::parse_text("point:1"));
}
