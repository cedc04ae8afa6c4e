#include "nexp/chain.hpp"
#include "nexp/workloads.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nexp;

namespace {

Adjacency random_graph(std::mt19937_64& rng, std::size_t nodes, double density) {
    Adjacency adj(nodes);
    std::bernoulli_distribution edge(density);
    for (std::size_t u = 0; u < nodes; ++u) {
        for (std::size_t v = 0; v < nodes; ++v) {
            if (edge(rng)) adj[u].push_back(static_cast<std::uint32_t>(v));
        }
    }
    return adj;
}

}  // namespace

TEST_CASE("strongly connected components match the transitive closure") {
    std::mt19937_64 rng(101);
    for (int it = 0; it < 60; ++it) {
        const std::size_t nodes = 1 + rng() % 120;
        const double density = std::uniform_real_distribution<double>(0.0, 3.0 / static_cast<double>(nodes))(rng);
        const auto adj = random_graph(rng, nodes, density);
        CHECK(strongly_connected_components(adj) == oracle::closure_classes(adj));
    }
    CHECK(strongly_connected_components({}).empty());
    const Adjacency cycle{{1}, {2}, {0}, {3}};
    const auto comps = strongly_connected_components(cycle);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(comps[1] == std::vector<std::uint32_t>{3});
}

TEST_CASE("long path does not overflow the stack") {
    Adjacency path(200000);
    for (std::uint32_t u = 0; u + 1 < path.size(); ++u) path[u].push_back(u + 1);
    path.back().push_back(0);
    const auto comps = strongly_connected_components(path);
    REQUIRE(comps.size() == 1);
    CHECK(comps.front().size() == path.size());
}

TEST_CASE("chain graph edges follow the strict jump rule") {
    const AugSystem sys{3, Variant::standard, 64};
    auto sample = construction_sample(sys, 6, 5);
    const auto random = random_base_points(4, 40);
    sample.insert(sample.end(), random.begin(), random.end());
    sample = deduplicate(std::move(sample));
    for (const Rat& eps : {Rat::parse("1/8"), Rat::parse("1/24"), Rat::parse("1/2")}) {
        const auto g = build_chain_graph(sys, sample, eps);
        for (std::size_t u = 0; u < sample.size(); ++u) {
            std::vector<std::uint32_t> expected;
            for (std::size_t v = 0; v < sample.size(); ++v) {
                if (oracle::aug_dist(oracle::step(sample[u], 1), sample[v]) < eps) expected.push_back(static_cast<std::uint32_t>(v));
            }
            CHECK(g.edges[u] == expected);
        }
        const auto threaded = build_chain_graph(sys, sample, eps, 4);
        CHECK(threaded.edges == g.edges);
    }
    sample.push_back(sample.front());
    CHECK_THROWS_AS(build_chain_graph(sys, sample, Rat::parse("1/8")), std::invalid_argument);
}

TEST_CASE("extra orbits form isolated recurrent classes") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto sample = construction_sample(sys, 12, 12);
    const Rat eps = Rat::parse("1/24");
    const auto g = build_chain_graph(sys, sample, eps);
    const auto part = chain_classes(g);
    std::size_t extra_classes = 0;
    for (std::size_t c = 0; c < part.classes.size(); ++c) {
        const auto& cls = part.classes[c];
        const AugPoint& first = g.nodes[cls.front()];
        if (!first.is_extra()) continue;
        ++extra_classes;
        CHECK(part.recurrent[c]);
        CHECK(cls.size() == static_cast<std::size_t>(first.q().k + 1));
        for (auto v : cls) {
            CHECK(g.nodes[v].is_extra());
            CHECK(g.nodes[v].q().i == first.q().i);
            CHECK(g.nodes[v].q().k == first.q().k);
        }
        CHECK(isolation_certificate(sys, first, eps, sample));
    }
    CHECK(extra_classes == 24);
    CHECK(part.recurrent_count() == part.classes.size());
}

TEST_CASE("recurrence needs a cycle") {
    ChainGraph g;
    g.epsilon = Rat::parse("1/4");
    g.nodes = {AugPoint::extra(1, 1, 0), AugPoint::extra(1, 1, 1), AugPoint::extra(1, 2, 0)};
    g.edges = {{1}, {}, {2}};
    const auto part = chain_classes(g);
    REQUIRE(part.classes.size() == 3);
    CHECK(part.recurrent == std::vector<bool>{false, false, true});
    CHECK(part.recurrent_count() == 1);
    CHECK(edge_list_csv(g) == "u_index,v_index\n0,1\n2,2\n");
}

TEST_CASE("isolation certificate preconditions") {
    const AugSystem sys{3, Variant::standard, 64};
    const auto sample = construction_sample(sys, 6, 6);
    CHECK_THROWS(isolation_certificate(sys, AugPoint::base(periodic_point(3)), Rat::parse("1/8"), sample));
    CHECK_THROWS(isolation_certificate(sys, AugPoint::extra(1, 4, 0), Rat::parse("1/4"), sample));
    CHECK(isolation_certificate(sys, AugPoint::extra(1, 4, 0), Rat::parse("1/5"), sample));
}
