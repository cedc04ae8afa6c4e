#include "nexp/chain.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace nexp {

namespace {

std::int64_t k_of(const AugPoint& p) { return p.is_base() ? 0 : p.q().k; }

// Edge test d(fu, v) < eps evaluated as: case constant C < eps and, when the
// d_0 term applies, 2^{-r} < eps - C with r the mismatch radius. The least
// admissible r depends only on C, so it is computed once per (k, m) pair.
class EdgeOracle {
public:
    explicit EdgeOracle(Rat eps) : eps_(std::move(eps)) {}

    bool edge(const AugPoint& fu, const BiSeq& pfu, const AugPoint& v, const BiSeq& pv) {
        auto parts = distance_parts(fu, v);
        if (!(parts.constant < eps_)) return false;
        if (!parts.base_term) return true;
        const auto need = min_radius(k_of(fu), k_of(v), parts.constant);
        auto r = mismatch_radius(pfu, pv, 0);
        return !r || *r >= need;
    }

private:
    std::int64_t min_radius(std::int64_t k1, std::int64_t k2, const Rat& constant) {
        auto key = std::minmax(k1, k2);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const Rat gap = eps_ - constant;
        std::int64_t r = 0;
        while (!(Rat::dyadic(r) < gap)) ++r;
        cache_.emplace(key, r);
        return r;
    }

    Rat eps_;
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> cache_;
};

}  // namespace

std::size_t ChainGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& row : edges) total += row.size();
    return total;
}

std::size_t ClassPartition::recurrent_count() const {
    return static_cast<std::size_t>(std::count(recurrent.begin(), recurrent.end(), true));
}

ChainGraph build_chain_graph(const AugSystem& sys, const std::vector<AugPoint>& sample, const Rat& eps,
                             unsigned threads) {
    sys.validate();
    {
        std::unordered_set<std::string> seen;
        for (const auto& p : sample) {
            if (!sys.contains(p)) throw std::invalid_argument("build_chain_graph: point outside system");
            if (!seen.insert(p.text()).second) {
                throw std::invalid_argument("build_chain_graph: duplicate node " + p.text());
            }
        }
    }
    const std::size_t n = sample.size();
    std::vector<BiSeq> proj(n);
    std::vector<AugPoint> image(n);
    std::vector<BiSeq> image_proj(n);
    for (std::size_t i = 0; i < n; ++i) {
        proj[i] = project(sample[i]);
        image[i] = aug_map(sys, sample[i]);
        image_proj[i] = project(image[i]);
    }

    ChainGraph g;
    g.epsilon = eps;
    g.nodes = sample;
    g.edges.assign(n, {});

    auto work = [&](std::size_t lo, std::size_t hi) {
        EdgeOracle oracle(eps);
        for (std::size_t u = lo; u < hi; ++u) {
            for (std::size_t v = 0; v < n; ++v) {
                if (oracle.edge(image[u], image_proj[u], sample[v], proj[v])) {
                    g.edges[u].push_back(static_cast<std::uint32_t>(v));
                }
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n / 64))));
    if (threads == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return g;
}

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const Adjacency& adj) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t unvisited = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (node, next edge)
    std::vector<std::vector<std::uint32_t>> comps;
    std::uint32_t counter = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, next] = call.back();
            if (next < adj[v].size()) {
                const std::uint32_t w = adj[v][next++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::vector<std::uint32_t> comp;
                std::uint32_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != done);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

ClassPartition chain_classes(const ChainGraph& g) {
    ClassPartition p;
    p.epsilon = g.epsilon;
    p.classes = strongly_connected_components(g.edges);
    for (const auto& cls : p.classes) {
        bool rec = cls.size() > 1;
        if (!rec) {
            const auto& row = g.edges[cls.front()];
            rec = std::find(row.begin(), row.end(), cls.front()) != row.end();
        }
        p.recurrent.push_back(rec);
    }
    return p;
}

bool isolation_certificate(const AugSystem& sys, const AugPoint& q, const Rat& eps,
                           const std::vector<AugPoint>& sample) {
    if (!q.is_extra()) throw std::invalid_argument("isolation_certificate: q must be an extra point");
    const Rat bound(BigInt(1), BigInt(q.q().k));
    if (!(eps < bound)) throw std::invalid_argument("isolation_certificate: requires eps < 1/k");
    for (const auto& y : sample) {
        if (y == q) continue;
        if (aug_dist(sys, q, y) < bound) return false;
    }
    return true;
}

std::string edge_list_csv(const ChainGraph& g) {
    std::string out = "u_index,v_index\n";
    for (std::size_t u = 0; u < g.edges.size(); ++u) {
        for (auto v : g.edges[u]) out += std::to_string(u) + "," + std::to_string(v) + "\n";
    }
    return out;
}

}  // namespace nexp
