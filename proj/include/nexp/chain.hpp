#pragma once

#include "nexp/augmented.hpp"
#include "nexp/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nexp {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

// u -> v iff d(f(u), v) < epsilon (strict, as for pseudo-orbit jumps).
struct ChainGraph {
    Rat epsilon;
    std::vector<AugPoint> nodes;
    Adjacency edges;

    std::size_t edge_count() const;
};

struct ClassPartition {
    Rat epsilon;
    // Node indices; each class sorted ascending, classes ordered by least
    // member.
    std::vector<std::vector<std::uint32_t>> classes;
    // Whether the class carries an ε-chain from a member back to itself.
    std::vector<bool> recurrent;

    std::size_t recurrent_count() const;
};

// Rejects duplicate nodes. Rows are evaluated on `threads` workers when
// threads > 1; the result does not depend on the thread count.
ChainGraph build_chain_graph(const AugSystem& sys, const std::vector<AugPoint>& sample, const Rat& eps,
                             unsigned threads = 1);

// Tarjan's algorithm, iterative, O(V + E).
std::vector<std::vector<std::uint32_t>> strongly_connected_components(const Adjacency& adj);

ClassPartition chain_classes(const ChainGraph& g);

// True iff d(q, y) >= 1/k for every y != q in the sample, which keeps every
// ε-chain (ε < 1/k) from leaving the orbit of q. Requires q extra and
// eps < 1/k.
bool isolation_certificate(const AugSystem& sys, const AugPoint& q, const Rat& eps,
                           const std::vector<AugPoint>& sample);

// "u_index,v_index" per line with a header row.
std::string edge_list_csv(const ChainGraph& g);

}  // namespace nexp
