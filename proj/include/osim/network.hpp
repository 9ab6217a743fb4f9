#pragma once

#include <span>
#include <vector>

#include "osim/agents.hpp"
#include "osim/rng.hpp"

namespace osim {

// Static undirected Watts-Strogatz small-world graph over customers.
// Immutable after generation.
class SocialGraph {
public:
    SocialGraph(std::vector<std::vector<int>> adjacency, int mean_degree, double rewire_prob);

    int n_nodes() const { return static_cast<int>(adj_.size()); }
    int mean_degree() const { return k_; }
    double rewire_prob() const { return beta_; }

    std::span<const int> neighbors(int node) const {
        const auto& v = adj_[static_cast<size_t>(node)];
        return {v.data(), v.size()};
    }

    long long edge_count() const { return edges_; }

private:
    std::vector<std::vector<int>> adj_; // sorted neighbor ids per node
    int k_;
    double beta_;
    long long edges_;
};

// Classic single-pass Watts-Strogatz: ring lattice with k nearest neighbors,
// then each lattice edge's far endpoint rewired with probability beta to a
// uniformly random non-self, non-duplicate target (kept as-is when no valid
// target is found within n attempts). Edge count is preserved exactly.
// Throws std::invalid_argument for odd k, k >= n, k < 2 or beta outside [0,1].
SocialGraph generate_watts_strogatz(int n, int k, double beta, SequentialRng& rng);

// Fraction of `node`'s neighbors currently in the AVOIDING mode.
double avoiding_fraction(const SocialGraph& graph, int node, std::span<const Mode> modes);

} // namespace osim
