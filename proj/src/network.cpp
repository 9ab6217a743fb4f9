#include "osim/network.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace osim {

SocialGraph::SocialGraph(std::vector<std::vector<int>> adjacency, int mean_degree,
                         double rewire_prob)
    : adj_(std::move(adjacency)), k_(mean_degree), beta_(rewire_prob) {
    long long deg_sum = 0;
    for (auto& nbrs : adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        deg_sum += static_cast<long long>(nbrs.size());
    }
    edges_ = deg_sum / 2;
}

namespace {

bool has_edge(const std::vector<std::vector<int>>& adj, int a, int b) {
    const auto& v = adj[static_cast<size_t>(a)];
    return std::find(v.begin(), v.end(), b) != v.end();
}

void add_edge(std::vector<std::vector<int>>& adj, int a, int b) {
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
}

void remove_edge(std::vector<std::vector<int>>& adj, int a, int b) {
    auto& va = adj[static_cast<size_t>(a)];
    va.erase(std::find(va.begin(), va.end(), b));
    auto& vb = adj[static_cast<size_t>(b)];
    vb.erase(std::find(vb.begin(), vb.end(), a));
}

} // namespace

SocialGraph generate_watts_strogatz(int n, int k, double beta, SequentialRng& rng) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument("watts-strogatz: k must be even and >= 2");
    if (n <= k)
        throw std::invalid_argument("watts-strogatz: need n > k");
    if (beta < 0.0 || beta > 1.0)
        throw std::invalid_argument("watts-strogatz: beta outside [0,1]");

    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    const int half = k / 2;
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= half; ++j)
            add_edge(adj, i, (i + j) % n);

    // Rewire lane by lane; each original lattice edge is considered once and
    // only its far endpoint moves.
    for (int j = 1; j <= half; ++j) {
        for (int i = 0; i < n; ++i) {
            if (rng.next_double() >= beta) continue;
            const int old_target = (i + j) % n;
            for (int attempt = 0; attempt < n; ++attempt) {
                const int cand = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                if (cand == i || has_edge(adj, i, cand)) continue;
                remove_edge(adj, i, old_target);
                add_edge(adj, i, cand);
                break;
            }
        }
    }

    SocialGraph graph(std::move(adj), k, beta);
    assert(graph.edge_count() == static_cast<long long>(n) * k / 2);
    return graph;
}

double avoiding_fraction(const SocialGraph& graph, int node, std::span<const Mode> modes) {
    const auto nbrs = graph.neighbors(node);
    assert(!nbrs.empty());
    int avoiding = 0;
    for (int j : nbrs)
        if (modes[static_cast<size_t>(j)] == Mode::Avoiding) ++avoiding;
    return static_cast<double>(avoiding) / static_cast<double>(nbrs.size());
}

} // namespace osim
