#include "vaxnet/graph.hpp"

#include <algorithm>
#include <numeric>

namespace vaxnet {

void LabeledDigraph::normalize() {
    std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

InAdjacency::InAdjacency(const LabeledDigraph& g) : offset(g.num_nodes + 1, 0), source(g.edges.size()) {
    for (const auto& [from, to] : g.edges) ++offset[to + 1];
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (const auto& [from, to] : g.edges) source[fill[to]++] = from;
}

UndirectedGraph::UndirectedGraph(std::size_t num_nodes, std::span<const Edge> edges) {
    std::vector<Edge> und;
    und.reserve(edges.size());
    for (auto [a, b] : edges) {
        if (a == b) continue;
        und.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(und.begin(), und.end());
    und.erase(std::unique(und.begin(), und.end()), und.end());

    offset.assign(num_nodes + 1, 0);
    for (auto [a, b] : und) {
        ++offset[a + 1];
        ++offset[b + 1];
    }
    std::partial_sum(offset.begin(), offset.end(), offset.begin());
    neighbor.resize(2 * und.size());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (auto [a, b] : und) {
        neighbor[fill[a]++] = b;
        neighbor[fill[b]++] = a;
    }
    for (std::size_t v = 0; v < num_nodes; ++v)
        std::sort(neighbor.begin() + static_cast<std::ptrdiff_t>(offset[v]),
                  neighbor.begin() + static_cast<std::ptrdiff_t>(offset[v + 1]));
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

std::vector<std::size_t> weak_components(std::size_t num_nodes, std::span<const Edge> edges,
                                         std::size_t* num_components) {
    std::vector<std::size_t> parent(num_nodes);
    std::iota(parent.begin(), parent.end(), 0);
    for (auto [a, b] : edges) {
        std::size_t ra = find_root(parent, a), rb = find_root(parent, b);
        if (ra == rb) continue;
        if (ra < rb) parent[rb] = ra;
        else parent[ra] = rb;
    }
    // Roots are the smallest index of each component, so numbering roots in
    // index order numbers components by their smallest member.
    std::vector<std::size_t> comp(num_nodes), root_id(num_nodes, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t v = 0; v < num_nodes; ++v) {
        const std::size_t r = find_root(parent, v);
        if (root_id[r] == SIZE_MAX) root_id[r] = next++;
        comp[v] = root_id[r];
    }
    if (num_components) *num_components = next;
    return comp;
}

}  // namespace vaxnet
