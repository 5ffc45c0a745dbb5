#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vaxnet {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Directed graph whose nodes carry a small integer type (0 .. num_types-1).
/// Edges are kept sorted and unique; no self-loops.
struct LabeledDigraph {
    std::size_t num_nodes = 0;
    int num_types = 2;
    std::vector<std::uint8_t> type;  ///< per node
    std::vector<Edge> edges;

    /// Sorts, deduplicates and drops self-loops.
    void normalize();
};

/// Compressed in-adjacency: sources of the edges entering each node.
struct InAdjacency {
    std::vector<std::size_t> offset;  ///< size num_nodes + 1
    std::vector<NodeId> source;

    explicit InAdjacency(const LabeledDigraph& g);
    std::span<const NodeId> operator[](NodeId v) const {
        return {source.data() + offset[v], offset[v + 1] - offset[v]};
    }
    std::size_t degree(NodeId v) const { return offset[v + 1] - offset[v]; }
};

/// Undirected simple graph in CSR form, built from a directed edge list by
/// dropping direction and duplicates.
struct UndirectedGraph {
    std::vector<std::size_t> offset;
    std::vector<NodeId> neighbor;

    UndirectedGraph() = default;
    UndirectedGraph(std::size_t num_nodes, std::span<const Edge> edges);

    std::size_t num_nodes() const { return offset.empty() ? 0 : offset.size() - 1; }
    std::size_t num_edges() const { return neighbor.size() / 2; }
    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbor.data() + offset[v], offset[v + 1] - offset[v]};
    }
    std::size_t degree(NodeId v) const { return offset[v + 1] - offset[v]; }
};

/// Weakly connected component id per node, numbered in order of each
/// component's smallest node index.
std::vector<std::size_t> weak_components(std::size_t num_nodes, std::span<const Edge> edges,
                                         std::size_t* num_components = nullptr);

}  // namespace vaxnet
