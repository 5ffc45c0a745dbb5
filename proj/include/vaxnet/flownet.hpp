#pragma once

#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vaxnet/graph.hpp"
#include "vaxnet/timeseries.hpp"

namespace vaxnet {

struct UserTally {
    std::string id;
    long n_pos = 0;
    long n_neg = 0;
    long n_neu = 0;

    long relevant() const { return n_pos + n_neg + n_neu; }
    /// +1, -1 or 0 by the sign of n_pos - n_neg.
    int sign() const { return (n_pos > n_neg) - (n_pos < n_neg); }
    friend bool operator==(const UserTally&, const UserTally&) = default;
};

/// Per-user tallies of relevant labels, sorted by user id.
std::vector<UserTally> user_tallies(std::span<const LabeledTweet> tweets);

using AdjacencyLists = std::map<std::string, std::set<std::string>>;

/// Reads "user_id: id1,id2,..." lines (an empty list after the colon is allowed).
AdjacencyLists read_adjacency_file(const std::string& path);
AdjacencyLists parse_adjacency(std::istream& in, const std::string& source_name = "<stream>");

/// Directed information-flow network. Nodes are sorted by user id; an edge
/// (a, b) means information flows from nodes[a] to nodes[b].
struct FlowNetwork {
    std::vector<UserTally> nodes;
    std::vector<Edge> edges;  ///< sorted, unique, no self-loops

    std::size_t size() const { return nodes.size(); }
    /// Induced subnetwork on `keep` (node indices), renumbered in order.
    FlowNetwork induced(std::span<const NodeId> keep) const;
};

/// Users with at least one relevant tweet become nodes. A -> B exists when B is
/// among followers(A) or A is among friends(B). References to users that are
/// not nodes are ignored.
FlowNetwork build_flow_network(std::span<const UserTally> users, const AdjacencyLists& followers,
                               const AdjacencyLists& friends);

/// Nodes with n_pos != n_neg and the edges among them.
FlowNetwork opinionated(const FlowNetwork& network);

/// Largest weakly connected component; ties go to the component containing the
/// smallest user id. Throws Error on an empty network.
FlowNetwork giant_component(const FlowNetwork& network);

/// Type 0 = positive, 1 = negative. Every node must have a non-zero sign.
LabeledDigraph to_labeled_digraph(const FlowNetwork& opinionated_network);

void write_edges_csv(std::ostream& out, const FlowNetwork& network);
void write_nodes_csv(std::ostream& out, const FlowNetwork& network);

/// Reads the node/edge CSV pair written above.
FlowNetwork read_flow_network(const std::string& nodes_path, const std::string& edges_path);

}  // namespace vaxnet
