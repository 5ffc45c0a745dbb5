#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "vaxnet/graph.hpp"

namespace vaxnet {

/// How the data-parallel kernels run. `serial` is the reference path kept for
/// testing; both produce identical results for the same seed.
enum class Execution { serial, parallel };

struct MixingMatrix {
    int num_types = 0;
    std::vector<double> e;  ///< row-major num_types x num_types, fraction of edges i -> j
    std::vector<double> a;  ///< row sums
    std::vector<double> b;  ///< column sums

    double operator()(int i, int j) const { return e[static_cast<std::size_t>(i * num_types + j)]; }
};

/// Throws Error when there are no edges.
MixingMatrix mixing_matrix(const LabeledDigraph& g);

struct Assortativity {
    double r = 0.0;
    /// Set when sum_i a_i b_i == 1 (a single type on every edge end); r is then
    /// reported as 1.
    bool degenerate = false;
};

/// Newman's assortativity for a directed graph with discrete node types:
///     r = (sum_i e_ii - sum_i a_i b_i) / (1 - sum_i a_i b_i).
/// r can fall below -1 only in degenerate directed cases; it is not clamped.
/// Throws Error when the graph has no edges.
Assortativity assortativity(const LabeledDigraph& g);
Assortativity assortativity(const MixingMatrix& m);

struct NullDistribution {
    std::vector<double> replicates;
    double mean = 0.0;
    double p025 = 0.0;  ///< nearest-rank percentiles
    double p975 = 0.0;
    double max = 0.0;
    std::uint64_t seed = 0;
};

/// Nearest-rank percentile (pct in (0, 100]) of a non-empty sample.
double nearest_rank_percentile(std::span<const double> values, double pct);

/// Label bootstrap: replicate k gives every node a type drawn uniformly with
/// replacement from the observed node types, using the stream (seed, k), and
/// records the assortativity of the relabelled graph.
NullDistribution bootstrap_null(const LabeledDigraph& g, std::size_t iterations, std::uint64_t seed,
                                Execution exec = Execution::parallel);

/// Types for bootstrap replicate `replicate` (shared by bootstrap_null and
/// in_fraction_test).
std::vector<std::uint8_t> bootstrap_types(std::span<const std::uint8_t> types, std::uint64_t seed,
                                          std::uint64_t replicate);

struct InFraction {
    NodeId node;
    double f;
};

/// Share of each node's in-edges that come from a node of the same type.
/// Nodes without in-edges are omitted. Sorted by node.
std::vector<InFraction> in_fraction(const LabeledDigraph& g);

struct InFractionTest {
    double original_mean = 0.0;
    std::vector<double> p_values;  ///< one per replicate
    double fraction_significant = 0.0;  ///< share of replicates with p < 0.05
};

/// For each bootstrap replicate, pairs every node's observed f with its f under
/// the replicate labelling and runs the one-sided Wilcoxon signed-rank test
/// (observed > replicate). Throws Error if fewer than two nodes have in-edges.
InFractionTest in_fraction_test(const LabeledDigraph& g, std::size_t iterations, std::uint64_t seed,
                                Execution exec = Execution::parallel);

/// Community id per node, numbered 0.. in order of each community's smallest node.
using Partition = std::vector<std::size_t>;

/// Newman modularity (resolution 1) of an undirected simple graph.
double modularity(const UndirectedGraph& g, std::span<const std::size_t> partition);

/// Multi-level greedy modularity optimisation (Louvain). Node visiting order in
/// each local-moving pass is a seeded shuffle, so results are reproducible.
Partition detect_communities(const UndirectedGraph& g, std::uint64_t seed);

enum class Direction { more_negative, more_positive, none };
std::string_view to_string(Direction d);

struct CommunityStats {
    std::size_t id = 0;
    std::size_t size = 0;
    std::size_t n_neg = 0;
    double p_neg = 0.0;
    bool tested = false;  ///< false when below the size threshold
    double fisher_p = 1.0;
    Direction direction = Direction::none;
};

struct CommunityReport {
    double global_p_neg = 0.0;
    std::vector<CommunityStats> communities;  ///< every community, tested or not
};

/// `negative[v]` marks negative nodes. Communities with size >=
/// min_size_fraction * N are tested with a two-sided Fisher exact test on
/// [[neg in, pos in], [neg out, pos out]]; direction compares p(-) inside to the
/// global p(-).
CommunityReport community_enrichment(std::span<const std::size_t> partition,
                                     std::span<const std::uint8_t> negative,
                                     double min_size_fraction = 0.01);

void write_null_distribution_csv(std::ostream& out, const NullDistribution& null);
void write_communities_csv(std::ostream& out, const CommunityReport& report);

}  // namespace vaxnet
