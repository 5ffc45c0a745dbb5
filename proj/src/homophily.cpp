#include "vaxnet/homophily.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vaxnet/error.hpp"
#include "vaxnet/random.hpp"
#include "vaxnet/stats.hpp"
#include "vaxnet/timeseries.hpp"

namespace vaxnet {

// ------------------------------------------------------------- Assortativity

namespace {

// Edge counts per (type, type) pair, row-major.
std::vector<std::size_t> type_pair_counts(std::span<const Edge> edges, std::span<const std::uint8_t> type,
                                          int num_types) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_types * num_types), 0);
    for (auto [from, to] : edges) ++counts[static_cast<std::size_t>(type[from] * num_types + type[to])];
    return counts;
}

Assortativity assortativity_from_counts(std::span<const std::size_t> counts, int k) {
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw Error("assortativity: graph has no edges");
    const double inv = 1.0 / static_cast<double>(total);
    double trace = 0.0, ab = 0.0;
    std::size_t ab_counts = 0;
    for (int i = 0; i < k; ++i) {
        std::size_t row = 0, col = 0;
        for (int j = 0; j < k; ++j) {
            row += counts[static_cast<std::size_t>(i * k + j)];
            col += counts[static_cast<std::size_t>(j * k + i)];
        }
        trace += static_cast<double>(counts[static_cast<std::size_t>(i * k + i)]);
        ab += static_cast<double>(row) * static_cast<double>(col);
        ab_counts += row * col;
    }
    // Decided on integers: the scaled sum can round to just below 1.
    if (ab_counts == total * total) return {1.0, true};
    trace *= inv;
    ab *= inv * inv;
    return {(trace - ab) / (1.0 - ab), false};
}

}  // namespace

MixingMatrix mixing_matrix(const LabeledDigraph& g) {
    if (g.edges.empty()) throw Error("mixing_matrix: graph has no edges");
    const int k = g.num_types;
    const auto counts = type_pair_counts(g.edges, g.type, k);
    MixingMatrix m;
    m.num_types = k;
    m.e.resize(counts.size());
    m.a.assign(static_cast<std::size_t>(k), 0.0);
    m.b.assign(static_cast<std::size_t>(k), 0.0);
    const double total = static_cast<double>(g.edges.size());
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double v = static_cast<double>(counts[static_cast<std::size_t>(i * k + j)]) / total;
            m.e[static_cast<std::size_t>(i * k + j)] = v;
            m.a[static_cast<std::size_t>(i)] += v;
            m.b[static_cast<std::size_t>(j)] += v;
        }
    }
    return m;
}

Assortativity assortativity(const MixingMatrix& m) {
    double trace = 0.0, ab = 0.0;
    for (int i = 0; i < m.num_types; ++i) {
        trace += m(i, i);
        ab += m.a[static_cast<std::size_t>(i)] * m.b[static_cast<std::size_t>(i)];
    }
    if (ab >= 1.0) return {1.0, true};
    return {(trace - ab) / (1.0 - ab), false};
}

Assortativity assortativity(const LabeledDigraph& g) {
    return assortativity_from_counts(type_pair_counts(g.edges, g.type, g.num_types), g.num_types);
}

// ----------------------------------------------------------------- Bootstrap

double nearest_rank_percentile(std::span<const double> values, double pct) {
    if (values.empty()) throw Error("nearest_rank_percentile: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

namespace {

// Draw from the sorted multiset so the result ignores which node held which label.
std::vector<std::uint8_t> sorted_pool(std::span<const std::uint8_t> types) {
    std::vector<std::uint8_t> pool(types.begin(), types.end());
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<std::uint8_t> draw_types(std::span<const std::uint8_t> pool, std::uint64_t seed, std::uint64_t replicate) {
    RandomStream rng(seed, {replicate});
    std::vector<std::uint8_t> out(pool.size());
    for (auto& t : out) t = pool[rng.below(pool.size())];
    return out;
}

}  // namespace

std::vector<std::uint8_t> bootstrap_types(std::span<const std::uint8_t> types, std::uint64_t seed,
                                          std::uint64_t replicate) {
    return draw_types(sorted_pool(types), seed, replicate);
}

NullDistribution bootstrap_null(const LabeledDigraph& g, std::size_t iterations, std::uint64_t seed,
                                Execution exec) {
    if (iterations == 0) throw Error("bootstrap_null: iterations must be >= 1");
    if (g.edges.empty()) throw Error("bootstrap_null: graph has no edges");

    NullDistribution null;
    null.seed = seed;
    null.replicates.resize(iterations);
    const auto n = static_cast<std::int64_t>(iterations);

    const auto pool = sorted_pool(g.type);
    auto replicate = [&](std::int64_t k) {
        const auto types = draw_types(pool, seed, static_cast<std::uint64_t>(k));
        null.replicates[static_cast<std::size_t>(k)] =
            assortativity_from_counts(type_pair_counts(g.edges, types, g.num_types), g.num_types).r;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t k = 0; k < n; ++k) replicate(k);
    } else {
        for (std::int64_t k = 0; k < n; ++k) replicate(k);
    }

    // Summaries are reduced serially in index order so both paths agree bit for bit.
    double sum = 0.0;
    for (double r : null.replicates) sum += r;
    null.mean = sum / static_cast<double>(iterations);
    null.p025 = nearest_rank_percentile(null.replicates, 2.5);
    null.p975 = nearest_rank_percentile(null.replicates, 97.5);
    null.max = *std::max_element(null.replicates.begin(), null.replicates.end());
    return null;
}

// --------------------------------------------------------------- In-fraction

namespace {

std::vector<InFraction> in_fraction_with(const InAdjacency& in, std::span<const std::uint8_t> type) {
    std::vector<InFraction> out;
    const auto n = static_cast<NodeId>(in.offset.size() - 1);
    for (NodeId v = 0; v < n; ++v) {
        const auto sources = in[v];
        if (sources.empty()) continue;
        std::size_t same = 0;
        for (NodeId u : sources)
            if (type[u] == type[v]) ++same;
        out.push_back({v, static_cast<double>(same) / static_cast<double>(sources.size())});
    }
    return out;
}

}  // namespace

std::vector<InFraction> in_fraction(const LabeledDigraph& g) { return in_fraction_with(InAdjacency(g), g.type); }

InFractionTest in_fraction_test(const LabeledDigraph& g, std::size_t iterations, std::uint64_t seed,
                                Execution exec) {
    if (iterations == 0) throw Error("in_fraction_test: iterations must be >= 1");
    const InAdjacency in(g);
    const auto original = in_fraction_with(in, g.type);
    if (original.size() < 2) throw Error("in_fraction_test: need at least two nodes with in-edges");

    std::vector<double> f0(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) f0[i] = original[i].f;

    InFractionTest result;
    result.original_mean = std::accumulate(f0.begin(), f0.end(), 0.0) / static_cast<double>(f0.size());
    result.p_values.resize(iterations);
    const auto n = static_cast<std::int64_t>(iterations);

    const auto pool = sorted_pool(g.type);
    auto replicate = [&](std::int64_t k) {
        const auto types = draw_types(pool, seed, static_cast<std::uint64_t>(k));
        const auto shuffled = in_fraction_with(in, types);
        std::vector<double> f1(shuffled.size());
        for (std::size_t i = 0; i < shuffled.size(); ++i) f1[i] = shuffled[i].f;
        result.p_values[static_cast<std::size_t>(k)] = stats::wilcoxon_signed_rank_paired(f0, f1);
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t k = 0; k < n; ++k) replicate(k);
    } else {
        for (std::int64_t k = 0; k < n; ++k) replicate(k);
    }

    std::size_t significant = 0;
    for (double p : result.p_values)
        if (p < 0.05) ++significant;
    result.fraction_significant = static_cast<double>(significant) / static_cast<double>(iterations);
    return result;
}

// --------------------------------------------------------------- Communities

double modularity(const UndirectedGraph& g, std::span<const std::size_t> partition) {
    const std::size_t n = g.num_nodes();
    if (partition.size() != n) throw Error("modularity: partition size mismatch");
    const double m = static_cast<double>(g.num_edges());
    if (m == 0) return 0.0;
    const std::size_t k = n == 0 ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
    std::vector<double> internal(k, 0.0), degree(k, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        degree[partition[v]] += static_cast<double>(g.degree(v));
        for (NodeId u : g.neighbors(v))
            if (partition[u] == partition[v]) internal[partition[v]] += 0.5;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) q += internal[c] / m - std::pow(degree[c] / (2.0 * m), 2);
    return q;
}

namespace {

struct WeightedGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
    std::vector<double> loop;                                      // self-loop weight
    std::vector<double> degree;                                    // sum of adj weights + 2 * loop
};

// One level of local moving. Returns the community of every node and whether
// anything moved.
bool local_moving(const WeightedGraph& g, double two_m, RandomStream& rng, std::vector<std::size_t>& comm) {
    const std::size_t n = g.adj.size();
    comm.resize(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> tot(g.degree);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    std::vector<double> link(n, 0.0);
    std::vector<std::size_t> touched;
    bool any_move = false;
    for (;;) {
        bool moved = false;
        for (std::size_t v : order) {
            const std::size_t own = comm[v];
            const double kv = g.degree[v];
            touched.clear();
            for (auto [u, w] : g.adj[v]) {
                if (link[comm[u]] == 0.0) touched.push_back(comm[u]);
                link[comm[u]] += w;
            }
            tot[own] -= kv;
            std::size_t best = own;
            double best_gain = link[own] - tot[own] * kv / two_m;
            for (std::size_t c : touched) {
                if (c == own) continue;
                const double gain = link[c] - tot[c] * kv / two_m;
                if (gain > best_gain + 1e-12 || (gain > best_gain - 1e-12 && best != own && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            tot[best] += kv;
            for (std::size_t c : touched) link[c] = 0.0;
            link[own] = 0.0;
            if (best != own) {
                comm[v] = best;
                moved = true;
                any_move = true;
            }
        }
        if (!moved) break;
    }
    return any_move;
}

}  // namespace

Partition detect_communities(const UndirectedGraph& g, std::uint64_t seed) {
    const std::size_t n = g.num_nodes();
    Partition membership(n);
    std::iota(membership.begin(), membership.end(), 0);
    if (n == 0 || g.num_edges() == 0) return membership;

    WeightedGraph level;
    level.adj.resize(n);
    level.loop.assign(n, 0.0);
    level.degree.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId u : g.neighbors(v)) level.adj[v].emplace_back(u, 1.0);
        level.degree[v] = static_cast<double>(g.degree(v));
    }
    const double two_m = 2.0 * static_cast<double>(g.num_edges());

    RandomStream rng(seed, {0x10u});
    for (std::uint64_t depth = 0;; ++depth) {
        std::vector<std::size_t> comm;
        RandomStream level_rng = rng.split(depth);
        if (!local_moving(level, two_m, level_rng, comm)) break;

        // Renumber communities densely in order of first appearance.
        std::vector<std::size_t> dense(comm.size(), SIZE_MAX);
        std::size_t k = 0;
        for (auto& c : comm) {
            if (dense[c] == SIZE_MAX) dense[c] = k++;
            c = dense[c];
        }
        for (auto& m : membership) m = comm[m];

        WeightedGraph next;
        next.adj.resize(k);
        next.loop.assign(k, 0.0);
        next.degree.assign(k, 0.0);
        std::vector<std::size_t> pos(k, SIZE_MAX);
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t v = 0; v < comm.size(); ++v) members[comm[v]].push_back(v);
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<std::pair<std::size_t, double>> row;
            for (std::size_t v : members[c]) {
                next.loop[c] += level.loop[v];
                next.degree[c] += level.degree[v];
                for (auto [u, w] : level.adj[v]) {
                    const std::size_t cu = comm[u];
                    if (cu == c) {
                        next.loop[c] += 0.5 * w;  // each internal edge is seen from both ends
                        continue;
                    }
                    if (pos[cu] == SIZE_MAX) {
                        pos[cu] = row.size();
                        row.emplace_back(cu, 0.0);
                    }
                    row[pos[cu]].second += w;
                }
            }
            for (auto& [cu, w] : row) pos[cu] = SIZE_MAX;
            std::sort(row.begin(), row.end());
            next.adj[c] = std::move(row);
        }
        level = std::move(next);
        if (k == 1) break;
    }

    // Canonical numbering: by smallest member node.
    std::vector<std::size_t> canon(n, SIZE_MAX);
    std::size_t k = 0;
    for (auto& c : membership) {
        if (canon[c] == SIZE_MAX) canon[c] = k++;
        c = canon[c];
    }
    return membership;
}

// ---------------------------------------------------------------- Enrichment

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::more_negative: return "more-negative";
        case Direction::more_positive: return "more-positive";
        case Direction::none: return "none";
    }
    return "?";
}

CommunityReport community_enrichment(std::span<const std::size_t> partition, std::span<const std::uint8_t> negative,
                                     double min_size_fraction) {
    if (partition.size() != negative.size()) throw Error("community_enrichment: size mismatch");
    CommunityReport report;
    const std::size_t n = partition.size();
    if (n == 0) return report;
    const std::size_t k = *std::max_element(partition.begin(), partition.end()) + 1;

    std::vector<std::size_t> size(k, 0), neg(k, 0);
    std::size_t total_neg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        ++size[partition[v]];
        if (negative[v]) {
            ++neg[partition[v]];
            ++total_neg;
        }
    }
    report.global_p_neg = static_cast<double>(total_neg) / static_cast<double>(n);
    const std::size_t total_pos = n - total_neg;

    for (std::size_t c = 0; c < k; ++c) {
        if (size[c] == 0) continue;
        CommunityStats cs;
        cs.id = c;
        cs.size = size[c];
        cs.n_neg = neg[c];
        cs.p_neg = static_cast<double>(neg[c]) / static_cast<double>(size[c]);
        cs.tested = static_cast<double>(size[c]) >= min_size_fraction * static_cast<double>(n);
        if (cs.tested) {
            const long neg_in = static_cast<long>(neg[c]);
            const long pos_in = static_cast<long>(size[c] - neg[c]);
            cs.fisher_p = stats::fisher_exact_2x2(neg_in, pos_in, static_cast<long>(total_neg) - neg_in,
                                                  static_cast<long>(total_pos) - pos_in);
            // Compare neg_in / size with total_neg / n without rounding.
            const auto lhs = static_cast<unsigned long long>(neg[c]) * n;
            const auto rhs = static_cast<unsigned long long>(total_neg) * size[c];
            cs.direction = lhs > rhs ? Direction::more_negative : lhs < rhs ? Direction::more_positive : Direction::none;
        }
        report.communities.push_back(cs);
    }
    return report;
}

void write_null_distribution_csv(std::ostream& out, const NullDistribution& null) {
    out << "replicate,r\n";
    for (std::size_t i = 0; i < null.replicates.size(); ++i) out << i << ',' << format_number(null.replicates[i]) << '\n';
}

void write_communities_csv(std::ostream& out, const CommunityReport& report) {
    out << "community_id,size,p_neg,fisher_p,direction\n";
    for (const auto& c : report.communities) {
        out << c.id << ',' << c.size << ',' << format_number(c.p_neg) << ',';
        if (c.tested) out << format_number(c.fisher_p);
        out << ',' << (c.tested ? to_string(c.direction) : std::string_view("untested")) << '\n';
    }
}

}  // namespace vaxnet
