#include <algorithm>
#include <cmath>

#include "vaxnet/epi.hpp"

namespace vaxnet::epi {

SyntheticNetwork generate_synthetic_contact_network(const GeneratorParams& params, std::uint64_t seed) {
    if (params.n_nodes < 2 || params.n_groups == 0 || params.n_groups > params.n_nodes)
        throw Error("generator: need n_nodes >= 2 and 1 <= n_groups <= n_nodes");
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(params.p_in) || !prob(params.p_out)) throw Error("generator: edge probabilities must lie in [0, 1]");
    if (params.weights.min_weight < kMinContactWeight)
        throw Error("generator: weight support must start at or above " + std::to_string(kMinContactWeight));
    if (!(params.weights.mean_excess >= 0.0)) throw Error("generator: mean_excess must be non-negative");

    const std::size_t n = params.n_nodes;
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = i * params.n_groups / n;

    RandomStream rng(seed, {0x6e6574u});
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p = group[i] == group[j] ? params.p_in : params.p_out;
            if (!rng.bernoulli(p)) continue;
            double excess = 0.0;
            if (params.weights.mean_excess > 0) excess = -params.weights.mean_excess * std::log(rng.uniform_pos());
            const double w = static_cast<double>(params.weights.min_weight) + std::floor(excess);
            edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j),
                             static_cast<std::uint32_t>(std::min(w, 4.0e9))});
        }
    }
    if (edges.empty()) throw Error("generator: parameters produced no edges");

    std::vector<Edge> plain;
    plain.reserve(edges.size());
    for (const auto& e : edges) plain.emplace_back(e.u, e.v);
    std::size_t n_comp = 0;
    const auto comp = weak_components(n, plain, &n_comp);
    std::vector<std::size_t> size(n_comp, 0);
    for (std::size_t c : comp) ++size[c];
    const auto best = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());

    std::vector<NodeId> remap(n, UINT32_MAX);
    SyntheticNetwork out;
    out.requested_nodes = n;
    for (std::size_t v = 0; v < n; ++v) {
        if (comp[v] != best) continue;
        remap[v] = static_cast<NodeId>(out.group.size());
        out.group.push_back(group[v]);
    }
    std::vector<WeightedEdge> kept;
    for (const auto& e : edges)
        if (remap[e.u] != UINT32_MAX) kept.push_back({remap[e.u], remap[e.v], e.w});
    out.network = ContactNetwork(out.group.size(), std::move(kept));
    return out;
}

}  // namespace vaxnet::epi
