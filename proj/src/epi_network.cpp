#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "vaxnet/epi.hpp"

namespace vaxnet::epi {

ContactNetwork::ContactNetwork(std::size_t num_nodes, std::vector<WeightedEdge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
    for (auto& e : edges_) {
        if (e.u >= num_nodes || e.v >= num_nodes)
            throw InputError("contact edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
        if (e.u == e.v) throw InputError("contact self-loop at node " + std::to_string(e.u));
        if (e.w < kMinContactWeight)
            throw InputError("contact (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has weight " +
                             std::to_string(e.w) + " < " + std::to_string(kMinContactWeight));
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const WeightedEdge& a, const WeightedEdge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw InputError("duplicate contact (" + std::to_string(edges_[i].u) + "," + std::to_string(edges_[i].v) + ")");

    offset_.assign(num_nodes + 1, 0);
    for (const auto& e : edges_) {
        ++offset_[e.u + 1];
        ++offset_[e.v + 1];
    }
    std::partial_sum(offset_.begin(), offset_.end(), offset_.begin());
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    for (const auto& e : edges_) {
        adj_[fill[e.u]++] = {e.v, e.w};
        adj_[fill[e.v]++] = {e.u, e.w};
    }
}

ContactNetwork parse_contact_network(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<WeightedEdge> edges;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.find_first_not_of("0123456789, ") != std::string::npos) continue;  // header
        unsigned long long u, v, w;
        char c1, c2;
        std::istringstream ss(line);
        if (!(ss >> u >> c1 >> v >> c2 >> w) || c1 != ',' || c2 != ',' || u > UINT32_MAX - 1 || v > UINT32_MAX - 1 ||
            w > UINT32_MAX)
            throw InputError(source_name + ":" + std::to_string(line_no) + ": expected 'u,v,w'");
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), static_cast<std::uint32_t>(w)});
        n = std::max<std::size_t>(n, std::max(u, v) + 1);
    }
    return ContactNetwork(n, std::move(edges));
}

ContactNetwork read_contact_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open contact network '" + path + "'");
    return parse_contact_network(in, path);
}

void write_contact_network(std::ostream& out, const ContactNetwork& net) {
    out << "u,v,w\n";
    for (const auto& e : net.edges()) out << e.u << ',' << e.v << ',' << e.w << '\n';
}

std::size_t VaccinationAssignment::count() const {
    return static_cast<std::size_t>(std::count(vaccinated.begin(), vaccinated.end(), std::uint8_t{1}));
}

std::size_t vaccinated_count_for(std::size_t num_nodes, double coverage) {
    if (!(coverage >= 0.0 && coverage <= 1.0)) throw Error("coverage must lie in [0, 1]");
    return static_cast<std::size_t>(std::llround(coverage * static_cast<double>(num_nodes)));
}

VaccinationAssignment random_assignment(std::size_t num_nodes, std::size_t count, RandomStream& rng) {
    if (count > num_nodes) throw Error("random_assignment: more vaccinated than nodes");
    // Partial Fisher-Yates over node indices.
    std::vector<NodeId> nodes(num_nodes);
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    VaccinationAssignment vac;
    vac.vaccinated.assign(num_nodes, 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.below(num_nodes - i);
        std::swap(nodes[i], nodes[j]);
        vac.vaccinated[nodes[i]] = 1;
    }
    return vac;
}

VaccinationAssignment read_vaccination(const std::string& path, std::size_t num_nodes) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open vaccination file '" + path + "'");
    VaccinationAssignment vac;
    vac.vaccinated.assign(num_nodes, 0);
    std::vector<std::uint8_t> seen(num_nodes, 0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.rfind("node", 0) == 0)) continue;
        unsigned long long node;
        int flag;
        char comma;
        std::istringstream ss(line);
        if (!(ss >> node >> comma >> flag) || comma != ',' || (flag != 0 && flag != 1) || node >= num_nodes)
            throw InputError(path + ":" + std::to_string(line_no) + ": expected 'node,0|1' for a known node");
        vac.vaccinated[node] = static_cast<std::uint8_t>(flag);
        seen[node] = 1;
    }
    if (std::find(seen.begin(), seen.end(), std::uint8_t{0}) != seen.end())
        throw InputError(path + ": every node needs a row");
    return vac;
}

void write_vaccination(std::ostream& out, const VaccinationAssignment& vac) {
    out << "node,vaccinated\n";
    for (std::size_t i = 0; i < vac.size(); ++i) out << i << ',' << int{vac.vaccinated[i]} << '\n';
}

}  // namespace vaxnet::epi
