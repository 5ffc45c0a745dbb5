#include "vaxnet/flownet.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "vaxnet/error.hpp"

namespace vaxnet {

std::vector<UserTally> user_tallies(std::span<const LabeledTweet> tweets) {
    std::map<std::string, UserTally> by_user;
    for (const auto& lt : tweets) {
        auto& u = by_user[lt.tweet->user_id];
        u.id = lt.tweet->user_id;
        switch (lt.label) {
            case SentimentLabel::positive: ++u.n_pos; break;
            case SentimentLabel::negative: ++u.n_neg; break;
            case SentimentLabel::neutral: ++u.n_neu; break;
            case SentimentLabel::irrelevant: break;
        }
    }
    std::vector<UserTally> out;
    out.reserve(by_user.size());
    for (auto& [id, u] : by_user) out.push_back(std::move(u));
    return out;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

AdjacencyLists parse_adjacency(std::istream& in, const std::string& source_name) {
    AdjacencyLists lists;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw InputError(source_name + ":" + std::to_string(line_no) + ": expected 'user_id: ids'");
        const std::string user = trim(std::string_view(line).substr(0, colon));
        if (user.empty()) throw InputError(source_name + ":" + std::to_string(line_no) + ": empty user id");
        auto& targets = lists[user];
        std::stringstream rest(line.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            std::string id = trim(item);
            if (!id.empty()) targets.insert(std::move(id));
        }
    }
    return lists;
}

AdjacencyLists read_adjacency_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open adjacency file '" + path + "'");
    return parse_adjacency(in, path);
}

FlowNetwork FlowNetwork::induced(std::span<const NodeId> keep) const {
    std::vector<NodeId> remap(nodes.size(), UINT32_MAX);
    FlowNetwork sub;
    sub.nodes.reserve(keep.size());
    for (NodeId v : keep) {
        remap[v] = static_cast<NodeId>(sub.nodes.size());
        sub.nodes.push_back(nodes[v]);
    }
    for (auto [a, b] : edges)
        if (remap[a] != UINT32_MAX && remap[b] != UINT32_MAX) sub.edges.emplace_back(remap[a], remap[b]);
    std::sort(sub.edges.begin(), sub.edges.end());
    return sub;
}

FlowNetwork build_flow_network(std::span<const UserTally> users, const AdjacencyLists& followers,
                               const AdjacencyLists& friends) {
    FlowNetwork net;
    for (const auto& u : users)
        if (u.relevant() >= 1) net.nodes.push_back(u);
    std::sort(net.nodes.begin(), net.nodes.end(), [](const UserTally& a, const UserTally& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < net.nodes.size(); ++i)
        if (net.nodes[i].id == net.nodes[i - 1].id) throw Error("build_flow_network: duplicate user '" + net.nodes[i].id + "'");

    std::unordered_map<std::string, NodeId> index;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) index.emplace(net.nodes[i].id, static_cast<NodeId>(i));
    auto find = [&](const std::string& id) -> std::int64_t {
        auto it = index.find(id);
        return it == index.end() ? -1 : static_cast<std::int64_t>(it->second);
    };

    // followers(A) = {B}  =>  A -> B
    for (const auto& [a, fs] : followers) {
        const auto ia = find(a);
        if (ia < 0) continue;
        for (const auto& b : fs)
            if (const auto ib = find(b); ib >= 0 && ib != ia)
                net.edges.emplace_back(static_cast<NodeId>(ia), static_cast<NodeId>(ib));
    }
    // friends(B) = {A}  =>  A -> B
    for (const auto& [b, fs] : friends) {
        const auto ib = find(b);
        if (ib < 0) continue;
        for (const auto& a : fs)
            if (const auto ia = find(a); ia >= 0 && ia != ib)
                net.edges.emplace_back(static_cast<NodeId>(ia), static_cast<NodeId>(ib));
    }
    std::sort(net.edges.begin(), net.edges.end());
    net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
    return net;
}

FlowNetwork opinionated(const FlowNetwork& network) {
    std::vector<NodeId> keep;
    for (std::size_t i = 0; i < network.nodes.size(); ++i)
        if (network.nodes[i].sign() != 0) keep.push_back(static_cast<NodeId>(i));
    return network.induced(keep);
}

FlowNetwork giant_component(const FlowNetwork& network) {
    if (network.nodes.empty()) throw Error("giant_component: empty network");
    std::size_t n_comp = 0;
    const auto comp = weak_components(network.size(), network.edges, &n_comp);
    std::vector<std::size_t> size(n_comp, 0);
    for (std::size_t c : comp) ++size[c];
    // Components are numbered by smallest member and nodes are sorted by id, so
    // the first maximum is the one holding the smallest id.
    const auto best = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<NodeId> keep;
    for (std::size_t i = 0; i < comp.size(); ++i)
        if (comp[i] == best) keep.push_back(static_cast<NodeId>(i));
    return network.induced(keep);
}

LabeledDigraph to_labeled_digraph(const FlowNetwork& network) {
    LabeledDigraph g;
    g.num_nodes = network.size();
    g.num_types = 2;
    g.type.resize(g.num_nodes);
    for (std::size_t i = 0; i < g.num_nodes; ++i) {
        const int s = network.nodes[i].sign();
        if (s == 0) throw Error("to_labeled_digraph: node '" + network.nodes[i].id + "' has no opinion");
        g.type[i] = s > 0 ? 0 : 1;
    }
    g.edges = network.edges;
    return g;
}

void write_edges_csv(std::ostream& out, const FlowNetwork& network) {
    out << "from,to\n";
    for (auto [a, b] : network.edges) out << network.nodes[a].id << ',' << network.nodes[b].id << '\n';
}

void write_nodes_csv(std::ostream& out, const FlowNetwork& network) {
    out << "id,n_pos,n_neg,n_neu,sign\n";
    for (const auto& u : network.nodes)
        out << u.id << ',' << u.n_pos << ',' << u.n_neg << ',' << u.n_neu << ',' << u.sign() << '\n';
}

FlowNetwork read_flow_network(const std::string& nodes_path, const std::string& edges_path) {
    std::ifstream nodes_in(nodes_path);
    if (!nodes_in) throw InputError("cannot open node file '" + nodes_path + "'");
    FlowNetwork net;
    std::string line;
    std::getline(nodes_in, line);  // header
    std::size_t line_no = 1;
    while (std::getline(nodes_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        UserTally u;
        std::string field;
        std::vector<std::string> parts;
        while (std::getline(ss, field, ',')) parts.push_back(field);
        if (parts.size() != 5) throw InputError(nodes_path + ":" + std::to_string(line_no) + ": expected 5 columns");
        try {
            u.id = parts[0];
            u.n_pos = std::stol(parts[1]);
            u.n_neg = std::stol(parts[2]);
            u.n_neu = std::stol(parts[3]);
        } catch (const std::exception&) {
            throw InputError(nodes_path + ":" + std::to_string(line_no) + ": bad count");
        }
        net.nodes.push_back(std::move(u));
    }
    std::sort(net.nodes.begin(), net.nodes.end(), [](const UserTally& a, const UserTally& b) { return a.id < b.id; });
    std::unordered_map<std::string, NodeId> index;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) index.emplace(net.nodes[i].id, static_cast<NodeId>(i));

    std::ifstream edges_in(edges_path);
    if (!edges_in) throw InputError("cannot open edge file '" + edges_path + "'");
    std::getline(edges_in, line);
    line_no = 1;
    while (std::getline(edges_in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError(edges_path + ":" + std::to_string(line_no) + ": expected 'from,to'");
        auto a = index.find(trim(std::string_view(line).substr(0, comma)));
        auto b = index.find(trim(std::string_view(line).substr(comma + 1)));
        if (a == index.end() || b == index.end())
            throw InputError(edges_path + ":" + std::to_string(line_no) + ": unknown node");
        if (a->second != b->second) net.edges.emplace_back(a->second, b->second);
    }
    std::sort(net.edges.begin(), net.edges.end());
    net.edges.erase(std::unique(net.edges.begin(), net.edges.end()), net.edges.end());
    return net;
}

}  // namespace vaxnet
