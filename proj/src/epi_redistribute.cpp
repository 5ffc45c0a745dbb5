#include <algorithm>
#include <cmath>

#include "vaxnet/epi.hpp"

namespace vaxnet::epi {

Assortativity vaccination_assortativity(const ContactNetwork& net, const VaccinationAssignment& vac) {
    if (vac.size() != net.size()) throw Error("vaccination_assortativity: assignment size mismatch");
    if (net.num_edges() == 0) throw Error("vaccination_assortativity: network has no edges");
    // Both directions of every edge: e is symmetric, so a == b.
    double e_vv = 0, e_uu = 0, e_mixed = 0;
    for (const auto& e : net.edges()) {
        const bool a = vac.vaccinated[e.u] != 0, b = vac.vaccinated[e.v] != 0;
        if (a && b) e_vv += 2;
        else if (!a && !b) e_uu += 2;
        else e_mixed += 2;
    }
    const double total = e_vv + e_uu + e_mixed;
    const double a_v = (e_vv + e_mixed / 2) / total;
    const double a_u = (e_uu + e_mixed / 2) / total;
    const double ab = a_v * a_v + a_u * a_u;
    // Every edge joins one status: only one class appears, r is undefined.
    if (e_mixed == 0 && (e_vv == 0 || e_uu == 0)) return {1.0, true};
    return {((e_vv + e_uu) / total - ab) / (1.0 - ab), false};
}

VaccinationMixing::VaccinationMixing(const ContactNetwork& net, const VaccinationAssignment& vac)
    : net_(&net), vac_(vac), edges_(net.num_edges()) {
    if (vac.size() != net.size()) throw Error("VaccinationMixing: assignment size mismatch");
    if (edges_ == 0) throw Error("VaccinationMixing: network has no edges");
    for (const auto& e : net.edges()) {
        const bool a = vac.vaccinated[e.u] != 0, b = vac.vaccinated[e.v] != 0;
        if (a && b) ++vv_;
        else if (!a && !b) ++uu_;
    }
}

double VaccinationMixing::r_from(std::size_t vv, std::size_t uu) const {
    const double m = static_cast<double>(edges_);
    const double mixed = m - static_cast<double>(vv) - static_cast<double>(uu);
    const double a_v = (static_cast<double>(vv) + mixed / 2) / m;
    const double a_u = (static_cast<double>(uu) + mixed / 2) / m;
    const double ab = a_v * a_v + a_u * a_u;
    if (mixed == 0 && (vv == 0 || uu == 0)) return 1.0;
    return ((static_cast<double>(vv) + static_cast<double>(uu)) / m - ab) / (1.0 - ab);
}

void VaccinationMixing::swap_delta(NodeId p, NodeId q, long& dvv, long& duu) const {
    // p: vaccinated -> unvaccinated; q: unvaccinated -> vaccinated. An edge p-q
    // stays mixed and is skipped on both sides.
    dvv = 0;
    duu = 0;
    for (const Contact& c : net_->contacts(p)) {
        if (c.node == q) continue;
        if (vac_.vaccinated[c.node]) --dvv;  // VV -> mixed
        else ++duu;                          // mixed -> UU
    }
    for (const Contact& c : net_->contacts(q)) {
        if (c.node == p) continue;
        if (vac_.vaccinated[c.node]) ++dvv;  // mixed -> VV
        else --duu;                          // UU -> mixed
    }
}

double VaccinationMixing::r_after_swap(NodeId p, NodeId q) const {
    long dvv, duu;
    swap_delta(p, q, dvv, duu);
    return r_from(static_cast<std::size_t>(static_cast<long>(vv_) + dvv),
                  static_cast<std::size_t>(static_cast<long>(uu_) + duu));
}

void VaccinationMixing::apply_swap(NodeId p, NodeId q) {
    if (!vac_.vaccinated[p] || vac_.vaccinated[q]) throw Error("apply_swap: expects (vaccinated, unvaccinated)");
    long dvv, duu;
    swap_delta(p, q, dvv, duu);
    vv_ = static_cast<std::size_t>(static_cast<long>(vv_) + dvv);
    uu_ = static_cast<std::size_t>(static_cast<long>(uu_) + duu);
    vac_.vaccinated[p] = 0;
    vac_.vaccinated[q] = 1;
}

RedistributeResult redistribute(const ContactNetwork& net, const VaccinationAssignment& vac, double target_r,
                                RandomStream& rng, const RedistributeOptions& options) {
    const std::size_t count = vac.count();
    if (count == 0 || count == vac.size()) throw Error("redistribute: coverage must be strictly between 0 and 1");

    VaccinationMixing mixing(net, vac);
    RedistributeResult result;
    result.initial_r = mixing.r();
    double r = result.initial_r;

    if (r <= target_r) {
        std::vector<NodeId> vacc, unvacc;
        for (NodeId v = 0; v < vac.size(); ++v) (vac.vaccinated[v] ? vacc : unvacc).push_back(v);

        std::size_t stall = 0;
        while (true) {
            const std::size_t i = rng.below(vacc.size());
            const std::size_t j = rng.below(unvacc.size());
            ++result.trials;
            const double candidate = mixing.r_after_swap(vacc[i], unvacc[j]);
            if (candidate <= r) {
                if (++stall >= options.max_stall)
                    throw StallError("redistribute: no improving swap in " + std::to_string(options.max_stall) +
                                         " trials; best r = " + std::to_string(r) + ", target " +
                                         std::to_string(target_r),
                                     r);
                continue;
            }
            stall = 0;
            mixing.apply_swap(vacc[i], unvacc[j]);
            std::swap(vacc[i], unvacc[j]);
            r = candidate;
            ++result.accepted;
            if (options.verify_every && result.accepted % options.verify_every == 0) {
                const double fresh = vaccination_assortativity(net, mixing.assignment()).r;
                result.max_drift = std::max(result.max_drift, std::abs(fresh - mixing.r()));
                ++result.verifications;
            }
            if (r > target_r) break;
        }
    }

    result.r = r;
    result.assignment = mixing.assignment();
    return result;
}

RedistributeResult redistribute(const ContactNetwork& net, const VaccinationAssignment& vac, double target_r,
                                std::uint64_t seed, const RedistributeOptions& options) {
    RandomStream rng(seed);
    return redistribute(net, vac, target_r, rng, options);
}

}  // namespace vaxnet::epi
