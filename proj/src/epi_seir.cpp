#include <algorithm>
#include <cmath>

#include "vaxnet/epi.hpp"

namespace vaxnet::epi {

void SeirParams::validate() const {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!unit(escape_rate) || !unit(recovery_base) || !unit(onset_contact_factor))
        throw Error("SEIR rates must lie in [0, 1]");
    if (forced_transmission && !unit(*forced_transmission)) throw Error("forced transmission must lie in [0, 1]");
    if (!(incubation_shape > 0) || !(incubation_scale > 0) || incubation_offset < 0)
        throw Error("incubation parameters must be positive");
    if (infectious_cap_steps <= 0) throw Error("infectious cap must be positive");
}

double transmission_probability(double w, double escape_rate) {
    if (w <= 0.0) return 0.0;
    return -std::expm1(w * std::log1p(-escape_rate));
}

int incubation_steps_for(double u, const SeirParams& params) {
    const double days =
        params.incubation_offset + params.incubation_scale * std::pow(-std::log(u), 1.0 / params.incubation_shape);
    return std::max(1, static_cast<int>(std::lround(days / 0.5)));
}

int sample_incubation(RandomStream& rng, const SeirParams& params) {
    return incubation_steps_for(rng.uniform_pos(), params);
}

bool is_transmission_step(std::size_t step) { return step % 2 == 0 && (step / 2) % 7 < 5; }

SimResult run_seir(const ContactNetwork& net, const VaccinationAssignment& vac, const SeirParams& params,
                   RandomStream& rng, const StepObserver& observer) {
    params.validate();
    const std::size_t n = net.size();
    if (vac.size() != n) throw Error("run_seir: vaccination assignment does not match the network");

    std::vector<Compartment> state(n, Compartment::susceptible);
    std::size_t n_susceptible = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (vac.vaccinated[v]) state[v] = Compartment::recovered;
        else ++n_susceptible;
    }
    if (n_susceptible == 0) throw Error("run_seir: no susceptible node");

    // Index case: uniform among susceptible nodes.
    std::size_t pick = rng.below(n_susceptible);
    NodeId index = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (state[v] != Compartment::susceptible) continue;
        if (pick-- == 0) {
            index = v;
            break;
        }
    }

    std::vector<std::size_t> onset(n, 0), since(n, 0);
    std::vector<NodeId> active;  // exposed or infectious, in order of exposure
    SimResult result;
    result.index_case = index;

    auto expose = [&](NodeId v, std::size_t step) {
        state[v] = Compartment::exposed;
        onset[v] = step + static_cast<std::size_t>(sample_incubation(rng, params));
        active.push_back(v);
        ++result.ever_infected;
    };
    expose(index, 0);

    std::size_t step = 0;
    for (;; ++step) {
        // Disease clocks run every half day.
        for (NodeId v : active) {
            if (state[v] == Compartment::exposed) {
                if (onset[v] == step) {
                    state[v] = Compartment::infectious;
                    since[v] = step;
                }
            } else {
                const auto t = static_cast<int>(step - since[v]);
                if (t >= params.infectious_cap_steps || rng.bernoulli(1.0 - std::pow(params.recovery_base, t)))
                    state[v] = Compartment::recovered;
            }
        }
        std::erase_if(active, [&](NodeId v) { return state[v] == Compartment::recovered; });

        if (is_transmission_step(step)) {
            // Only nodes whose onset is this half day still have (reduced)
            // contacts; new exposures are appended and not visited here.
            const std::size_t live = active.size();
            for (std::size_t i = 0; i < live; ++i) {
                const NodeId v = active[i];
                if (state[v] != Compartment::infectious || since[v] != step) continue;
                for (const Contact& c : net.contacts(v)) {
                    if (state[c.node] != Compartment::susceptible) continue;
                    const double p = params.forced_transmission
                                         ? *params.forced_transmission
                                         : transmission_probability(params.onset_contact_factor * c.w, params.escape_rate);
                    if (rng.bernoulli(p)) {
                        expose(c.node, step);
                        if (v == index) ++result.secondary_infections_from_index;
                    }
                }
            }
        }

        if (observer) observer(step, state);
        if (active.empty()) break;
    }

    result.duration_steps = step + 1;
    result.attack_rate = static_cast<double>(result.ever_infected) / static_cast<double>(n);
    return result;
}

SimResult run_seir(const ContactNetwork& net, const VaccinationAssignment& vac, const SeirParams& params,
                   std::uint64_t seed, const StepObserver& observer) {
    RandomStream rng(seed);
    return run_seir(net, vac, params, rng, observer);
}

R0Estimate estimate_r0(const ContactNetwork& net, const SeirParams& params, std::size_t runs, std::uint64_t seed,
                       Execution exec) {
    VaccinationAssignment none;
    none.vaccinated.assign(net.size(), 0);
    std::vector<std::size_t> secondary(runs, 0);
    const auto n_runs = static_cast<std::int64_t>(runs);
    auto one = [&](std::int64_t k) {
        RandomStream rng(seed, {static_cast<std::uint64_t>(k)});
        secondary[static_cast<std::size_t>(k)] = run_seir(net, none, params, rng).secondary_infections_from_index;
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::int64_t k = 0; k < n_runs; ++k) one(k);
    } else {
        for (std::int64_t k = 0; k < n_runs; ++k) one(k);
    }

    R0Estimate est;
    est.runs = runs;
    std::size_t total = 0;
    for (std::size_t s : secondary) {
        if (s == 0) continue;
        ++est.conditioning_runs;
        total += s;
    }
    if (est.conditioning_runs > 0)
        est.mean = static_cast<double>(total) / static_cast<double>(est.conditioning_runs);
    return est;
}

}  // namespace vaxnet::epi
