#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vaxnet/error.hpp"
#include "vaxnet/graph.hpp"
#include "vaxnet/homophily.hpp"
#include "vaxnet/random.hpp"

namespace vaxnet::epi {

/// Contact durations are counted in 20-second units; 90 units = 30 minutes.
inline constexpr std::uint32_t kMinContactWeight = 90;

struct WeightedEdge {
    NodeId u;
    NodeId v;
    std::uint32_t w;
    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct Contact {
    NodeId node;
    std::uint32_t w;
};

/// Undirected weighted contact network, immutable once built.
class ContactNetwork {
public:
    ContactNetwork() = default;
    /// Throws InputError on self-loops, out-of-range endpoints, duplicate pairs
    /// or weights below kMinContactWeight.
    ContactNetwork(std::size_t num_nodes, std::vector<WeightedEdge> edges);

    std::size_t size() const { return num_nodes_; }
    std::size_t num_edges() const { return edges_.size(); }
    /// Sorted with u < v.
    std::span<const WeightedEdge> edges() const { return edges_; }
    std::span<const Contact> contacts(NodeId v) const {
        return {adj_.data() + offset_[v], offset_[v + 1] - offset_[v]};
    }
    std::size_t degree(NodeId v) const { return offset_[v + 1] - offset_[v]; }

private:
    std::size_t num_nodes_ = 0;
    std::vector<WeightedEdge> edges_;
    std::vector<std::size_t> offset_{0};
    std::vector<Contact> adj_;
};

/// CSV "u,v,w" with header. The node count is one past the largest id.
ContactNetwork read_contact_network(const std::string& path);
ContactNetwork parse_contact_network(std::istream& in, const std::string& source_name = "<stream>");
void write_contact_network(std::ostream& out, const ContactNetwork& net);

struct VaccinationAssignment {
    std::vector<std::uint8_t> vaccinated;

    std::size_t size() const { return vaccinated.size(); }
    std::size_t count() const;
    double coverage() const { return size() == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(size()); }
    friend bool operator==(const VaccinationAssignment&, const VaccinationAssignment&) = default;
};

/// Exactly `count` nodes chosen uniformly at random.
VaccinationAssignment random_assignment(std::size_t num_nodes, std::size_t count, RandomStream& rng);
/// round(coverage * num_nodes) vaccinated nodes.
std::size_t vaccinated_count_for(std::size_t num_nodes, double coverage);

/// CSV "node,vaccinated" with 0/1 values, one row per node.
VaccinationAssignment read_vaccination(const std::string& path, std::size_t num_nodes);
void write_vaccination(std::ostream& out, const VaccinationAssignment& vac);

// ------------------------------------------------------------------ Disease

struct SeirParams {
    double escape_rate = 0.00767;       ///< per-contact transmission rate per 20-second unit
    double incubation_shape = 2.21;     ///< Weibull
    double incubation_scale = 1.10;     ///< days
    double incubation_offset = 0.5;     ///< days
    double recovery_base = 0.95;        ///< hazard 1 - base^t after t infectious steps
    int infectious_cap_steps = 24;      ///< forced recovery (12 days)
    double onset_contact_factor = 0.25; ///< contact weight kept on the onset half-day
    /// Test hook: when set, replaces the per-edge transmission probability
    /// whenever the infectious node still has contacts.
    std::optional<double> forced_transmission;

    void validate() const;
};

/// 1 - (1 - escape_rate)^w.
double transmission_probability(double w, double escape_rate = 0.00767);

/// Incubation in half-day steps: round((offset + scale * (-ln U)^(1/shape)) / 0.5),
/// at least 1.
int sample_incubation(RandomStream& rng, const SeirParams& params = {});
/// Same draw from a given U in (0, 1].
int incubation_steps_for(double u, const SeirParams& params = {});

enum class Compartment : std::uint8_t { susceptible, exposed, infectious, recovered };

struct SimResult {
    std::size_t ever_infected = 0;  ///< nodes that were ever exposed, index included
    std::size_t secondary_infections_from_index = 0;
    std::size_t duration_steps = 0;
    double attack_rate = 0.0;
    NodeId index_case = 0;
    friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Called after every half-day step with the step index and every node's state.
using StepObserver = std::function<void(std::size_t step, std::span<const Compartment>)>;

/// Half-day schedule: step s is a day step when s is even, and falls on weekday
/// (s / 2) % 7 with 0 = Monday. Transmission happens only in day steps Monday
/// to Friday.
bool is_transmission_step(std::size_t step);

/// Discrete-time SEIR on the contact network.
///
/// Vaccinated nodes start (and stay) recovered. A random susceptible node is
/// exposed at the start of step 0 (Monday, day). Each step first advances
/// disease clocks (exposed -> infectious when incubation ends; infectious nodes
/// recover with probability 1 - 0.95^t, t = steps spent infectious, and always
/// after 24 steps), then, in transmission steps, nodes whose onset is this very
/// step infect susceptible neighbours with probability
/// transmission_probability(0.25 w). From the next step on an infectious node
/// stays home and has no contacts. Runs until no node is exposed or infectious.
///
/// Throws Error when no node is susceptible.
SimResult run_seir(const ContactNetwork& net, const VaccinationAssignment& vac, const SeirParams& params,
                   RandomStream& rng, const StepObserver& observer = {});
SimResult run_seir(const ContactNetwork& net, const VaccinationAssignment& vac, const SeirParams& params,
                   std::uint64_t seed, const StepObserver& observer = {});

struct R0Estimate {
    std::optional<double> mean;  ///< empty when no run produced a secondary case
    std::size_t conditioning_runs = 0;
    std::size_t runs = 0;
};

/// Mean secondary infections caused by the index case, over runs with at least
/// one, on a fully susceptible population. Run k uses stream (seed, k).
R0Estimate estimate_r0(const ContactNetwork& net, const SeirParams& params, std::size_t runs, std::uint64_t seed,
                       Execution exec = Execution::parallel);

// ------------------------------------------------------- Vaccination mixing

/// Newman assortativity of vaccination status over the contact edges, each
/// undirected edge counted once in each direction. Throws Error without edges.
Assortativity vaccination_assortativity(const ContactNetwork& net, const VaccinationAssignment& vac);

/// Edge-type tallies that let a vaccinated/unvaccinated swap be scored in
/// O(deg(p) + deg(q)).
class VaccinationMixing {
public:
    VaccinationMixing(const ContactNetwork& net, const VaccinationAssignment& vac);

    double r() const { return r_from(vv_, uu_); }
    /// r after swapping vaccinated p with unvaccinated q (state unchanged).
    double r_after_swap(NodeId p, NodeId q) const;
    void apply_swap(NodeId p, NodeId q);

    const VaccinationAssignment& assignment() const { return vac_; }
    std::size_t vv() const { return vv_; }
    std::size_t uu() const { return uu_; }
    std::size_t vu() const { return edges_ - vv_ - uu_; }

private:
    void swap_delta(NodeId p, NodeId q, long& dvv, long& duu) const;
    double r_from(std::size_t vv, std::size_t uu) const;

    const ContactNetwork* net_;
    VaccinationAssignment vac_;
    std::size_t edges_ = 0;
    std::size_t vv_ = 0;
    std::size_t uu_ = 0;
};

class StallError : public Error {
public:
    StallError(const std::string& what, double best_r) : Error(what), best_r(best_r) {}
    double best_r;
};

struct RedistributeOptions {
    std::size_t max_stall = 50'000;
    /// When non-zero, recompute r from scratch every this many accepted swaps
    /// and record the largest disagreement with the incremental value.
    std::size_t verify_every = 0;
};

struct RedistributeResult {
    VaccinationAssignment assignment;
    double initial_r = 0.0;
    double r = 0.0;
    std::size_t accepted = 0;
    std::size_t trials = 0;
    double max_drift = 0.0;
    std::size_t verifications = 0;
};

/// Hill climbing on assortativity at fixed coverage: repeatedly swap a random
/// vaccinated node with a random unvaccinated one, keep the swap only if r
/// strictly increases, and stop as soon as r > target_r. Returns immediately if
/// r already exceeds target_r. Throws StallError after max_stall consecutive
/// rejected swaps, and Error if coverage is 0 or 1.
RedistributeResult redistribute(const ContactNetwork& net, const VaccinationAssignment& vac, double target_r,
                                RandomStream& rng, const RedistributeOptions& options = {});
RedistributeResult redistribute(const ContactNetwork& net, const VaccinationAssignment& vac, double target_r,
                                std::uint64_t seed, const RedistributeOptions& options = {});

// -------------------------------------------------------------------- Sweep

struct SweepPoint {
    double target_r = 0.0;
    double achieved_r_mean = 0.0;
    std::size_t runs = 0;
    std::size_t n_ge_3pct = 0;
    std::size_t n_ge_5pct = 0;
    double p_ge_3pct = 0.0;
    double p_ge_5pct = 0.0;
    double rr_3pct = 1.0;  ///< relative to the first grid point
    double rr_5pct = 1.0;
    double ci_low = 0.0;   ///< 95% Wilson interval for p_ge_3pct
    double ci_high = 0.0;
};

struct SweepReport {
    double coverage = 0.0;
    std::size_t vaccinated = 0;
    std::vector<SweepPoint> points;
};

struct SweepOptions {
    std::size_t runs_per_point = 2'000;
    RedistributeOptions redistribute;
    Execution exec = Execution::parallel;
};

/// r grid 0, 0.005, ..., 0.145.
std::vector<double> default_r_grid();

/// For every grid value and every run k: draw a fresh random assignment with
/// round(coverage * N) vaccinated, redistribute it past the target, and run one
/// epidemic, all from stream (seed, grid index, k). Throws Error for an empty or
/// non-ascending grid; stall errors are rethrown with the grid value attached.
SweepReport sweep(const ContactNetwork& net, double coverage, std::span<const double> r_grid, std::uint64_t seed,
                  const SeirParams& params = {}, const SweepOptions& options = {});

void write_sweep_csv(std::ostream& out, const SweepReport& report);

// ---------------------------------------------------------------- Generator

struct WeightDistribution {
    std::uint32_t min_weight = kMinContactWeight;
    /// Weights are min_weight + floor(X), X exponential with this mean.
    double mean_excess = 0.0;
};

struct GeneratorParams {
    // Defaults give the bundled network: conditional R0 near 2 with outbreak
    // risk that responds to vaccination clustering.
    std::size_t n_nodes = 220;
    std::size_t n_groups = 10;
    double p_in = 0.48;
    double p_out = 0.003;
    WeightDistribution weights;
};

struct SyntheticNetwork {
    ContactNetwork network;
    std::vector<std::size_t> group;  ///< per retained node
    std::size_t requested_nodes = 0;
};

/// Planted-partition random graph (contiguous equal-size groups), keeping only
/// the largest connected component (nodes renumbered in order). Throws Error
/// on bad parameters or when no edge is drawn.
SyntheticNetwork generate_synthetic_contact_network(const GeneratorParams& params, std::uint64_t seed);

}  // namespace vaxnet::epi
