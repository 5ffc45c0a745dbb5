#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "vaxnet/epi.hpp"

using namespace vaxnet;
using namespace vaxnet::epi;

namespace {

VaccinationAssignment none(std::size_t n) { return VaccinationAssignment{std::vector<std::uint8_t>(n, 0)}; }

ContactNetwork two_cliques(std::size_t k) {
    std::vector<WeightedEdge> e;
    for (NodeId u = 0; u < 2 * k; ++u)
        for (NodeId v = u + 1; v < 2 * k; ++v)
            if ((u < k) == (v < k)) e.push_back({u, v, 120});
    e.push_back({0, static_cast<NodeId>(k), 90});
    return ContactNetwork(2 * k, e);
}

ContactNetwork random_network(std::size_t n, double p, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<WeightedEdge> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) e.push_back({u, v, static_cast<std::uint32_t>(90 + rng.below(400))});
    return ContactNetwork(n, e);
}

// Unvaccinated-vaccinated mixing straight from the e-matrix definition.
double assortativity_oracle(const ContactNetwork& net, const VaccinationAssignment& vac) {
    double e[2][2] = {{0, 0}, {0, 0}};
    for (const auto& ed : net.edges()) {
        const int a = vac.vaccinated[ed.u], b = vac.vaccinated[ed.v];
        e[a][b] += 1;
        e[b][a] += 1;
    }
    const double m = e[0][0] + e[0][1] + e[1][0] + e[1][1];
    double tr = 0, ab = 0;
    for (int i = 0; i < 2; ++i) {
        tr += e[i][i] / m;
        const double a = (e[i][0] + e[i][1]) / m, b = (e[0][i] + e[1][i]) / m;
        ab += a * b;
    }
    return (tr - ab) / (1 - ab);
}

}  // namespace

TEST_CASE("transmission probability") {
    CHECK(std::abs(transmission_probability(90) - 0.5) < 5e-4);
    CHECK(transmission_probability(0) == 0.0);
    CHECK(std::abs(transmission_probability(180) - 0.75) < 5e-4);
    const double p90 = transmission_probability(90);
    CHECK(transmission_probability(180) == doctest::Approx(1 - (1 - p90) * (1 - p90)).epsilon(1e-12));
}

TEST_CASE("incubation: floor, reproducibility and mean") {
    CHECK(incubation_steps_for(1.0) == 1);
    CHECK(incubation_steps_for(1.0 - 1e-15) == 1);
    RandomStream a(3), b(3);
    for (int i = 0; i < 100; ++i) REQUIRE(sample_incubation(a) == sample_incubation(b));

    // Continuous mean offset + scale * Gamma(1 + 1/shape), by numerical integration
    // of the Weibull survival function.
    double integral = 0;
    const int steps = 200000;
    const double top = 12.0;
    for (int i = 0; i < steps; ++i) {
        const double x = (i + 0.5) * top / steps;
        integral += std::exp(-std::pow(x / 1.10, 2.21)) * top / steps;
    }
    const double expected = 0.5 + integral;
    CHECK(expected == doctest::Approx(0.5 + 1.10 * std::tgamma(1 + 1 / 2.21)).epsilon(1e-6));

    RandomStream rng(2024);
    double sum = 0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += 0.5 * sample_incubation(rng);
    CHECK(std::abs(sum / n - expected) < 0.01);
}

TEST_CASE("schedule") {
    CHECK(is_transmission_step(0));
    CHECK_FALSE(is_transmission_step(1));
    CHECK(is_transmission_step(8));
    CHECK_FALSE(is_transmission_step(10));  // Saturday
    CHECK_FALSE(is_transmission_step(12));  // Sunday
    CHECK(is_transmission_step(14));        // Monday again
}

TEST_CASE("contact network validation and io") {
    CHECK_THROWS_AS(ContactNetwork(3, {{0, 0, 100}}), InputError);
    CHECK_THROWS_AS(ContactNetwork(3, {{0, 1, 89}}), InputError);
    CHECK_THROWS_AS(ContactNetwork(3, {{0, 5, 100}}), InputError);
    CHECK_THROWS_AS(ContactNetwork(3, {{0, 1, 100}, {1, 0, 100}}), InputError);
    const ContactNetwork net(4, {{2, 1, 95}, {0, 3, 300}});
    std::ostringstream out;
    write_contact_network(out, net);
    std::istringstream in(out.str());
    const auto back = parse_contact_network(in);
    CHECK(back.size() == 4);
    CHECK(std::vector<WeightedEdge>(back.edges().begin(), back.edges().end()) ==
          std::vector<WeightedEdge>(net.edges().begin(), net.edges().end()));
    std::istringstream low("u,v,w\n0,1,30\n");
    CHECK_THROWS_AS(parse_contact_network(low), InputError);
}

TEST_CASE("seir: trivial outbreaks") {
    const ContactNetwork empty(5, {});
    CHECK(run_seir(empty, none(5), {}, 1).ever_infected == 1);

    // Star whose leaves are all vaccinated: whichever susceptible node is index, nothing spreads.
    std::vector<WeightedEdge> star;
    for (NodeId v = 1; v < 6; ++v) star.push_back({0, v, 2000});
    const ContactNetwork s(6, star);
    VaccinationAssignment vac{{0, 1, 1, 1, 1, 1}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto r = run_seir(s, vac, {}, seed);
        CHECK(r.index_case == 0);
        CHECK(r.ever_infected == 1);
    }
    CHECK_THROWS_AS(run_seir(s, VaccinationAssignment{std::vector<std::uint8_t>(6, 1)}, {}, 1), Error);
}

TEST_CASE("seir: determinism") {
    const auto net = random_network(100, 0.08, 4);
    CHECK(run_seir(net, none(100), {}, 99) == run_seir(net, none(100), {}, 99));
}

TEST_CASE("seir: state machine, conservation, vaccinated never infected") {
    const auto net = random_network(120, 0.06, 5);
    RandomStream pick(6);
    SeirParams hot;
    hot.forced_transmission = 0.9;
    for (int run = 0; run < 200; ++run) {
        const auto vac = random_assignment(net.size(), pick.below(100), pick);
        std::vector<Compartment> prev(net.size());
        for (NodeId v = 0; v < net.size(); ++v)
            prev[v] = vac.vaccinated[v] ? Compartment::recovered : Compartment::susceptible;
        std::size_t exposed_seen = 0;
        bool ok = true;
        const auto r = run_seir(net, vac, run % 2 ? hot : SeirParams{}, static_cast<std::uint64_t>(run),
                                [&](std::size_t, std::span<const Compartment> st) {
                                    if (st.size() != net.size()) ok = false;
                                    for (NodeId v = 0; v < st.size(); ++v) {
                                        const int a = static_cast<int>(prev[v]), b = static_cast<int>(st[v]);
                                        if (b < a || b > a + 1) ok = false;
                                        if (vac.vaccinated[v] && st[v] != Compartment::recovered) ok = false;
                                        if (prev[v] == Compartment::susceptible && st[v] == Compartment::exposed)
                                            ++exposed_seen;
                                        prev[v] = st[v];
                                    }
                                });
        REQUIRE(ok);
        REQUIRE(exposed_seen == r.ever_infected);
        REQUIRE(r.attack_rate >= 1.0 / static_cast<double>(net.size()));
        REQUIRE(r.ever_infected <= net.size() - vac.count());
    }
}

TEST_CASE("seir: forced zero transmission stays at the index case") {
    const auto net = random_network(60, 0.2, 7);
    SeirParams cold;
    cold.forced_transmission = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) CHECK(run_seir(net, none(60), cold, seed).ever_infected == 1);
}

TEST_CASE("seir: forced certain transmission reaches every susceptible neighbour of a spreader") {
    const auto net = random_network(80, 0.05, 8);
    SeirParams hot;
    hot.forced_transmission = 1.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<Compartment> prev(80, Compartment::susceptible);
        bool ok = true;
        run_seir(net, none(80), hot, seed, [&](std::size_t step, std::span<const Compartment> st) {
            for (NodeId v = 0; v < 80; ++v) {
                const bool onset = prev[v] == Compartment::exposed && st[v] == Compartment::infectious;
                if (onset && is_transmission_step(step))
                    for (const auto& c : net.contacts(v))
                        if (st[c.node] == Compartment::susceptible) ok = false;
            }
            prev.assign(st.begin(), st.end());
        });
        REQUIRE(ok);
    }
}

TEST_CASE("r0: single edge gives exactly one secondary case") {
    const ContactNetwork pair(2, {{0, 1, 90}});
    const auto est = estimate_r0(pair, {}, 2000, 1);
    REQUIRE(est.mean);
    CHECK(*est.mean == 1.0);
    CHECK(est.conditioning_runs > 0);
    CHECK_FALSE(estimate_r0(ContactNetwork(3, {}), {}, 100, 1).mean);
}

TEST_CASE("r0: serial and parallel agree") {
    const auto net = random_network(150, 0.05, 9);
    const auto a = estimate_r0(net, {}, 500, 3, Execution::serial);
    const auto b = estimate_r0(net, {}, 500, 3, Execution::parallel);
    CHECK(a.mean == b.mean);
    CHECK(a.conditioning_runs == b.conditioning_runs);
}

TEST_CASE("vaccination assortativity: hand cases") {
    const ContactNetwork path(4, {{0, 1, 90}, {1, 2, 90}, {2, 3, 90}});
    CHECK(vaccination_assortativity(path, {{1, 0, 1, 0}}).r == doctest::Approx(-1.0).epsilon(1e-15));
    // e_VV = 1/3, e_VU = e_UV = 1/6, e_UU = 1/3; a = b = (1/2, 1/2).
    CHECK(vaccination_assortativity(path, {{1, 1, 0, 0}}).r == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    const auto cl = two_cliques(5);
    VaccinationAssignment half{{1, 1, 1, 1, 1, 0, 0, 0, 0, 0}};
    const ContactNetwork pure(10, [] {
        std::vector<WeightedEdge> e;
        for (NodeId u = 0; u < 10; ++u)
            for (NodeId v = u + 1; v < 10; ++v)
                if ((u < 5) == (v < 5)) e.push_back({u, v, 100});
        return e;
    }());
    CHECK(vaccination_assortativity(pure, half).r == 1.0);
    CHECK(vaccination_assortativity(cl, half).r == doctest::Approx(assortativity_oracle(cl, half)).epsilon(1e-13));
}

TEST_CASE("vaccination assortativity: random assignments on a large network are near zero") {
    const auto net = random_network(1000, 0.02, 10);
    RandomStream rng(1);
    double sum = 0;
    for (int i = 0; i < 50; ++i) {
        const auto vac = random_assignment(1000, 624, rng);
        const double r = vaccination_assortativity(net, vac).r;
        REQUIRE(r == doctest::Approx(assortativity_oracle(net, vac)).epsilon(1e-12));
        sum += r;
    }
    CHECK(std::abs(sum / 50) < 0.02);
}

TEST_CASE("incremental mixing agrees with recomputation after every swap") {
    const auto net = random_network(200, 0.05, 11);
    RandomStream rng(2);
    VaccinationMixing mix(net, random_assignment(200, 120, rng));
    for (int i = 0; i < 500; ++i) {
        std::vector<NodeId> v, u;
        for (NodeId x = 0; x < 200; ++x) (mix.assignment().vaccinated[x] ? v : u).push_back(x);
        const NodeId p = v[rng.below(v.size())], q = u[rng.below(u.size())];
        const double predicted = mix.r_after_swap(p, q);
        mix.apply_swap(p, q);
        REQUIRE(std::abs(mix.r() - predicted) < 1e-15);
        REQUIRE(std::abs(mix.r() - vaccination_assortativity(net, mix.assignment()).r) < 1e-12);
    }
}

TEST_CASE("redistribute: two cliques to r > 0.9") {
    const auto net = two_cliques(10);
    RandomStream rng(3);
    const auto start = random_assignment(20, 10, rng);
    RedistributeOptions opt;
    opt.verify_every = 1;
    const auto res = redistribute(net, start, 0.9, rng, opt);
    CHECK(res.r > 0.9);
    CHECK(res.assignment.count() == 10);
    CHECK(vaccination_assortativity(net, res.assignment).r == doctest::Approx(res.r).epsilon(1e-12));
    CHECK(res.max_drift < 1e-9);
}

TEST_CASE("redistribute: contract") {
    const auto net = random_network(300, 0.04, 12);
    RandomStream rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto start = random_assignment(300, 187, rng);
        const double r0 = vaccination_assortativity(net, start).r;
        const double target = -0.02 + 0.01 * trial;
        const auto res = redistribute(net, start, target, rng);
        REQUIRE(res.assignment.count() == 187);
        REQUIRE(res.initial_r == doctest::Approx(r0).epsilon(1e-12));
        if (r0 > target) {
            REQUIRE(res.accepted == 0);
            REQUIRE(res.assignment == start);
        } else {
            REQUIRE(res.r > target);
            REQUIRE(res.r > r0);
            REQUIRE(res.accepted >= 1);
        }
    }
    // Same seed, same answer.
    const auto s = random_assignment(300, 187, rng);
    CHECK(redistribute(net, s, 0.1, 5).assignment == redistribute(net, s, 0.1, 5).assignment);
    CHECK_THROWS_AS(redistribute(net, none(300), 0.1, 5), Error);
}

TEST_CASE("redistribute: unreachable target stalls with the best r") {
    const auto net = two_cliques(5);
    const VaccinationAssignment half{{1, 1, 1, 1, 1, 0, 0, 0, 0, 0}};
    RedistributeOptions opt;
    opt.max_stall = 200;
    try {
        redistribute(net, half, 0.99, 1, opt);
        FAIL("expected a stall");
    } catch (const StallError& e) {
        CHECK(e.best_r == doctest::Approx(vaccination_assortativity(net, half).r));
    }
}

TEST_CASE("sweep: baseline, determinism, serial equals parallel") {
    GeneratorParams gp;
    gp.n_nodes = 120;
    gp.n_groups = 6;
    gp.p_in = 0.4;
    const auto net = generate_synthetic_contact_network(gp, 1).network;
    const std::vector<double> base{0.0};
    SweepOptions opt;
    opt.runs_per_point = 50;
    const auto one = sweep(net, 0.624, base, 2, {}, opt);
    CHECK(one.points[0].rr_3pct == doctest::Approx(1.0));

    const std::vector<double> grid{0.0, 0.05, 0.1};
    const auto a = sweep(net, 0.624, grid, 3, {}, opt);
    opt.exec = Execution::serial;
    const auto b = sweep(net, 0.624, grid, 3, {}, opt);
    std::ostringstream sa, sb;
    write_sweep_csv(sa, a);
    write_sweep_csv(sb, b);
    CHECK(sa.str() == sb.str());
    for (const auto& p : a.points) {
        CHECK(p.p_ge_3pct >= 0.0);
        CHECK(p.p_ge_3pct <= 1.0);
        CHECK(p.p_ge_5pct <= p.p_ge_3pct);
        CHECK(p.achieved_r_mean > p.target_r);
    }
    const std::vector<double> bad{0.1, 0.05};
    CHECK_THROWS_AS(sweep(net, 0.624, bad, 1, {}, opt), Error);
    CHECK_THROWS_AS(sweep(net, 0.624, std::vector<double>{}, 1, {}, opt), Error);
}

TEST_CASE("sweep: stalls carry the grid point") {
    const auto net = two_cliques(5);
    SweepOptions opt;
    opt.runs_per_point = 3;
    opt.redistribute.max_stall = 100;
    const std::vector<double> grid{0.0, 0.99};
    try {
        sweep(net, 0.5, grid, 1, {}, opt);
        FAIL("expected a stall");
    } catch (const StallError& e) {
        CHECK(std::string(e.what()).find("r = 0.99") != std::string::npos);
    }
}

TEST_CASE("generator") {
    GeneratorParams gp;
    gp.n_nodes = 100;
    gp.n_groups = 5;
    gp.p_in = 0.2;
    gp.p_out = 0.0;
    gp.weights.mean_excess = 40;
    const auto a = generate_synthetic_contact_network(gp, 3);
    CHECK(a.network.size() <= 100);
    CHECK(a.requested_nodes == 100);
    for (const auto& e : a.network.edges()) CHECK(e.w >= kMinContactWeight);
    const auto b = generate_synthetic_contact_network(gp, 3);
    CHECK(std::vector<WeightedEdge>(a.network.edges().begin(), a.network.edges().end()) ==
          std::vector<WeightedEdge>(b.network.edges().begin(), b.network.edges().end()));
    // With no edges between groups only one group survives.
    CHECK(a.network.size() <= 20);
    gp.p_in = 0.0;
    CHECK_THROWS_AS(generate_synthetic_contact_network(gp, 3), Error);
    gp.p_in = 0.3;
    gp.weights.min_weight = 50;
    CHECK_THROWS_AS(generate_synthetic_contact_network(gp, 3), Error);
}
