// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//
//   vaxnet_acceptance <path to vaxnet CLI> <bundled data dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

#include "vaxnet/classify.hpp"
#include "vaxnet/corpus.hpp"
#include "vaxnet/epi.hpp"
#include "vaxnet/homophily.hpp"
#include "vaxnet/random.hpp"
#include "vaxnet/stats.hpp"
#include "vaxnet/synth.hpp"
#include "vaxnet/timeseries.hpp"

namespace fs = std::filesystem;
using namespace vaxnet;
using Clock = std::chrono::steady_clock;

namespace {

std::string cli_path;
fs::path data_dir;
int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& check) {
    try {
        const auto [pass, detail] = check();
        report(name, pass, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// r straight from the definition: e_ij as edge fractions, a and b its margins.
double oracle_r(const LabeledDigraph& g) {
    const int k = g.num_types;
    std::vector<std::vector<double>> e(k, std::vector<double>(k, 0.0));
    for (const auto& [u, v] : g.edges) e[g.type[u]][g.type[v]] += 1.0;
    const double m = static_cast<double>(g.edges.size());
    double trace = 0.0, sum_ab = 0.0;
    for (int i = 0; i < k; ++i) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < k; ++j) {
            a += e[i][j] / m;
            b += e[j][i] / m;
        }
        trace += e[i][i] / m;
        sum_ab += a * b;
    }
    return (trace - sum_ab) / (1.0 - sum_ab);
}

std::pair<bool, std::string> transmission() {
    const double p = epi::transmission_probability(90);
    return {std::abs(p - 0.5) <= 5e-4, fmt("p(90) = %.6f", p)};
}

std::pair<bool, std::string> sentiment() {
    const double s = sentiment_score(35884, 26667, 255828).value();
    return {std::abs(s - 0.02895) <= 1e-5, fmt("score = %.7f", s)};
}

std::pair<bool, std::string> assortativity_oracle() {
    const auto t0 = Clock::now();
    RandomStream rng(2024, {1});
    double worst = 0.0;
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        LabeledDigraph g;
        g.num_nodes = 2 + rng.below(19);
        g.num_types = 2 + static_cast<int>(rng.below(2));
        for (std::size_t i = 0; i < g.num_nodes; ++i)
            g.type.push_back(static_cast<std::uint8_t>(i < 2 ? i : rng.below(g.num_types)));
        const double p = 0.2 + 0.5 * rng.uniform();
        for (NodeId u = 0; u < g.num_nodes; ++u)
            for (NodeId v = 0; v < g.num_nodes; ++v)
                if (u != v && rng.bernoulli(p)) g.edges.emplace_back(u, v);
        g.edges.emplace_back(0, 1);  // guarantees a mixed edge
        g.normalize();
        const auto a = assortativity(g);
        if (a.degenerate) continue;
        ++compared;
        worst = std::max(worst, std::abs(a.r - oracle_r(g)));
    }
    const double secs = seconds_since(t0);
    return {compared == 100 && worst <= 1e-12 && secs < 1.0,
            fmt("%d graphs, max |diff| = %.2e, %.3f s", compared, worst, secs)};
}

std::pair<bool, std::string> bootstrap() {
    const auto t0 = Clock::now();
    const auto flat = synth::opinion_network(2000, 0.6, 0.005, 0.005, 11);
    const auto null = bootstrap_null(flat, 10000, 12);
    const auto planted = synth::opinion_network(2000, 0.6, 0.008, 0.002, 13);
    const double observed = assortativity(planted).r;
    const auto planted_null = bootstrap_null(planted, 10000, 14);
    const double secs = seconds_since(t0);
    const bool pass = std::abs(null.mean) <= 0.01 && observed > planted_null.max && secs < 120.0;
    return {pass, fmt("null mean %.5f (%zu edges); planted r = %.4f vs replicate max %.4f; %.1f s", null.mean,
                      flat.edges.size(), observed, planted_null.max, secs)};
}

std::pair<bool, std::string> redistribute() {
    epi::GeneratorParams gp;
    gp.n_nodes = 1000;
    gp.n_groups = 10;
    gp.p_in = 0.1;
    gp.p_out = 0.03;
    const auto net = epi::generate_synthetic_contact_network(gp, 21).network;
    if (net.size() != 1000) return {false, fmt("generator kept %zu of 1000 nodes", net.size())};
    const std::size_t count = epi::vaccinated_count_for(net.size(), 0.624);
    RandomStream pick(22);
    const auto start = epi::random_assignment(net.size(), count, pick);
    epi::RedistributeOptions opt;
    opt.verify_every = 1;

    bool pass = count == 624;
    std::string detail = fmt("start r = %.4f;", epi::vaccination_assortativity(net, start).r);
    double worst_drift = 0.0;
    for (const double target : {0.0, 0.05, 0.10, 0.145}) {
        const auto t0 = Clock::now();
        const auto res = epi::redistribute(net, start, target, 23, opt);
        const double secs = seconds_since(t0);
        const double recomputed = epi::vaccination_assortativity(net, res.assignment).r;
        const double drift = std::max(res.max_drift, std::abs(recomputed - res.r));
        worst_drift = std::max(worst_drift, drift);
        const bool ok = res.r > target && res.r <= target + 0.01 && res.assignment.count() == count && secs < 60.0;
        pass = pass && ok;
        detail += fmt(" target %.3f -> %.4f (%zu swaps, %.1f s)%s;", target, res.r, res.accepted, secs,
                      ok ? "" : " OUT");
    }
    pass = pass && worst_drift < 1e-9;
    detail += fmt(" max drift %.1e", worst_drift);
    return {pass, detail};
}

std::pair<bool, std::string> epidemic() {
    const auto t0 = Clock::now();
    const auto net = epi::read_contact_network((data_dir / "contact_network.csv").string());
    const auto r0 = epi::estimate_r0(net, {}, 10000, 31);
    const double grid[] = {0.0, 0.075, 0.145};
    epi::SweepOptions opt;
    opt.runs_per_point = 10000;
    const auto rep = epi::sweep(net, 0.624, grid, 32, {}, opt);
    const double secs = seconds_since(t0);

    const auto& p = rep.points;
    const bool r0_ok = r0.mean && *r0.mean >= 1.7 && *r0.mean <= 2.4;
    const bool increasing = p[0].p_ge_3pct < p[1].p_ge_3pct && p[1].p_ge_3pct < p[2].p_ge_3pct;
    const bool disjoint = p[0].ci_high < p[2].ci_low;
    const bool rr_ok = p[2].rr_3pct >= 2.0;
    std::string detail = fmt("N = %zu, R0 = %.3f;", net.size(), r0.mean.value_or(-1.0));
    for (const auto& pt : p)
        detail += fmt(" r %.3f: P = %.4f [%.4f, %.4f];", pt.target_r, pt.p_ge_3pct, pt.ci_low, pt.ci_high);
    detail += fmt(" RR = %.2f; %.1f s", p[2].rr_3pct, secs);
    return {r0_ok && increasing && disjoint && rr_ok && secs < 600.0, detail};
}

std::pair<bool, std::string> seir_invariants() {
    const auto t0 = Clock::now();
    RandomStream rng(41);
    std::size_t bad_conservation = 0, bad_vaccinated = 0, bad_zero = 0;
    epi::SeirParams cold;
    cold.forced_transmission = 0.0;
    for (int run = 0; run < 1000; ++run) {
        epi::GeneratorParams gp;
        gp.n_nodes = 40 + rng.below(160);
        gp.n_groups = 1 + rng.below(6);
        gp.p_in = 0.05 + 0.4 * rng.uniform();
        gp.p_out = 0.02 * rng.uniform();
        const auto net = epi::generate_synthetic_contact_network(gp, rng()).network;
        const std::size_t n = net.size();
        const auto vac = epi::random_assignment(n, rng.below(n), rng);
        const bool zero = run % 4 == 0;
        const auto res = epi::run_seir(net, vac, zero ? cold : epi::SeirParams{}, rng(),
                                       [&](std::size_t, std::span<const epi::Compartment> st) {
                                           std::size_t counts[4] = {};
                                           for (NodeId v = 0; v < st.size(); ++v) {
                                               ++counts[static_cast<int>(st[v])];
                                               if (vac.vaccinated[v] && st[v] != epi::Compartment::recovered)
                                                   ++bad_vaccinated;
                                           }
                                           if (counts[0] + counts[1] + counts[2] + counts[3] != n) ++bad_conservation;
                                       });
        if (zero && (res.ever_infected != 1 || res.attack_rate != 1.0 / static_cast<double>(n))) ++bad_zero;
    }
    const double secs = seconds_since(t0);
    return {bad_conservation == 0 && bad_vaccinated == 0 && bad_zero == 0 && secs < 60.0,
            fmt("1000 runs: %zu conservation, %zu vaccinated, %zu zero-transmission violations; %.1f s",
                bad_conservation, bad_vaccinated, bad_zero, secs)};
}

std::pair<bool, std::string> classifier() {
    const auto t0 = Clock::now();
    const auto tweets = read_tweet_file((data_dir / "corpus/tweets.jsonl").string()).tweets;
    const auto labels = read_label_file((data_dir / "corpus/labels.csv").string()).labels;
    std::map<std::string, std::string> text;
    for (const auto& t : tweets) text[t.id] = t.text;
    std::vector<LabeledDoc> docs;
    for (const auto& [id, label] : labels) docs.emplace_back(tokenize(text.at(id)), label);
    if (docs.size() != 2000) return {false, fmt("corpus has %zu documents", docs.size())};

    RandomStream rng(51);
    for (std::size_t i = docs.size(); i > 1; --i) std::swap(docs[i - 1], docs[rng.below(i)]);
    const std::span<const LabeledDoc> test(docs.data(), 500), train(docs.data() + 500, 1500);
    const EnsembleModel model{train_nb(train), train_maxent(train)};
    const double acc = evaluate_accuracy(model, test);

    // Central differences on a small problem at a random point.
    const auto problem = MaxEntProblem::build(train.subspan(0, 60), 0.1);
    std::vector<double> x(problem.num_params()), grad;
    for (auto& v : x) v = 0.5 * (rng.uniform() - 0.5);
    problem.objective(x, &grad);
    double worst = 0.0;
    const double h = 1e-5;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double up = problem.objective(x, nullptr);
        x[i] = keep - h;
        const double down = problem.objective(x, nullptr);
        x[i] = keep;
        const double numeric = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - grad[i]) / std::max(1.0, std::abs(grad[i])));
    }
    const double secs = seconds_since(t0);
    return {acc >= 0.90 && worst < 1e-4 && secs < 120.0,
            fmt("ensemble accuracy %.4f on 500 held-out docs; gradient max rel error %.2e over %zu params; %.1f s",
                acc, worst, x.size(), secs)};
}

std::pair<bool, std::string> stats_values() {
    const double f = stats::fisher_exact_2x2(2, 0, 0, 2);
    const double d[] = {1, 2, 3}, zero[] = {0, 0, 0};
    const double w = stats::wilcoxon_signed_rank_paired(d, zero);
    const double x[] = {1.0, 2.5, 2.0, 4.0, 7.5, 3.0}, y[] = {2.0, 1.0, 3.5, 4.5, 6.0, 5.0},
                 ones[] = {3, 3, 3, 3, 3, 3};
    const double diff = std::abs(stats::weighted_pearson(x, y, ones).r - stats::pearson(x, y).r);
    return {f == 1.0 / 3.0 && w == 0.125 && diff <= 1e-12,
            fmt("fisher %.17g, wilcoxon %.17g, weighted-vs-plain %.1e", f, w, diff)};
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<bool, std::string> determinism() {
    const auto t0 = Clock::now();
    const fs::path root = fs::temp_directory_path() / fmt("vaxnet_acceptance_%d", static_cast<int>(::getpid()));
    fs::remove_all(root);
    const char* commands[] = {"train", "classify", "timeseries", "flownet", "homophily", "gen-net", "sweep"};
    for (const char* run_dir : {"a", "b"}) {
        for (const char* cmd : commands) {
            const std::string line = "\"" + cli_path + "\" " + cmd + " --config \"" + (data_dir / "config.txt").string() +
                                     "\" --out \"" + (root / run_dir).string() + "\" > /dev/null";
            if (std::system(line.c_str()) != 0) return {false, std::string("command failed: ") + cmd};
        }
    }
    std::size_t compared = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const auto name = entry.path().filename();
        if (name.extension() != ".csv") continue;
        ++compared;
        if (read_bytes(entry.path()) != read_bytes(root / "b" / name)) differing.push_back(name.string());
    }
    const double secs = seconds_since(t0);
    fs::remove_all(root);
    std::string detail = fmt("%zu CSV files compared, %zu differ; two pipeline runs in %.1f s", compared,
                             differing.size(), secs);
    for (const auto& d : differing) detail += " " + d;
    return {compared >= 15 && differing.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: vaxnet_acceptance <vaxnet CLI> <data dir>\n";
        return 2;
    }
    cli_path = argv[1];
    data_dir = argv[2];

    run("transmission probability at w = 90", transmission);
    run("sentiment score of the corpus totals", sentiment);
    run("assortativity matches the brute-force oracle", assortativity_oracle);
    run("bootstrap null centred on zero, planted homophily above it", bootstrap);
    run("redistribute reaches every target at fixed coverage", redistribute);
    run("outbreak risk rises with vaccination clustering", epidemic);
    run("SEIR invariants", seir_invariants);
    run("classifier accuracy and MaxEnt gradient", classifier);
    run("exact statistics", stats_values);
    run("pipeline determinism", determinism);

    std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criterion(s) failed", failures)) << std::endl;
    return failures == 0 ? 0 : 1;
}
