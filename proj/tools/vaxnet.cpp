// vaxnet: command-line driver for the sentiment and vaccination-clustering pipeline.
//
//   vaxnet train      --config run.cfg     models from the manually rated tweets
//   vaxnet classify   --config run.cfg     label every tweet
//   vaxnet timeseries --config run.cfg     daily and regional sentiment
//   vaxnet flownet    --config run.cfg     opinionated information-flow network
//   vaxnet homophily  --config run.cfg     assortativity, nulls, communities
//   vaxnet gen-net    --config run.cfg     synthetic contact network
//   vaxnet sweep      --config run.cfg     R0 and outbreak risk over the r grid
//
// Exit codes: 0 success, 1 runtime failure, 2 usage, configuration or stale input.

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vaxnet/classify.hpp"
#include "vaxnet/corpus.hpp"
#include "vaxnet/epi.hpp"
#include "vaxnet/error.hpp"
#include "vaxnet/flownet.hpp"
#include "vaxnet/homophily.hpp"
#include "vaxnet/random.hpp"
#include "vaxnet/timeseries.hpp"

namespace fs = std::filesystem;
using namespace vaxnet;

namespace {

constexpr const char* kVersion = "0.1.0";

// Stream paths per command, all under the master seed.
enum StreamId : std::uint64_t { train_split = 1, bootstrap = 2, in_fraction_null = 3, louvain = 4, generator = 5,
                                sweep_runs = 6, r0_runs = 7 };

struct UsageError : Error {
    using Error::Error;
};

struct StaleError : Error {
    using Error::Error;
};

// ------------------------------------------------------------------ config

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"seed", ""},
        {"out", "out"},
        {"tweets", ""},
        {"labels", ""},
        {"followers", ""},
        {"friends", ""},
        {"coverage", ""},
        {"contact_network", ""},
        {"test_fraction", "0.25"},
        {"nb_smoothing", "1"},
        {"maxent_l2", "0.1"},
        {"maxent_max_iter", "1000"},
        {"maxent_tol", "1e-6"},
        {"first_day", ""},
        {"last_day", ""},
        {"ma_window", "14"},
        {"bootstrap_iterations", "10000"},
        {"in_fraction_iterations", "100"},
        {"community_min_fraction", "0.01"},
        {"gen_nodes", "220"},
        {"gen_groups", "10"},
        {"gen_p_in", "0.48"},
        {"gen_p_out", "0.003"},
        {"gen_min_weight", "90"},
        {"gen_mean_excess", "0"},
        {"vaccination_coverage", "0.624"},
        {"r_grid", "default"},
        {"runs_per_point", "2000"},
        {"r0_runs", "10000"},
        {"max_stall", "50000"},
    };
    return d;
}

const std::vector<std::string>& path_keys() {
    static const std::vector<std::string> k = {"out", "tweets", "labels", "followers", "friends", "coverage",
                                               "contact_network"};
    return k;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class Config {
public:
    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open config file '" + path + "'");
        const fs::path base = fs::absolute(path).parent_path();
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw UsageError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), base, path + ":" + std::to_string(line_no));
        }
    }

    void set(const std::string& key, std::string value, const fs::path& base, const std::string& where) {
        if (!defaults().count(key)) throw UsageError(where + ": unknown key '" + key + "'");
        const bool is_path = std::find(path_keys().begin(), path_keys().end(), key) != path_keys().end();
        if (is_path && !value.empty() && fs::path(value).is_relative()) value = (base / value).lexically_normal().string();
        values_[key] = value;
    }

    std::string get(const std::string& key) const {
        const auto it = values_.find(key);
        return it != values_.end() ? it->second : defaults().at(key);
    }

    std::string path(const std::string& key) const {
        const std::string p = get(key);
        if (p.empty()) throw UsageError("config key '" + key + "' is required for this command");
        return p;
    }

    std::string input(const std::string& key) const {
        const std::string p = path(key);
        if (!fs::exists(p)) throw UsageError("input '" + key + "' does not exist: " + p);
        return p;
    }

    double number(const std::string& key) const {
        const std::string v = get(key);
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw UsageError("config key '" + key + "' expects a number, got '" + v + "'");
        }
    }

    std::size_t count(const std::string& key) const {
        const double d = number(key);
        if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d)))
            throw UsageError("config key '" + key + "' expects a non-negative integer");
        return static_cast<std::size_t>(d);
    }

    std::uint64_t seed() const {
        const std::string v = get("seed");
        if (v.empty()) throw UsageError("a master seed is required (config 'seed' or --seed)");
        try {
            std::size_t used = 0;
            const auto s = std::stoull(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return s;
        } catch (const std::exception&) {
            throw UsageError("seed must be a non-negative integer, got '" + v + "'");
        }
    }

    std::vector<double> r_grid() const {
        const std::string v = get("r_grid");
        if (v == "default") return epi::default_r_grid();
        std::vector<double> grid;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                grid.push_back(std::stod(trim(item)));
            } catch (const std::exception&) {
                throw UsageError("r_grid: bad value '" + item + "'");
            }
        }
        if (grid.empty()) throw UsageError("r_grid is empty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) throw UsageError("r_grid must be strictly ascending");
        return grid;
    }

    /// Every effective value except the output directory, one "key=value"
    /// line each, sorted by key.
    std::string canonical() const {
        std::string out;
        for (const auto& [key, def] : defaults())
            if (key != "out") out += key + "=" + get(key) + "\n";
        return out;
    }

private:
    std::map<std::string, std::string> values_;
};

std::string config_hash(const Config& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : cfg.canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::uint64_t sub_seed(const Config& cfg, StreamId id) { return derive_stream(cfg.seed(), {id}).key(); }

// --------------------------------------------------------------- artifacts

struct Context {
    Config cfg;
    fs::path out;
    bool force = false;

    fs::path file(const std::string& name) const { return out / name; }
};

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write '" + p.string() + "'");
    return f;
}

void write_manifest(const Context& ctx, const std::string& command, const std::vector<std::string>& outputs) {
    nlohmann::ordered_json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = ctx.cfg.seed();
    m["config_hash"] = config_hash(ctx.cfg);
    m["outputs"] = outputs;
    auto f = open_out(ctx.file("manifest_" + command + ".json"));
    f << m.dump(2) << '\n';
}

/// Refuses to run on outputs of `upstream` produced under a different config.
void require_upstream(const Context& ctx, const std::string& upstream) {
    const fs::path p = ctx.file("manifest_" + upstream + ".json");
    std::ifstream in(p);
    if (!in) throw StaleError("missing upstream output: run '" + upstream + "' first (" + p.string() + ")");
    nlohmann::json m;
    try {
        in >> m;
    } catch (const std::exception&) {
        throw StaleError("unreadable manifest " + p.string());
    }
    const std::string have = m.value("config_hash", std::string{});
    const std::string want = config_hash(ctx.cfg);
    if (have != want) {
        const std::string msg = "'" + upstream + "' outputs were produced with config hash " + have +
                                " but the current config hashes to " + want + "; rerun '" + upstream +
                                "' or pass --force";
        if (!ctx.force) throw StaleError(msg);
        std::cerr << "warning: " << msg << " (continuing because of --force)\n";
    }
}

void report_skips(const std::string& what, std::size_t skipped, const std::vector<std::string>& warnings) {
    if (skipped == 0) return;
    std::cerr << "warning: skipped " << skipped << " malformed " << what << " line(s)\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(warnings.size(), 5); ++i) std::cerr << "  " << warnings[i] << '\n';
}

std::vector<Tweet> load_tweets(const Config& cfg) {
    auto r = read_tweet_file(cfg.input("tweets"));
    report_skips("tweet", r.skipped, r.warnings);
    return std::move(r.tweets);
}

std::vector<std::pair<std::string, SentimentLabel>> load_labels(const Config& cfg) {
    auto r = read_label_file(cfg.input("labels"));
    report_skips("label", r.skipped, r.warnings);
    return std::move(r.labels);
}

/// classified.csv as tweet id -> label.
std::map<std::string, SentimentLabel> load_classified(const Context& ctx) {
    std::ifstream in(ctx.file("classified.csv"));
    if (!in) throw StaleError("missing classified.csv: run 'classify' first");
    std::map<std::string, SentimentLabel> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const auto a = line.find(','), b = line.find(',', a + 1);
        const auto label = parse_label(line.substr(a + 1, b - a - 1));
        if (a == std::string::npos || !label) throw Error("classified.csv: bad line '" + line + "'");
        out[line.substr(0, a)] = *label;
    }
    return out;
}

std::vector<LabeledTweet> attach(const std::vector<Tweet>& tweets, const std::map<std::string, SentimentLabel>& labels) {
    std::vector<LabeledTweet> out;
    for (const auto& t : tweets) {
        const auto it = labels.find(t.id);
        if (it != labels.end()) out.push_back({&t, it->second});
    }
    return out;
}

// ---------------------------------------------------------------- commands

void cmd_train(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto tweets = load_tweets(cfg);
    const auto labels = load_labels(cfg);
    std::map<std::string, const Tweet*> by_id;
    for (const auto& t : tweets) by_id[t.id] = &t;

    std::vector<LabeledDoc> docs;
    std::size_t orphans = 0;
    for (const auto& [id, label] : labels) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            ++orphans;
            continue;
        }
        docs.emplace_back(tokenize(it->second->text), label);
    }
    if (orphans) std::cerr << "warning: " << orphans << " label(s) refer to unknown tweets\n";

    const double test_fraction = cfg.number("test_fraction");
    if (test_fraction < 0 || test_fraction >= 1) throw UsageError("test_fraction must lie in [0, 1)");
    RandomStream rng(cfg.seed(), {train_split});
    for (std::size_t i = docs.size(); i > 1; --i) std::swap(docs[i - 1], docs[rng.below(i)]);
    const auto n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(docs.size()));
    const std::span<const LabeledDoc> test(docs.data(), n_test);
    const std::span<const LabeledDoc> train(docs.data() + n_test, docs.size() - n_test);

    const auto nb = train_nb(train, cfg.number("nb_smoothing"));
    const auto me = train_maxent(train, cfg.number("maxent_l2"), static_cast<int>(cfg.count("maxent_max_iter")),
                                 cfg.number("maxent_tol"));
    if (!me.converged) std::cerr << "warning: MaxEnt stopped after " << me.iterations << " iterations\n";
    open_out(ctx.file("model_nb.json")) << to_json(nb) << '\n';
    open_out(ctx.file("model_maxent.json")) << to_json(me) << '\n';

    std::vector<std::string> outputs{"model_nb.json", "model_maxent.json"};
    if (n_test > 0) {
        const EnsembleModel ens{nb, me};
        const double acc_nb = evaluate_accuracy(nb, test), acc_me = evaluate_accuracy(me, test),
                     acc = evaluate_accuracy(ens, test);
        auto f = open_out(ctx.file("train_metrics.csv"));
        f << "model,test_docs,accuracy\n"
          << "nb," << n_test << ',' << format_number(acc_nb) << '\n'
          << "maxent," << n_test << ',' << format_number(acc_me) << '\n'
          << "ensemble," << n_test << ',' << format_number(acc) << '\n';
        outputs.push_back("train_metrics.csv");
        std::cout << "held-out accuracy (" << n_test << " docs): ensemble " << format_number(acc) << ", nb "
                  << format_number(acc_nb) << ", maxent " << format_number(acc_me) << '\n';
    }
    write_manifest(ctx, "train", outputs);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw StaleError("missing " + p.string() + ": run 'train' first");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void cmd_classify(const Context& ctx) {
    require_upstream(ctx, "train");
    const auto& cfg = ctx.cfg;
    const EnsembleModel model{nb_from_json(slurp(ctx.file("model_nb.json"))),
                              maxent_from_json(slurp(ctx.file("model_maxent.json")))};
    const auto tweets = load_tweets(cfg);
    std::map<std::string, SentimentLabel> manual;
    for (const auto& [id, label] : load_labels(cfg)) manual[id] = label;

    auto f = open_out(ctx.file("classified.csv"));
    f << "tweet_id,label,source\n";
    std::array<long, kNumLabels> totals{};
    for (const auto& t : tweets) {
        const auto it = manual.find(t.id);
        const bool rated = it != manual.end();
        const SentimentLabel label = rated ? it->second : model.predict(tokenize(t.text));
        ++totals[index_of(label)];
        f << t.id << ',' << to_string(label) << ',' << (rated ? "manual" : "predicted") << '\n';
    }
    std::cout << "classified " << tweets.size() << " tweets:";
    for (auto l : kAllLabels) std::cout << ' ' << to_string(l) << '=' << totals[index_of(l)];
    std::cout << '\n';
    write_manifest(ctx, "classify", {"classified.csv"});
}

void cmd_timeseries(const Context& ctx) {
    require_upstream(ctx, "classify");
    const auto& cfg = ctx.cfg;
    const auto tweets = load_tweets(cfg);
    if (tweets.empty()) throw UsageError("no tweets to aggregate");
    const auto labeled = attach(tweets, load_classified(ctx));

    auto day_of = [](const Tweet& t) { return std::chrono::floor<std::chrono::days>(t.timestamp); };
    Day first = day_of(tweets.front()), last = first;
    for (const auto& t : tweets) {
        first = std::min(first, day_of(t));
        last = std::max(last, day_of(t));
    }
    auto day_key = [&](const std::string& key, Day fallback) {
        const std::string v = cfg.get(key);
        if (v.empty()) return fallback;
        const auto d = parse_date(v);
        if (!d) throw UsageError(key + ": expected YYYY-MM-DD, got '" + v + "'");
        return *d;
    };
    first = day_key("first_day", first);
    last = day_key("last_day", last);

    const auto series = daily_series(labeled, first, last);
    std::vector<std::optional<double>> scores;
    for (const auto& d : series) scores.push_back(d.score());
    const auto window = cfg.count("ma_window");
    if (window == 0) throw UsageError("ma_window must be >= 1");
    const auto ma = moving_average(scores, window);
    {
        auto f = open_out(ctx.file("daily_counts.csv"));
        write_daily_counts_csv(f, series);
    }
    {
        auto f = open_out(ctx.file("moving_avg.csv"));
        write_moving_average_csv(f, series, ma);
    }
    const auto regions = region_scores(labeled);
    {
        auto f = open_out(ctx.file("region_scores.csv"));
        write_region_scores_csv(f, regions);
    }
    std::vector<std::string> outputs{"daily_counts.csv", "moving_avg.csv", "region_scores.csv"};
    if (!cfg.get("coverage").empty()) {
        const auto cov = read_coverage_file(cfg.input("coverage"));
        const auto rc = regional_correlation(regions, cov);
        auto f = open_out(ctx.file("regional_correlation.csv"));
        f << "regions,r,p\n"
          << rc.regions << ',' << format_number(rc.correlation.r) << ',' << format_number(rc.correlation.p) << '\n';
        outputs.push_back("regional_correlation.csv");
        std::cout << "weighted correlation with coverage over " << rc.regions
                  << " regions: r = " << format_number(rc.correlation.r) << " (p = " << format_number(rc.correlation.p)
                  << ")\n";
    }
    long pos = 0, neg = 0, neu = 0;
    for (const auto& d : series) pos += d.n_pos, neg += d.n_neg, neu += d.n_neu;
    if (const auto s = sentiment_score(pos, neg, neu))
        std::cout << "overall sentiment score " << format_number(*s) << " over " << series.size() << " days\n";
    write_manifest(ctx, "timeseries", outputs);
}

void cmd_flownet(const Context& ctx) {
    require_upstream(ctx, "classify");
    const auto& cfg = ctx.cfg;
    const auto tweets = load_tweets(cfg);
    const auto labeled = attach(tweets, load_classified(ctx));
    const auto followers = read_adjacency_file(cfg.input("followers"));
    const auto friends = read_adjacency_file(cfg.input("friends"));

    const auto full = build_flow_network(user_tallies(labeled), followers, friends);
    const auto op = opinionated(full);
    const auto giant = giant_component(op);
    {
        auto f = open_out(ctx.file("flow_nodes.csv"));
        write_nodes_csv(f, giant);
    }
    {
        auto f = open_out(ctx.file("flow_edges.csv"));
        write_edges_csv(f, giant);
    }
    auto f = open_out(ctx.file("flow_summary.csv"));
    f << "network,nodes,edges\n"
      << "relevant," << full.size() << ',' << full.edges.size() << '\n'
      << "opinionated," << op.size() << ',' << op.edges.size() << '\n'
      << "giant_component," << giant.size() << ',' << giant.edges.size() << '\n';
    std::cout << "opinionated giant component: " << giant.size() << " users, " << giant.edges.size() << " edges\n";
    write_manifest(ctx, "flownet", {"flow_nodes.csv", "flow_edges.csv", "flow_summary.csv"});
}

void cmd_homophily(const Context& ctx) {
    require_upstream(ctx, "flownet");
    const auto& cfg = ctx.cfg;
    const auto net = read_flow_network(ctx.file("flow_nodes.csv").string(), ctx.file("flow_edges.csv").string());
    const auto g = to_labeled_digraph(net);

    const auto observed = assortativity(g);
    const auto null = bootstrap_null(g, cfg.count("bootstrap_iterations"), sub_seed(cfg, bootstrap));
    const auto inf = in_fraction_test(g, cfg.count("in_fraction_iterations"), sub_seed(cfg, in_fraction_null));
    {
        auto f = open_out(ctx.file("assortativity.csv"));
        f << "r,degenerate,null_mean,null_p025,null_p975,null_max,replicates,in_fraction_mean,"
             "in_fraction_share_significant\n"
          << format_number(observed.r) << ',' << (observed.degenerate ? 1 : 0) << ',' << format_number(null.mean)
          << ',' << format_number(null.p025) << ',' << format_number(null.p975) << ',' << format_number(null.max)
          << ',' << null.replicates.size() << ',' << format_number(inf.original_mean) << ','
          << format_number(inf.fraction_significant) << '\n';
    }
    {
        auto f = open_out(ctx.file("null_distribution.csv"));
        write_null_distribution_csv(f, null);
    }

    const UndirectedGraph ug(g.num_nodes, g.edges);
    const auto partition = detect_communities(ug, sub_seed(cfg, louvain));
    std::vector<std::uint8_t> negative(g.num_nodes);
    for (std::size_t i = 0; i < g.num_nodes; ++i) negative[i] = g.type[i] == 1;
    const auto report = community_enrichment(partition, negative, cfg.number("community_min_fraction"));
    {
        auto f = open_out(ctx.file("communities.csv"));
        write_communities_csv(f, report);
    }

    std::size_t significant = 0;
    for (const auto& c : report.communities) significant += c.tested && c.fisher_p < 0.05;
    std::cout << "assortativity r = " << format_number(observed.r) << "; null mean " << format_number(null.mean)
              << ", max " << format_number(null.max) << "; " << report.communities.size() << " communities (modularity "
              << format_number(modularity(ug, partition)) << "), " << significant << " skewed at p < 0.05\n";
    write_manifest(ctx, "homophily", {"assortativity.csv", "null_distribution.csv", "communities.csv"});
}

void cmd_gen_net(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    epi::GeneratorParams gp;
    gp.n_nodes = cfg.count("gen_nodes");
    gp.n_groups = cfg.count("gen_groups");
    gp.p_in = cfg.number("gen_p_in");
    gp.p_out = cfg.number("gen_p_out");
    gp.weights.min_weight = static_cast<std::uint32_t>(cfg.count("gen_min_weight"));
    gp.weights.mean_excess = cfg.number("gen_mean_excess");
    const auto net = epi::generate_synthetic_contact_network(gp, sub_seed(cfg, generator));
    {
        auto f = open_out(ctx.file("contact_network.csv"));
        epi::write_contact_network(f, net.network);
    }
    std::cout << "contact network: " << net.network.size() << " of " << net.requested_nodes << " nodes kept, "
              << net.network.num_edges() << " edges\n";
    write_manifest(ctx, "gen-net", {"contact_network.csv"});
}

void cmd_sweep(const Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::string net_path = cfg.get("contact_network");
    if (net_path.empty()) {
        require_upstream(ctx, "gen-net");
        net_path = ctx.file("contact_network.csv").string();
    } else {
        net_path = cfg.input("contact_network");
    }
    const auto net = epi::read_contact_network(net_path);
    const auto grid = cfg.r_grid();
    const double coverage = cfg.number("vaccination_coverage");
    if (!(coverage > 0 && coverage < 1)) throw UsageError("vaccination_coverage must lie in (0, 1)");

    const epi::SeirParams params;
    const auto r0 = epi::estimate_r0(net, params, cfg.count("r0_runs"), sub_seed(cfg, r0_runs));
    {
        auto f = open_out(ctx.file("r0.csv"));
        f << "runs,conditioning_runs,r0\n"
          << r0.runs << ',' << r0.conditioning_runs << ',' << (r0.mean ? format_number(*r0.mean) : "") << '\n';
    }
    epi::SweepOptions opt;
    opt.runs_per_point = cfg.count("runs_per_point");
    opt.redistribute.max_stall = cfg.count("max_stall");
    const auto report = epi::sweep(net, coverage, grid, sub_seed(cfg, sweep_runs), params, opt);
    {
        auto f = open_out(ctx.file("sweep.csv"));
        epi::write_sweep_csv(f, report);
    }

    const auto& last = report.points.back();
    std::cout << "R0 (conditional) = " << (r0.mean ? format_number(*r0.mean) : "n/a") << "; P(attack >= 3%) "
              << format_number(report.points.front().p_ge_3pct) << " at r = " << format_number(grid.front()) << ", "
              << format_number(last.p_ge_3pct) << " at r = " << format_number(last.target_r)
              << " (relative risk " << format_number(last.rr_3pct) << ")\n";
    write_manifest(ctx, "sweep", {"r0.csv", "sweep.csv"});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vaccination sentiment networks and outbreak risk"};
    app.require_subcommand(1);

    std::string config_path, seed, out;
    int workers = 0;
    bool force = false;
    std::vector<std::string> sets;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--workers", workers, "cap on parallel threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_flag("--force", force, "run even when upstream outputs are stale");
        sub->add_option("--set", sets, "extra key=value overrides")->take_all();
    };

    using Handler = void (*)(const Context&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"train", "train the NB and MaxEnt models", cmd_train},
        {"classify", "label every tweet with the ensemble", cmd_classify},
        {"timeseries", "daily and regional sentiment", cmd_timeseries},
        {"flownet", "build the opinionated information-flow network", cmd_flownet},
        {"homophily", "assortativity, bootstrap nulls and communities", cmd_homophily},
        {"gen-net", "generate a synthetic contact network", cmd_gen_net},
        {"sweep", "outbreak risk across vaccination assortativity", cmd_sweep},
    };
    std::map<CLI::App*, Handler> handlers;
    for (const auto& [name, help, fn] : commands) {
        auto* sub = app.add_subcommand(name, help);
        common(sub);
        handlers[sub] = fn;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Context ctx;
        if (!config_path.empty()) ctx.cfg.load_file(config_path);
        const fs::path cwd = fs::current_path();
        if (!seed.empty()) ctx.cfg.set("seed", seed, cwd, "--seed");
        if (!out.empty()) ctx.cfg.set("out", out, cwd, "--out");
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
            ctx.cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)), cwd, "--set");
        }
        ctx.cfg.seed();  // required by every command
        ctx.out = ctx.cfg.path("out");
        ctx.force = force;
        fs::create_directories(ctx.out);
        if (workers > 0) omp_set_num_threads(workers);

        for (auto* sub : app.get_subcommands()) handlers.at(sub)(ctx);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const StaleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
