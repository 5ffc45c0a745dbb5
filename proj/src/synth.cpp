#include "vaxnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "vaxnet/error.hpp"
#include "vaxnet/random.hpp"
#include "vaxnet/timeseries.hpp"

namespace vaxnet::synth {

namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                        "br", "dr", "gr", "kr", "pl", "st", "tr", "sk"};
constexpr std::string_view kVowels[] = {"a", "o", "u", "i"};
constexpr std::string_view kCodas[] = {"b", "d", "g", "k", "m", "n", "p", "r", "t", "x", "z"};

template <typename T, std::size_t N>
std::string_view pick(const T (&items)[N], RandomStream& rng) {
    return items[rng.below(N)];
}

std::size_t poisson(double mean, RandomStream& rng) {
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double prod = rng.uniform_pos();
    while (prod > limit) {
        ++k;
        prod *= rng.uniform_pos();
    }
    return k;
}

template <std::size_t N>
std::size_t draw_index(const std::array<double, N>& weights, RandomStream& rng) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < N; ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return N - 1;
}

}  // namespace

std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed) {
    RandomStream rng(seed, {0x776f7264u});
    std::vector<std::string> words;
    std::set<std::string> stems;
    while (words.size() < count) {
        std::string w;
        const std::size_t syllables = 2 + rng.below(2);
        for (std::size_t s = 0; s < syllables; ++s) {
            w += pick(kOnsets, rng);
            w += pick(kVowels, rng);
        }
        w += pick(kCodas, rng);
        const TokenVector tv = tokenize(w);
        if (tv.size() != 1 || !stems.insert(tv.tokens.front()).second) continue;
        words.push_back(std::move(w));
    }
    return words;
}

TextGenerator::TextGenerator(const CorpusParams& params, std::uint64_t seed) : params_(params) {
    if (params.min_words == 0 || params.max_words < params.min_words) throw Error("corpus: bad document length range");
    if (params.overlap < 0.0 || params.overlap > 1.0) throw Error("corpus: overlap must lie in [0, 1]");
    auto words = pseudo_words(params.shared_words + kNumLabels * params.words_per_class, seed);
    shared_.assign(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(params.shared_words));
    for (std::size_t l = 0; l < kNumLabels; ++l) {
        const auto begin = words.begin() + static_cast<std::ptrdiff_t>(params.shared_words + l * params.words_per_class);
        by_class_[l].assign(begin, begin + static_cast<std::ptrdiff_t>(params.words_per_class));
    }
}

std::string TextGenerator::text_for(SentimentLabel label, RandomStream& rng) const {
    const std::size_t len = params_.min_words + rng.below(params_.max_words - params_.min_words + 1);
    std::string text;
    const auto& own = by_class_[index_of(label)];
    for (std::size_t i = 0; i < len; ++i) {
        const bool shared = shared_.empty() ? false : (own.empty() || rng.bernoulli(params_.overlap));
        const auto& pool = shared ? shared_ : own;
        std::string word = pool[rng.below(pool.size())];
        // Surface noise the tokenizer has to undo.
        if (rng.bernoulli(0.1)) word[0] = static_cast<char>(word[0] - 'a' + 'A');
        if (!text.empty()) text += ' ';
        text += word;
        if (rng.bernoulli(0.05)) text += rng.bernoulli(0.5) ? "," : "!";
    }
    return text;
}

std::vector<std::pair<std::string, SentimentLabel>> generate_labeled_texts(const CorpusParams& params,
                                                                          std::uint64_t seed) {
    const TextGenerator gen(params, seed);
    RandomStream rng(seed, {0x646f6373u});
    std::vector<std::pair<std::string, SentimentLabel>> out;
    out.reserve(params.n_docs);
    for (std::size_t i = 0; i < params.n_docs; ++i) {
        const SentimentLabel label = kAllLabels[i % kNumLabels];
        out.emplace_back(gen.text_for(label, rng), label);
    }
    return out;
}

LabeledDigraph opinion_network(std::size_t n, double positive_share, double p_same, double p_diff,
                               std::uint64_t seed) {
    RandomStream rng(seed, {0x6f70696eu});
    LabeledDigraph g;
    g.num_nodes = n;
    g.num_types = 2;
    g.type.resize(n);
    const auto n_pos = static_cast<std::size_t>(std::llround(positive_share * static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) g.type[i] = i < n_pos ? 0 : 1;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            if (rng.bernoulli(g.type[a] == g.type[b] ? p_same : p_diff))
                g.edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
        }
    return g;
}

Dataset generate_dataset(const DatasetParams& params, std::uint64_t seed) {
    const auto first = parse_date(params.first_day), last = parse_date(params.last_day);
    if (!first || !last || *last < *first) throw Error("dataset: bad date range");
    if (params.n_regions == 0 || params.n_users == 0) throw Error("dataset: need users and regions");

    enum Stance : std::uint8_t { pro, anti, undecided };
    const TextGenerator texts(params.corpus, seed);
    RandomStream rng(seed, {0x64617461u});

    // Regions differ in how many of their users lean positive.
    std::vector<std::string> region_code(params.n_regions);
    std::vector<double> region_pos(params.n_regions);
    Dataset data;
    for (std::size_t r = 0; r < params.n_regions; ++r) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "R%02zu", r + 1);
        region_code[r] = buf;
        const double spread = params.n_regions == 1 ? 0.0 : static_cast<double>(r) / static_cast<double>(params.n_regions - 1);
        region_pos[r] = std::clamp(params.positive_users - 0.15 + 0.3 * spread, 0.05, 0.95);
        data.coverage[buf] = 0.35 + 0.5 * region_pos[r] + 0.03 * (rng.uniform() - 0.5);
    }

    const std::array<std::array<double, kNumLabels>, 3> label_mix = {{
        {0.60, 0.08, 0.22, 0.10},
        {0.08, 0.60, 0.22, 0.10},
        {0.10, 0.10, 0.60, 0.20},
    }};

    std::vector<std::string> user(params.n_users);
    std::vector<Stance> stance(params.n_users);
    const auto span_seconds = static_cast<std::uint64_t>((*last - *first).count() + 1) * 86400ULL;
    std::size_t tweet_no = 0;
    for (std::size_t u = 0; u < params.n_users; ++u) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "u%05zu", u + 1);
        user[u] = buf;
        const std::size_t region = rng.below(params.n_regions);
        const double p_pos = region_pos[region];
        const double p_neg = params.negative_users * (1.0 - p_pos) / (1.0 - params.positive_users);
        const double x = rng.uniform();
        stance[u] = x < p_pos ? pro : x < p_pos + p_neg ? anti : undecided;

        const std::size_t n_tweets = 1 + poisson(std::max(0.0, params.mean_tweets_per_user - 1.0), rng);
        for (std::size_t t = 0; t < n_tweets; ++t) {
            const SentimentLabel label = kAllLabels[draw_index(label_mix[stance[u]], rng)];
            char id[24];
            std::snprintf(id, sizeof id, "t%07zu", ++tweet_no);
            Tweet tw;
            tw.id = id;
            tw.user_id = user[u];
            tw.timestamp = TimePoint{*first} + std::chrono::seconds{static_cast<long long>(rng.below(span_seconds))};
            tw.text = texts.text_for(label, rng);
            tw.region = region_code[region];
            data.truth[tw.id] = label;
            if (rng.bernoulli(params.labeled_fraction)) data.labels.emplace_back(tw.id, label);
            data.tweets.push_back(std::move(tw));
        }
    }

    // Information flows A -> B when B follows A. Some edges are only visible
    // from one side, as with truncated follower lists.
    for (const auto& id : user) {
        data.followers[id];
        data.friends[id];
    }
    for (std::size_t a = 0; a < params.n_users; ++a) {
        for (std::size_t b = 0; b < params.n_users; ++b) {
            if (a == b) continue;
            const bool same = stance[a] == stance[b] && stance[a] != undecided;
            if (!rng.bernoulli(same ? params.follow_same : params.follow_diff)) continue;
            const bool drop = rng.bernoulli(params.list_drop);
            const bool drop_follower_side = rng.bernoulli(0.5);
            if (!(drop && drop_follower_side)) data.followers[user[a]].insert(user[b]);
            if (!(drop && !drop_follower_side)) data.friends[user[b]].insert(user[a]);
        }
    }
    return data;
}

namespace {

void write_adjacency(const std::string& path, const AdjacencyLists& lists) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    for (const auto& [id, set] : lists) {
        out << id << ':';
        bool first = true;
        for (const auto& other : set) {
            out << (first ? " " : ",") << other;
            first = false;
        }
        out << '\n';
    }
}

}  // namespace

void write_dataset(const Dataset& data, const std::string& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir + "/tweets.jsonl");
        if (!out) throw InputError("cannot write into '" + dir + "'");
        for (const auto& t : data.tweets) write_tweet(out, t);
    }
    {
        std::ofstream out(dir + "/labels.csv");
        out << "tweet_id,label\n";
        for (const auto& [id, label] : data.labels) out << id << ',' << to_string(label) << '\n';
    }
    {
        std::ofstream out(dir + "/truth.csv");
        out << "tweet_id,label\n";
        for (const auto& [id, label] : data.truth) out << id << ',' << to_string(label) << '\n';
    }
    write_adjacency(dir + "/followers.txt", data.followers);
    write_adjacency(dir + "/friends.txt", data.friends);
    {
        std::ofstream out(dir + "/coverage.csv");
        out << "region,coverage\n";
        for (const auto& [region, c] : data.coverage) out << region << ',' << format_number(c) << '\n';
    }
}

}  // namespace vaxnet::synth
