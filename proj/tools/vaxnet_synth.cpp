// vaxnet-synth: regenerates the bundled synthetic inputs.
//
//   vaxnet-synth --out data [--seed 20091001]
//
// Writes <out>/corpus (labelled 4-class corpus), <out>/synthetic (tweets,
// labels, follower lists, coverage table) and <out>/contact_network.csv.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vaxnet/epi.hpp"
#include "vaxnet/synth.hpp"

using namespace vaxnet;

namespace {

void write_corpus(const std::string& dir, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    const auto docs = synth::generate_labeled_texts(synth::CorpusParams{}, seed);
    std::ofstream tweets(dir + "/tweets.jsonl"), labels(dir + "/labels.csv");
    if (!tweets || !labels) throw Error("cannot write into '" + dir + "'");
    labels << "tweet_id,label\n";
    const auto start = std::chrono::sys_days{std::chrono::year{2009} / 9 / 1};
    for (std::size_t i = 0; i < docs.size(); ++i) {
        char id[24], user[24];
        std::snprintf(id, sizeof id, "c%06zu", i + 1);
        std::snprintf(user, sizeof user, "cu%04zu", i % 500 + 1);
        const Tweet t{id, user, TimePoint{start} + std::chrono::minutes{static_cast<long>(i) * 37}, docs[i].first,
                      std::nullopt};
        write_tweet(tweets, t);
        labels << id << ',' << to_string(docs[i].second) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the bundled synthetic inputs"};
    std::string out = "data";
    std::uint64_t seed = 20091001;
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "master seed");
    CLI11_PARSE(app, argc, argv);

    try {
        write_corpus(out + "/corpus", derive_stream(seed, {1}).key());
        synth::write_dataset(synth::generate_dataset(synth::DatasetParams{}, derive_stream(seed, {2}).key()),
                             out + "/synthetic");
        const auto net = epi::generate_synthetic_contact_network(epi::GeneratorParams{}, derive_stream(seed, {3}).key());
        std::ofstream f(out + "/contact_network.csv");
        epi::write_contact_network(f, net.network);
        std::cout << "wrote " << out << ": contact network with " << net.network.size() << " nodes and "
                  << net.network.num_edges() << " edges\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
