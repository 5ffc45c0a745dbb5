#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vaxnet/corpus.hpp"
#include "vaxnet/flownet.hpp"
#include "vaxnet/graph.hpp"
#include "vaxnet/random.hpp"

// Synthetic stand-ins for the private inputs: labelled short texts, an opinion
// network with planted homophily, and a complete tweet/follower dataset.

namespace vaxnet::synth {

struct CorpusParams {
    std::size_t n_docs = 2000;
    /// Probability that a word is drawn from the vocabulary shared by all classes.
    double overlap = 0.2;
    std::size_t words_per_class = 80;
    std::size_t shared_words = 80;
    std::size_t min_words = 6;
    std::size_t max_words = 12;
};

/// Distinct pronounceable pseudo-words whose tokenize() output is a single,
/// distinct token.
std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed);

class TextGenerator {
public:
    TextGenerator(const CorpusParams& params, std::uint64_t seed);
    std::string text_for(SentimentLabel label, RandomStream& rng) const;

private:
    CorpusParams params_;
    std::vector<std::string> shared_;
    std::array<std::vector<std::string>, kNumLabels> by_class_;
};

/// Balanced four-class corpus of raw texts.
std::vector<std::pair<std::string, SentimentLabel>> generate_labeled_texts(const CorpusParams& params,
                                                                          std::uint64_t seed);

/// Directed graph over `n` nodes with a fraction `positive_share` of type 0
/// (positive) and the rest type 1. Each ordered pair gets an edge with
/// probability p_same or p_diff depending on whether the types agree.
LabeledDigraph opinion_network(std::size_t n, double positive_share, double p_same, double p_diff,
                               std::uint64_t seed);

struct DatasetParams {
    std::size_t n_users = 1500;
    double positive_users = 0.55;
    double negative_users = 0.30;  ///< rest are neutral
    double mean_tweets_per_user = 3.0;
    double labeled_fraction = 0.4;
    double follow_same = 0.012;  ///< edge probability between same-stance users
    double follow_diff = 0.004;
    double list_drop = 0.3;      ///< chance an edge is missing from one of the two lists
    std::size_t n_regions = 12;
    std::string first_day = "2009-08-01";
    std::string last_day = "2010-01-19";
    CorpusParams corpus;
};

struct Dataset {
    std::vector<Tweet> tweets;
    std::vector<std::pair<std::string, SentimentLabel>> labels;  ///< manually rated subset
    std::map<std::string, SentimentLabel> truth;                 ///< every tweet
    AdjacencyLists followers;
    AdjacencyLists friends;
    std::map<std::string, double> coverage;  ///< per region
};

Dataset generate_dataset(const DatasetParams& params, std::uint64_t seed);

/// Writes tweets.jsonl, labels.csv, truth.csv, followers.txt, friends.txt and
/// coverage.csv into `dir`.
void write_dataset(const Dataset& data, const std::string& dir);

}  // namespace vaxnet::synth
