#pragma once

#include <array>
#include <concepts>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "vaxnet/corpus.hpp"

namespace vaxnet {

using LabeledDoc = std::pair<TokenVector, SentimentLabel>;

/// Multinomial Naive Bayes with add-constant smoothing.
struct NBModel {
    double smoothing = 1.0;
    std::array<double, kNumLabels> log_prior{};
    std::vector<std::string> vocabulary;  ///< sorted
    /// log P(token | label), indexed [label][vocabulary index].
    std::array<std::vector<double>, kNumLabels> log_cond;

    std::array<double, kNumLabels> scores(const TokenVector& tv) const;
    SentimentLabel predict(const TokenVector& tv) const;
    int token_index(const std::string& token) const;

    /// Rebuilds the token lookup after `vocabulary` changes.
    void index_vocabulary();

private:
    std::unordered_map<std::string, int> index_;
};

/// Throws Error if any label has no documents or smoothing <= 0.
NBModel train_nb(std::span<const LabeledDoc> docs, double smoothing = 1.0);

/// Multinomial logistic regression over token counts plus a per-label bias.
struct MaxEntModel {
    double l2 = 0.1;
    std::vector<std::string> vocabulary;  ///< sorted
    /// weights[label][feature]
    std::array<std::vector<double>, kNumLabels> weights;
    std::array<double, kNumLabels> bias{};

    int iterations = 0;
    bool converged = false;

    std::array<double, kNumLabels> probabilities(const TokenVector& tv) const;
    SentimentLabel predict(const TokenVector& tv) const;
    int token_index(const std::string& token) const;

    void index_vocabulary();

private:
    std::unordered_map<std::string, int> index_;
};

/// Full-batch gradient ascent with Armijo backtracking on the L2-penalised
/// log-likelihood (biases are not penalised). Stops when the gradient max-norm
/// drops below tol or after max_iter iterations; `converged` records which.
/// Throws Error if a label has no documents, or if the objective becomes
/// non-finite (the message carries the iteration index).
MaxEntModel train_maxent(std::span<const LabeledDoc> docs, double l2 = 0.1, int max_iter = 1000,
                         double tol = 1e-6);

/// Dense design used by the MaxEnt objective; exposed for gradient checks.
struct MaxEntProblem {
    std::vector<std::string> vocabulary;
    /// sparse rows: (feature, count)
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<int> labels;
    double l2 = 0.0;

    static MaxEntProblem build(std::span<const LabeledDoc> docs, double l2);

    /// Parameter layout: kNumLabels * (|V| + 1); label-major, bias last.
    std::size_t num_params() const { return kNumLabels * (vocabulary.size() + 1); }
    /// Penalised log-likelihood and its gradient (gradient may be null).
    double objective(std::span<const double> params, std::vector<double>* gradient) const;
};

SentimentLabel ensemble_predict(SentimentLabel nb_label, SentimentLabel me_label);

struct EnsembleModel {
    NBModel nb;
    MaxEntModel me;

    SentimentLabel predict(const TokenVector& tv) const {
        return ensemble_predict(nb.predict(tv), me.predict(tv));
    }
};

using Predictor = std::function<SentimentLabel(const TokenVector&)>;

/// Fraction of exact label matches. Throws Error on an empty test set.
double evaluate_accuracy(const Predictor& predict, std::span<const LabeledDoc> testset);

template <typename Model>
    requires requires(const Model& m, const TokenVector& tv) {
        { m.predict(tv) } -> std::same_as<SentimentLabel>;
    }
double evaluate_accuracy(const Model& model, std::span<const LabeledDoc> testset) {
    return evaluate_accuracy(Predictor([&model](const TokenVector& tv) { return model.predict(tv); }), testset);
}

// Versioned JSON serialization. Loading rejects unknown formats or versions.
inline constexpr int kModelFormatVersion = 1;
std::string to_json(const NBModel& model);
std::string to_json(const MaxEntModel& model);
NBModel nb_from_json(const std::string& text);
MaxEntModel maxent_from_json(const std::string& text);

}  // namespace vaxnet
