#include "vaxnet/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <json.hpp>

#include "vaxnet/error.hpp"

namespace vaxnet {

using json = nlohmann::json;

namespace {

std::size_t argmax(const std::array<double, kNumLabels>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumLabels; ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

std::array<std::size_t, kNumLabels> label_counts(std::span<const LabeledDoc> docs) {
    std::array<std::size_t, kNumLabels> counts{};
    for (const auto& [tv, label] : docs) ++counts[index_of(label)];
    for (std::size_t l = 0; l < kNumLabels; ++l)
        if (counts[l] == 0)
            throw Error("training corpus has no documents labelled '" +
                        std::string(to_string(kAllLabels[l])) + "'");
    return counts;
}

std::vector<std::string> collect_vocabulary(std::span<const LabeledDoc> docs) {
    std::set<std::string> vocab;
    for (const auto& [tv, label] : docs)
        for (const auto& [token, count] : tv.counts) vocab.insert(token);
    return {vocab.begin(), vocab.end()};
}

int lookup(const std::unordered_map<std::string, int>& index, const std::string& token) {
    auto it = index.find(token);
    return it == index.end() ? -1 : it->second;
}

}  // namespace

// ---------------------------------------------------------------- Naive Bayes

void NBModel::index_vocabulary() {
    index_.clear();
    for (std::size_t i = 0; i < vocabulary.size(); ++i) index_.emplace(vocabulary[i], static_cast<int>(i));
}

int NBModel::token_index(const std::string& token) const { return lookup(index_, token); }

std::array<double, kNumLabels> NBModel::scores(const TokenVector& tv) const {
    std::array<double, kNumLabels> s = log_prior;
    for (const auto& [token, count] : tv.counts) {
        const int j = token_index(token);
        if (j < 0) continue;
        for (std::size_t l = 0; l < kNumLabels; ++l) s[l] += count * log_cond[l][j];
    }
    return s;
}

SentimentLabel NBModel::predict(const TokenVector& tv) const { return kAllLabels[argmax(scores(tv))]; }

NBModel train_nb(std::span<const LabeledDoc> docs, double smoothing) {
    if (!(smoothing > 0)) throw Error("train_nb: smoothing must be positive");
    const auto doc_counts = label_counts(docs);

    NBModel model;
    model.smoothing = smoothing;
    model.vocabulary = collect_vocabulary(docs);
    model.index_vocabulary();
    const std::size_t v = model.vocabulary.size();

    std::array<std::vector<double>, kNumLabels> token_counts;
    for (auto& c : token_counts) c.assign(v, 0.0);
    std::array<double, kNumLabels> totals{};
    for (const auto& [tv, label] : docs) {
        const std::size_t l = index_of(label);
        for (const auto& [token, count] : tv.counts) {
            token_counts[l][static_cast<std::size_t>(model.token_index(token))] += count;
            totals[l] += count;
        }
    }

    const double n_docs = static_cast<double>(docs.size());
    for (std::size_t l = 0; l < kNumLabels; ++l) {
        model.log_prior[l] = std::log(static_cast<double>(doc_counts[l]) / n_docs);
        const double denom = totals[l] + smoothing * static_cast<double>(v);
        model.log_cond[l].resize(v);
        for (std::size_t j = 0; j < v; ++j)
            model.log_cond[l][j] = std::log((token_counts[l][j] + smoothing) / denom);
    }
    return model;
}

// --------------------------------------------------------------- Maximum entropy

MaxEntProblem MaxEntProblem::build(std::span<const LabeledDoc> docs, double l2) {
    MaxEntProblem p;
    p.l2 = l2;
    p.vocabulary = collect_vocabulary(docs);
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < p.vocabulary.size(); ++i) index.emplace(p.vocabulary[i], static_cast<int>(i));
    p.rows.reserve(docs.size());
    for (const auto& [tv, label] : docs) {
        std::vector<std::pair<int, double>> row;
        row.reserve(tv.counts.size());
        for (const auto& [token, count] : tv.counts) row.emplace_back(index.at(token), count);
        p.rows.push_back(std::move(row));
        p.labels.push_back(static_cast<int>(index_of(label)));
    }
    return p;
}

double MaxEntProblem::objective(std::span<const double> params, std::vector<double>* gradient) const {
    const std::size_t v = vocabulary.size();
    const std::size_t stride = v + 1;
    if (gradient) gradient->assign(params.size(), 0.0);

    double loglik = 0.0;
    std::array<double, kNumLabels> z{};
    for (std::size_t d = 0; d < rows.size(); ++d) {
        for (std::size_t l = 0; l < kNumLabels; ++l) {
            double s = params[l * stride + v];
            for (const auto& [f, x] : rows[d]) s += params[l * stride + f] * x;
            z[l] = s;
        }
        const double zmax = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double s : z) sum += std::exp(s - zmax);
        const double log_norm = zmax + std::log(sum);
        const auto y = static_cast<std::size_t>(labels[d]);
        loglik += z[y] - log_norm;

        if (gradient) {
            for (std::size_t l = 0; l < kNumLabels; ++l) {
                const double resid = (l == y ? 1.0 : 0.0) - std::exp(z[l] - log_norm);
                (*gradient)[l * stride + v] += resid;
                for (const auto& [f, x] : rows[d]) (*gradient)[l * stride + f] += resid * x;
            }
        }
    }

    double penalty = 0.0;
    for (std::size_t l = 0; l < kNumLabels; ++l) {
        for (std::size_t f = 0; f < v; ++f) {
            const double w = params[l * stride + f];
            penalty += w * w;
            if (gradient) (*gradient)[l * stride + f] -= l2 * w;
        }
    }
    return loglik - 0.5 * l2 * penalty;
}

void MaxEntModel::index_vocabulary() {
    index_.clear();
    for (std::size_t i = 0; i < vocabulary.size(); ++i) index_.emplace(vocabulary[i], static_cast<int>(i));
}

int MaxEntModel::token_index(const std::string& token) const { return lookup(index_, token); }

std::array<double, kNumLabels> MaxEntModel::probabilities(const TokenVector& tv) const {
    std::array<double, kNumLabels> z = bias;
    for (const auto& [token, count] : tv.counts) {
        const int j = token_index(token);
        if (j < 0) continue;
        for (std::size_t l = 0; l < kNumLabels; ++l) z[l] += weights[l][j] * count;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& s : z) {
        s = std::exp(s - zmax);
        sum += s;
    }
    for (double& s : z) s /= sum;
    return z;
}

SentimentLabel MaxEntModel::predict(const TokenVector& tv) const {
    return kAllLabels[argmax(probabilities(tv))];
}

MaxEntModel train_maxent(std::span<const LabeledDoc> docs, double l2, int max_iter, double tol) {
    if (l2 < 0) throw Error("train_maxent: l2 must be non-negative");
    if (!(tol > 0)) throw Error("train_maxent: tol must be positive");
    label_counts(docs);

    const MaxEntProblem problem = MaxEntProblem::build(docs, l2);
    const std::size_t n = problem.num_params();
    std::vector<double> x(n, 0.0), grad, trial(n), trial_grad;
    double f = problem.objective(x, &grad);

    auto max_norm = [](const std::vector<double>& g) {
        double m = 0.0;
        for (double v : g) m = std::max(m, std::abs(v));
        return m;
    };

    MaxEntModel model;
    model.l2 = l2;
    double step = 1.0 / std::max(1.0, static_cast<double>(docs.size()));
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double gnorm = max_norm(grad);
        if (gnorm < tol) {
            model.converged = true;
            break;
        }
        double g2 = 0.0;
        for (double g : grad) g2 += g * g;

        // Armijo backtracking from the current trial step.
        double f_new = 0.0;
        for (int halvings = 0;; ++halvings) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + step * grad[i];
            f_new = problem.objective(trial, &trial_grad);
            if (!std::isfinite(f_new) && halvings > 60)
                throw Error("train_maxent: non-finite objective at iteration " + std::to_string(iter));
            if (std::isfinite(f_new) && f_new >= f + 1e-4 * step * g2) break;
            step *= 0.5;
            if (step < 1e-300)
                throw Error("train_maxent: line search failed at iteration " + std::to_string(iter));
        }

        // Barzilai-Borwein guess for the next step.
        double sy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = trial[i] - x[i];
            const double y = trial_grad[i] - grad[i];
            sy += s * y;
            ss += s * s;
        }
        x.swap(trial);
        grad.swap(trial_grad);
        f = f_new;
        if (!std::isfinite(f))
            throw Error("train_maxent: non-finite objective at iteration " + std::to_string(iter));
        step = (sy < 0) ? ss / -sy : step * 2.0;
    }
    if (!model.converged && max_norm(grad) < tol) model.converged = true;
    model.iterations = iter;

    const std::size_t v = problem.vocabulary.size();
    model.vocabulary = problem.vocabulary;
    for (std::size_t l = 0; l < kNumLabels; ++l) {
        model.weights[l].assign(x.begin() + static_cast<std::ptrdiff_t>(l * (v + 1)),
                                x.begin() + static_cast<std::ptrdiff_t>(l * (v + 1) + v));
        model.bias[l] = x[l * (v + 1) + v];
    }
    model.index_vocabulary();
    return model;
}

// ------------------------------------------------------------------- Ensemble

SentimentLabel ensemble_predict(SentimentLabel nb_label, SentimentLabel me_label) {
    if (me_label == SentimentLabel::neutral || me_label == SentimentLabel::irrelevant) return me_label;
    return nb_label;
}

double evaluate_accuracy(const Predictor& predict, std::span<const LabeledDoc> testset) {
    if (testset.empty()) throw Error("evaluate_accuracy: empty test set");
    std::size_t hits = 0;
    for (const auto& [tv, label] : testset)
        if (predict(tv) == label) ++hits;
    return static_cast<double>(hits) / static_cast<double>(testset.size());
}

// -------------------------------------------------------------- Serialization

namespace {

json label_array(const std::array<double, kNumLabels>& v) {
    json obj = json::object();
    for (std::size_t l = 0; l < kNumLabels; ++l) obj[std::string(to_string(kAllLabels[l]))] = v[l];
    return obj;
}

std::array<double, kNumLabels> read_label_array(const json& obj) {
    std::array<double, kNumLabels> v{};
    for (std::size_t l = 0; l < kNumLabels; ++l) v[l] = obj.at(std::string(to_string(kAllLabels[l]))).get<double>();
    return v;
}

json check_header(const std::string& text, const char* kind) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw InputError(std::string(kind) + " model: not valid JSON");
    if (doc.value("format", "") != std::string("vaxnet-") + kind)
        throw InputError(std::string(kind) + " model: unexpected format tag");
    if (!doc.contains("version") || !doc["version"].is_number_integer() ||
        doc["version"].get<int>() != kModelFormatVersion)
        throw InputError(std::string(kind) + " model: unsupported version");
    return doc;
}

}  // namespace

std::string to_json(const NBModel& model) {
    json doc;
    doc["format"] = "vaxnet-nb";
    doc["version"] = kModelFormatVersion;
    doc["smoothing"] = model.smoothing;
    doc["vocabulary"] = model.vocabulary;
    doc["log_prior"] = label_array(model.log_prior);
    json cond = json::object();
    for (std::size_t l = 0; l < kNumLabels; ++l) cond[std::string(to_string(kAllLabels[l]))] = model.log_cond[l];
    doc["log_cond"] = std::move(cond);
    return doc.dump(1) + "\n";
}

std::string to_json(const MaxEntModel& model) {
    json doc;
    doc["format"] = "vaxnet-maxent";
    doc["version"] = kModelFormatVersion;
    doc["l2"] = model.l2;
    doc["iterations"] = model.iterations;
    doc["converged"] = model.converged;
    doc["vocabulary"] = model.vocabulary;
    doc["bias"] = label_array(model.bias);
    json w = json::object();
    for (std::size_t l = 0; l < kNumLabels; ++l) w[std::string(to_string(kAllLabels[l]))] = model.weights[l];
    doc["weights"] = std::move(w);
    return doc.dump(1) + "\n";
}

NBModel nb_from_json(const std::string& text) {
    const json doc = check_header(text, "nb");
    try {
        NBModel m;
        m.smoothing = doc.at("smoothing").get<double>();
        m.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
        m.log_prior = read_label_array(doc.at("log_prior"));
        for (std::size_t l = 0; l < kNumLabels; ++l) {
            m.log_cond[l] = doc.at("log_cond").at(std::string(to_string(kAllLabels[l]))).get<std::vector<double>>();
            if (m.log_cond[l].size() != m.vocabulary.size()) throw InputError("nb model: table size mismatch");
        }
        m.index_vocabulary();
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("nb model: ") + e.what());
    }
}

MaxEntModel maxent_from_json(const std::string& text) {
    const json doc = check_header(text, "maxent");
    try {
        MaxEntModel m;
        m.l2 = doc.at("l2").get<double>();
        m.iterations = doc.value("iterations", 0);
        m.converged = doc.value("converged", false);
        m.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
        m.bias = read_label_array(doc.at("bias"));
        for (std::size_t l = 0; l < kNumLabels; ++l) {
            m.weights[l] = doc.at("weights").at(std::string(to_string(kAllLabels[l]))).get<std::vector<double>>();
            if (m.weights[l].size() != m.vocabulary.size()) throw InputError("maxent model: table size mismatch");
        }
        m.index_vocabulary();
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("maxent model: ") + e.what());
    }
}

}  // namespace vaxnet
