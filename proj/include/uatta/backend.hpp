#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "uatta/augment.hpp"
#include "uatta/core.hpp"

namespace uatta {

/// Sorted bucket indices with their (L2-normalized) weights.
struct SparseVector {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;

    bool empty() const noexcept { return indices.empty(); }
};

/// FNV-1a 64 of the lowercased token, modulo dim.
std::size_t feature_bucket(std::string_view lowercase_token, std::size_t dim);

/// Hashed bag of words over title + body, L2-normalized counts. A document
/// without word tokens maps to the zero vector.
SparseVector featurize(const Document& d, std::size_t dim);

struct ToyModelConfig {
    std::size_t feature_dim = 4096;
    int epochs = 10;
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::size_t batch_size = 16;
    std::uint64_t seed = 0;
    /// When set, every epoch trains on a freshly augmented copy of each document.
    std::optional<AugmentationConfig> train_augment;

    void validate() const;
};

/// Multinomial logistic regression over hashed features.
class ToyModel {
public:
    ToyModel(std::string id, LabelSet labels, ToyModelConfig config, std::vector<double> weights,
             std::vector<double> bias, std::vector<double> loss_history = {});

    const std::string& id() const noexcept { return id_; }
    const LabelSet& labels() const noexcept { return labels_; }
    const ToyModelConfig& config() const noexcept { return config_; }
    /// K x feature_dim, row-major by class.
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> bias() const noexcept { return bias_; }
    /// Full-batch training objective after each epoch.
    std::span<const double> loss_history() const noexcept { return loss_history_; }

    std::vector<double> logits(const SparseVector& x) const;
    ProbVector predict(const Document& d) const;

private:
    std::string id_;
    LabelSet labels_;
    ToyModelConfig config_;
    std::vector<double> weights_;
    std::vector<double> bias_;
    std::vector<double> loss_history_;
};

/// Seeded-shuffle mini-batch gradient descent on softmax cross-entropy with
/// L2 on the weights, starting from zeros. `resources` is required when
/// cfg.train_augment is set. Deterministic for fixed (docs, cfg).
ToyModel train_toy(std::span<const Document> docs, const LabelSet& labels, const ToyModelConfig& cfg,
                   const AugmentResources* resources = nullptr, std::string id = {});

ProbVector predict_toy(const ToyModel& m, const Document& d);

void save_toy_model(const ToyModel& m, const std::filesystem::path& path);
ToyModel load_toy_model(const std::filesystem::path& path);

/// Predictions produced elsewhere, looked up by sample id.
class ExternalPredictor {
public:
    ExternalPredictor(std::string id, LabelSet labels,
                      std::unordered_map<std::string, ProbVector> predictions);

    /// One predictor per model in the tensor.
    static std::vector<ExternalPredictor> from_tensor(const PredictionTensor& t);

    const std::string& id() const noexcept { return id_; }
    const LabelSet& labels() const noexcept { return labels_; }
    const ProbVector* find(const std::string& sample_id) const;

private:
    std::string id_;
    LabelSet labels_;
    std::unordered_map<std::string, ProbVector> predictions_;
};

using Predictor = std::variant<ToyModel, ExternalPredictor>;

const std::string& predictor_id(const Predictor& p);
const LabelSet& predictor_labels(const Predictor& p);
/// std::nullopt when an external predictor has no record for d.id.
std::optional<ProbVector> try_predict(const Predictor& p, const Document& d);

/// k = |models| by N = |docs| tensor. Missing external records raise a
/// "ragged tensor" ValidationError naming every absent sample id.
PredictionTensor predict_corpus(std::span<const Predictor> models, std::span<const Document> docs);

}  // namespace uatta
