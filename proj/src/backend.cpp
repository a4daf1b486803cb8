#include "uatta/backend.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "uatta/kernels.hpp"
#include "uatta/random.hpp"

namespace uatta {
namespace {

std::vector<double> softmax(std::vector<double> z) {
    const double top = *std::max_element(z.begin(), z.end());
    for (double& v : z) v = std::exp(v - top);
    const double total = kernels::sum(z);
    for (double& v : z) v /= total;
    return z;
}

std::vector<double> linear_logits(std::span<const double> weights, std::span<const double> bias,
                                  std::size_t dim, const SparseVector& x) {
    std::vector<double> z(bias.begin(), bias.end());
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double* row = weights.data() + c * dim;
        double acc = 0.0;
        for (std::size_t i = 0; i < x.indices.size(); ++i) acc += row[x.indices[i]] * x.values[i];
        z[c] += acc;
    }
    return z;
}

struct Example {
    SparseVector x;
    std::size_t label;
};

// Mean cross-entropy plus (l2 / 2) * ||W||^2.
double objective(std::span<const double> weights, std::span<const double> bias, std::size_t dim,
                 double l2, std::span<const Example> examples) {
    double loss = 0.0;
    for (const auto& ex : examples) {
        const auto p = softmax(linear_logits(weights, bias, dim, ex.x));
        loss -= std::log(std::max(p[ex.label], 1e-300));
    }
    loss /= static_cast<double>(examples.size());
    return loss + 0.5 * l2 * kernels::dot(weights, weights);
}

nlohmann::ordered_json aug_to_json(const AugmentationConfig& a) {
    return {{"synonym_rate", a.synonym_rate}, {"tfidf_rate", a.tfidf_rate},
            {"keyboard_rate", a.keyboard_rate}, {"variants", a.variants},
            {"seed", a.seed}, {"include_original", a.include_original}};
}

AugmentationConfig aug_from_json(const nlohmann::json& j) {
    AugmentationConfig a;
    a.synonym_rate = j.at("synonym_rate").get<double>();
    a.tfidf_rate = j.at("tfidf_rate").get<double>();
    a.keyboard_rate = j.at("keyboard_rate").get<double>();
    a.variants = j.at("variants").get<int>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.include_original = j.at("include_original").get<bool>();
    return a;
}

}  // namespace

std::size_t feature_bucket(std::string_view lowercase_token, std::size_t dim) {
    return static_cast<std::size_t>(fnv1a64(lowercase_token) % dim);
}

SparseVector featurize(const Document& d, std::size_t dim) {
    if (dim < 16) throw ValidationError("feature dimension must be at least 16");
    std::map<std::uint32_t, double> counts;
    for (const auto& w : document_words(d)) counts[static_cast<std::uint32_t>(feature_bucket(w, dim))] += 1.0;
    SparseVector v;
    double norm = 0.0;
    for (const auto& [idx, c] : counts) {
        v.indices.push_back(idx);
        v.values.push_back(c);
        norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& x : v.values) x /= norm;
    return v;
}

void ToyModelConfig::validate() const {
    if (feature_dim < 16) throw ValidationError("feature_dim must be at least 16");
    if (epochs < 1) throw ValidationError("epochs must be at least 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValidationError("learning_rate must be positive");
    }
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ValidationError("l2 must be non-negative");
    if (batch_size < 1) throw ValidationError("batch_size must be at least 1");
    if (train_augment) train_augment->validate();
}

ToyModel::ToyModel(std::string id, LabelSet labels, ToyModelConfig config, std::vector<double> weights,
                   std::vector<double> bias, std::vector<double> loss_history)
    : id_(std::move(id)),
      labels_(std::move(labels)),
      config_(std::move(config)),
      weights_(std::move(weights)),
      bias_(std::move(bias)),
      loss_history_(std::move(loss_history)) {
    config_.validate();
    if (weights_.size() != labels_.size() * config_.feature_dim || bias_.size() != labels_.size()) {
        throw ValidationError("toy model parameters do not match K x feature_dim");
    }
    const auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(weights_.begin(), weights_.end(), finite) ||
        !std::all_of(bias_.begin(), bias_.end(), finite)) {
        throw ValidationError("toy model parameters must be finite");
    }
}

std::vector<double> ToyModel::logits(const SparseVector& x) const {
    return linear_logits(weights_, bias_, config_.feature_dim, x);
}

ProbVector ToyModel::predict(const Document& d) const {
    return ProbVector(softmax(logits(featurize(d, config_.feature_dim))));
}

ProbVector predict_toy(const ToyModel& m, const Document& d) { return m.predict(d); }

ToyModel train_toy(std::span<const Document> docs, const LabelSet& labels, const ToyModelConfig& cfg,
                   const AugmentResources* resources, std::string id) {
    cfg.validate();
    if (cfg.train_augment && resources == nullptr) {
        throw ValidationError("training augmentation requires augmentation resources");
    }
    const std::size_t k = labels.size();
    const std::size_t dim = cfg.feature_dim;

    std::vector<const Document*> usable;
    std::vector<std::size_t> targets;
    std::vector<std::size_t> per_class(k, 0);
    for (const auto& d : docs) {
        if (!d.label) throw ValidationError("training document " + d.id + " has no label");
        const std::size_t y = labels.require_index(*d.label);
        if (document_words(d).empty()) {
            std::clog << "warning: skipping training document " << d.id << " with no word tokens\n";
            continue;
        }
        usable.push_back(&d);
        targets.push_back(y);
        ++per_class[y];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (per_class[c] == 0) throw ValidationError("class " + labels.name(c) + " has zero examples");
    }

    std::vector<Example> clean;
    for (std::size_t i = 0; i < usable.size(); ++i) clean.push_back({featurize(*usable[i], dim), targets[i]});

    std::vector<double> weights(k * dim, 0.0);
    std::vector<double> bias(k, 0.0);
    std::vector<double> history;
    std::vector<std::size_t> order(usable.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream shuffle_rng(derive_seed(cfg.seed, "shuffle", 0));

    const double decay = 1.0 - cfg.learning_rate * cfg.l2;
    std::vector<double> bias_grad(k);
    std::vector<std::vector<double>> batch_probs;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<Example> augmented;
        if (cfg.train_augment) {
            AugmentationConfig aug = *cfg.train_augment;
            for (std::size_t i = 0; i < usable.size(); ++i) {
                const Document& d = *usable[i];
                RandomStream rng(derive_seed(aug.seed ^ splitmix64(cfg.seed), d.id,
                                             static_cast<std::uint64_t>(epoch)));
                Document copy(d.id, augment_text(d.title, aug, *resources, rng),
                              augment_text(d.body, aug, *resources, rng), d.label);
                augmented.push_back({featurize(copy, dim), targets[i]});
            }
        }
        const std::vector<Example>& examples = cfg.train_augment ? augmented : clean;

        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng.below(i))]);
        }

        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            batch_probs.clear();
            for (std::size_t b = start; b < stop; ++b) {
                batch_probs.push_back(softmax(linear_logits(weights, bias, dim, examples[order[b]].x)));
            }
            kernels::scale(decay, weights);
            std::fill(bias_grad.begin(), bias_grad.end(), 0.0);
            for (std::size_t b = start; b < stop; ++b) {
                const Example& ex = examples[order[b]];
                const auto& p = batch_probs[b - start];
                for (std::size_t c = 0; c < k; ++c) {
                    const double g = (p[c] - (c == ex.label ? 1.0 : 0.0)) * inv_batch;
                    bias_grad[c] += g;
                    double* row = weights.data() + c * dim;
                    const double step = cfg.learning_rate * g;
                    for (std::size_t i = 0; i < ex.x.indices.size(); ++i) row[ex.x.indices[i]] -= step * ex.x.values[i];
                }
            }
            kernels::axpy(-cfg.learning_rate, bias_grad, bias);
        }
        history.push_back(objective(weights, bias, dim, cfg.l2, clean));
    }
    return ToyModel(std::move(id), labels, cfg, std::move(weights), std::move(bias), std::move(history));
}

void save_toy_model(const ToyModel& m, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format"] = "uatta-toy-model";
    j["version"] = 1;
    j["id"] = m.id();
    j["labels"] = m.labels().names();
    const auto& c = m.config();
    j["config"] = {{"feature_dim", c.feature_dim}, {"epochs", c.epochs},
                   {"learning_rate", c.learning_rate}, {"l2", c.l2},
                   {"batch_size", c.batch_size}, {"seed", c.seed},
                   {"train_augment", c.train_augment ? aug_to_json(*c.train_augment) : nullptr}};
    j["bias"] = std::vector<double>(m.bias().begin(), m.bias().end());
    auto& rows = j["weights"] = nlohmann::ordered_json::array();
    const std::size_t dim = c.feature_dim;
    for (std::size_t r = 0; r < m.labels().size(); ++r) {
        const auto row = m.weights().subspan(r * dim, dim);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["loss_history"] = std::vector<double>(m.loss_history().begin(), m.loss_history().end());
    auto out = io::open_output(path);
    out << j.dump() << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

ToyModel load_toy_model(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("format") != "uatta-toy-model" || j.at("version") != 1) {
            throw ValidationError(path.string() + ": not a version 1 toy model");
        }
        const auto& jc = j.at("config");
        ToyModelConfig c;
        c.feature_dim = jc.at("feature_dim").get<std::size_t>();
        c.epochs = jc.at("epochs").get<int>();
        c.learning_rate = jc.at("learning_rate").get<double>();
        c.l2 = jc.at("l2").get<double>();
        c.batch_size = jc.at("batch_size").get<std::size_t>();
        c.seed = jc.at("seed").get<std::uint64_t>();
        if (!jc.at("train_augment").is_null()) c.train_augment = aug_from_json(jc.at("train_augment"));
        std::vector<double> weights;
        for (const auto& row : j.at("weights")) {
            const auto r = row.get<std::vector<double>>();
            weights.insert(weights.end(), r.begin(), r.end());
        }
        return ToyModel(j.at("id").get<std::string>(), LabelSet(j.at("labels").get<std::vector<std::string>>()),
                        c, std::move(weights), j.at("bias").get<std::vector<double>>(),
                        j.at("loss_history").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": malformed toy model: " + e.what());
    }
}

ExternalPredictor::ExternalPredictor(std::string id, LabelSet labels,
                                     std::unordered_map<std::string, ProbVector> predictions)
    : id_(std::move(id)), labels_(std::move(labels)), predictions_(std::move(predictions)) {
    for (const auto& [sample, p] : predictions_) {
        if (p.size() != labels_.size()) {
            throw ValidationError("external prediction for " + sample + " has the wrong class count");
        }
    }
}

std::vector<ExternalPredictor> ExternalPredictor::from_tensor(const PredictionTensor& t) {
    std::vector<ExternalPredictor> out;
    for (std::size_t j = 0; j < t.models(); ++j) {
        std::unordered_map<std::string, ProbVector> preds;
        for (std::size_t n = 0; n < t.samples(); ++n) preds.emplace(t.sample_ids()[n], t.prob_vector(j, n));
        out.emplace_back(t.model_ids()[j], t.labels(), std::move(preds));
    }
    return out;
}

const ProbVector* ExternalPredictor::find(const std::string& sample_id) const {
    const auto it = predictions_.find(sample_id);
    return it == predictions_.end() ? nullptr : &it->second;
}

const std::string& predictor_id(const Predictor& p) {
    return std::visit([](const auto& m) -> const std::string& { return m.id(); }, p);
}

const LabelSet& predictor_labels(const Predictor& p) {
    return std::visit([](const auto& m) -> const LabelSet& { return m.labels(); }, p);
}

std::optional<ProbVector> try_predict(const Predictor& p, const Document& d) {
    if (const auto* toy = std::get_if<ToyModel>(&p)) return toy->predict(d);
    const auto& ext = std::get<ExternalPredictor>(p);
    if (const ProbVector* found = ext.find(d.id)) return *found;
    return std::nullopt;
}

PredictionTensor predict_corpus(std::span<const Predictor> models, std::span<const Document> docs) {
    if (models.empty()) throw ValidationError("predict_corpus needs at least one model");
    if (docs.empty()) throw ValidationError("predict_corpus needs at least one document");
    const LabelSet& labels = predictor_labels(models.front());
    for (const auto& m : models) {
        if (!(predictor_labels(m) == labels)) {
            throw ValidationError("model " + predictor_id(m) + " uses a different label set");
        }
    }
    std::vector<std::string> model_ids;
    for (const auto& m : models) model_ids.push_back(predictor_id(m));
    std::vector<std::string> sample_ids;
    for (const auto& d : docs) sample_ids.push_back(d.id);

    std::vector<double> data;
    data.reserve(models.size() * docs.size() * labels.size());
    std::string missing;
    for (const auto& m : models) {
        for (const auto& d : docs) {
            if (auto p = try_predict(m, d)) {
                data.insert(data.end(), p->begin(), p->end());
            } else {
                missing += " (" + predictor_id(m) + ", " + d.id + ")";
                data.insert(data.end(), labels.size(), 0.0);
            }
        }
    }
    if (!missing.empty()) throw ValidationError("ragged tensor, missing predictions:" + missing);
    return PredictionTensor(std::move(model_ids), std::move(sample_ids), labels, std::move(data));
}

}  // namespace uatta
