#include "uatta/uq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "uatta/ingest.hpp"
#include "uatta/kernels.hpp"

namespace uatta {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double llfu_term(double y, double mu, double var, double floor) {
    const double v = std::max(var, floor);
    const double d = y - mu;
    return std::max(0.0, 0.5 * std::log(kTwoPi * v)) + d * d / (2.0 * v);
}

// A convex combination of equal vectors is that vector; taking it directly
// keeps the result bit-exact.
bool all_models_agree(const PredictionTensor& t, std::size_t n) {
    const auto first = t.at(0, n);
    for (std::size_t j = 1; j < t.models(); ++j) {
        if (!std::equal(first.begin(), first.end(), t.at(j, n).begin())) return false;
    }
    return true;
}

}  // namespace

std::optional<LlfuMode> parse_llfu_mode(std::string_view name) {
    if (name == "mean") return LlfuMode::kMeanOverClasses;
    if (name == "predicted") return LlfuMode::kPredictedClass;
    return std::nullopt;
}

std::string_view llfu_mode_name(LlfuMode mode) noexcept {
    return mode == LlfuMode::kPredictedClass ? "predicted" : "mean";
}

void UqConfig::validate() const {
    if (!(var_floor > 0.0) || !(sigma_floor > 0.0)) throw ValidationError("uncertainty floors must be positive");
}

ConsensusStats consensus_stats(const PredictionTensor& t) {
    const std::size_t n_samples = t.samples();
    const std::size_t k = t.classes();
    std::vector<double> mu(n_samples * k);
    std::vector<double> var(n_samples * k);
    for (std::size_t n = 0; n < n_samples; ++n) {
        kernels::column_moments(t.data().subspan(n * k), t.models(), t.model_stride(),
                                std::span(mu).subspan(n * k, k), std::span(var).subspan(n * k, k));
    }
    // Rounding can push a mean a hair above 1 when every model is one-hot.
    for (double& m : mu) m = std::clamp(m, 0.0, 1.0);
    return ConsensusStats(n_samples, k, std::move(mu), std::move(var));
}

double llfu(std::span<const double> y, std::span<const double> mu, std::span<const double> var,
            double floor, LlfuMode mode) {
    if (y.size() != mu.size() || y.size() != var.size() || y.empty()) {
        throw ValidationError("llfu: prediction, mean and variance lengths differ");
    }
    if (!(floor > 0.0)) throw ValidationError("llfu: floor must be positive");
    if (mode == LlfuMode::kPredictedClass) {
        const std::size_t c = argmax_index(y);
        return llfu_term(y[c], mu[c], var[c], floor);
    }
    double total = 0.0;
    for (std::size_t c = 0; c < y.size(); ++c) total += llfu_term(y[c], mu[c], var[c], floor);
    return total / static_cast<double>(y.size());
}

std::vector<double> uncertainty_weights(std::span<const double> sigma, double floor) {
    if (sigma.empty()) throw ValidationError("uncertainty_weights: no models");
    if (!(floor > 0.0)) throw ValidationError("uncertainty_weights: floor must be positive");
    std::vector<double> w;
    w.reserve(sigma.size());
    for (double s : sigma) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("uncertainty must be finite and non-negative");
        w.push_back(1.0 / std::max(s, floor));
    }
    const double total = kernels::sum(w);
    for (double& x : w) x /= total;
    return w;
}

EnsembleOutput::EnsembleOutput(std::vector<std::string> model_ids_, std::vector<std::string> sample_ids_,
                               LabelSet labels_, std::vector<ProbVector> final_, std::vector<double> weights_,
                               UncertaintyMatrix uncertainty_, ConsensusStats consensus_)
    : model_ids(std::move(model_ids_)),
      sample_ids(std::move(sample_ids_)),
      labels(std::move(labels_)),
      final(std::move(final_)),
      weights(std::move(weights_)),
      uncertainty(std::move(uncertainty_)),
      consensus(std::move(consensus_)) {
    const std::size_t k = model_ids.size();
    const std::size_t n = sample_ids.size();
    if (final.size() != n || weights.size() != k * n || uncertainty.models() != k ||
        uncertainty.samples() != n || consensus.samples() != n || consensus.classes() != labels.size()) {
        throw ValidationError("ensemble output components disagree in shape");
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (final[s].size() != labels.size()) throw ValidationError("ensemble output has the wrong class count");
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) total += weight(j, s);
        if (std::abs(total - 1.0) > kProbSumTolerance) {
            throw ValidationError("ensemble weights for sample " + sample_ids[s] + " do not sum to 1");
        }
    }
}

PredictionTensor EnsembleOutput::as_tensor(const std::string& model_id) const {
    std::vector<double> data;
    data.reserve(final.size() * labels.size());
    for (const auto& p : final) data.insert(data.end(), p.begin(), p.end());
    return PredictionTensor({model_id}, sample_ids, labels, std::move(data));
}

EnsembleOutput ensemble_with_uncertainty(const PredictionTensor& t, const UncertaintyMatrix& sigma,
                                         const ConsensusStats& consensus, double sigma_floor) {
    const std::size_t k = t.models();
    const std::size_t n_samples = t.samples();
    const std::size_t n_classes = t.classes();
    if (sigma.models() != k || sigma.samples() != n_samples) {
        throw ValidationError("uncertainty matrix does not match the prediction tensor");
    }
    std::vector<ProbVector> final;
    final.reserve(n_samples);
    std::vector<double> weights(k * n_samples);
    std::vector<double> column(k);
    std::vector<double> acc(n_classes);
    for (std::size_t n = 0; n < n_samples; ++n) {
        for (std::size_t j = 0; j < k; ++j) column[j] = sigma(j, n);
        const auto w = uncertainty_weights(column, sigma_floor);
        for (std::size_t j = 0; j < k; ++j) weights[j * n_samples + n] = w[j];
        if (all_models_agree(t, n)) {
            const auto p = t.at(0, n);
            final.emplace_back(std::vector<double>(p.begin(), p.end()));
            continue;
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) kernels::axpy(w[j], t.at(j, n), acc);
        final.emplace_back(acc);
    }
    return EnsembleOutput(t.model_ids(), t.sample_ids(), t.labels(), std::move(final), std::move(weights),
                          sigma, consensus);
}

EnsembleOutput ensemble(const PredictionTensor& t, const UqConfig& cfg) {
    cfg.validate();
    ConsensusStats consensus = consensus_stats(t);
    std::vector<double> sigma(t.models() * t.samples());
    for (std::size_t j = 0; j < t.models(); ++j) {
        for (std::size_t n = 0; n < t.samples(); ++n) {
            sigma[j * t.samples() + n] =
                llfu(t.at(j, n), consensus.mu_row(n), consensus.var_row(n), cfg.var_floor, cfg.mode);
        }
    }
    return ensemble_with_uncertainty(t, UncertaintyMatrix(t.models(), t.samples(), std::move(sigma)),
                                     consensus, cfg.sigma_floor);
}

ProbVector tta_aggregate(std::span<const ProbVector> variant_preds) {
    if (variant_preds.empty()) throw ValidationError("tta_aggregate needs at least one variant");
    const std::size_t k = variant_preds.front().size();
    std::vector<double> acc(k, 0.0);
    for (const auto& p : variant_preds) {
        if (p.size() != k) throw ValidationError("tta_aggregate: variants differ in class count");
        kernels::axpy(1.0, p.values(), acc);
    }
    kernels::scale(1.0 / static_cast<double>(variant_preds.size()), acc);
    return normalize(acc);
}

PredictionTensor tta_predict(std::span<const Predictor> models, std::span<const Document> docs,
                             const AugmentationConfig& aug, const AugmentResources& resources) {
    aug.validate();
    if (models.empty() || docs.empty()) throw ValidationError("tta_predict needs models and documents");
    std::vector<std::vector<Document>> expanded;
    expanded.reserve(docs.size());
    for (const auto& d : docs) expanded.push_back(tta_expand(d, aug, resources));

    std::vector<std::string> model_ids;
    for (const auto& m : models) model_ids.push_back(predictor_id(m));
    std::vector<std::string> sample_ids;
    for (const auto& d : docs) sample_ids.push_back(d.id);
    const LabelSet& labels = predictor_labels(models.front());

    std::vector<double> data;
    data.reserve(models.size() * docs.size() * labels.size());
    std::string missing;
    for (const auto& m : models) {
        if (!(predictor_labels(m) == labels)) {
            throw ValidationError("model " + predictor_id(m) + " uses a different label set");
        }
        for (const auto& variants : expanded) {
            std::vector<ProbVector> preds;
            for (const auto& v : variants) {
                if (auto p = try_predict(m, v)) {
                    preds.push_back(std::move(*p));
                } else {
                    missing += " (" + predictor_id(m) + ", " + v.id + ")";
                }
            }
            if (preds.size() != variants.size()) {
                data.insert(data.end(), labels.size(), 0.0);
                continue;
            }
            const ProbVector agg = tta_aggregate(preds);
            data.insert(data.end(), agg.begin(), agg.end());
        }
    }
    if (!missing.empty()) throw ValidationError("ragged tensor, missing predictions:" + missing);
    return PredictionTensor(std::move(model_ids), std::move(sample_ids), labels, std::move(data));
}

EnsembleOutput uatta_eb(std::span<const Predictor> models, std::span<const Document> docs,
                        const AugmentationConfig& aug, const AugmentResources& resources,
                        const UqConfig& cfg) {
    return ensemble(tta_predict(models, docs, aug, resources), cfg);
}

void write_ensemble_report(const EnsembleOutput& out, std::ostream& os) {
    nlohmann::ordered_json j;
    j["format"] = "uatta-ensemble-output";
    j["version"] = 1;
    j["labels"] = out.labels.names();
    j["models"] = out.model_ids;
    auto& samples = j["samples"] = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < out.sample_ids.size(); ++n) {
        nlohmann::ordered_json s;
        s["id"] = out.sample_ids[n];
        s["probs"] = std::vector<double>(out.final[n].begin(), out.final[n].end());
        std::vector<double> w;
        std::vector<double> u;
        for (std::size_t m = 0; m < out.model_ids.size(); ++m) {
            w.push_back(out.weight(m, n));
            u.push_back(out.uncertainty(m, n));
        }
        s["weights"] = w;
        s["uncertainty"] = u;
        const auto mu = out.consensus.mu_row(n);
        const auto var = out.consensus.var_row(n);
        s["mu"] = std::vector<double>(mu.begin(), mu.end());
        s["var"] = std::vector<double>(var.begin(), var.end());
        samples.push_back(std::move(s));
    }
    os << j.dump(1) << '\n';
}

void save_ensemble_report(const EnsembleOutput& out, const std::filesystem::path& path) {
    auto os = io::open_output(path);
    write_ensemble_report(out, os);
    if (!os) throw IoError("failed writing " + path.string());
}

PredictionTensor load_ensemble_report_predictions(const std::filesystem::path& path,
                                                  const LabelSet& labels) {
    auto in = io::open_input(path);
    try {
        const auto j = nlohmann::json::parse(in);
        if (j.at("format") != "uatta-ensemble-output") {
            throw ValidationError(path.string() + ": not an ensemble report");
        }
        if (LabelSet(j.at("labels").get<std::vector<std::string>>()) != labels) {
            throw ValidationError(path.string() + ": report labels differ from the configured label set");
        }
        std::vector<std::string> ids;
        std::vector<double> data;
        for (const auto& s : j.at("samples")) {
            ids.push_back(s.at("id").get<std::string>());
            const auto p = s.at("probs").get<std::vector<double>>();
            if (p.size() != labels.size()) throw ValidationError(path.string() + ": wrong class count");
            data.insert(data.end(), p.begin(), p.end());
        }
        return PredictionTensor({"ensemble"}, std::move(ids), labels, std::move(data));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": malformed ensemble report: " + e.what());
    }
}

}  // namespace uatta
