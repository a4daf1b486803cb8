#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uatta/augment.hpp"
#include "uatta/backend.hpp"
#include "uatta/core.hpp"

namespace uatta {

/// How per-class LLFU terms are reduced to one uncertainty per model.
enum class LlfuMode {
    kMeanOverClasses,  ///< average over all K classes
    kPredictedClass,   ///< only the model's own argmax class
};

std::optional<LlfuMode> parse_llfu_mode(std::string_view name);
std::string_view llfu_mode_name(LlfuMode mode) noexcept;

struct UqConfig {
    /// Lower bound on the consensus variance inside the LLFU.
    double var_floor = 1e-6;
    /// Lower bound on a model's uncertainty before inversion.
    double sigma_floor = 1e-6;
    LlfuMode mode = LlfuMode::kMeanOverClasses;

    void validate() const;
};

/// mu[n][c] = mean over models, var[n][c] = population variance over models.
ConsensusStats consensus_stats(const PredictionTensor& t);

/// Log-likelihood-form uncertainty of one model's prediction `y` against
/// the consensus (mu, var). Per class, with v = max(var, floor):
///
///     u = max(0, 0.5 * ln(2 pi v)) + (y - mu)^2 / (2 v)
///
/// reduced according to `mode`. Always >= 0.
double llfu(std::span<const double> y, std::span<const double> mu, std::span<const double> var,
            double floor = 1e-6, LlfuMode mode = LlfuMode::kMeanOverClasses);

/// Inverse-uncertainty weights 1 / max(sigma_j, floor), normalized to sum 1.
std::vector<double> uncertainty_weights(std::span<const double> sigma, double floor = 1e-6);

struct EnsembleOutput {
    EnsembleOutput(std::vector<std::string> model_ids, std::vector<std::string> sample_ids,
                   LabelSet labels, std::vector<ProbVector> final, std::vector<double> weights,
                   UncertaintyMatrix uncertainty, ConsensusStats consensus);

    std::vector<std::string> model_ids;
    std::vector<std::string> sample_ids;
    LabelSet labels;
    /// One ensembled distribution per sample.
    std::vector<ProbVector> final;
    /// k x N, each column sums to 1.
    std::vector<double> weights;
    UncertaintyMatrix uncertainty;
    ConsensusStats consensus;

    double weight(std::size_t model, std::size_t sample) const {
        return weights[model * sample_ids.size() + sample];
    }
    /// `final` as a one-model tensor, for evaluation and export.
    PredictionTensor as_tensor(const std::string& model_id) const;
};

/// Combines the models of `t` with explicit per-(model, sample) uncertainties.
EnsembleOutput ensemble_with_uncertainty(const PredictionTensor& t, const UncertaintyMatrix& sigma,
                                         const ConsensusStats& consensus, double sigma_floor = 1e-6);

/// Uncertainty-weighted average of the models in `t`:
///     final(x_n) = sum_j w_j(x_n) y_j(x_n),  w_j proportional to 1 / llfu_j(x_n)
EnsembleOutput ensemble(const PredictionTensor& t, const UqConfig& cfg = {});

/// Componentwise mean of the variant predictions, renormalized.
ProbVector tta_aggregate(std::span<const ProbVector> variant_preds);

/// Scores every TTA variant of every document with every model and
/// collapses the variants per model: a k x N tensor keyed by the original ids.
PredictionTensor tta_predict(std::span<const Predictor> models, std::span<const Document> docs,
                             const AugmentationConfig& aug, const AugmentResources& resources);

/// Full pipeline: TTA expansion, per-model variant aggregation, then the
/// uncertainty-aware ensemble. Document order is preserved.
EnsembleOutput uatta_eb(std::span<const Predictor> models, std::span<const Document> docs,
                        const AugmentationConfig& aug, const AugmentResources& resources,
                        const UqConfig& cfg = {});

/// JSON report: labels, models, and per sample the final distribution,
/// weights, uncertainties and consensus statistics.
void write_ensemble_report(const EnsembleOutput& out, std::ostream& os);
void save_ensemble_report(const EnsembleOutput& out, const std::filesystem::path& path);
/// Reads the final distributions back from a report as a one-model tensor.
PredictionTensor load_ensemble_report_predictions(const std::filesystem::path& path,
                                                  const LabelSet& labels);

}  // namespace uatta
