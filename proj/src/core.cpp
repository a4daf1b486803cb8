#include "uatta/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "uatta/kernels.hpp"

namespace uatta {
namespace {

void check_component(double x, std::size_t i) {
    if (!std::isfinite(x)) {
        throw ValidationError("probability component " + std::to_string(i) + " is not finite");
    }
    if (x < 0.0) {
        throw ValidationError("probability component " + std::to_string(i) + " is negative");
    }
}

// Validates one K-slice in place: components finite and >= 0, sum within
// tolerance of 1, then rescaled to sum 1. A sum already within rounding of 1
// is left alone, so renormalizing twice changes nothing.
void validate_and_renormalize(std::span<double> p) {
    for (std::size_t i = 0; i < p.size(); ++i) check_component(p[i], i);
    const double total = kernels::sum(p);
    if (std::abs(total - 1.0) > kProbSumTolerance) {
        throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    const double rounding = 4.0 * static_cast<double>(p.size()) * std::numeric_limits<double>::epsilon();
    if (std::abs(total - 1.0) > rounding) {
        for (double& x : p) x /= total;
    }
    for (double& x : p) x = std::min(x, 1.0);
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw ValidationError("a label set needs at least two classes");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw ValidationError("class names must be non-empty");
        if (!seen.insert(n).second) throw ValidationError("duplicate class name: " + n);
    }
}

LabelSet LabelSet::mental_health_default() {
    return LabelSet({"None", "Depression", "Anxiety", "Bipolar", "ADHD", "PTSD"});
}

std::optional<std::size_t> LabelSet::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

std::size_t LabelSet::require_index(const std::string& name) const {
    if (auto idx = index_of(name)) return *idx;
    throw ValidationError("unknown label \"" + name + "\"");
}

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("empty probability vector");
    validate_and_renormalize(p_);
}

ProbVector normalize(std::span<const double> v) {
    if (v.empty()) throw ValidationError("cannot normalize an empty vector");
    for (std::size_t i = 0; i < v.size(); ++i) check_component(v[i], i);
    const double total = kernels::sum(v);
    if (!(total > 0.0)) throw ValidationError("degenerate distribution: all components are zero");
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x /= total;
    return ProbVector(std::move(out));
}

std::size_t argmax_index(std::span<const double> p) {
    if (p.empty()) throw ValidationError("argmax of an empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] > p[best]) best = i;
    }
    return best;
}

const std::string& argmax_label(const ProbVector& p, const LabelSet& labels) {
    if (p.size() != labels.size()) {
        throw ValidationError("probability vector has " + std::to_string(p.size()) +
                              " classes, label set has " + std::to_string(labels.size()));
    }
    return labels.name(argmax_index(p.values()));
}

PredictionTensor::PredictionTensor(std::vector<std::string> model_ids,
                                   std::vector<std::string> sample_ids, LabelSet labels,
                                   std::vector<double> probs)
    : model_ids_(std::move(model_ids)),
      sample_ids_(std::move(sample_ids)),
      labels_(std::move(labels)),
      probs_(std::move(probs)) {
    if (model_ids_.empty()) throw ValidationError("prediction tensor needs at least one model");
    if (sample_ids_.empty()) throw ValidationError("prediction tensor needs at least one sample");
    if (probs_.size() != models() * samples() * classes()) {
        throw ValidationError("prediction tensor data has the wrong size");
    }
    for (std::size_t j = 0; j < models(); ++j) {
        for (std::size_t n = 0; n < samples(); ++n) {
            try {
                validate_and_renormalize(
                    std::span(probs_).subspan((j * samples() + n) * classes(), classes()));
            } catch (const ValidationError& e) {
                throw ValidationError("model " + model_ids_[j] + ", sample " + sample_ids_[n] +
                                      ": " + e.what());
            }
        }
    }
}

std::span<const double> PredictionTensor::at(std::size_t model, std::size_t sample) const {
    return std::span(probs_).subspan((model * samples() + sample) * classes(), classes());
}

ProbVector PredictionTensor::prob_vector(std::size_t model, std::size_t sample) const {
    const auto s = at(model, sample);
    return ProbVector(std::vector<double>(s.begin(), s.end()));
}

ConsensusStats::ConsensusStats(std::size_t samples, std::size_t classes,
                               std::vector<double> mu, std::vector<double> var)
    : samples_(samples), classes_(classes), mu_(std::move(mu)), var_(std::move(var)) {
    if (mu_.size() != samples_ * classes_ || var_.size() != samples_ * classes_) {
        throw ValidationError("consensus statistics have the wrong size");
    }
    for (double m : mu_) {
        if (!(m >= 0.0 && m <= 1.0)) throw ValidationError("consensus mean outside [0, 1]");
    }
    for (double v : var_) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("negative consensus variance");
    }
}

UncertaintyMatrix::UncertaintyMatrix(std::size_t models, std::size_t samples,
                                     std::vector<double> sigma)
    : models_(models), samples_(samples), sigma_(std::move(sigma)) {
    if (sigma_.size() != models_ * samples_) {
        throw ValidationError("uncertainty matrix has the wrong size");
    }
    for (double s : sigma_) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw ValidationError("uncertainty must be finite and non-negative");
        }
    }
}

Document::Document(std::string id_, std::string title_, std::string body_,
                   std::optional<std::string> label_)
    : id(std::move(id_)), title(std::move(title_)), body(std::move(body_)), label(std::move(label_)) {
    if (id.empty()) throw ValidationError("document id must be non-empty");
    if (title.empty() && body.empty()) {
        throw ValidationError("document " + id + " has neither title nor body");
    }
}

}  // namespace uatta
