#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uatta {

/// Raised when a value violates a domain invariant at construction time.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tolerance on |sum - 1| accepted when ingesting a probability vector.
inline constexpr double kProbSumTolerance = 1e-9;

/// Ordered, duplicate-free class names. K >= 2.
class LabelSet {
public:
    explicit LabelSet(std::vector<std::string> names);

    /// None, Depression, Anxiety, Bipolar, ADHD, PTSD.
    static LabelSet mental_health_default();

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(std::size_t index) const { return names_.at(index); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Exact, case-sensitive lookup.
    std::optional<std::size_t> index_of(const std::string& name) const;
    std::size_t require_index(const std::string& name) const;

    friend bool operator==(const LabelSet&, const LabelSet&) = default;

private:
    std::vector<std::string> names_;
};

/// A probability distribution over K classes.
///
/// Components lie in [0, 1] and sum to 1. Inputs whose sum is within
/// kProbSumTolerance of 1 are renormalized; anything further out is rejected.
class ProbVector {
public:
    ProbVector() = default;
    explicit ProbVector(std::vector<double> p);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    std::span<const double> values() const noexcept { return p_; }
    auto begin() const noexcept { return p_.begin(); }
    auto end() const noexcept { return p_.end(); }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
    std::vector<double> p_;
};

/// Scales a non-negative vector to sum 1.
ProbVector normalize(std::span<const double> v);

/// Index of the largest component; ties go to the lowest index.
std::size_t argmax_index(std::span<const double> p);
const std::string& argmax_label(const ProbVector& p, const LabelSet& labels);

/// k models x N samples x K classes, stored model-major.
class PredictionTensor {
public:
    PredictionTensor(std::vector<std::string> model_ids,
                     std::vector<std::string> sample_ids,
                     LabelSet labels,
                     std::vector<double> probs);

    std::size_t models() const noexcept { return model_ids_.size(); }
    std::size_t samples() const noexcept { return sample_ids_.size(); }
    std::size_t classes() const noexcept { return labels_.size(); }

    std::span<const double> at(std::size_t model, std::size_t sample) const;
    ProbVector prob_vector(std::size_t model, std::size_t sample) const;

    const std::vector<std::string>& model_ids() const noexcept { return model_ids_; }
    const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
    const LabelSet& labels() const noexcept { return labels_; }
    std::span<const double> data() const noexcept { return probs_; }

    /// Distance between consecutive models for a fixed sample.
    std::size_t model_stride() const noexcept { return samples() * classes(); }

private:
    std::vector<std::string> model_ids_;
    std::vector<std::string> sample_ids_;
    LabelSet labels_;
    std::vector<double> probs_;
};

/// Per-sample, per-class mean and population variance across models.
class ConsensusStats {
public:
    ConsensusStats(std::size_t samples, std::size_t classes,
                   std::vector<double> mu, std::vector<double> var);

    std::size_t samples() const noexcept { return samples_; }
    std::size_t classes() const noexcept { return classes_; }
    std::span<const double> mu() const noexcept { return mu_; }
    std::span<const double> var() const noexcept { return var_; }
    std::span<const double> mu_row(std::size_t n) const {
        return std::span(mu_).subspan(n * classes_, classes_);
    }
    std::span<const double> var_row(std::size_t n) const {
        return std::span(var_).subspan(n * classes_, classes_);
    }

private:
    std::size_t samples_;
    std::size_t classes_;
    std::vector<double> mu_;
    std::vector<double> var_;
};

/// Non-negative uncertainty per model (rows) and sample (columns).
class UncertaintyMatrix {
public:
    UncertaintyMatrix(std::size_t models, std::size_t samples, std::vector<double> sigma);

    std::size_t models() const noexcept { return models_; }
    std::size_t samples() const noexcept { return samples_; }
    double operator()(std::size_t model, std::size_t sample) const {
        return sigma_[model * samples_ + sample];
    }
    std::span<const double> data() const noexcept { return sigma_; }

private:
    std::size_t models_;
    std::size_t samples_;
    std::vector<double> sigma_;
};

struct Document {
    Document(std::string id, std::string title, std::string body,
             std::optional<std::string> label = std::nullopt);

    std::string id;
    std::string title;
    std::string body;
    std::optional<std::string> label;

    friend bool operator==(const Document&, const Document&) = default;
};

}  // namespace uatta
