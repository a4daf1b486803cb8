#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uatta/core.hpp"

namespace uatta {

struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    /// Fraction of correct predictions; 0 for an empty bin.
    double acc = 0.0;
    /// Mean confidence; 0 for an empty bin.
    double conf = 0.0;

    double gap() const noexcept { return acc - conf; }
};

struct CalibrationReport {
    std::size_t n = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double ece = 0.0;
    double mce = 0.0;
    double brier = 0.0;
    std::vector<Bin> bins;
};

/// Gold labels are class indices into the shared LabelSet.
double accuracy(std::span<const ProbVector> preds, std::span<const std::size_t> gold);

/// Unweighted mean over `classes` of per-class F1. A class that never
/// occurs in gold or predictions scores 0 and still counts.
double macro_f1(std::span<const ProbVector> preds, std::span<const std::size_t> gold, std::size_t classes);

/// Equal-width confidence bins; confidence c lands in bin ceil(c m), clamped to [1, m].
std::vector<Bin> bin_predictions(std::span<const ProbVector> preds, std::span<const std::size_t> gold,
                                 std::size_t m = 10);

/// sum_m |B_m| / n * |acc(B_m) - conf(B_m)|
double ece(std::span<const Bin> bins, std::size_t n);

/// Largest |acc - conf| over non-empty bins.
double mce(std::span<const Bin> bins);

/// Multiclass form: mean over samples of sum_c (p_c - onehot_c)^2.
double brier(std::span<const ProbVector> preds, std::span<const std::size_t> gold);

CalibrationReport evaluate(std::span<const ProbVector> preds, std::span<const std::size_t> gold,
                           std::size_t classes, std::size_t m = 10);

/// Gold indices for labeled documents, aligned with `sample_ids`.
std::vector<std::size_t> gold_indices(std::span<const std::string> sample_ids,
                                      std::span<const Document> docs, const LabelSet& labels);

/// One model's predictions from a tensor, sample-ordered.
std::vector<ProbVector> model_predictions(const PredictionTensor& t, std::size_t model);

inline constexpr const char* kReliabilityHeader = "lo,hi,count,acc,conf,gap";

void write_reliability_csv(std::span<const Bin> bins, std::ostream& os);
void save_reliability_csv(std::span<const Bin> bins, const std::filesystem::path& path);

void write_report(const CalibrationReport& r, std::ostream& os);
void save_report(const CalibrationReport& r, const std::filesystem::path& path);

}  // namespace uatta
