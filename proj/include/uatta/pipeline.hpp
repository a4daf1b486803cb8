#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uatta/augment.hpp"
#include "uatta/backend.hpp"
#include "uatta/core.hpp"
#include "uatta/metrics.hpp"
#include "uatta/uq.hpp"

namespace uatta {

/// A configuration that cannot be used as written: unknown key, bad value,
/// missing file. Maps to exit code 2.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A failure inside one pipeline stage; what() is prefixed with "[stage] ".
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message, bool config_error);

    const std::string& stage() const noexcept { return stage_; }
    bool config_error() const noexcept { return config_error_; }

private:
    std::string stage_;
    bool config_error_;
};

/// Everything one experiment run depends on.
///
/// Grammar: one `key = value` per line, `#` starts a comment, blank lines are
/// ignored, keys may appear once. Relative paths resolve against the
/// directory holding the config file. Lists are comma separated.
struct RunConfig {
    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> lexicon_path;
    std::optional<std::filesystem::path> keyboard_path;
    LabelSet labels = LabelSet::mental_health_default();

    /// Pipeline seed: every model, TTA and training-augmentation stream derives from it.
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> model_seeds{1, 2, 3, 4};
    ToyModelConfig toy;
    std::optional<AugmentationConfig> train_augment;
    AugmentationConfig tta;
    UqConfig uq;
    std::size_t bins = 10;

    void validate() const;
};

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir,
                           std::string_view source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

struct ExperimentResult {
    std::vector<std::string> model_ids;
    std::vector<CalibrationReport> single;
    CalibrationReport ua_ens;
    CalibrationReport uatta_eb;
    std::vector<std::filesystem::path> written;
};

/// Model j's training seed.
std::uint64_t model_seed(const RunConfig& cfg, std::size_t j);

/// Trains one toy model per seed, scores the test set without augmentation
/// (single models and the UA-ENS ablation) and with TTA (UATTA-EB), and
/// evaluates all of them. With `write_outputs`, reports and reliability CSVs
/// go to cfg.output_dir; on failure the files written so far are removed.
ExperimentResult run_experiment(const RunConfig& cfg, bool write_outputs = true);

}  // namespace uatta
