#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "uatta/core.hpp"

namespace test_support {

/// Random distribution over K classes; some draws put exact zeros in.
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(k);
    double total = 0.0;
    const bool sparse = u(rng) < 0.2;
    for (auto& x : p) {
        x = (sparse && u(rng) < 0.4) ? 0.0 : -std::log(1.0 - u(rng));
        total += x;
    }
    if (total == 0.0) {
        p[0] = 1.0;
        total = 1.0;
    }
    for (auto& x : p) x /= total;
    return p;
}

/// y[model][sample][class] alongside the same values as a tensor.
struct RandomEnsemble {
    std::vector<std::vector<std::vector<double>>> cube;
    uatta::PredictionTensor tensor;
};

inline RandomEnsemble random_ensemble(std::mt19937_64& rng, std::size_t models, std::size_t samples,
                                      std::size_t classes = 6) {
    std::vector<std::string> model_ids, sample_ids;
    for (std::size_t j = 0; j < models; ++j) model_ids.push_back("m" + std::to_string(j));
    for (std::size_t n = 0; n < samples; ++n) sample_ids.push_back("s" + std::to_string(n));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));
    std::vector<double> flat;
    for (std::size_t j = 0; j < models; ++j)
        for (std::size_t n = 0; n < samples; ++n) {
            const auto p = random_simplex(rng, classes);
            flat.insert(flat.end(), p.begin(), p.end());
        }
    uatta::PredictionTensor t(model_ids, sample_ids, uatta::LabelSet(names), flat);
    // Read back through the tensor so both views hold the validated values.
    std::vector<std::vector<std::vector<double>>> cube(models, std::vector<std::vector<double>>(samples));
    for (std::size_t j = 0; j < models; ++j)
        for (std::size_t n = 0; n < samples; ++n) {
            const auto s = t.at(j, n);
            cube[j][n].assign(s.begin(), s.end());
        }
    return {std::move(cube), std::move(t)};
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("uatta-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace test_support
