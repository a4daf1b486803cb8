#pragma once

// Reference weighted ensemble written straight from the formulas, with plain
// nested vectors and no library code. Index order is y[model][sample][class].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Cube = std::vector<std::vector<std::vector<double>>>;
using Matrix = std::vector<std::vector<double>>;

struct EnsembleResult {
    Matrix mu;      // [sample][class]
    Matrix var;     // [sample][class]
    Matrix sigma;   // [model][sample]
    Matrix weight;  // [model][sample]
    Matrix final;   // [sample][class]
};

inline double llfu_class(double y, double mu, double var, double floor) {
    const double pi = 3.14159265358979323846;
    double v = var < floor ? floor : var;
    double log_term = 0.5 * std::log(2.0 * pi * v);
    if (log_term < 0.0) log_term = 0.0;
    return log_term + (y - mu) * (y - mu) / (2.0 * v);
}

inline EnsembleResult weighted_ensemble(const Cube& y, double var_floor, double sigma_floor) {
    const std::size_t k = y.size();
    const std::size_t n_samples = y[0].size();
    const std::size_t n_classes = y[0][0].size();
    EnsembleResult r;
    r.mu.assign(n_samples, std::vector<double>(n_classes, 0.0));
    r.var.assign(n_samples, std::vector<double>(n_classes, 0.0));
    r.sigma.assign(k, std::vector<double>(n_samples, 0.0));
    r.weight.assign(k, std::vector<double>(n_samples, 0.0));
    r.final.assign(n_samples, std::vector<double>(n_classes, 0.0));

    for (std::size_t n = 0; n < n_samples; ++n) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += y[j][n][c];
            const double m = s / double(k);
            double ss = 0.0;
            for (std::size_t j = 0; j < k; ++j) ss += (y[j][n][c] - m) * (y[j][n][c] - m);
            r.mu[n][c] = m;
            r.var[n][c] = ss / double(k);
        }
        double inv_total = 0.0;
        std::vector<double> inv(k);
        for (std::size_t j = 0; j < k; ++j) {
            double u = 0.0;
            for (std::size_t c = 0; c < n_classes; ++c) u += llfu_class(y[j][n][c], r.mu[n][c], r.var[n][c], var_floor);
            r.sigma[j][n] = u / double(n_classes);
            inv[j] = 1.0 / (r.sigma[j][n] < sigma_floor ? sigma_floor : r.sigma[j][n]);
            inv_total += inv[j];
        }
        for (std::size_t c = 0; c < n_classes; ++c) {
            double num = 0.0;
            for (std::size_t j = 0; j < k; ++j) num += inv[j] * y[j][n][c];
            r.final[n][c] = num / inv_total;
        }
        for (std::size_t j = 0; j < k; ++j) r.weight[j][n] = inv[j] / inv_total;
    }
    return r;
}

}  // namespace oracle
