#pragma once

// Reference calibration metrics computed sample by sample from the
// definitions. probs[i] is one distribution, gold[i] its true class.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Metrics {
    double accuracy;
    double macro_f1;
    double ece;
    double mce;
    double brier;
};

inline std::size_t top_class(const std::vector<double>& p) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c)
        if (p[c] > p[best]) best = c;
    return best;
}

inline Metrics calibration_metrics(const std::vector<std::vector<double>>& probs,
                                   const std::vector<std::size_t>& gold, std::size_t classes,
                                   std::size_t bins) {
    const std::size_t n = probs.size();
    Metrics m{};

    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += top_class(probs[i]) == gold[i];
    m.accuracy = double(hits) / double(n);

    double f1_sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        double tp = 0, pred_pos = 0, gold_pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool p = top_class(probs[i]) == c;
            const bool g = gold[i] == c;
            tp += p && g;
            pred_pos += p;
            gold_pos += g;
        }
        if (tp == 0) continue;
        const double precision = tp / pred_pos;
        const double recall = tp / gold_pos;
        f1_sum += 2 * precision * recall / (precision + recall);
    }
    m.macro_f1 = f1_sum / double(classes);

    m.ece = 0.0;
    m.mce = 0.0;
    for (std::size_t b = 1; b <= bins; ++b) {
        double members = 0, correct = 0, conf = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = probs[i][top_class(probs[i])];
            double slot = std::ceil(c * double(bins));
            if (slot < 1) slot = 1;
            if (slot > double(bins)) slot = double(bins);
            if (std::size_t(slot) != b) continue;
            members += 1;
            correct += top_class(probs[i]) == gold[i];
            conf += c;
        }
        if (members == 0) continue;
        const double gap = std::fabs(correct / members - conf / members);
        m.ece += members / double(n) * gap;
        if (gap > m.mce) m.mce = gap;
    }

    m.brier = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < probs[i].size(); ++c) {
            const double o = c == gold[i] ? 1.0 : 0.0;
            m.brier += (probs[i][c] - o) * (probs[i][c] - o);
        }
    m.brier /= double(n);
    return m;
}

}  // namespace oracle
