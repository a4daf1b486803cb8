#include "uatta/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "uatta/ingest.hpp"

namespace uatta {
namespace {

void check_aligned(std::span<const ProbVector> preds, std::span<const std::size_t> gold) {
    if (preds.size() != gold.size()) {
        throw ValidationError("metrics: " + std::to_string(preds.size()) + " predictions but " +
                              std::to_string(gold.size()) + " gold labels");
    }
    if (preds.empty()) throw ValidationError("metrics: no samples");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (gold[i] >= preds[i].size()) throw ValidationError("metrics: gold index out of range");
    }
}

double confidence(const ProbVector& p) {
    return *std::max_element(p.begin(), p.end());
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

double accuracy(std::span<const ProbVector> preds, std::span<const std::size_t> gold) {
    check_aligned(preds, gold);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (argmax_index(preds[i].values()) == gold[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double macro_f1(std::span<const ProbVector> preds, std::span<const std::size_t> gold, std::size_t classes) {
    check_aligned(preds, gold);
    if (classes == 0) throw ValidationError("macro_f1: no classes");
    std::vector<std::size_t> tp(classes), fp(classes), fn(classes);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const std::size_t p = argmax_index(preds[i].values());
        if (p >= classes || gold[i] >= classes) throw ValidationError("macro_f1: class index out of range");
        if (p == gold[i]) {
            ++tp[p];
        } else {
            ++fp[p];
            ++fn[gold[i]];
        }
    }
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        // 2PR / (P + R) simplifies to 2tp / (2tp + fp + fn); zero when tp is zero.
        if (tp[c] == 0) continue;
        const double t = static_cast<double>(tp[c]);
        total += 2.0 * t / (2.0 * t + static_cast<double>(fp[c]) + static_cast<double>(fn[c]));
    }
    return total / static_cast<double>(classes);
}

std::vector<Bin> bin_predictions(std::span<const ProbVector> preds, std::span<const std::size_t> gold,
                                 std::size_t m) {
    if (m == 0) throw ValidationError("bin count must be at least 1");
    if (preds.size() != gold.size()) throw ValidationError("metrics: predictions and gold labels differ in length");
    std::vector<Bin> bins(m);
    std::vector<double> conf_sum(m, 0.0);
    std::vector<std::size_t> correct(m, 0);
    const double md = static_cast<double>(m);
    for (std::size_t b = 0; b < m; ++b) {
        bins[b].lo = static_cast<double>(b) / md;
        bins[b].hi = static_cast<double>(b + 1) / md;
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double c = confidence(preds[i]);
        const double slot = std::ceil(c * md);
        const std::size_t b = slot <= 1.0 ? 0 : std::min(static_cast<std::size_t>(slot), m) - 1;
        ++bins[b].count;
        conf_sum[b] += c;
        if (argmax_index(preds[i].values()) == gold[i]) ++correct[b];
    }
    for (std::size_t b = 0; b < m; ++b) {
        if (bins[b].count == 0) continue;
        const double cnt = static_cast<double>(bins[b].count);
        bins[b].acc = static_cast<double>(correct[b]) / cnt;
        bins[b].conf = conf_sum[b] / cnt;
    }
    return bins;
}

double ece(std::span<const Bin> bins, std::size_t n) {
    std::size_t total = 0;
    for (const auto& b : bins) total += b.count;
    if (n == 0 || total == 0) throw ValidationError("ece: no samples");
    if (total != n) throw ValidationError("ece: bin counts sum to " + std::to_string(total) + ", not n = " + std::to_string(n));
    double e = 0.0;
    for (const auto& b : bins) {
        if (b.count == 0) continue;
        e += static_cast<double>(b.count) / static_cast<double>(n) * std::abs(b.acc - b.conf);
    }
    return e;
}

double mce(std::span<const Bin> bins) {
    bool any = false;
    double worst = 0.0;
    for (const auto& b : bins) {
        if (b.count == 0) continue;
        any = true;
        worst = std::max(worst, std::abs(b.acc - b.conf));
    }
    if (!any) throw ValidationError("mce: every bin is empty");
    return worst;
}

double brier(std::span<const ProbVector> preds, std::span<const std::size_t> gold) {
    check_aligned(preds, gold);
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < preds[i].size(); ++c) {
            const double d = preds[i][c] - (c == gold[i] ? 1.0 : 0.0);
            s += d * d;
        }
        total += s;
    }
    return total / static_cast<double>(preds.size());
}

CalibrationReport evaluate(std::span<const ProbVector> preds, std::span<const std::size_t> gold,
                           std::size_t classes, std::size_t m) {
    CalibrationReport r;
    r.n = preds.size();
    r.accuracy = accuracy(preds, gold);
    r.macro_f1 = macro_f1(preds, gold, classes);
    r.bins = bin_predictions(preds, gold, m);
    r.ece = ece(r.bins, r.n);
    r.mce = mce(r.bins);
    r.brier = brier(preds, gold);
    return r;
}

std::vector<std::size_t> gold_indices(std::span<const std::string> sample_ids, std::span<const Document> docs,
                                      const LabelSet& labels) {
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id.emplace(d.id, &d);
    std::vector<std::size_t> gold;
    gold.reserve(sample_ids.size());
    std::string missing;
    for (const auto& id : sample_ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            missing += " " + id;
            continue;
        }
        if (!it->second->label) throw ValidationError("document " + id + " has no gold label");
        gold.push_back(labels.require_index(*it->second->label));
    }
    if (!missing.empty()) throw ValidationError("no labeled document for samples:" + missing);
    return gold;
}

std::vector<ProbVector> model_predictions(const PredictionTensor& t, std::size_t model) {
    std::vector<ProbVector> out;
    out.reserve(t.samples());
    for (std::size_t n = 0; n < t.samples(); ++n) out.push_back(t.prob_vector(model, n));
    return out;
}

void write_reliability_csv(std::span<const Bin> bins, std::ostream& os) {
    os << kReliabilityHeader << '\n';
    for (const auto& b : bins) {
        os << shortest(b.lo) << ',' << shortest(b.hi) << ',' << b.count << ',' << shortest(b.acc) << ','
           << shortest(b.conf) << ',' << shortest(b.gap()) << '\n';
    }
}

void save_reliability_csv(std::span<const Bin> bins, const std::filesystem::path& path) {
    auto os = io::open_output(path);
    write_reliability_csv(bins, os);
    if (!os) throw IoError("failed writing " + path.string());
}

void write_report(const CalibrationReport& r, std::ostream& os) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["accuracy"] = r.accuracy;
    j["macro_f1"] = r.macro_f1;
    j["ece"] = r.ece;
    j["mce"] = r.mce;
    j["brier"] = r.brier;
    auto& bins = j["bins"] = nlohmann::ordered_json::array();
    for (const auto& b : r.bins) {
        bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}, {"acc", b.acc}, {"conf", b.conf}});
    }
    os << j.dump(1) << '\n';
}

void save_report(const CalibrationReport& r, const std::filesystem::path& path) {
    auto os = io::open_output(path);
    write_report(r, os);
    if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace uatta
