// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/ensemble_oracle.hpp"
#include "oracles/metrics_oracle.hpp"
#include "support.hpp"
#include "uatta/augment.hpp"
#include "uatta/ingest.hpp"
#include "uatta/metrics.hpp"
#include "uatta/pipeline.hpp"
#include "uatta/uq.hpp"

using namespace uatta;

namespace {

const std::filesystem::path kToy = std::filesystem::path(UATTA_TEST_RESOURCES) / "toy";

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) detail = what;
        ok = ok && cond;
    }
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) o.require(false, "runtime " + std::to_string(secs) + " s");
    std::printf("%s  %-34s %7.3f s%s%s\n", o.ok ? "PASS" : "FAIL", name, secs, o.detail.empty() ? "" : "  ",
                o.detail.c_str());
    std::fflush(stdout);
    failures += !o.ok;
}

std::vector<ProbVector> rows(std::initializer_list<std::vector<double>> r) {
    std::vector<ProbVector> out;
    for (const auto& v : r) out.emplace_back(v);
    return out;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome metric_examples() {
    Outcome o;
    const auto single = bin_predictions(rows({{0.7, 0.3}}), std::vector<std::size_t>{1});
    o.require(near(ece(single, 1), 0.7, 1e-9), "single-sample ECE");

    std::vector<Bin> two(2);
    two[0] = Bin{0.0, 0.5, 10, 0.4, 0.3};
    two[1] = Bin{0.5, 1.0, 10, 0.9, 0.6};
    o.require(near(ece(two, 20), 0.2, 1e-9), "two-bin ECE");
    o.require(near(mce(two), 0.3, 1e-9), "two-bin MCE");

    const ProbVector uniform(std::vector<double>(6, 1.0 / 6.0));
    o.require(near(brier(std::vector<ProbVector>{uniform}, std::vector<std::size_t>{0}), 5.0 / 6.0, 1e-9),
              "uniform Brier");
    o.require(near(brier(rows({{0.5, 0.5, 0, 0, 0, 0}}), std::vector<std::size_t>{0}), 0.5, 1e-9), "half-mass Brier");

    const auto f1 = macro_f1(rows({{1, 0}, {0, 1}, {0, 1}, {0, 1}}), std::vector<std::size_t>{0, 0, 1, 1}, 2);
    o.require(near(f1, 11.0 / 15.0, 1e-9), "macro-F1");

    // Same examples through the sample-by-sample reference.
    const auto ref = oracle::calibration_metrics({{0.7, 0.3}}, {1}, 2, 10);
    o.require(near(ref.ece, 0.7, 1e-9) && near(ref.mce, 0.7, 1e-9), "reference single-sample ECE");
    const auto ref_f1 = oracle::calibration_metrics({{1, 0}, {0, 1}, {0, 1}, {0, 1}}, {0, 0, 1, 1}, 2, 10);
    o.require(near(ref_f1.macro_f1, f1, 1e-9), "reference macro-F1");
    return o;
}

Outcome brute_force_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20240501);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + rng() % 5, n = 1 + rng() % 20;
        const auto e = test_support::random_ensemble(rng, k, n);
        const auto want = oracle::weighted_ensemble(e.cube, 1e-6, 1e-6);
        const auto got = ensemble(e.tensor);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t c = 0; c < 6; ++c) {
                worst = std::max(worst, std::abs(got.final[s][c] - want.final[s][c]));
                worst = std::max(worst, std::abs(got.consensus.mu()[s * 6 + c] - want.mu[s][c]));
                worst = std::max(worst, std::abs(got.consensus.var()[s * 6 + c] - want.var[s][c]));
            }
            for (std::size_t j = 0; j < k; ++j) {
                worst = std::max(worst, std::abs(got.weight(j, s) - want.weight[j][s]));
                worst = std::max(worst, std::abs(got.uncertainty(j, s) - want.sigma[j][s]));
            }
        }
    }
    o.require(worst <= 1e-12, "max deviation " + std::to_string(worst));
    return o;
}

Outcome ensemble_invariants() {
    Outcome o;
    std::mt19937_64 rng(99);
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 1 + rng() % 5, n = 1 + rng() % 12;
        const auto e = test_support::random_ensemble(rng, k, n);
        const auto out = ensemble(e.tensor);

        for (std::size_t s = 0; s < n; ++s) {
            double wsum = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                violations += out.weight(j, s) < 0.0;
                wsum += out.weight(j, s);
            }
            violations += !near(wsum, 1.0, 1e-12);
            for (std::size_t c = 0; c < 6; ++c) {
                double lo = 1.0, hi = 0.0;
                for (std::size_t j = 0; j < k; ++j) {
                    lo = std::min(lo, e.cube[j][s][c]);
                    hi = std::max(hi, e.cube[j][s][c]);
                }
                violations += out.final[s][c] < lo - 1e-12 || out.final[s][c] > hi + 1e-12;
            }
        }

        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> ids;
        std::vector<double> flat;
        for (std::size_t j : perm) {
            ids.push_back(e.tensor.model_ids()[j]);
            for (std::size_t s = 0; s < n; ++s) flat.insert(flat.end(), e.cube[j][s].begin(), e.cube[j][s].end());
        }
        const auto permuted = ensemble(PredictionTensor(ids, e.tensor.sample_ids(), e.tensor.labels(), flat));
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t c = 0; c < 6; ++c) violations += !near(permuted.final[s][c], out.final[s][c], 1e-12);

        // k copies of model 0, and model 0 alone.
        std::vector<double> copies, alone;
        for (std::size_t s = 0; s < n; ++s) alone.insert(alone.end(), e.cube[0][s].begin(), e.cube[0][s].end());
        std::vector<std::string> copy_ids;
        for (std::size_t j = 0; j < std::max<std::size_t>(k, 2); ++j) {
            copies.insert(copies.end(), alone.begin(), alone.end());
            copy_ids.push_back("c" + std::to_string(j));
        }
        const auto same = ensemble(PredictionTensor(copy_ids, e.tensor.sample_ids(), e.tensor.labels(), copies));
        const auto one = ensemble(PredictionTensor({"only"}, e.tensor.sample_ids(), e.tensor.labels(), alone));
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t c = 0; c < 6; ++c) {
                violations += !near(same.final[s][c], e.cube[0][s][c], 1e-12);
                violations += one.final[s][c] != e.cube[0][s][c];
            }
            violations += one.weight(0, s) != 1.0;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    return o;
}

Outcome llfu_points() {
    Outcome o;
    const double two_pi = 2.0 * 3.14159265358979323846;
    const std::vector<double> v6(6, 1.0 / two_pi), y6{0.1, 0.2, 0.3, 0.1, 0.2, 0.1};
    o.require(llfu(y6, y6, v6) == 0.0, "y = mu at 1/(2 pi) is not exactly 0");

    const std::vector<double> y{0.7}, mu{0.5}, v{1.0 / two_pi};
    o.require(near(llfu(y, mu, v), 0.04 * 3.14159265358979323846, 1e-9), "0.04 pi case");
    o.require(near(llfu(y, mu, v), 0.125664, 1e-6), "0.125664 rounding");
    o.require(near(llfu(y, mu, v), oracle::llfu_class(0.7, 0.5, 1.0 / two_pi, 1e-6), 1e-12), "reference value");

    for (double var : {0.01, 0.05, 0.1, 0.15}) {
        const std::vector<double> vv{var};
        const double expected = 0.04 / (2.0 * var);
        o.require(near(llfu(y, mu, vv), expected, 1e-12), "clipped branch at var " + std::to_string(var));
    }
    const std::vector<double> big{0.5};
    o.require(near(llfu(y, mu, big), 0.5 * std::log(two_pi * 0.5) + 0.04, 1e-12), "unclipped branch");
    return o;
}

Outcome augmentation_exactness() {
    Outcome o;
    const auto lexicon = load_lexicon();
    const auto layout = load_keyboard_layout();
    std::vector<std::string> lex_words;
    for (const auto& [key, syns] : lexicon.entries())
        if (key.find_first_of("'-") == std::string::npos) lex_words.push_back(key);
    const auto model = fit_tfidf(load_documents(kToy / "train.jsonl", DocFormat::kJsonl,
                                                LabelSet::mental_health_default()));

    const auto words = [](const TokenizedText& t) {
        std::vector<std::string> out;
        for (const auto& tok : t.tokens())
            if (tok.kind == TokenKind::kWord) out.push_back(tok.text);
        return out;
    };

    std::mt19937_64 pick(4242);
    std::size_t trials = 0, exact = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t e = 1 + trial % 200;
        const double rate = (trial / 200) % 2 ? 0.05 : 0.30;
        const std::size_t want = replacement_count(rate, e);
        std::string syn_text, key_text;
        for (std::size_t i = 0; i < e; ++i) syn_text += (i ? " " : "") + lex_words[pick() % lex_words.size()];
        for (std::size_t i = 0; i < e; ++i) key_text += static_cast<char>('a' + pick() % 26);
        const auto syn = tokenize(syn_text), key = tokenize(key_text);
        const auto before = words(syn);

        RandomStream a(derive_seed(trial, "syn", 0)), b(derive_seed(trial, "tfidf", 0)),
            c(derive_seed(trial, "key", 0));
        const auto s = words(synonym_augment(syn, rate, lexicon, a));
        const auto t = words(tfidf_augment(syn, rate, model, b));
        const auto kb = keyboard_augment(key, rate, layout, c).text();
        std::size_t ds = 0, dt = 0, dk = 0;
        for (std::size_t i = 0; i < e; ++i) {
            ds += s.at(i) != before[i];
            dt += t.at(i) != before[i];
        }
        for (std::size_t i = 0; i < key_text.size(); ++i) dk += kb.at(i) != key_text[i];
        trials += 3;
        exact += (ds == want) + (dt == want) + (dk == want);
    }
    o.require(exact == trials, std::to_string(trials - exact) + " of " + std::to_string(trials) + " counts off");

    const auto docs = load_documents(kToy / "test.jsonl", DocFormat::kJsonl, LabelSet::mental_health_default());
    const AugmentResources res{lexicon, model, layout};
    AugmentationConfig cfg;
    cfg.seed = 77;
    for (const auto& d : docs) {
        std::ostringstream x, y;
        write_documents(tta_expand(d, cfg, res), x, DocFormat::kJsonl);
        write_documents(tta_expand(d, cfg, res), y, DocFormat::kJsonl);
        o.require(x.str() == y.str(), "tta_expand bytes differ for " + d.id);
    }
    return o;
}

Outcome desk_scale() {
    Outcome o;
    std::vector<double> eb_ece, min_ece, eb_brier, min_brier, eb_acc, mean_acc, ua_ece;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto cfg = load_run_config(kToy / "experiment.conf");
        cfg.seed = seed;
        const auto r = run_experiment(cfg, false);
        double me = 1e9, mb = 1e9, acc = 0.0;
        for (const auto& s : r.single) {
            me = std::min(me, s.ece);
            mb = std::min(mb, s.brier);
            acc += s.accuracy / double(r.single.size());
        }
        eb_ece.push_back(r.uatta_eb.ece);
        min_ece.push_back(me);
        eb_brier.push_back(r.uatta_eb.brier);
        min_brier.push_back(mb);
        eb_acc.push_back(r.uatta_eb.accuracy);
        mean_acc.push_back(acc);
        ua_ece.push_back(r.ua_ens.ece);
    }
    const double e = median(eb_ece), me = median(min_ece), b = median(eb_brier), mb = median(min_brier),
                 a = median(eb_acc), ma = median(mean_acc), u = median(ua_ece);
    std::printf("      median ECE %.4f (min single %.4f, UA-ENS %.4f)  Brier %.4f (min single %.4f)  "
                "accuracy %.4f (mean single %.4f)\n",
                e, me, u, b, mb, a, ma);
    o.require(e <= me, "ECE above min single-model ECE");
    o.require(b <= mb + 0.01, "Brier above min single-model Brier + 0.01");
    o.require(a >= ma - 0.02, "accuracy below mean single-model accuracy - 0.02");
    o.require(e <= u + 0.005, "ECE above UA-ENS ECE + 0.005");
    return o;
}

Outcome round_trip() {
    Outcome o;
    test_support::TempDir dir("accept");
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = test_support::random_ensemble(rng, 1 + rng() % 5, 1 + rng() % 50).tensor;
        save_predictions(t, dir / "p.jsonl");
        const auto back = load_predictions(dir / "p.jsonl", t.labels());
        o.require(back.model_ids() == t.model_ids() && back.sample_ids() == t.sample_ids(), "ids changed");
        for (std::size_t i = 0; i < t.data().size(); ++i)
            worst = std::max(worst, std::abs(back.data()[i] - t.data()[i]));
    }
    o.require(worst <= 1e-12, "round trip deviation " + std::to_string(worst));

    auto cfg = load_run_config(kToy / "experiment.conf");
    cfg.output_dir = dir / "a";
    const auto first = run_experiment(cfg);
    cfg.output_dir = dir / "b";
    run_experiment(cfg);
    for (const auto& p : first.written) {
        o.require(test_support::read_file(p) == test_support::read_file(dir / "b" / p.filename()),
                  p.filename().string() + " differs between runs");
    }
    o.require(first.written.size() == 2 * (cfg.model_seeds.size() + 2), "unexpected output count");
    return o;
}

}  // namespace

int main() {
    criterion("metric examples", 1.0, metric_examples);
    criterion("ensemble vs direct transcription", 10.0, brute_force_equivalence);
    criterion("ensemble invariants", 0.0, ensemble_invariants);
    criterion("LLFU analytic points", 0.0, llfu_points);
    criterion("augmentation rate exactness", 0.0, augmentation_exactness);
    criterion("desk-scale calibration", 60.0, desk_scale);
    criterion("round trip and rerun determinism", 0.0, round_trip);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures ? 1 : 0;
}
