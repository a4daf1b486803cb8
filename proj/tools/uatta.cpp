// Command-line front end: augment, fit-tfidf, train, predict, ensemble,
// evaluate and the one-shot pipeline.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uatta/augment.hpp"
#include "uatta/backend.hpp"
#include "uatta/ingest.hpp"
#include "uatta/metrics.hpp"
#include "uatta/pipeline.hpp"
#include "uatta/uq.hpp"

namespace fs = std::filesystem;
using namespace uatta;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

const char* const kFormats = R"(File formats:
  documents    JSONL, one {"id","title","post","label"} object per line (label optional),
               or TSV with header id<TAB>title<TAB>post<TAB>label; \t \n \r \\ escaped.
               The format follows the extension (.tsv, anything else JSONL).
  predictions  JSONL, one {"model_id","sample_id","probs":[K reals]} per line;
               every model must cover every sample.
  reports      JSON calibration report plus a reliability CSV (lo,hi,count,acc,conf,gap).
Resources default to $UATTA_RESOURCE_DIR, else the bundled resources/ directory.)";

LabelSet labels_from(const std::string& csv) {
    if (csv.empty()) return LabelSet::mental_health_default();
    std::vector<std::string> names;
    for (const auto& n : io::split(csv, ',')) names.push_back(io::trim(n));
    return LabelSet(std::move(names));
}

std::optional<fs::path> opt_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return fs::path(s);
}

struct AugmentFlags {
    AugmentationConfig cfg;
    bool no_original = false;
    std::string tfidf, lexicon, keyboard;

    void add(CLI::App* cmd, bool with_variants) {
        cmd->add_option("--synonym-rate", cfg.synonym_rate, "Fraction of eligible words swapped for synonyms")
            ->capture_default_str();
        cmd->add_option("--tfidf-rate", cfg.tfidf_rate, "Fraction of words replaced by tf-idf sampling")
            ->capture_default_str();
        cmd->add_option("--keyboard-rate", cfg.keyboard_rate, "Fraction of letters hit by keyboard typos")
            ->capture_default_str();
        if (with_variants) {
            cmd->add_option("--variants", cfg.variants, "Augmented copies per document")->capture_default_str();
            cmd->add_flag("--no-original", no_original, "Leave the unaugmented document out");
        }
        cmd->add_option("--tfidf", tfidf, "tf-idf model from fit-tfidf (default: fitted on the input)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--lexicon", lexicon, "Synonym lexicon TSV")->check(CLI::ExistingFile);
        cmd->add_option("--keyboard", keyboard, "Keyboard adjacency TSV")->check(CLI::ExistingFile);
    }

    AugmentationConfig config(std::uint64_t seed) const {
        AugmentationConfig c = cfg;
        c.seed = seed;
        c.include_original = !no_original;
        c.validate();
        return c;
    }

    AugmentResources resources(std::span<const Document> fallback_corpus) const {
        return AugmentResources{load_lexicon(opt_path(lexicon)),
                                tfidf.empty() ? fit_tfidf(fallback_corpus) : load_tfidf(tfidf),
                                load_keyboard_layout(opt_path(keyboard))};
    }
};

std::vector<Document> read_docs(const std::string& path, const LabelSet& labels) {
    return load_documents(path, doc_format_for(path), labels);
}

/// Predictions JSONL or an ensemble report, detected by content.
PredictionTensor read_any_predictions(const std::string& path, const LabelSet& labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto text = buf.str();
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("samples")) {
        return load_ensemble_report_predictions(path, labels);
    }
    std::istringstream lines(text);
    return parse_predictions(lines, labels, path);
}

/// Stacks the models of several tensors over a shared sample set, in the
/// sample order of the first.
PredictionTensor stack(const std::vector<PredictionTensor>& parts) {
    const auto& first = parts.front();
    std::vector<std::string> models;
    std::vector<double> data;
    for (const auto& t : parts) {
        if (!(t.labels() == first.labels())) throw ValidationError("prediction files use different label sets");
        std::unordered_map<std::string, std::size_t> index;
        for (std::size_t n = 0; n < t.samples(); ++n) index.emplace(t.sample_ids()[n], n);
        if (t.samples() != first.samples()) {
            throw ValidationError("ragged tensor: prediction files cover different sample sets");
        }
        for (std::size_t j = 0; j < t.models(); ++j) {
            models.push_back(t.model_ids()[j]);
            for (const auto& id : first.sample_ids()) {
                const auto it = index.find(id);
                if (it == index.end()) throw ValidationError("ragged tensor: model " + t.model_ids()[j] + " lacks sample " + id);
                const auto p = t.at(j, it->second);
                data.insert(data.end(), p.begin(), p.end());
            }
        }
    }
    return PredictionTensor(std::move(models), first.sample_ids(), first.labels(), std::move(data));
}

fs::path reliability_path_for(const fs::path& report) {
    auto p = report;
    p.replace_extension(".reliability.csv");
    return p;
}

void print_summary(const ExperimentResult& r) {
    std::printf("%-12s %8s %8s %8s %8s %8s\n", "model", "acc", "f1", "ece", "mce", "brier");
    const auto row = [](const std::string& name, const CalibrationReport& c) {
        std::printf("%-12s %8.4f %8.4f %8.4f %8.4f %8.4f\n", name.c_str(), c.accuracy, c.macro_f1, c.ece, c.mce,
                    c.brier);
    };
    for (std::size_t j = 0; j < r.single.size(); ++j) row(r.model_ids[j], r.single[j]);
    row("ua-ens", r.ua_ens);
    row("uatta-eb", r.uatta_eb);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uncertainty-aware test-time augmentation ensembles over text classifiers"};
    app.footer(kFormats);
    app.require_subcommand(1);
    std::string labels_csv;
    app.add_option("--labels", labels_csv, "Comma-separated class names (default: the six mental-health classes)");

    // augment
    auto* augment = app.add_subcommand("augment", "Write each document followed by its augmented variants");
    std::string aug_in, aug_out;
    std::uint64_t aug_seed = 0;
    AugmentFlags aug_flags;
    augment->add_option("--in", aug_in, "Input documents")->required()->check(CLI::ExistingFile);
    augment->add_option("--out", aug_out, "Output documents")->required();
    augment->add_option("--seed", aug_seed, "Augmentation seed")->capture_default_str();
    aug_flags.add(augment, true);

    // fit-tfidf
    auto* fit = app.add_subcommand("fit-tfidf", "Fit the tf-idf statistics used for word replacement");
    std::string fit_in, fit_out;
    fit->add_option("--in", fit_in, "Corpus documents")->required()->check(CLI::ExistingFile);
    fit->add_option("--out", fit_out, "Output model JSON")->required();

    // train
    auto* train = app.add_subcommand("train", "Train a hashed bag-of-words softmax classifier");
    std::string train_in, train_out, train_id;
    ToyModelConfig toy;
    bool train_aug = false;
    AugmentFlags train_flags;
    train->add_option("--train", train_in, "Labeled training documents")->required()->check(CLI::ExistingFile);
    train->add_option("--out", train_out, "Output model JSON")->required();
    train->add_option("--id", train_id, "Model id (default: toy-s<seed>)");
    train->add_option("--seed", toy.seed, "Shuffle seed")->capture_default_str();
    train->add_option("--epochs", toy.epochs)->capture_default_str();
    train->add_option("--lr", toy.learning_rate, "Learning rate")->capture_default_str();
    train->add_option("--l2", toy.l2, "L2 penalty on the weights")->capture_default_str();
    train->add_option("--dim", toy.feature_dim, "Hashed feature dimension")->capture_default_str();
    train->add_option("--batch-size", toy.batch_size)->capture_default_str();
    train->add_flag("--augment", train_aug, "Train each epoch on freshly augmented documents");
    train_flags.add(train, false);

    // predict
    auto* predict = app.add_subcommand("predict", "Score documents with trained models");
    std::vector<std::string> pred_models;
    std::string pred_docs, pred_out;
    bool pred_tta = false;
    std::uint64_t pred_seed = 0;
    AugmentFlags pred_flags;
    predict->add_option("--model", pred_models, "Model JSON files")->required()->check(CLI::ExistingFile);
    predict->add_option("--docs", pred_docs, "Documents to score")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", pred_out, "Output predictions JSONL")->required();
    predict->add_flag("--tta", pred_tta, "Average each model over test-time augmented variants");
    predict->add_option("--seed", pred_seed, "Test-time augmentation seed")->capture_default_str();
    pred_flags.add(predict, true);

    // ensemble
    auto* ens = app.add_subcommand("ensemble", "Uncertainty-weighted ensemble of prediction files");
    std::vector<std::string> ens_preds;
    std::string ens_out, ens_final, ens_mode = "mean";
    UqConfig uq;
    ens->add_option("--preds", ens_preds, "Prediction JSONL files; all models are pooled")
        ->required()
        ->check(CLI::ExistingFile);
    ens->add_option("--out", ens_out, "Output ensemble report JSON")->required();
    ens->add_option("--final", ens_final, "Also write the ensembled distributions as predictions JSONL");
    ens->add_option("--var-floor", uq.var_floor)->capture_default_str();
    ens->add_option("--sigma-floor", uq.sigma_floor)->capture_default_str();
    ens->add_option("--llfu", ens_mode, "Per-model uncertainty over all classes (mean) or the predicted one")
        ->check(CLI::IsMember({"mean", "predicted"}))
        ->capture_default_str();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Accuracy, macro-F1, ECE, MCE and Brier against gold labels");
    std::string eval_preds, eval_docs, eval_out, eval_csv, eval_model;
    std::size_t eval_bins = 10;
    eval->add_option("--preds", eval_preds, "Predictions JSONL or ensemble report JSON")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--docs", eval_docs, "Labeled documents")->required()->check(CLI::ExistingFile);
    eval->add_option("--out", eval_out, "Output report JSON")->required();
    eval->add_option("--csv", eval_csv, "Reliability CSV (default: <out>.reliability.csv)");
    eval->add_option("--bins", eval_bins, "Equal-width confidence bins")->capture_default_str();
    eval->add_option("--model", eval_model, "Model to evaluate when the file holds several");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Train, ensemble and evaluate from one config file");
    std::string pipe_config, pipe_output;
    pipe->add_option("--config", pipe_config, "Experiment config")->required()->check(CLI::ExistingFile);
    pipe->add_option("--output", pipe_output, "Override the config's output directory");

    for (auto* sub : app.get_subcommands({})) sub->footer(kFormats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const LabelSet labels = labels_from(labels_csv);

        if (*augment) {
            const auto docs = read_docs(aug_in, labels);
            const auto cfg = aug_flags.config(aug_seed);
            const auto resources = aug_flags.resources(docs);
            std::vector<Document> out;
            for (const auto& d : docs) {
                auto expanded = tta_expand(d, cfg, resources);
                out.insert(out.end(), expanded.begin(), expanded.end());
            }
            save_documents(out, aug_out, doc_format_for(aug_out));
        } else if (*fit) {
            save_tfidf(fit_tfidf(read_docs(fit_in, labels)), fit_out);
        } else if (*train) {
            const auto docs = read_docs(train_in, labels);
            std::optional<AugmentResources> resources;
            if (train_aug) {
                toy.train_augment = train_flags.config(toy.seed);
                resources = train_flags.resources(docs);
            }
            toy.validate();
            const auto id = train_id.empty() ? "toy-s" + std::to_string(toy.seed) : train_id;
            save_toy_model(train_toy(docs, labels, toy, resources ? &*resources : nullptr, id), train_out);
        } else if (*predict) {
            const auto docs = read_docs(pred_docs, labels);
            std::vector<Predictor> models;
            for (const auto& p : pred_models) models.emplace_back(load_toy_model(p));
            if (pred_tta) {
                const auto cfg = pred_flags.config(pred_seed);
                save_predictions(tta_predict(models, docs, cfg, pred_flags.resources(docs)), pred_out);
            } else {
                save_predictions(predict_corpus(models, docs), pred_out);
            }
        } else if (*ens) {
            uq.mode = *parse_llfu_mode(ens_mode);
            std::vector<PredictionTensor> parts;
            for (const auto& p : ens_preds) parts.push_back(load_predictions(p, labels));
            const auto out = ensemble(stack(parts), uq);
            save_ensemble_report(out, ens_out);
            if (!ens_final.empty()) save_predictions(out.as_tensor("ensemble"), ens_final);
        } else if (*eval) {
            const auto t = read_any_predictions(eval_preds, labels);
            std::size_t model = 0;
            if (!eval_model.empty()) {
                const auto& ids = t.model_ids();
                const auto it = std::find(ids.begin(), ids.end(), eval_model);
                if (it == ids.end()) throw ConfigError("no model " + eval_model + " in " + eval_preds);
                model = static_cast<std::size_t>(it - ids.begin());
            } else if (t.models() > 1) {
                throw ConfigError(eval_preds + " holds " + std::to_string(t.models()) +
                                  " models; pick one with --model");
            }
            const auto docs = read_docs(eval_docs, labels);
            const auto gold = gold_indices(t.sample_ids(), docs, labels);
            const auto report = evaluate(model_predictions(t, model), gold, labels.size(), eval_bins);
            save_report(report, eval_out);
            save_reliability_csv(report.bins, eval_csv.empty() ? reliability_path_for(eval_out) : fs::path(eval_csv));
        } else if (*pipe) {
            auto cfg = load_run_config(pipe_config);
            if (!pipe_output.empty()) cfg.output_dir = pipe_output;
            print_summary(run_experiment(cfg));
        }
    } catch (const StageError& e) {
        std::cerr << "uatta: " << e.what() << '\n';
        return e.config_error() ? kUsage : kFailure;
    } catch (const ConfigError& e) {
        std::cerr << "uatta: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "uatta: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
