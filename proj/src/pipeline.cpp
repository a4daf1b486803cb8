#include "uatta/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "uatta/ingest.hpp"
#include "uatta/random.hpp"

namespace uatta {
namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key + ": not a number: '" + value + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
    if (value == "false" || value == "no" || value == "off" || value == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    for (const auto& part : io::split(value, ',')) {
        auto item = io::trim(part);
        if (!item.empty()) out.push_back(std::move(item));
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

void set_augmentation(AugmentationConfig& a, std::string_view field, const std::string& key, const std::string& v) {
    if (field == "synonym_rate") a.synonym_rate = parse_number<double>(key, v);
    else if (field == "tfidf_rate") a.tfidf_rate = parse_number<double>(key, v);
    else if (field == "keyboard_rate") a.keyboard_rate = parse_number<double>(key, v);
    else if (field == "variants") a.variants = parse_number<int>(key, v);
    else if (field == "include_original") a.include_original = parse_bool(key, v);
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = [] {
        std::map<std::string, Setter, std::less<>> t;
        t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.seed = parse_number<std::uint64_t>(k, v);
        };
        t["labels"] = [](RunConfig& c, const std::string&, const std::string& v) { c.labels = LabelSet(parse_list(v)); };
        t["model.seeds"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.model_seeds.clear();
            for (const auto& s : parse_list(v)) c.model_seeds.push_back(parse_number<std::uint64_t>(k, s));
        };
        t["model.feature_dim"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.toy.feature_dim = parse_number<std::size_t>(k, v);
        };
        t["model.epochs"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.toy.epochs = parse_number<int>(k, v);
        };
        t["model.learning_rate"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.toy.learning_rate = parse_number<double>(k, v);
        };
        t["model.l2"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.toy.l2 = parse_number<double>(k, v);
        };
        t["model.batch_size"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.toy.batch_size = parse_number<std::size_t>(k, v);
        };
        t["model.train_augment"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            if (parse_bool(k, v)) {
                if (!c.train_augment) c.train_augment = AugmentationConfig{};
            } else {
                c.train_augment.reset();
            }
        };
        for (const char* field : {"synonym_rate", "tfidf_rate", "keyboard_rate", "variants", "include_original"}) {
            t[std::string("tta.") + field] = [field](RunConfig& c, const std::string& k, const std::string& v) {
                set_augmentation(c.tta, field, k, v);
            };
            t[std::string("train_augment.") + field] = [field](RunConfig& c, const std::string& k, const std::string& v) {
                if (!c.train_augment) c.train_augment = AugmentationConfig{};
                set_augmentation(*c.train_augment, field, k, v);
            };
        }
        t["uq.var_floor"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.uq.var_floor = parse_number<double>(k, v);
        };
        t["uq.sigma_floor"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.uq.sigma_floor = parse_number<double>(k, v);
        };
        t["uq.llfu"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            const auto mode = parse_llfu_mode(v);
            if (!mode) throw ConfigError(k + ": expected mean or predicted, got '" + v + "'");
            c.uq.mode = *mode;
        };
        t["metrics.bins"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.bins = parse_number<std::size_t>(k, v);
        };
        return t;
    }();
    return table;
}

void require_file(const std::string& key, const std::filesystem::path& p) {
    if (p.empty()) throw ConfigError(key + " is not set");
    if (!std::filesystem::is_regular_file(p)) throw ConfigError(key + ": no such file: " + p.string());
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const ConfigError& e) {
        throw StageError(name, e.what(), true);
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), false);
    }
}

std::vector<Document> load_labeled(const std::filesystem::path& p, const LabelSet& labels) {
    auto docs = load_documents(p, doc_format_for(p), labels);
    for (const auto& d : docs) {
        if (!d.label) throw ValidationError(p.string() + ": document " + d.id + " has no label");
    }
    return docs;
}

}  // namespace

StageError::StageError(std::string stage, const std::string& message, bool config_error)
    : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)), config_error_(config_error) {}

void RunConfig::validate() const {
    require_file("train", train_path);
    require_file("test", test_path);
    if (output_dir.empty()) throw ConfigError("output is not set");
    if (lexicon_path) require_file("lexicon", *lexicon_path);
    if (keyboard_path) require_file("keyboard", *keyboard_path);
    if (model_seeds.empty()) throw ConfigError("model.seeds must list at least one seed");
    if (std::set(model_seeds.begin(), model_seeds.end()).size() != model_seeds.size()) {
        throw ConfigError("model.seeds contains duplicates");
    }
    if (bins == 0) throw ConfigError("metrics.bins must be at least 1");
    try {
        toy.validate();
        tta.validate();
        if (train_augment) train_augment->validate();
        uq.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
}

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    const auto resolve = [&](const std::string& v) {
        const std::filesystem::path p(v);
        return p.is_absolute() ? p : (base_dir / p).lexically_normal();
    };
    while (io::read_line(in, line)) {
        ++lineno;
        const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
        const auto hash = line.find('#');
        const auto text = io::trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        const auto key = io::trim(text.substr(0, eq));
        const auto value = io::trim(text.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(where + "duplicate key " + key);
        try {
            if (key == "train") cfg.train_path = resolve(value);
            else if (key == "test") cfg.test_path = resolve(value);
            else if (key == "output") cfg.output_dir = resolve(value);
            else if (key == "lexicon") cfg.lexicon_path = resolve(value);
            else if (key == "keyboard") cfg.keyboard_path = resolve(value);
            else if (const auto it = setters().find(key); it != setters().end()) it->second(cfg, key, value);
            else throw ConfigError("unknown key " + key);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const ValidationError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_run_config(in, path.parent_path(), path.string());
}

std::uint64_t model_seed(const RunConfig& cfg, std::size_t j) {
    return derive_seed(cfg.seed, "model", cfg.model_seeds.at(j));
}

ExperimentResult run_experiment(const RunConfig& cfg, bool write_outputs) {
    stage("config", [&] { cfg.validate(); return 0; });

    ExperimentResult result;
    std::vector<std::filesystem::path>& written = result.written;
    bool created_dir = false;
    try {
        const auto train = stage("ingest", [&] { return load_labeled(cfg.train_path, cfg.labels); });
        const auto test = stage("ingest", [&] { return load_labeled(cfg.test_path, cfg.labels); });
        const AugmentResources resources = stage("resources", [&] {
            return AugmentResources{load_lexicon(cfg.lexicon_path), fit_tfidf(train),
                                    load_keyboard_layout(cfg.keyboard_path)};
        });

        std::vector<Predictor> models = stage("train", [&] {
            std::vector<Predictor> out;
            for (std::size_t j = 0; j < cfg.model_seeds.size(); ++j) {
                ToyModelConfig tc = cfg.toy;
                tc.seed = model_seed(cfg, j);
                if (cfg.train_augment) {
                    tc.train_augment = *cfg.train_augment;
                    tc.train_augment->seed = derive_seed(cfg.seed, "train-augment", 0);
                }
                const auto id = "toy-s" + std::to_string(cfg.model_seeds[j]);
                out.emplace_back(train_toy(train, cfg.labels, tc, &resources, id));
            }
            return out;
        });
        for (const auto& m : models) result.model_ids.push_back(predictor_id(m));

        const auto plain = stage("predict", [&] { return predict_corpus(models, test); });
        const auto tta = stage("predict", [&] {
            AugmentationConfig a = cfg.tta;
            a.seed = derive_seed(cfg.seed, "tta", 0);
            return tta_predict(models, test, a, resources);
        });
        const auto ua_ens = stage("ensemble", [&] { return ensemble(plain, cfg.uq); });
        const auto uatta = stage("ensemble", [&] { return ensemble(tta, cfg.uq); });

        stage("evaluate", [&] {
            const auto gold = gold_indices(plain.sample_ids(), test, cfg.labels);
            const std::size_t k = cfg.labels.size();
            for (std::size_t j = 0; j < plain.models(); ++j) {
                result.single.push_back(evaluate(model_predictions(plain, j), gold, k, cfg.bins));
            }
            result.ua_ens = evaluate(ua_ens.final, gold, k, cfg.bins);
            result.uatta_eb = evaluate(uatta.final, gold, k, cfg.bins);
            return 0;
        });

        if (write_outputs) {
            stage("write", [&] {
                if (!std::filesystem::exists(cfg.output_dir)) {
                    std::filesystem::create_directories(cfg.output_dir);
                    created_dir = true;
                }
                const auto emit = [&](const std::string& name, const CalibrationReport& r) {
                    const auto report = cfg.output_dir / (name + ".report.json");
                    written.push_back(report);
                    save_report(r, report);
                    const auto csv = cfg.output_dir / (name + ".reliability.csv");
                    written.push_back(csv);
                    save_reliability_csv(r.bins, csv);
                };
                for (std::size_t j = 0; j < result.single.size(); ++j) emit(result.model_ids[j], result.single[j]);
                emit("ua-ens", result.ua_ens);
                emit("uatta-eb", result.uatta_eb);
                return 0;
            });
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) {
            if (!std::filesystem::is_directory(p, ec)) std::filesystem::remove(p, ec);
        }
        if (created_dir) std::filesystem::remove(cfg.output_dir, ec);
        written.clear();
        throw;
    }
    return result;
}

}  // namespace uatta
