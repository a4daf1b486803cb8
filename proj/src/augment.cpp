#include "uatta/augment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

namespace uatta {
namespace {

bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }

std::string match_first_letter_case(const std::string& original, std::string replacement) {
    if (!original.empty() && !replacement.empty() && is_ascii_upper(original.front())) {
        replacement.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement.front())));
    }
    return replacement;
}

// First `count` entries of `pool` after a partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_uniform(std::vector<std::size_t> pool, std::size_t count,
                                        RandomStream& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

// Sequential weighted draws without replacement; returns positions into `weights`.
std::vector<std::size_t> sample_weighted(std::vector<double> weights, std::size_t count,
                                         RandomStream& rng) {
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    for (std::size_t draw = 0; draw < count; ++draw) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        const double target = rng.uniform() * total;
        double running = 0.0;
        std::size_t pick = weights.size();
        std::size_t last_live = weights.size();
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            last_live = i;
            running += weights[i];
            if (target < running) {
                pick = i;
                break;
            }
        }
        if (pick == weights.size()) pick = last_live;  // rounding at the top end
        chosen.push_back(pick);
        weights[pick] = 0.0;
    }
    return chosen;
}

std::vector<std::size_t> word_indices(const TokenizedText& text) {
    std::vector<std::size_t> out;
    const auto& toks = text.tokens();
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind == TokenKind::kWord) out.push_back(i);
    }
    return out;
}

}  // namespace

TokenizedText::TokenizedText(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    for (const auto& t : tokens_) {
        if (t.text.empty()) throw ValidationError("empty token");
        if (t.kind == TokenKind::kWord &&
            std::any_of(t.text.begin(), t.text.end(), [](unsigned char c) { return is_space_byte(c); })) {
            throw ValidationError("word token \"" + t.text + "\" contains whitespace");
        }
    }
}

std::size_t TokenizedText::word_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        tokens_.begin(), tokens_.end(), [](const Token& t) { return t.kind == TokenKind::kWord; }));
}

std::string TokenizedText::text() const {
    std::string out;
    for (const auto& t : tokens_) out += t.text;
    return out;
}

TokenizedText tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const auto at = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    while (i < text.size()) {
        const std::size_t start = i;
        if (is_word_byte(at(i))) {
            ++i;
            while (i < text.size()) {
                if (is_word_byte(at(i))) {
                    ++i;
                } else if ((text[i] == '\'' || text[i] == '-') && i + 1 < text.size() &&
                           is_word_byte(at(i + 1))) {
                    i += 2;
                } else {
                    break;
                }
            }
            tokens.push_back({std::string(text.substr(start, i - start)), TokenKind::kWord});
        } else if (is_space_byte(at(i))) {
            while (i < text.size() && is_space_byte(at(i))) ++i;
            tokens.push_back({std::string(text.substr(start, i - start)), TokenKind::kWhitespace});
        } else {
            ++i;
            tokens.push_back({std::string(text.substr(start, 1)), TokenKind::kPunctuation});
        }
    }
    return TokenizedText(std::move(tokens));
}

std::vector<std::string> document_words(const Document& d) {
    std::vector<std::string> words;
    for (const auto* field : {&d.title, &d.body}) {
        const auto tokens = tokenize(*field);
        for (const auto& t : tokens.tokens()) {
            if (t.kind == TokenKind::kWord) words.push_back(io::to_lower(t.text));
        }
    }
    return words;
}

double smoothed_idf(std::size_t doc_count, std::size_t doc_freq) {
    return std::log((1.0 + static_cast<double>(doc_count)) / (1.0 + static_cast<double>(doc_freq))) + 1.0;
}

TfidfModel::TfidfModel(std::size_t doc_count, std::vector<TfidfTerm> vocabulary)
    : doc_count_(doc_count), vocabulary_(std::move(vocabulary)) {
    if (doc_count_ < 1) throw ValidationError("tf-idf model needs at least one document");
    if (vocabulary_.empty()) throw ValidationError("tf-idf vocabulary is empty");
    double running = 0.0;
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
        const auto& t = vocabulary_[i];
        if (i > 0 && !(vocabulary_[i - 1].token < t.token)) {
            throw ValidationError("tf-idf vocabulary must be sorted and unique");
        }
        if (!std::isfinite(t.idf) || t.idf < 0.0 || !std::isfinite(t.mass) || t.mass < 0.0) {
            throw ValidationError("tf-idf weights must be finite and non-negative");
        }
        running += t.mass;
        cumulative_.push_back(running);
    }
}

std::size_t TfidfModel::find(std::string_view lowercase_token) const {
    const auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), lowercase_token,
                                     [](const TfidfTerm& t, std::string_view key) { return t.token < key; });
    if (it == vocabulary_.end() || it->token != lowercase_token) return npos;
    return static_cast<std::size_t>(it - vocabulary_.begin());
}

double TfidfModel::idf(std::string_view lowercase_token) const {
    const std::size_t i = find(lowercase_token);
    return i == npos ? smoothed_idf(doc_count_, 0) : vocabulary_[i].idf;
}

TfidfModel fit_tfidf(std::span<const Document> corpus) {
    if (corpus.empty()) throw ValidationError("cannot fit tf-idf on an empty corpus");
    std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // token -> (df, count)
    for (const auto& d : corpus) {
        std::map<std::string, std::size_t> counts;
        for (auto& w : document_words(d)) ++counts[std::move(w)];
        for (const auto& [token, c] : counts) {
            auto& s = stats[token];
            s.first += 1;
            s.second += c;
        }
    }
    if (stats.empty()) throw ValidationError("corpus has no word tokens");
    std::vector<TfidfTerm> vocab;
    vocab.reserve(stats.size());
    for (const auto& [token, s] : stats) {
        const double idf = smoothed_idf(corpus.size(), s.first);
        vocab.push_back({token, s.first, s.second, idf, static_cast<double>(s.second) * idf});
    }
    return TfidfModel(corpus.size(), std::move(vocab));
}

void save_tfidf(const TfidfModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format"] = "uatta-tfidf";
    j["version"] = 1;
    j["doc_count"] = model.doc_count();
    auto& vocab = j["vocabulary"] = nlohmann::ordered_json::array();
    for (const auto& t : model.vocabulary()) {
        vocab.push_back({{"token", t.token}, {"df", t.doc_freq}, {"count", t.corpus_count}});
    }
    auto out = io::open_output(path);
    out << j.dump(1) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

TfidfModel load_tfidf(const std::filesystem::path& path) {
    auto in = io::open_input(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (j.at("format") != "uatta-tfidf" || j.at("version") != 1) {
            throw ValidationError(path.string() + ": not a version 1 tf-idf model");
        }
        const auto doc_count = j.at("doc_count").get<std::size_t>();
        std::vector<TfidfTerm> vocab;
        for (const auto& t : j.at("vocabulary")) {
            const auto df = t.at("df").get<std::size_t>();
            const auto count = t.at("count").get<std::size_t>();
            const double idf = smoothed_idf(doc_count, df);
            vocab.push_back({t.at("token").get<std::string>(), df, count, idf, static_cast<double>(count) * idf});
        }
        return TfidfModel(doc_count, std::move(vocab));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": malformed tf-idf model: " + e.what());
    }
}

void AugmentationConfig::validate() const {
    for (double r : {synonym_rate, tfidf_rate, keyboard_rate}) {
        if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("augmentation rates must lie in [0, 1]");
    }
    if (variants < 1) throw ValidationError("variants must be at least 1");
}

std::size_t replacement_count(double rate, std::size_t eligible) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ValidationError("rate must lie in [0, 1]");
    if (rate == 0.0 || eligible == 0) return 0;
    const auto n = static_cast<std::size_t>(std::llround(rate * static_cast<double>(eligible)));
    return std::clamp<std::size_t>(n, 1, eligible);
}

TokenizedText synonym_augment(const TokenizedText& text, double rate, const Lexicon& lexicon,
                              RandomStream& rng) {
    std::vector<std::size_t> eligible;
    for (std::size_t i : word_indices(text)) {
        if (lexicon.find(io::to_lower(text.tokens()[i].text))) eligible.push_back(i);
    }
    const std::size_t n = replacement_count(rate, eligible.size());
    if (n == 0) return text;
    std::vector<Token> tokens = text.tokens();
    for (std::size_t idx : sample_uniform(std::move(eligible), n, rng)) {
        const auto& synonyms = *lexicon.find(io::to_lower(tokens[idx].text));
        const auto& pick = synonyms[static_cast<std::size_t>(rng.below(synonyms.size()))];
        tokens[idx].text = match_first_letter_case(tokens[idx].text, pick);
    }
    return TokenizedText(std::move(tokens));
}

TokenizedText tfidf_augment(const TokenizedText& text, double rate, const TfidfModel& model,
                            RandomStream& rng) {
    constexpr double kEpsilon = 1e-9;
    const std::vector<std::size_t> words = word_indices(text);
    const std::size_t n = replacement_count(rate, words.size());
    if (n == 0) return text;

    std::vector<std::string> lowered;
    std::unordered_map<std::string, std::size_t> counts;
    for (std::size_t i : words) {
        lowered.push_back(io::to_lower(text.tokens()[i].text));
        ++counts[lowered.back()];
    }
    std::vector<double> scores;
    for (const auto& w : lowered) scores.push_back(static_cast<double>(counts[w]) * model.idf(w));
    const double max_score = *std::max_element(scores.begin(), scores.end());
    std::vector<double> weights;
    for (double s : scores) weights.push_back(max_score - s + kEpsilon);

    const auto cumulative = model.cumulative_mass();
    const double total_mass = cumulative.back();
    std::vector<Token> tokens = text.tokens();
    for (std::size_t pos : sample_weighted(std::move(weights), n, rng)) {
        const std::size_t excluded = model.find(lowered[pos]);
        const double excluded_mass = excluded == TfidfModel::npos ? 0.0 : model.vocabulary()[excluded].mass;
        const double live_mass = total_mass - excluded_mass;
        const double u = rng.uniform();
        if (!(live_mass > 0.0)) continue;
        double target = u * live_mass;
        // Skip over the excluded term's slice of the cumulative distribution.
        if (excluded != TfidfModel::npos && target >= cumulative[excluded] - excluded_mass) {
            target += excluded_mass;
        }
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        std::size_t pick = it == cumulative.end() ? cumulative.size() - 1
                                                   : static_cast<std::size_t>(it - cumulative.begin());
        if (pick == excluded) pick = pick + 1 < cumulative.size() ? pick + 1 : pick - 1;
        auto& tok = tokens[words[pos]];
        tok.text = match_first_letter_case(tok.text, model.vocabulary()[pick].token);
    }
    return TokenizedText(std::move(tokens));
}

TokenizedText keyboard_augment(const TokenizedText& text, double rate, const KeyboardLayout& layout,
                               RandomStream& rng) {
    // Eligible units are flattened (token, byte) positions.
    std::vector<std::pair<std::size_t, std::size_t>> positions;
    for (std::size_t i : word_indices(text)) {
        const auto& t = text.tokens()[i].text;
        for (std::size_t c = 0; c < t.size(); ++c) {
            if (is_ascii_alpha(t[c]) && !layout.neighbors(t[c]).empty()) positions.emplace_back(i, c);
        }
    }
    const std::size_t n = replacement_count(rate, positions.size());
    if (n == 0) return text;
    std::vector<std::size_t> pool(positions.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<Token> tokens = text.tokens();
    for (std::size_t p : sample_uniform(std::move(pool), n, rng)) {
        const auto [ti, ci] = positions[p];
        char& ch = tokens[ti].text[ci];
        const auto adj = layout.neighbors(ch);
        char repl = adj[static_cast<std::size_t>(rng.below(adj.size()))];
        if (is_ascii_upper(ch)) repl = static_cast<char>(std::toupper(static_cast<unsigned char>(repl)));
        ch = repl;
    }
    return TokenizedText(std::move(tokens));
}

std::string augment_text(std::string_view text, const AugmentationConfig& cfg,
                         const AugmentResources& resources, RandomStream& rng) {
    TokenizedText t = tokenize(text);
    t = synonym_augment(t, cfg.synonym_rate, resources.lexicon, rng);
    t = tfidf_augment(t, cfg.tfidf_rate, resources.tfidf, rng);
    t = keyboard_augment(t, cfg.keyboard_rate, resources.layout, rng);
    return t.text();
}

std::vector<Document> tta_expand(const Document& d, const AugmentationConfig& cfg,
                                 const AugmentResources& resources) {
    cfg.validate();
    std::vector<Document> out;
    out.reserve(static_cast<std::size_t>(cfg.variants) + 1);
    if (cfg.include_original) out.push_back(d);
    for (int i = 1; i <= cfg.variants; ++i) {
        RandomStream rng(derive_seed(cfg.seed, d.id, static_cast<std::uint64_t>(i)));
        std::string title = augment_text(d.title, cfg, resources, rng);
        std::string body = augment_text(d.body, cfg, resources, rng);
        out.emplace_back(d.id + "#tta" + std::to_string(i), std::move(title), std::move(body), d.label);
    }
    return out;
}

}  // namespace uatta
