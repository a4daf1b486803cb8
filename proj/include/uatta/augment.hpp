#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uatta/core.hpp"
#include "uatta/ingest.hpp"
#include "uatta/random.hpp"

namespace uatta {

enum class TokenKind { kWord, kPunctuation, kWhitespace };

struct Token {
    std::string text;
    TokenKind kind;

    friend bool operator==(const Token&, const Token&) = default;
};

/// Lossless segmentation of a string: concatenating the token texts gives
/// back the input byte for byte.
class TokenizedText {
public:
    TokenizedText() = default;
    explicit TokenizedText(std::vector<Token> tokens);

    const std::vector<Token>& tokens() const noexcept { return tokens_; }
    std::size_t word_count() const noexcept;
    std::string text() const;

    friend bool operator==(const TokenizedText&, const TokenizedText&) = default;

private:
    std::vector<Token> tokens_;
};

/// A word is a maximal run of alphanumeric bytes (any byte >= 0x80 counts as
/// a letter) with internal apostrophes or hyphens. Whitespace runs form one
/// token; every other byte is a single punctuation token.
TokenizedText tokenize(std::string_view text);

/// Lowercased word tokens of title and body, in order.
std::vector<std::string> document_words(const Document& d);

struct TfidfTerm {
    std::string token;
    std::size_t doc_freq;
    std::size_t corpus_count;
    double idf;
    /// corpus_count * idf: the term's total tf-idf weight over the corpus.
    double mass;
};

/// Smoothed idf over a fitted corpus: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfidfModel {
public:
    /// `vocabulary` must be non-empty; terms are sorted by token.
    TfidfModel(std::size_t doc_count, std::vector<TfidfTerm> vocabulary);

    std::size_t doc_count() const noexcept { return doc_count_; }
    const std::vector<TfidfTerm>& vocabulary() const noexcept { return vocabulary_; }

    /// Unseen tokens get ln(1 + N) + 1.
    double idf(std::string_view lowercase_token) const;
    /// Index into vocabulary(), or npos.
    std::size_t find(std::string_view lowercase_token) const;
    /// Running sum of term masses, same order as vocabulary().
    std::span<const double> cumulative_mass() const noexcept { return cumulative_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t doc_count_;
    std::vector<TfidfTerm> vocabulary_;
    std::vector<double> cumulative_;
};

double smoothed_idf(std::size_t doc_count, std::size_t doc_freq);
TfidfModel fit_tfidf(std::span<const Document> corpus);
void save_tfidf(const TfidfModel& model, const std::filesystem::path& path);
TfidfModel load_tfidf(const std::filesystem::path& path);

struct AugmentationConfig {
    double synonym_rate = 0.30;
    double tfidf_rate = 0.05;
    double keyboard_rate = 0.05;
    int variants = 4;
    std::uint64_t seed = 0;
    bool include_original = true;

    /// Throws ValidationError when a rate leaves [0, 1] or variants < 1.
    void validate() const;
};

struct AugmentResources {
    Lexicon lexicon;
    TfidfModel tfidf;
    KeyboardLayout layout;
};

/// Units to alter for `eligible` candidates: 0 when rate or eligible is 0,
/// else max(1, round(rate * eligible)).
std::size_t replacement_count(double rate, std::size_t eligible);

TokenizedText synonym_augment(const TokenizedText& text, double rate, const Lexicon& lexicon,
                              RandomStream& rng);
TokenizedText tfidf_augment(const TokenizedText& text, double rate, const TfidfModel& model,
                            RandomStream& rng);
TokenizedText keyboard_augment(const TokenizedText& text, double rate, const KeyboardLayout& layout,
                               RandomStream& rng);

/// Synonym, then tf-idf, then keyboard augmentation of one string.
std::string augment_text(std::string_view text, const AugmentationConfig& cfg,
                         const AugmentResources& resources, RandomStream& rng);

/// Test-time expansion: the original (when cfg.include_original) followed by
/// cfg.variants augmented copies "{id}#tta{i}", i = 1..variants. Variant i
/// draws from the substream derive_seed(cfg.seed, d.id, i).
std::vector<Document> tta_expand(const Document& d, const AugmentationConfig& cfg,
                                 const AugmentResources& resources);

}  // namespace uatta
