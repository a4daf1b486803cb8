#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uatta/core.hpp"

namespace uatta {

/// A malformed input record. The message is prefixed with "source:line: ".
class ParseError : public ValidationError {
public:
    ParseError(std::string_view source, std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class DocFormat { kJsonl, kTsv };

std::optional<DocFormat> parse_doc_format(std::string_view name);
/// ".tsv" selects TSV, anything else JSONL.
DocFormat doc_format_for(const std::filesystem::path& path);

/// Directory holding the bundled lexicon, keyboard layout and toy corpus.
/// UATTA_RESOURCE_DIR overrides the location compiled into the library.
std::filesystem::path resource_dir();

// Documents: JSONL records {"id","title","post","label"?} or a TSV file with
// header "id<TAB>title<TAB>post<TAB>label" (label may be empty). TSV fields
// escape backslash, tab, CR and LF as \\ \t \r \n.
std::vector<Document> parse_documents(std::istream& in, DocFormat format, const LabelSet& labels,
                                      std::string_view source = "<input>");
std::vector<Document> load_documents(const std::filesystem::path& path, DocFormat format,
                                     const LabelSet& labels);
void write_documents(std::span<const Document> docs, std::ostream& out, DocFormat format);
void save_documents(std::span<const Document> docs, const std::filesystem::path& path,
                    DocFormat format);

// Predictions: one JSONL record per (model, sample),
// {"model_id":..., "sample_id":..., "probs":[...]}. Doubles are written in
// shortest round-trip form (up to 17 significant digits).
PredictionTensor parse_predictions(std::istream& in, const LabelSet& labels,
                                   std::string_view source = "<input>");
PredictionTensor load_predictions(const std::filesystem::path& path,
                                  const LabelSet& labels = LabelSet::mental_health_default());
void write_predictions(const PredictionTensor& t, std::ostream& out);
void save_predictions(const PredictionTensor& t, const std::filesystem::path& path);

/// Lowercase token -> synonyms. No entry lists its own key.
class Lexicon {
public:
    using Entries = std::map<std::string, std::vector<std::string>, std::less<>>;

    explicit Lexicon(Entries entries);

    /// nullptr when `lowercase_token` has no entry.
    const std::vector<std::string>* find(std::string_view lowercase_token) const;
    std::size_t size() const noexcept { return entries_.size(); }
    const Entries& entries() const noexcept { return entries_; }

private:
    Entries entries_;
};

/// Lexicon file: "token<TAB>syn1,syn2,..." per line; '#' starts a comment
/// line. Keys are lowercased, self-synonyms and duplicates dropped.
Lexicon parse_lexicon(std::istream& in, std::string_view source = "<input>");
/// Without a path, loads lexicon.tsv from resource_dir().
Lexicon load_lexicon(const std::optional<std::filesystem::path>& path = std::nullopt);

/// Symmetric key adjacency. Construction closes the relation: if b is listed
/// under a, a is added under b.
class KeyboardLayout {
public:
    using Neighbors = std::map<char, std::vector<char>>;

    explicit KeyboardLayout(const Neighbors& neighbors);

    /// Neighbors of `c` (looked up lowercase); empty when `c` is unknown.
    std::span<const char> neighbors(char c) const;
    const Neighbors& all() const noexcept { return neighbors_; }

private:
    Neighbors neighbors_;
};

/// Layout file: "c<TAB>a,b,c" per line; '#' starts a comment line.
KeyboardLayout parse_keyboard_layout(std::istream& in, std::string_view source = "<input>");
/// Without a path, loads qwerty.tsv from resource_dir().
KeyboardLayout load_keyboard_layout(const std::optional<std::filesystem::path>& path = std::nullopt);

// Shared line-reading helpers for the text formats above.
namespace io {
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);
/// getline that also strips a trailing '\r'.
bool read_line(std::istream& in, std::string& line);
std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);
std::string to_lower(std::string_view text);
}  // namespace io

}  // namespace uatta
