#include "uatta/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#ifndef UATTA_DEFAULT_RESOURCE_DIR
#define UATTA_DEFAULT_RESOURCE_DIR "resources"
#endif

namespace uatta {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ParseError::ParseError(std::string_view source, std::size_t line, const std::string& what)
    : ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace io {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(text.substr(start));
            return parts;
        }
        parts.emplace_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(std::string_view text) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return std::string(text);
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace io

namespace {

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

bool skippable(const std::string& line) {
    return line.empty() || line.front() == '#' ||
           std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string tsv_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

std::string tsv_unescape(std::string_view s, std::string_view source, std::size_t line) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw ParseError(source, line, "dangling backslash escape");
        switch (s[i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default: throw ParseError(source, line, std::string("unknown escape \\") + s[i]);
        }
    }
    return out;
}

std::string required_string(const json& rec, const char* key, std::string_view source,
                            std::size_t line) {
    const auto it = rec.find(key);
    if (it == rec.end()) throw ParseError(source, line, std::string("missing field \"") + key + "\"");
    if (!it->is_string()) {
        throw ParseError(source, line, std::string("field \"") + key + "\" must be a string");
    }
    return it->get<std::string>();
}

json parse_json_line(const std::string& text, std::string_view source, std::size_t line) {
    json rec;
    try {
        rec = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source, line, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(source, line, "expected a JSON object");
    return rec;
}

Document make_document(std::string id, std::string title, std::string body,
                       std::optional<std::string> label, const LabelSet& labels,
                       std::string_view source, std::size_t line) {
    if (label && !labels.index_of(*label)) {
        throw ParseError(source, line, "unknown label \"" + *label + "\"");
    }
    try {
        return Document(std::move(id), std::move(title), std::move(body), std::move(label));
    } catch (const ValidationError& e) {
        throw ParseError(source, line, e.what());
    }
}

}  // namespace

std::optional<DocFormat> parse_doc_format(std::string_view name) {
    if (name == "jsonl") return DocFormat::kJsonl;
    if (name == "tsv") return DocFormat::kTsv;
    return std::nullopt;
}

DocFormat doc_format_for(const std::filesystem::path& path) {
    return path.extension() == ".tsv" ? DocFormat::kTsv : DocFormat::kJsonl;
}

std::filesystem::path resource_dir() {
    if (const char* dir = std::getenv("UATTA_RESOURCE_DIR"); dir && *dir) return dir;
    return UATTA_DEFAULT_RESOURCE_DIR;
}

std::vector<Document> parse_documents(std::istream& in, DocFormat format, const LabelSet& labels,
                                      std::string_view source) {
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    std::string text;
    std::size_t line = 0;
    bool header_seen = false;
    while (io::read_line(in, text)) {
        ++line;
        if (format == DocFormat::kJsonl) {
            if (io::trim(text).empty()) continue;
            const json rec = parse_json_line(text, source, line);
            std::optional<std::string> label;
            if (const auto it = rec.find("label"); it != rec.end() && !it->is_null()) {
                if (!it->is_string()) throw ParseError(source, line, "field \"label\" must be a string");
                label = it->get<std::string>();
            }
            docs.push_back(make_document(required_string(rec, "id", source, line),
                                         required_string(rec, "title", source, line),
                                         required_string(rec, "post", source, line),
                                         std::move(label), labels, source, line));
        } else {
            if (!header_seen) {
                if (text != "id\ttitle\tpost\tlabel") {
                    throw ParseError(source, line, "expected header \"id<TAB>title<TAB>post<TAB>label\"");
                }
                header_seen = true;
                continue;
            }
            if (text.empty()) continue;
            const auto cols = io::split(text, '\t');
            if (cols.size() != 4) {
                throw ParseError(source, line,
                                 "expected 4 tab-separated columns, found " + std::to_string(cols.size()));
            }
            std::optional<std::string> label;
            if (!cols[3].empty()) label = tsv_unescape(cols[3], source, line);
            docs.push_back(make_document(tsv_unescape(cols[0], source, line),
                                         tsv_unescape(cols[1], source, line),
                                         tsv_unescape(cols[2], source, line), std::move(label), labels,
                                         source, line));
        }
        if (!ids.insert(docs.back().id).second) {
            throw ParseError(source, line, "duplicate document id \"" + docs.back().id + "\"");
        }
    }
    if (format == DocFormat::kTsv && !header_seen) throw ParseError(source, 1, "missing TSV header");
    return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path, DocFormat format,
                                     const LabelSet& labels) {
    auto in = io::open_input(path);
    return parse_documents(in, format, labels, path.string());
}

void write_documents(std::span<const Document> docs, std::ostream& out, DocFormat format) {
    if (format == DocFormat::kJsonl) {
        for (const auto& d : docs) {
            ordered_json rec;
            rec["id"] = d.id;
            rec["title"] = d.title;
            rec["post"] = d.body;
            if (d.label) rec["label"] = *d.label;
            out << rec.dump() << '\n';
        }
        return;
    }
    out << "id\ttitle\tpost\tlabel\n";
    for (const auto& d : docs) {
        out << tsv_escape(d.id) << '\t' << tsv_escape(d.title) << '\t' << tsv_escape(d.body) << '\t'
            << (d.label ? tsv_escape(*d.label) : std::string()) << '\n';
    }
}

void save_documents(std::span<const Document> docs, const std::filesystem::path& path,
                    DocFormat format) {
    auto out = io::open_output(path);
    write_documents(docs, out, format);
    close_checked(out, path);
}

PredictionTensor parse_predictions(std::istream& in, const LabelSet& labels, std::string_view source) {
    std::vector<std::string> models;
    std::vector<std::string> samples;
    std::unordered_map<std::string, std::size_t> model_index;
    std::unordered_map<std::string, std::size_t> sample_index;
    // (model, sample) -> probabilities, in record order
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cells;

    std::string text;
    std::size_t line = 0;
    while (io::read_line(in, text)) {
        ++line;
        if (io::trim(text).empty()) continue;
        const json rec = parse_json_line(text, source, line);
        const std::string model = required_string(rec, "model_id", source, line);
        const std::string sample = required_string(rec, "sample_id", source, line);
        const auto probs_it = rec.find("probs");
        if (probs_it == rec.end() || !probs_it->is_array()) {
            throw ParseError(source, line, "field \"probs\" must be an array of numbers");
        }
        std::vector<double> probs;
        for (const auto& v : *probs_it) {
            if (!v.is_number()) throw ParseError(source, line, "field \"probs\" must be an array of numbers");
            probs.push_back(v.get<double>());
        }
        if (probs.size() != labels.size()) {
            throw ParseError(source, line, "expected " + std::to_string(labels.size()) +
                                               " probabilities, found " + std::to_string(probs.size()));
        }
        try {
            const ProbVector validated(probs);
            probs.assign(validated.begin(), validated.end());
        } catch (const ValidationError& e) {
            throw ParseError(source, line, e.what());
        }
        auto [mit, new_model] = model_index.try_emplace(model, models.size());
        if (new_model) models.push_back(model);
        auto [sit, new_sample] = sample_index.try_emplace(sample, samples.size());
        if (new_sample) samples.push_back(sample);
        if (!cells.emplace(std::pair{mit->second, sit->second}, std::move(probs)).second) {
            throw ParseError(source, line,
                             "duplicate record for model \"" + model + "\", sample \"" + sample + "\"");
        }
    }
    if (cells.empty()) throw ValidationError(std::string(source) + ": no prediction records");

    const std::size_t k = labels.size();
    std::vector<double> data(models.size() * samples.size() * k);
    std::vector<std::string> missing;
    for (std::size_t j = 0; j < models.size(); ++j) {
        for (std::size_t n = 0; n < samples.size(); ++n) {
            const auto it = cells.find({j, n});
            if (it == cells.end()) {
                missing.push_back("(" + models[j] + ", " + samples[n] + ")");
                continue;
            }
            std::copy(it->second.begin(), it->second.end(), data.begin() + (j * samples.size() + n) * k);
        }
    }
    if (!missing.empty()) {
        std::string msg = std::string(source) + ": ragged tensor, missing " +
                          std::to_string(missing.size()) + " (model, sample) pairs:";
        for (const auto& m : missing) msg += " " + m;
        throw ValidationError(msg);
    }
    return PredictionTensor(std::move(models), std::move(samples), labels, std::move(data));
}

PredictionTensor load_predictions(const std::filesystem::path& path, const LabelSet& labels) {
    auto in = io::open_input(path);
    return parse_predictions(in, labels, path.string());
}

void write_predictions(const PredictionTensor& t, std::ostream& out) {
    for (std::size_t j = 0; j < t.models(); ++j) {
        for (std::size_t n = 0; n < t.samples(); ++n) {
            const auto p = t.at(j, n);
            ordered_json rec;
            rec["model_id"] = t.model_ids()[j];
            rec["sample_id"] = t.sample_ids()[n];
            rec["probs"] = std::vector<double>(p.begin(), p.end());
            out << rec.dump() << '\n';
        }
    }
}

void save_predictions(const PredictionTensor& t, const std::filesystem::path& path) {
    auto out = io::open_output(path);
    write_predictions(t, out);
    close_checked(out, path);
}

Lexicon::Lexicon(Entries entries) : entries_(std::move(entries)) {
    for (const auto& [key, syns] : entries_) {
        if (key.empty() || key != io::to_lower(key)) {
            throw ValidationError("lexicon key \"" + key + "\" must be non-empty lowercase");
        }
        if (syns.empty()) throw ValidationError("lexicon key \"" + key + "\" has no synonyms");
        for (const auto& s : syns) {
            if (s.empty()) throw ValidationError("empty synonym for \"" + key + "\"");
            if (io::to_lower(s) == key) throw ValidationError("\"" + key + "\" lists itself as a synonym");
        }
    }
}

const std::vector<std::string>* Lexicon::find(std::string_view lowercase_token) const {
    const auto it = entries_.find(lowercase_token);
    return it == entries_.end() ? nullptr : &it->second;
}

Lexicon parse_lexicon(std::istream& in, std::string_view source) {
    Lexicon::Entries entries;
    std::string text;
    std::size_t line = 0;
    while (io::read_line(in, text)) {
        ++line;
        if (skippable(text)) continue;
        const auto tab = text.find('\t');
        if (tab == std::string::npos) throw ParseError(source, line, "expected token<TAB>synonyms");
        const std::string key = io::to_lower(io::trim(std::string_view(text).substr(0, tab)));
        if (key.empty()) throw ParseError(source, line, "empty token");
        auto& syns = entries[key];
        bool any_listed = false;
        for (const auto& raw : io::split(std::string_view(text).substr(tab + 1), ',')) {
            const std::string s = io::trim(raw);
            if (s.empty()) continue;
            any_listed = true;
            if (std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); })) {
                throw ParseError(source, line, "synonym \"" + s + "\" contains whitespace");
            }
            if (io::to_lower(s) == key) continue;
            if (std::find(syns.begin(), syns.end(), s) == syns.end()) syns.push_back(s);
        }
        if (!any_listed) throw ParseError(source, line, "empty synonym list for \"" + key + "\"");
        if (syns.empty()) throw ParseError(source, line, "\"" + key + "\" has no synonyms besides itself");
    }
    return Lexicon(std::move(entries));
}

Lexicon load_lexicon(const std::optional<std::filesystem::path>& path) {
    const auto p = path.value_or(resource_dir() / "lexicon.tsv");
    auto in = io::open_input(p);
    return parse_lexicon(in, p.string());
}

KeyboardLayout::KeyboardLayout(const Neighbors& neighbors) {
    std::map<char, std::set<char>> closed;
    for (const auto& [key, adj] : neighbors) {
        for (char other : adj) {
            if (other == key) continue;
            closed[key].insert(other);
            closed[other].insert(key);
        }
    }
    for (const auto& [key, adj] : neighbors) {
        if (!closed.contains(key)) {
            throw ValidationError(std::string("key '") + key + "' has no neighbors besides itself");
        }
    }
    for (const auto& [key, adj] : closed) neighbors_[key] = std::vector<char>(adj.begin(), adj.end());
}

std::span<const char> KeyboardLayout::neighbors(char c) const {
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto it = neighbors_.find(lower);
    if (it == neighbors_.end()) return {};
    return it->second;
}

KeyboardLayout parse_keyboard_layout(std::istream& in, std::string_view source) {
    KeyboardLayout::Neighbors neighbors;
    std::string text;
    std::size_t line = 0;
    while (io::read_line(in, text)) {
        ++line;
        if (skippable(text)) continue;
        const auto cols = io::split(text, '\t');
        if (cols.size() != 2 || cols[0].size() != 1) {
            throw ParseError(source, line, "expected char<TAB>adjacent chars");
        }
        const char key = cols[0][0];
        auto& adj = neighbors[key];
        for (const auto& raw : io::split(cols[1], ',')) {
            const std::string item = io::trim(raw);
            if (item.empty()) continue;
            if (item.size() != 1) throw ParseError(source, line, "neighbor \"" + item + "\" is not one character");
            adj.push_back(item[0]);
        }
        if (std::all_of(adj.begin(), adj.end(), [key](char c) { return c == key; })) {
            throw ParseError(source, line, std::string("key '") + key + "' is mapped only to itself");
        }
    }
    return KeyboardLayout(neighbors);
}

KeyboardLayout load_keyboard_layout(const std::optional<std::filesystem::path>& path) {
    const auto p = path.value_or(resource_dir() / "qwerty.tsv");
    auto in = io::open_input(p);
    return parse_keyboard_layout(in, p.string());
}

}  // namespace uatta
