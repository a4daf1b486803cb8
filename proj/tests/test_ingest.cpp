#include <doctest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "uatta/ingest.hpp"

using namespace uatta;
using test_support::TempDir;

namespace {

const LabelSet kLabels = LabelSet::mental_health_default();

std::vector<Document> parse_jsonl(const std::string& text) {
    std::istringstream in(text);
    return parse_documents(in, DocFormat::kJsonl, kLabels, "docs.jsonl");
}

PredictionTensor parse_preds(const std::string& text, const LabelSet& labels = kLabels) {
    std::istringstream in(text);
    return parse_predictions(in, labels, "preds.jsonl");
}

std::string pred_line(const std::string& model, const std::string& sample, const std::string& probs) {
    return R"({"model_id":")" + model + R"(","sample_id":")" + sample + R"(","probs":[)" + probs + "]}\n";
}

}  // namespace

TEST_CASE("JSONL documents map fields directly") {
    const auto docs = parse_jsonl(R"({"id":"r1","title":"t","post":"p","label":"ADHD"})"
                                  "\n"
                                  R"({"id":"r2","title":"","post":"only body"})"
                                  "\n\n"
                                  R"({"id":"r3","title":"x","post":"y","label":null})");
    REQUIRE(docs.size() == 3);
    CHECK(docs[0] == Document("r1", "t", "p", "ADHD"));
    CHECK_FALSE(docs[1].label.has_value());
    CHECK(docs[1].body == "only body");
    CHECK_FALSE(docs[2].label.has_value());
}

TEST_CASE("document loading errors carry a line number") {
    CHECK_THROWS_WITH(parse_jsonl(R"({"id":"r1","title":"t","post":"p","label":"adhd "})"),
                      doctest::Contains("unknown label"));
    CHECK_THROWS_WITH(parse_jsonl("\n" R"({"id":"r1","title":"t","post":"p","label":"adhd "})"),
                      doctest::Contains("docs.jsonl:2"));
    CHECK_THROWS_WITH(parse_jsonl(R"({"id":"r1","title":"t","post":"p"})"
                                  "\n"
                                  R"({"id":"r1","title":"u","post":"q"})"),
                      doctest::Contains("duplicate"));
    CHECK_THROWS_WITH(parse_jsonl("{not json"), doctest::Contains("docs.jsonl:1"));
    CHECK_THROWS_AS(parse_jsonl(R"({"id":"r1","title":"t"})"), ParseError);
    CHECK_THROWS_AS(parse_jsonl(R"({"id":"r1","title":"","post":""})"), ParseError);
}

TEST_CASE("TSV documents round trip with escapes") {
    const std::vector<Document> docs{
        Document("a", "Tab\there", "line one\nline two\r\nback\\slash", "Anxiety"),
        Document("b", "", "no label"),
    };
    std::ostringstream out;
    write_documents(docs, out, DocFormat::kTsv);
    CHECK(out.str().rfind("id\ttitle\tpost\tlabel\n", 0) == 0);
    std::istringstream in(out.str());
    CHECK(parse_documents(in, DocFormat::kTsv, kLabels) == docs);

    std::istringstream bad("id\ttitle\tpost\tlabel\nx\ty\n");
    CHECK_THROWS_WITH(parse_documents(bad, DocFormat::kTsv, kLabels, "d.tsv"), doctest::Contains("d.tsv:2"));
    std::istringstream no_header("a\tb\tc\td\n");
    CHECK_THROWS_AS(parse_documents(no_header, DocFormat::kTsv, kLabels), ParseError);
}

TEST_CASE("JSONL documents round trip and CRLF is accepted") {
    const std::vector<Document> docs{Document("x1", "Title \"q\"", "ünïcode body", "PTSD"), Document("x2", "t", "b")};
    std::ostringstream out;
    write_documents(docs, out, DocFormat::kJsonl);
    std::string crlf;
    for (char c : out.str()) {
        if (c == '\n') crlf += '\r';
        crlf += c;
    }
    CHECK(parse_jsonl(out.str()) == docs);
    CHECK(parse_jsonl(crlf) == docs);
}

TEST_CASE("doc_format_for follows the extension") {
    CHECK(doc_format_for("a/b.tsv") == DocFormat::kTsv);
    CHECK(doc_format_for("a/b.jsonl") == DocFormat::kJsonl);
    CHECK(parse_doc_format("tsv") == DocFormat::kTsv);
    CHECK_FALSE(parse_doc_format("csv").has_value());
}

TEST_CASE("predictions assemble in first-appearance order") {
    const std::string u = "0.5,0.1,0.1,0.1,0.1,0.1";
    const auto t = parse_preds(pred_line("m2", "s9", u) + pred_line("m1", "s9", u) + pred_line("m2", "s1", u) +
                               pred_line("m1", "s1", u));
    CHECK(t.models() == 2);
    CHECK(t.samples() == 2);
    CHECK(t.classes() == 6);
    CHECK(t.model_ids() == std::vector<std::string>{"m2", "m1"});
    CHECK(t.sample_ids() == std::vector<std::string>{"s9", "s1"});
}

TEST_CASE("prediction loading errors") {
    const std::string u = "0.5,0.1,0.1,0.1,0.1,0.1";
    CHECK_THROWS_WITH(parse_preds(pred_line("m1", "s1", "0.6,0.2,0.1,0.1,0.1,0.1")), doctest::Contains("preds.jsonl:1"));
    CHECK_THROWS_WITH(parse_preds(pred_line("m1", "s1", u) + pred_line("m1", "s1", u)), doctest::Contains("duplicate"));
    CHECK_THROWS_WITH(parse_preds(pred_line("m1", "s1", "0.5,0.5")), doctest::Contains("preds.jsonl:1"));
    const auto ragged = pred_line("m1", "s1", u) + pred_line("m1", "s2", u) + pred_line("m2", "s1", u);
    CHECK_THROWS_WITH(parse_preds(ragged), doctest::Contains("ragged tensor"));
    CHECK_THROWS_WITH(parse_preds(ragged), doctest::Contains("(m2, s2)"));
    CHECK_THROWS_AS(parse_preds(""), ValidationError);
}

TEST_CASE("prediction save/load round trip") {
    TempDir dir("ingest");
    std::mt19937_64 rng(5);
    for (auto [k, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {4, 100}}) {
        const auto t = test_support::random_ensemble(rng, k, n).tensor;
        const auto path = dir / "p.jsonl";
        save_predictions(t, path);
        const auto back = load_predictions(path, t.labels());
        CHECK(back.model_ids() == t.model_ids());
        CHECK(back.sample_ids() == t.sample_ids());
        REQUIRE(back.data().size() == t.data().size());
        double worst = 0.0;
        for (std::size_t i = 0; i < t.data().size(); ++i) worst = std::max(worst, std::abs(back.data()[i] - t.data()[i]));
        CHECK(worst <= 1e-12);
        CHECK(test_support::read_file(path) == [&] {
            std::ostringstream os;
            write_predictions(back, os);
            return os.str();
        }());
    }
    CHECK_THROWS_AS(save_predictions(test_support::random_ensemble(rng, 1, 1).tensor, dir / "missing" / "p.jsonl"),
                    IoError);
}

TEST_CASE("lexicon parsing") {
    std::istringstream in("# comment\nhappy\tglad,joyful\nSad\tsad,unhappy\n");
    const auto lex = parse_lexicon(in, "lex.tsv");
    REQUIRE(lex.find("happy") != nullptr);
    CHECK(*lex.find("happy") == std::vector<std::string>{"glad", "joyful"});
    REQUIRE(lex.find("sad") != nullptr);
    CHECK(*lex.find("sad") == std::vector<std::string>{"unhappy"});
    CHECK(lex.find("Sad") == nullptr);

    std::istringstream empty("calm\t\n");
    CHECK_THROWS_WITH(parse_lexicon(empty, "lex.tsv"), doctest::Contains("lex.tsv:1"));
    std::istringstream self_only("x\tok\ncalm\tcalm\n");
    CHECK_THROWS_WITH(parse_lexicon(self_only, "lex.tsv"), doctest::Contains("lex.tsv:2"));
    std::istringstream malformed("calm quiet\n");
    CHECK_THROWS_AS(parse_lexicon(malformed), ParseError);
}

TEST_CASE("bundled lexicon") {
    const auto lex = load_lexicon();
    CHECK(lex.size() >= 1000);
    CHECK(lex.find("happy") != nullptr);
    for (const auto& [key, syns] : lex.entries()) {
        CHECK(key == io::to_lower(key));
        CHECK(std::find(syns.begin(), syns.end(), key) == syns.end());
        CHECK_FALSE(syns.empty());
    }
}

TEST_CASE("keyboard layout closure and the bundled QWERTY") {
    std::istringstream in("a\tq,s,z\n");
    const auto layout = parse_keyboard_layout(in);
    for (char c : {'q', 's', 'z'}) {
        const auto n = layout.neighbors(c);
        CHECK(std::find(n.begin(), n.end(), 'a') != n.end());
    }
    std::istringstream self("a\ta\n");
    CHECK_THROWS_AS(parse_keyboard_layout(self), ParseError);

    const auto qwerty = load_keyboard_layout();
    const auto s = qwerty.neighbors('s');
    for (char c : {'a', 'd', 'w', 'e', 'z', 'x'}) CHECK(std::find(s.begin(), s.end(), c) != s.end());
    CHECK(qwerty.neighbors('S').size() == s.size());
    for (const auto& [c, ns] : qwerty.all()) {
        CHECK_FALSE(ns.empty());
        for (char d : ns) {
            CHECK(d != c);
            const auto back = qwerty.neighbors(d);
            CHECK(std::find(back.begin(), back.end(), c) != back.end());
        }
    }
}

TEST_CASE("loaders are deterministic") {
    const auto a = load_lexicon();
    const auto b = load_lexicon();
    CHECK(a.entries() == b.entries());
    CHECK(load_keyboard_layout().all() == load_keyboard_layout().all());
    const auto path = std::filesystem::path(UATTA_TEST_RESOURCES) / "toy" / "test.jsonl";
    CHECK(load_documents(path, DocFormat::kJsonl, kLabels) == load_documents(path, DocFormat::kJsonl, kLabels));
}
