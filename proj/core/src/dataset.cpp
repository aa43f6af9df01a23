#include "hopqpp/dataset.hpp"

#include "hopqpp/error.hpp"
#include "hopqpp/tokenizer.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace hopqpp {

namespace {

using json = nlohmann::json;

std::string join_sentences(const json& sentences)
{
    std::string out;
    for (const auto& s : sentences) {
        if (!s.is_string()) {
            continue;
        }
        const auto& piece = s.get_ref<const std::string&>();
        if (piece.empty()) {
            continue;
        }
        if (!out.empty() && out.back() != ' ' && piece.front() != ' ') {
            out.push_back(' ');
        }
        out += piece;
    }
    return out;
}

bool is_paragraph_list(const json& value)
{
    return value.is_array() && !value.empty() && value.front().is_array();
}

/// Text from a string, a list of sentences, or a list of paragraphs of sentences.
std::optional<std::string> article_text(const json& value, ImportMode mode)
{
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (!value.is_array()) {
        return std::nullopt;
    }
    if (!is_paragraph_list(value)) {
        return join_sentences(value);
    }
    std::string out;
    for (const auto& paragraph : value) {
        auto text = join_sentences(paragraph);
        if (text.empty()) {
            continue;
        }
        if (!out.empty()) {
            out.push_back('\n');
        }
        out += text;
        if (mode == ImportMode::FirstParagraph) {
            break;
        }
    }
    return out;
}

[[noreturn]] void throw_parse_error(const std::string& origin, const std::string& text,
                                    const json::parse_error& e)
{
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw Error(ErrorKind::Schema, origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                       ": invalid JSON (byte " + std::to_string(e.byte) + ")");
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

struct CorpusCollector {
    ImportStats& stats;
    std::vector<Document>& corpus;
    std::unordered_map<std::string, std::size_t> by_title{};

    void add(const std::string& title, std::string text)
    {
        if (by_title.count(title) != 0) {
            ++stats.title_collisions;
            return;
        }
        Document doc{title, title, std::move(text)};
        if (document_tokens(doc).empty()) {
            ++stats.empty_documents;
            return;
        }
        by_title.emplace(title, corpus.size());
        corpus.push_back(std::move(doc));
        ++stats.documents;
    }
};

HotpotImport import_parsed(const json& root, ImportMode mode, const std::string& origin)
{
    if (!root.is_array()) {
        throw Error(ErrorKind::Schema, origin + ": expected a JSON array of records");
    }
    HotpotImport out;
    CorpusCollector collector{out.stats, out.corpus};
    for (const auto& rec : root) {
        ++out.stats.records;
        if (!rec.is_object()) {
            ++out.stats.skipped_records;
            continue;
        }
        auto id = rec.find("_id");
        auto question = rec.find("question");
        auto context = rec.find("context");
        if (id == rec.end() || !id->is_string() || question == rec.end() || !question->is_string() ||
            question->get_ref<const std::string&>().empty() || context == rec.end() ||
            !context->is_array()) {
            ++out.stats.skipped_records;
            continue;
        }

        std::vector<std::pair<std::string, std::string>> paragraphs;
        bool ok = true;
        for (const auto& entry : *context) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string()) {
                ok = false;
                break;
            }
            auto text = article_text(entry[1], mode);
            if (!text) {
                ok = false;
                break;
            }
            paragraphs.emplace_back(entry[0].get<std::string>(), std::move(*text));
        }

        QuestionRecord q;
        q.question_id = id->get<std::string>();
        q.question = question->get<std::string>();
        if (auto a = rec.find("answer"); a != rec.end() && a->is_string()) {
            q.answer = a->get<std::string>();
        }
        if (auto t = rec.find("type"); t != rec.end() && t->is_string()) {
            const auto& s = t->get_ref<const std::string&>();
            if (s == "bridge") {
                q.dataset_type = PathType::Bridge;
            } else if (s == "comparison") {
                q.dataset_type = PathType::Comparison;
            }
        }
        if (auto l = rec.find("level"); l != rec.end() && l->is_string()) {
            q.dataset_level = l->get<std::string>();
        }
        if (auto sf = rec.find("supporting_facts"); sf != rec.end()) {
            if (!sf->is_array()) {
                ok = false;
            } else {
                std::vector<std::string> gold;
                for (const auto& fact : *sf) {
                    if (!fact.is_array() || fact.empty() || !fact[0].is_string()) {
                        ok = false;
                        break;
                    }
                    auto title = fact[0].get<std::string>();
                    if (std::find(gold.begin(), gold.end(), title) == gold.end()) {
                        gold.push_back(std::move(title));
                    }
                }
                q.gold_support = std::move(gold);
            }
        }
        if (!ok) {
            ++out.stats.skipped_records;
            continue;
        }
        for (auto& [title, text] : paragraphs) {
            collector.add(title, std::move(text));
        }
        out.questions.push_back(std::move(q));
    }
    return out;
}

}  // namespace

std::string_view to_string(ImportMode mode) noexcept
{
    return mode == ImportMode::FirstParagraph ? "first-paragraph" : "full-text";
}

ImportMode parse_import_mode(std::string_view text)
{
    if (text == "first-paragraph") {
        return ImportMode::FirstParagraph;
    }
    if (text == "full-text") {
        return ImportMode::FullText;
    }
    throw Error(ErrorKind::InvalidArgument,
                "import mode must be first-paragraph or full-text, got \"" + std::string(text) + "\"");
}

HotpotImport import_hotpotqa_text(const std::string& json_text, ImportMode mode)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw_parse_error("<input>", json_text, e);
    }
    return import_parsed(root, mode, "<input>");
}

HotpotImport import_hotpotqa(const std::filesystem::path& path, ImportMode mode)
{
    auto text = read_file(path);
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_parse_error(path.string(), text, e);
    }
    return import_parsed(root, mode, path.string());
}

std::vector<Document> import_wikipedia(const std::filesystem::path& path, ImportMode mode,
                                       ImportStats* stats)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    ImportStats local;
    ImportStats& st = stats ? *stats : local;
    std::vector<Document> corpus;
    CorpusCollector collector{st, corpus};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        ++st.records;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Schema, path.string() + ":" + std::to_string(line_no) + ":" +
                                               std::to_string(e.byte) + ": invalid JSON");
        }
        auto title = rec.is_object() ? rec.find("title") : rec.end();
        if (!rec.is_object() || title == rec.end() || !title->is_string() || !rec.contains("text")) {
            ++st.skipped_records;
            continue;
        }
        auto text = article_text(rec["text"], mode);
        if (!text) {
            ++st.skipped_records;
            continue;
        }
        collector.add(title->get<std::string>(), std::move(*text));
    }
    return corpus;
}

}  // namespace hopqpp
