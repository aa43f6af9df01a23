#include "hopqpp/io.hpp"

#include "hopqpp/error.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>

namespace hopqpp {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class LineReader {
  public:
    explicit LineReader(const std::filesystem::path& path) : m_path(path), m_in(path)
    {
        if (!m_in) {
            throw Error(ErrorKind::Io, "cannot open " + path.string());
        }
    }

    /// Next non-blank line parsed as a JSON object; false at end of file.
    bool next(json& out)
    {
        std::string line;
        while (std::getline(m_in, line)) {
            ++m_line;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            try {
                out = json::parse(line);
            } catch (const json::parse_error& e) {
                fail(std::string("invalid JSON: ") + e.what());
            }
            if (!out.is_object()) {
                fail("expected a JSON object");
            }
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& reason) const
    {
        throw Error(ErrorKind::Schema, m_path.string() + ":" + std::to_string(m_line) + ": " + reason);
    }

    std::string string_field(const json& obj, const char* key) const
    {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) {
            fail(std::string("missing string field \"") + key + "\"");
        }
        return it->get<std::string>();
    }

    std::vector<std::string> string_array(const json& value, const char* what) const
    {
        if (!value.is_array()) {
            fail(std::string("\"") + what + "\" must be an array of strings");
        }
        std::vector<std::string> out;
        for (const auto& v : value) {
            if (!v.is_string()) {
                fail(std::string("\"") + what + "\" must be an array of strings");
            }
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    std::uint64_t count_field(const json& obj, const char* key) const
    {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_number_unsigned()) {
            fail(std::string("missing non-negative integer field \"") + key + "\"");
        }
        return it->get<std::uint64_t>();
    }

  private:
    std::filesystem::path m_path;
    std::ifstream m_in;
    std::size_t m_line = 0;
};

template <typename T>
T parse_or_fail(const LineReader& reader, T (*parse)(std::string_view), const std::string& text)
{
    try {
        return parse(text);
    } catch (const Error& e) {
        reader.fail(e.what());
    }
}

json path_graph_edges(const PathGraph& graph)
{
    json edges = json::array();
    for (auto e : {Edge::QuestionDoc1, Edge::QuestionDoc2, Edge::Doc1Doc2}) {
        if (graph.has(e)) {
            edges.push_back(std::string(to_string(e)));
        }
    }
    return edges;
}

}  // namespace

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, ptr);
}

void for_each_document(const std::filesystem::path& path,
                       const std::function<void(Document&&)>& visit)
{
    LineReader reader(path);
    json obj;
    while (reader.next(obj)) {
        Document doc;
        doc.doc_id = reader.string_field(obj, "id");
        doc.title = obj.contains("title") ? reader.string_field(obj, "title") : std::string();
        doc.text = reader.string_field(obj, "text");
        visit(std::move(doc));
    }
}

std::vector<Document> read_corpus(const std::filesystem::path& path)
{
    std::vector<Document> docs;
    for_each_document(path, [&](Document&& d) { docs.push_back(std::move(d)); });
    return docs;
}

void write_corpus(std::ostream& out, const std::vector<Document>& docs)
{
    for (const auto& d : docs) {
        ordered_json row;
        row["id"] = d.doc_id;
        row["title"] = d.title;
        row["text"] = d.text;
        out << row.dump() << '\n';
    }
}

std::vector<QuestionRecord> read_questions(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::vector<QuestionRecord> out;
    json obj;
    while (reader.next(obj)) {
        QuestionRecord q;
        q.question_id = reader.string_field(obj, "question_id");
        q.question = reader.string_field(obj, "question");
        if (q.question.empty()) {
            reader.fail("empty question text");
        }
        if (auto it = obj.find("answer"); it != obj.end() && !it->is_null()) {
            q.answer = reader.string_field(obj, "answer");
        }
        if (auto it = obj.find("gold_support"); it != obj.end() && !it->is_null()) {
            q.gold_support = reader.string_array(*it, "gold_support");
        }
        if (auto it = obj.find("type"); it != obj.end() && !it->is_null()) {
            auto type = parse_or_fail(reader, &parse_path_type, reader.string_field(obj, "type"));
            if (type != PathType::Bridge && type != PathType::Comparison) {
                reader.fail("question type must be bridge or comparison");
            }
            q.dataset_type = type;
        }
        if (auto it = obj.find("level"); it != obj.end() && !it->is_null()) {
            q.dataset_level = reader.string_field(obj, "level");
        }
        out.push_back(std::move(q));
    }
    return out;
}

void write_questions(std::ostream& out, const std::vector<QuestionRecord>& questions)
{
    for (const auto& q : questions) {
        ordered_json row;
        row["question_id"] = q.question_id;
        row["question"] = q.question;
        if (q.answer) row["answer"] = *q.answer;
        if (q.gold_support) row["gold_support"] = *q.gold_support;
        if (q.dataset_type) row["type"] = std::string(to_string(*q.dataset_type));
        if (q.dataset_level) row["level"] = *q.dataset_level;
        out << row.dump() << '\n';
    }
}

std::map<std::string, QuestionAnnotations> read_annotations(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::map<std::string, QuestionAnnotations> out;
    json obj;
    while (reader.next(obj)) {
        auto id = reader.string_field(obj, "question_id");
        auto it = obj.find("spans");
        if (it == obj.end() || !it->is_array()) {
            reader.fail("missing array field \"spans\"");
        }
        QuestionAnnotations ann;
        for (const auto& span : *it) {
            if (!span.is_object()) {
                reader.fail("span must be an object");
            }
            CharRange r{reader.count_field(span, "start"), reader.count_field(span, "end")};
            auto kind = parse_or_fail(reader, &parse_span_kind, reader.string_field(span, "kind"));
            (kind == SpanKind::Entity ? ann.entities : ann.frozen_phrases).push_back(r);
        }
        if (!out.emplace(id, std::move(ann)).second) {
            reader.fail("duplicate annotation record for " + id);
        }
    }
    return out;
}

std::map<std::string, PathType> read_path_labels(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::map<std::string, PathType> out;
    json obj;
    while (reader.next(obj)) {
        auto id = reader.string_field(obj, "question_id");
        auto label = reader.string_field(obj, "type");
        if (label != "bridge" && label != "comparison") {
            reader.fail("type must be \"bridge\" or \"comparison\", got \"" + label + "\"");
        }
        out[id] = parse_path_type(label);
    }
    return out;
}

std::vector<RetrievalRun> read_runs(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::vector<RetrievalRun> out;
    json obj;
    while (reader.next(obj)) {
        RetrievalRun run;
        run.question_id = reader.string_field(obj, "question_id");
        auto hops = obj.find("hops");
        if (hops == obj.end() || !hops->is_array() || hops->empty()) {
            reader.fail("\"hops\" must be a non-empty array of arrays");
        }
        for (const auto& hop : *hops) {
            run.hops.push_back(reader.string_array(hop, "hops"));
        }
        auto gold = obj.find("gold");
        if (gold == obj.end()) {
            reader.fail("missing array field \"gold\"");
        }
        run.gold_support = reader.string_array(*gold, "gold");
        try {
            run.validate();
        } catch (const Error& e) {
            reader.fail(e.what());
        }
        out.push_back(std::move(run));
    }
    return out;
}

void write_runs(std::ostream& out, const std::vector<RetrievalRun>& runs)
{
    for (const auto& r : runs) {
        ordered_json row;
        row["question_id"] = r.question_id;
        row["hops"] = r.hops;
        row["gold"] = r.gold_support;
        out << row.dump() << '\n';
    }
}

std::vector<ScoreRow> read_scores(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::vector<ScoreRow> out;
    json obj;
    while (reader.next(obj)) {
        ScoreRow row;
        row.question_id = reader.string_field(obj, "question_id");
        row.method = parse_or_fail(reader, &parse_method, reader.string_field(obj, "method"));
        if (auto it = obj.find("path_type"); it != obj.end() && !it->is_null()) {
            row.path_type = parse_or_fail(reader, &parse_path_type, reader.string_field(obj, "path_type"));
        }
        auto score = obj.find("score");
        if (score == obj.end() || !score->is_number()) {
            reader.fail("missing numeric field \"score\"");
        }
        row.score = score->get<double>();
        if (auto it = obj.find("chosen_ngrams"); it != obj.end() && it->is_array()) {
            for (const auto& c : *it) {
                row.chosen.push_back({reader.string_field(c, "ngram"), reader.count_field(c, "df")});
            }
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_score(std::ostream& out, const ScoreRow& row)
{
    ordered_json j;
    j["question_id"] = row.question_id;
    j["method"] = std::string(to_string(row.method));
    j["path_type"] = row.path_type ? json(std::string(to_string(*row.path_type))) : json(nullptr);
    j["score"] = row.score;
    ordered_json chosen = ordered_json::array();
    for (const auto& c : row.chosen) {
        ordered_json item;
        item["ngram"] = c.key;
        item["df"] = c.df;
        chosen.push_back(item);
    }
    j["chosen_ngrams"] = chosen;
    out << j.dump() << '\n';
}

std::vector<ClassAssignment> read_classes(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::vector<ClassAssignment> out;
    json obj;
    while (reader.next(obj)) {
        ClassAssignment a;
        a.question_id = reader.string_field(obj, "question_id");
        a.difficulty = parse_or_fail(reader, &parse_difficulty_class, reader.string_field(obj, "class"));
        out.push_back(std::move(a));
    }
    return out;
}

void write_class(std::ostream& out, const ClassAssignment& row)
{
    ordered_json j;
    j["question_id"] = row.question_id;
    j["class"] = std::string(to_string(row.difficulty));
    out << j.dump() << '\n';
}

void write_plan_row(std::ostream& out, const PlannedQuestion& row)
{
    ordered_json j;
    j["question_id"] = row.question_id;
    j["class"] = std::string(to_string(row.difficulty));
    j["budget"] = row.budget;
    out << j.dump() << '\n';
}

BudgetPolicy read_policy(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Schema, path.string() + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorKind::Schema, path.string() + ": policy must be a JSON object");
    }
    BudgetPolicy policy;
    auto take = [&](const char* key, std::uint64_t& field) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number_unsigned()) {
                throw Error(ErrorKind::Schema,
                            path.string() + ": \"" + key + "\" must be a positive integer");
            }
            field = it->get<std::uint64_t>();
        }
    };
    take("easy", policy.easy);
    take("hard", policy.hard);
    take("extra_hard", policy.extra_hard);
    take("base_k", policy.base_k);
    policy.validate();
    return policy;
}

void write_oracle_path(std::ostream& out, const OraclePathRow& row)
{
    ordered_json j;
    j["question_id"] = row.question_id;
    j["path_type"] = std::string(to_string(row.path_type));
    j["edges"] = path_graph_edges(row.graph);
    ordered_json witnesses = ordered_json::object();
    for (auto e : {Edge::QuestionDoc1, Edge::QuestionDoc2, Edge::Doc1Doc2}) {
        if (const auto& w = row.graph.witness(e)) {
            ordered_json item;
            item["term"] = w->key;
            item["df"] = w->df;
            item["probability"] = w->probability;
            witnesses[std::string(to_string(e))] = item;
        }
    }
    j["witnesses"] = witnesses;
    if (row.answer_in_single_doc) {
        j["answer_in_single_doc"] = *row.answer_in_single_doc;
    }
    out << j.dump() << '\n';
}

std::map<std::string, PathType> read_oracle_path_types(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::map<std::string, PathType> out;
    json obj;
    while (reader.next(obj)) {
        auto id = reader.string_field(obj, "question_id");
        const char* field = obj.contains("path_type") ? "path_type" : "type";
        out[id] = parse_or_fail(reader, &parse_path_type, reader.string_field(obj, field));
    }
    return out;
}

void write_ngram_set(std::ostream& out, const NGramSet& set)
{
    ordered_json j;
    j["question_id"] = set.question_id;
    ordered_json spans = ordered_json::array();
    for (const auto& s : set.spans) {
        ordered_json item;
        item["start"] = s.range.begin;
        item["end"] = s.range.end;
        item["kind"] = std::string(to_string(s.kind));
        item["source"] = s.source == SpanSource::Annotation ? "annotation" : "heuristic";
        item["tokens"] = s.words();
        spans.push_back(item);
    }
    j["spans"] = spans;
    ordered_json ngrams = ordered_json::array();
    for (const auto& e : set.entries) {
        ordered_json item;
        item["ngram"] = e.key;
        item["span"] = e.span_index;
        ngrams.push_back(item);
    }
    j["ngrams"] = ngrams;
    out << j.dump() << '\n';
}

}  // namespace hopqpp
