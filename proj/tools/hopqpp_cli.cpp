#include "hopqpp/adaptive_budget.hpp"
#include "hopqpp/corpus_index.hpp"
#include "hopqpp/dataset.hpp"
#include "hopqpp/digest.hpp"
#include "hopqpp/error.hpp"
#include "hopqpp/evaluation.hpp"
#include "hopqpp/io.hpp"
#include "hopqpp/qpp_estimator.hpp"
#include "hopqpp/retrieval_path.hpp"
#include "hopqpp/synth.hpp"
#include "hopqpp/term_extraction.hpp"
#include "hopqpp/tokenizer.hpp"
#include "hopqpp/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

using namespace hopqpp;

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kIo = 3,
    kSchema = 4,
    kAlignment = 5,
};

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument:
        return kUsage;
    case ErrorKind::Io:
    case ErrorKind::Load:
        return kIo;
    case ErrorKind::Schema:
    case ErrorKind::Validation:
    case ErrorKind::Ingest:
        return kSchema;
    case ErrorKind::Alignment:
        return kAlignment;
    default:
        return kOther;
    }
}

/// Tracks what a subcommand read and wrote so the manifest can record it.
struct RunLog {
    std::string command;
    std::vector<fs::path> inputs;
    std::vector<fs::path> outputs;
    ordered_json summary = ordered_json::object();

    const fs::path& in(const fs::path& p)
    {
        if (!fs::exists(p)) {
            throw Error(ErrorKind::Io, "input file not found: " + p.string());
        }
        inputs.push_back(p);
        return p;
    }
};

std::ofstream open_output(const fs::path& p)
{
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write " + p.string());
    }
    return out;
}

void finish_output(std::ofstream& out, const fs::path& p)
{
    out.flush();
    if (!out) {
        throw Error(ErrorKind::Io, "write failed: " + p.string());
    }
}

ordered_json option_snapshot(const CLI::App& app)
{
    ordered_json cfg = ordered_json::object();
    for (const auto* opt : app.get_options()) {
        auto name = opt->get_single_name();
        if (name.empty() || name == "help" || opt->get_lnames().empty()) {
            continue;
        }
        const auto& results = opt->results();
        if (results.empty()) {
            if (!opt->get_default_str().empty()) {
                cfg[name] = opt->get_default_str();
            }
        } else if (results.size() == 1) {
            cfg[name] = results.front();
        } else {
            cfg[name] = results;
        }
    }
    return cfg;
}

void write_manifest(const fs::path& where, const RunLog& log, const CLI::App& app,
                    const std::optional<fs::path>& config_file)
{
    ordered_json m;
    m["tool"] = "hopqpp";
    m["version"] = std::string(kVersion);
    m["command"] = log.command;
    m["config"] = option_snapshot(app);
    if (config_file) {
        m["config_file"] = {{"path", config_file->string()}, {"digest", file_digest(*config_file)}};
    }
    ordered_json inputs = ordered_json::array();
    for (const auto& p : log.inputs) {
        inputs.push_back({{"path", p.string()}, {"digest", file_digest(p)}});
    }
    m["inputs"] = inputs;
    ordered_json outputs = ordered_json::array();
    for (const auto& p : log.outputs) {
        outputs.push_back({{"path", p.string()}, {"digest", file_digest(p)}});
    }
    m["outputs"] = outputs;
    m["summary"] = log.summary;
    auto out = open_output(where);
    out << m.dump(2) << '\n';
    finish_output(out, where);
}

template <typename T>
void sort_by_id(std::vector<T>& rows)
{
    std::sort(rows.begin(), rows.end(),
              [](const T& a, const T& b) { return a.question_id < b.question_id; });
}

std::vector<QuestionRecord> load_questions(const fs::path& p)
{
    auto qs = read_questions(p);
    sort_by_id(qs);
    for (std::size_t i = 1; i < qs.size(); ++i) {
        if (qs[i].question_id == qs[i - 1].question_id) {
            throw Error(ErrorKind::Schema, p.string() + ": duplicate question_id " + qs[i].question_id);
        }
    }
    return qs;
}

ordered_json stats_json(const ImportStats& s)
{
    return {{"records", s.records},
            {"skipped_records", s.skipped_records},
            {"documents", s.documents},
            {"title_collisions", s.title_collisions},
            {"empty_documents", s.empty_documents}};
}

void log_stats(const ImportStats& s)
{
    std::cerr << "records " << s.records << ", skipped " << s.skipped_records << ", documents "
              << s.documents << ", title collisions " << s.title_collisions << ", empty documents "
              << s.empty_documents << '\n';
}

/// Runs fn(i) for i in [0, n) over `threads` workers; callers write into slot i only.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::optional<QuestionAnnotations> find_annotation(const std::map<std::string, QuestionAnnotations>& all,
                                                   const std::string& id)
{
    auto it = all.find(id);
    if (it == all.end()) return std::nullopt;
    return it->second;
}

std::vector<TermSpan> entity_spans(const NGramSet& set)
{
    std::vector<TermSpan> out;
    for (const auto& s : set.spans) {
        if (s.kind == SpanKind::Entity) out.push_back(s);
    }
    return out;
}

struct Options {
    // import
    fs::path input;
    std::string mode = "first-paragraph";
    fs::path corpus_out;
    fs::path questions_out;
    // shared
    fs::path corpus;
    fs::path index;
    fs::path questions;
    fs::path annotations;
    fs::path labels;
    fs::path paths;
    fs::path output;
    unsigned threads = 1;
    std::size_t max_n = 3;
    EstimatorConfig est;
    // score
    std::string method = "multhp";
    // evaluate
    fs::path scores;
    fs::path runs;
    fs::path csv;
    fs::path predictions;
    std::size_t k = 10;
    // plan
    fs::path classes;
    fs::path policy_file;
    BudgetPolicy policy;
    // synth
    SynthConfig synth;
    fs::path out_dir;
};

void cmd_import_hotpotqa(Options& o, RunLog& log)
{
    auto imported = import_hotpotqa(log.in(o.input), parse_import_mode(o.mode));
    sort_by_id(imported.questions);
    auto c = open_output(o.corpus_out);
    write_corpus(c, imported.corpus);
    finish_output(c, o.corpus_out);
    auto q = open_output(o.questions_out);
    write_questions(q, imported.questions);
    finish_output(q, o.questions_out);
    log.outputs = {o.corpus_out, o.questions_out};
    log.summary = stats_json(imported.stats);
    log.summary["questions"] = imported.questions.size();
    log_stats(imported.stats);
}

void cmd_import_wiki(Options& o, RunLog& log)
{
    ImportStats stats;
    auto docs = import_wikipedia(log.in(o.input), parse_import_mode(o.mode), &stats);
    auto c = open_output(o.corpus_out);
    write_corpus(c, docs);
    finish_output(c, o.corpus_out);
    log.outputs = {o.corpus_out};
    log.summary = stats_json(stats);
    log_stats(stats);
}

void cmd_index(Options& o, RunLog& log)
{
    auto docs = read_corpus(log.in(o.corpus));
    auto index = build_index(docs, o.max_n, o.threads);
    if (o.output.has_parent_path()) fs::create_directories(o.output.parent_path());
    save_index(index, o.output);
    log.outputs = {o.output};
    log.summary = {{"documents", index.num_docs()},
                   {"max_n", index.max_n()},
                   {"total_tokens", index.total_tokens()},
                   {"distinct_ngrams", index.df_table().size()},
                   {"distinct_unigrams", index.cf_table().size()}};
    std::cerr << "indexed " << index.num_docs() << " documents, " << index.df_table().size()
              << " distinct n-grams\n";
}

void cmd_extract(Options& o, RunLog& log)
{
    auto index = load_index(log.in(o.index));
    auto qs = load_questions(log.in(o.questions));
    std::map<std::string, QuestionAnnotations> ann;
    if (!o.annotations.empty()) ann = read_annotations(log.in(o.annotations));
    std::vector<NGramSet> sets(qs.size());
    parallel_for(qs.size(), o.threads, [&](std::size_t i) {
        sets[i] = extract_ngram_set(qs[i].question_id, qs[i].question, index, o.est.p_thr,
                                    find_annotation(ann, qs[i].question_id));
    });
    auto out = open_output(o.output);
    std::size_t empty = 0;
    for (const auto& s : sets) {
        write_ngram_set(out, s);
        if (s.entries.empty()) ++empty;
    }
    finish_output(out, o.output);
    log.outputs = {o.output};
    log.summary = {{"questions", sets.size()}, {"empty_ngram_sets", empty}};
}

void cmd_classify_oracle(Options& o, RunLog& log)
{
    auto index = load_index(log.in(o.index));
    auto qs = load_questions(log.in(o.questions));
    std::map<std::string, QuestionAnnotations> ann;
    if (!o.annotations.empty()) ann = read_annotations(log.in(o.annotations));
    std::unordered_map<std::string, Document> docs;
    for_each_document(log.in(o.corpus), [&](Document&& d) {
        auto id = d.doc_id;
        docs.emplace(std::move(id), std::move(d));
    });

    std::vector<std::optional<OraclePathRow>> rows(qs.size());
    parallel_for(qs.size(), o.threads, [&](std::size_t i) {
        const auto& q = qs[i];
        if (!q.gold_support || q.gold_support->size() < 2) return;
        auto d1 = docs.find((*q.gold_support)[0]);
        auto d2 = docs.find((*q.gold_support)[1]);
        if (d1 == docs.end() || d2 == docs.end()) return;
        auto set = extract_ngram_set(q.question_id, q.question, index, o.est.p_thr,
                                     find_annotation(ann, q.question_id));
        auto tokens = tokenize(q.question);
        OraclePathRow row;
        row.question_id = q.question_id;
        row.graph = build_path_graph(set, tokens, d1->second, d2->second, index, o.est.p_thr);
        row.path_type = classify_path(row.graph);
        if (q.answer) {
            row.answer_in_single_doc = answer_in_single_document(*q.answer, d1->second, d2->second, row.graph);
        }
        rows[i] = std::move(row);
    });

    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::map<std::string, std::size_t>> by_dataset_type;
    std::size_t skipped = 0;
    std::size_t single_doc = 0;
    auto out = open_output(o.output);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i]) {
            ++skipped;
            continue;
        }
        write_oracle_path(out, *rows[i]);
        auto t = std::string(to_string(rows[i]->path_type));
        ++counts[t];
        if (qs[i].dataset_type) ++by_dataset_type[std::string(to_string(*qs[i].dataset_type))][t];
        if (rows[i]->answer_in_single_doc.value_or(false)) ++single_doc;
    }
    finish_output(out, o.output);
    log.outputs = {o.output};

    std::size_t classified = qs.size() - skipped;
    ordered_json dist = ordered_json::object();
    for (auto type : {PathType::Bridge, PathType::Comparison, PathType::Mixed, PathType::NoPath}) {
        auto name = std::string(to_string(type));
        auto n = counts[name];
        dist[name] = {{"count", n},
                      {"fraction", classified == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(classified)}};
        std::cerr << name << ": " << n << '\n';
    }
    log.summary = {{"questions", qs.size()},
                   {"classified", classified},
                   {"skipped_without_two_gold_documents", skipped},
                   {"answer_in_single_document", single_doc},
                   {"distribution", dist},
                   {"by_dataset_type", by_dataset_type}};
    if (skipped != 0) std::cerr << "skipped " << skipped << " questions without two gold documents\n";
}

void cmd_classify_predict(Options& o, RunLog& log)
{
    auto qs = load_questions(log.in(o.questions));
    std::map<std::string, PathType> labels;
    if (!o.labels.empty()) labels = read_path_labels(log.in(o.labels));
    std::map<std::string, QuestionAnnotations> ann;
    if (!o.annotations.empty()) ann = read_annotations(log.in(o.annotations));
    std::map<std::string, std::size_t> counts;
    auto out = open_output(o.output);
    for (const auto& q : qs) {
        auto a = find_annotation(ann, q.question_id);
        auto entities = extract_entities(q.question, a ? std::optional(a->entities) : std::nullopt);
        std::optional<std::string_view> label;
        if (auto it = labels.find(q.question_id); it != labels.end()) label = to_string(it->second);
        auto type = predict_path_type(q.question, entities, label);
        ++counts[std::string(to_string(type))];
        ordered_json row;
        row["question_id"] = q.question_id;
        row["path_type"] = std::string(to_string(type));
        row["source"] = label ? "label" : "heuristic";
        out << row.dump() << '\n';
    }
    finish_output(out, o.output);
    log.outputs = {o.output};
    log.summary = {{"questions", qs.size()},
                   {"counts", counts},
                   {"cue_lexicon", std::string(kComparisonCueLexiconVersion)}};
}

void cmd_score(Options& o, RunLog& log)
{
    o.est.validate();
    auto method = parse_method(o.method);
    auto index = load_index(log.in(o.index));
    auto qs = load_questions(log.in(o.questions));
    std::map<std::string, QuestionAnnotations> ann;
    if (!o.annotations.empty()) ann = read_annotations(log.in(o.annotations));
    std::map<std::string, PathType> labels;
    if (!o.labels.empty()) labels = read_path_labels(log.in(o.labels));
    std::map<std::string, PathType> given_paths;
    if (!o.paths.empty()) given_paths = read_oracle_path_types(log.in(o.paths));

    std::vector<ScoreRow> rows(qs.size());
    std::vector<char> fallback(qs.size(), 0);
    parallel_for(qs.size(), o.threads, [&](std::size_t i) {
        const auto& q = qs[i];
        ScoreRow& row = rows[i];
        row.question_id = q.question_id;
        row.method = method;
        auto tokens = tokenize(q.question);
        switch (method) {
        case Method::MaxIdf: row.score = baseline_idf(tokens, index, Aggregation::Max); return;
        case Method::AvgIdf: row.score = baseline_idf(tokens, index, Aggregation::Avg); return;
        case Method::Scs: row.score = baseline_scs(tokens, index); return;
        case Method::MaxScq: row.score = baseline_scq(tokens, index, Aggregation::Max); return;
        case Method::AvgScq: row.score = baseline_scq(tokens, index, Aggregation::Avg); return;
        case Method::MultHP: break;
        }
        auto set = extract_ngram_set(q.question_id, q.question, index, o.est.p_thr,
                                     find_annotation(ann, q.question_id));
        PathType type;
        if (auto it = given_paths.find(q.question_id); it != given_paths.end()) {
            type = it->second;
        } else {
            std::optional<std::string_view> label;
            if (auto l = labels.find(q.question_id); l != labels.end()) label = to_string(l->second);
            type = predict_path_type(q.question, entity_spans(set), label);
        }
        auto e = estimate(set, type, index, o.est);
        row.path_type = type;
        row.score = e.p_ret;
        row.chosen = e.chosen;
        fallback[i] = e.comparison_fallback ? 1 : 0;
    });

    auto out = open_output(o.output);
    for (const auto& r : rows) write_score(out, r);
    finish_output(out, o.output);
    log.outputs = {o.output};
    log.summary = {{"questions", rows.size()}, {"method", std::string(to_string(method))}};
    if (method == Method::MultHP) {
        std::map<std::string, std::size_t> types;
        for (const auto& r : rows) ++types[std::string(to_string(*r.path_type))];
        log.summary["path_types"] = types;
        log.summary["comparison_fallbacks"] = std::count(fallback.begin(), fallback.end(), 1);
    }
}

ordered_json coefficient_json(const Coefficient& c)
{
    return {{"value", c.value},
            {"p_value", c.p_value},
            {"significant_0.01", c.p_value < 0.01},
            {"significant_0.001", c.p_value < 0.001}};
}

ordered_json correlation_block(std::span<const double> x, std::span<const double> y)
{
    ordered_json block;
    block["n"] = x.size();
    try {
        auto c = correlations(x, y);
        block["pearson"] = coefficient_json(c.pearson);
        block["spearman"] = coefficient_json(c.spearman);
        block["kendall_tau_b"] = coefficient_json(c.kendall);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UndefinedCoefficient && e.kind() != ErrorKind::InvalidArgument) throw;
        block["undefined"] = e.what();
    }
    return block;
}

void cmd_evaluate(Options& o, RunLog& log)
{
    auto scores = read_scores(log.in(o.scores));
    auto runs = read_runs(log.in(o.runs));
    if (o.k == 0) throw Error(ErrorKind::InvalidArgument, "--k must be at least 1");
    sort_by_id(scores);
    sort_by_id(runs);
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i].question_id == scores[i - 1].question_id) {
            throw Error(ErrorKind::Schema, "duplicate question_id in scores: " + scores[i].question_id);
        }
    }
    std::set<Method> methods;
    for (const auto& s : scores) methods.insert(s.method);
    if (methods.size() > 1) throw Error(ErrorKind::Validation, "score file mixes several methods");

    std::map<std::string, double> predicted;
    for (const auto& s : scores) predicted[s.question_id] = s.score;
    auto pairwise = pairwise_accuracy(predicted, runs, o.k);

    std::vector<double> x(scores.size()), ap(scores.size());
    std::vector<std::size_t> cost(scores.size());
    parallel_for(scores.size(), o.threads, [&](std::size_t i) {
        x[i] = scores[i].score;
        auto ranked = interleave(runs[i]);
        ap[i] = average_precision(ranked, runs[i].gold_support);
        cost[i] = retrieval_cost(runs[i], o.k);
    });

    ordered_json report;
    report["method"] = methods.empty() ? "" : std::string(to_string(*methods.begin()));
    report["questions"] = scores.size();
    report["k"] = o.k;
    double map = 0.0;
    for (double a : ap) map += a;
    report["mean_average_precision"] = ap.empty() ? 0.0 : map / static_cast<double>(ap.size());
    report["p_value_method"] = "t approximation (pearson, spearman); tie-corrected normal approximation (kendall)";
    report["correlation_with_ap"] = correlation_block(x, ap);

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> subsets;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i].path_type) {
            auto& [sx, sy] = subsets[std::string(to_string(*scores[i].path_type))];
            sx.push_back(x[i]);
            sy.push_back(ap[i]);
        }
    }
    ordered_json by_type = ordered_json::object();
    for (const auto& [name, xy] : subsets) by_type[name] = correlation_block(xy.first, xy.second);
    report["correlation_with_ap_by_path_type"] = by_type;

    report["pairwise_accuracy"] = {{"value", pairwise.accuracy}, {"pairs", pairwise.pairs}};
    auto pp = pem_pr(runs, o.k);
    report["pem"] = pp.pem;
    report["pr"] = pp.pr;

    std::map<std::string, std::string> class_of;
    if (scores.size() >= 4) {
        std::vector<ScoredQuestion> sq;
        for (const auto& s : scores) sq.push_back({s.question_id, s.score});
        std::map<std::string, std::pair<std::size_t, double>> agg;
        std::map<std::string, std::size_t> index_of;
        for (std::size_t i = 0; i < scores.size(); ++i) index_of[scores[i].question_id] = i;
        for (const auto& c : bucket_by_quartile(sq)) {
            auto name = std::string(to_string(c.difficulty));
            class_of[c.question_id] = name;
            auto& [n, sum] = agg[name];
            ++n;
            sum += ap[index_of[c.question_id]];
        }
        ordered_json classes = ordered_json::object();
        for (auto c : {DifficultyClass::ExtraHard, DifficultyClass::Hard, DifficultyClass::Easy}) {
            auto name = std::string(to_string(c));
            auto [n, sum] = agg[name];
            classes[name] = {{"count", n}, {"mean_average_precision", n == 0 ? 0.0 : sum / static_cast<double>(n)}};
        }
        report["difficulty_classes"] = classes;
    }

    if (!o.predictions.empty()) {
        if (o.questions.empty()) throw Error(ErrorKind::InvalidArgument, "--predictions needs --questions");
        auto qs = load_questions(log.in(o.questions));
        auto preds = load_questions(log.in(o.predictions));
        std::map<std::string, std::string> gold;
        for (const auto& q : qs) {
            if (q.answer) gold[q.question_id] = *q.answer;
        }
        double em = 0.0, f1 = 0.0;
        std::size_t n = 0;
        for (const auto& p : preds) {
            auto g = gold.find(p.question_id);
            if (g == gold.end()) {
                throw Error(ErrorKind::Alignment, "prediction for unknown question " + p.question_id);
            }
            auto s = answer_em_f1(p.answer.value_or(""), g->second);
            em += s.em;
            f1 += s.f1;
            ++n;
        }
        report["answer"] = {{"questions", n},
                            {"em", n == 0 ? 0.0 : em / static_cast<double>(n)},
                            {"f1", n == 0 ? 0.0 : f1 / static_cast<double>(n)}};
    }

    auto out = open_output(o.output);
    out << report.dump(2) << '\n';
    finish_output(out, o.output);
    log.outputs = {o.output};
    if (!o.csv.empty()) {
        auto c = open_output(o.csv);
        c << "question_id,path_type,score,average_precision,cost,class\n";
        for (std::size_t i = 0; i < scores.size(); ++i) {
            c << scores[i].question_id << ','
              << (scores[i].path_type ? to_string(*scores[i].path_type) : std::string_view{}) << ','
              << format_double(x[i]) << ',' << format_double(ap[i]) << ',' << cost[i] << ','
              << class_of[scores[i].question_id] << '\n';
        }
        finish_output(c, o.csv);
        log.outputs.push_back(o.csv);
    }
    log.summary = {{"questions", scores.size()}, {"pairwise_accuracy", pairwise.accuracy}};
    std::cerr << "questions " << scores.size() << ", pairwise accuracy " << format_double(pairwise.accuracy) << '\n';
}

void cmd_bucket(Options& o, RunLog& log)
{
    auto scores = read_scores(log.in(o.scores));
    std::vector<ScoredQuestion> sq;
    for (const auto& s : scores) sq.push_back({s.question_id, s.score});
    auto classes = bucket_by_quartile(sq);
    sort_by_id(classes);
    std::map<std::string, std::size_t> counts;
    auto out = open_output(o.output);
    for (const auto& c : classes) {
        write_class(out, c);
        ++counts[std::string(to_string(c.difficulty))];
    }
    finish_output(out, o.output);
    log.outputs = {o.output};
    log.summary = {{"questions", classes.size()}, {"counts", counts}};
}

void cmd_plan(Options& o, RunLog& log)
{
    BudgetPolicy policy = o.policy;
    if (!o.policy_file.empty()) policy = read_policy(log.in(o.policy_file));
    policy.validate();
    auto classes = read_classes(log.in(o.classes));
    sort_by_id(classes);
    auto plan = plan_batch(classes, policy);
    auto out = open_output(o.output);
    for (const auto& row : plan.questions) write_plan_row(out, row);
    finish_output(out, o.output);
    log.outputs = {o.output};
    log.summary = {{"questions", plan.questions.size()},
                   {"policy",
                    {{"easy", policy.easy},
                     {"hard", policy.hard},
                     {"extra_hard", policy.extra_hard},
                     {"base_k", policy.base_k}}},
                   {"total", plan.total},
                   {"constant_total", plan.constant_total}};
    std::cerr << "adaptive total " << plan.total << " documents, constant total " << plan.constant_total << '\n';
}

void cmd_synth(Options& o, RunLog& log)
{
    auto data = generate_synthetic(o.synth);
    fs::create_directories(o.out_dir);
    auto write = [&](const char* name, auto&& fn) {
        auto p = o.out_dir / name;
        auto out = open_output(p);
        fn(out);
        finish_output(out, p);
        log.outputs.push_back(p);
    };
    write("corpus.jsonl", [&](std::ostream& s) { write_corpus(s, data.corpus); });
    write("questions.jsonl", [&](std::ostream& s) { write_questions(s, data.questions); });
    write("runs.jsonl", [&](std::ostream& s) { write_runs(s, data.runs); });
    write("truth.jsonl", [&](std::ostream& s) { write_truth(s, data.truth); });
    log.summary = {{"documents", data.corpus.size()}, {"questions", data.questions.size()}};
}

/// Pulls "--config FILE" out of argv and appends the file's settings as flags
/// not already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args, std::optional<fs::path>& config_file)
{
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
            config_file = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_file = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (!config_file) return kept;

    std::ifstream in(*config_file);
    if (!in) throw Error(ErrorKind::Io, "cannot open config " + config_file->string());
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Schema, config_file->string() + ": invalid JSON (byte " + std::to_string(e.byte) + ")");
    }
    if (!cfg.is_object()) throw Error(ErrorKind::Schema, config_file->string() + ": expected a JSON object");

    std::set<std::string> given;
    for (const auto& a : kept) {
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    }
    std::set<std::string> words(kept.begin(), kept.end());

    auto scalar = [&](const std::string& key, const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number() || v.is_boolean()) return v.dump();
        throw Error(ErrorKind::Schema, config_file->string() + ": value of \"" + key + "\" must be a scalar");
    };
    std::function<void(const nlohmann::json&)> apply = [&](const nlohmann::json& obj) {
        for (const auto& [key, v] : obj.items()) {
            if (v.is_object()) {
                // settings scoped to a subcommand apply when it is invoked
                if (words.count(key) != 0) apply(v);
                continue;
            }
            if (given.count(key) != 0) continue;
            kept.push_back("--" + key);
            kept.push_back(scalar(key, v));
        }
    };
    apply(cfg);
    return kept;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multi-hop retrieval difficulty prediction toolkit", "hopqpp"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.add_option("--config", "JSON file of option values; command-line flags take precedence");

    Options o;
    auto existing = CLI::ExistingFile;
    auto add_estimator = [&](CLI::App* sub) {
        sub->add_option("--p-thr", o.est.p_thr, "Relatedness and frozen-phrase probability threshold")
            ->capture_default_str()->check(CLI::Range(0.0, 1.0));
        sub->add_option("--annotations", o.annotations, "Span annotations JSONL")->check(existing);
        sub->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    };

    auto* imp = app.add_subcommand("import-hotpotqa", "Convert a HotpotQA JSON file to corpus and question files");
    imp->add_option("--input", o.input, "HotpotQA JSON array")->required()->check(existing);
    imp->add_option("--mode", o.mode, "first-paragraph or full-text")->capture_default_str();
    imp->add_option("--corpus", o.corpus_out, "Corpus JSONL to write")->required();
    imp->add_option("--questions", o.questions_out, "Questions JSONL to write")->required();

    auto* wiki = app.add_subcommand("import-wiki", "Convert a processed Wikipedia dump to a corpus file");
    wiki->add_option("--input", o.input, "JSONL with title and text")->required()->check(existing);
    wiki->add_option("--mode", o.mode, "first-paragraph or full-text")->capture_default_str();
    wiki->add_option("--corpus", o.corpus_out, "Corpus JSONL to write")->required();

    auto* idx = app.add_subcommand("index", "Build an n-gram document-frequency index");
    idx->add_option("--corpus", o.corpus, "Corpus JSONL")->required()->check(existing);
    idx->add_option("--output", o.output, "Index file to write")->required();
    idx->add_option("--max-n", o.max_n, "Longest n-gram")->capture_default_str()->check(CLI::Range(1, 8));
    idx->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* ext = app.add_subcommand("extract", "Write the salient n-grams of each question");
    ext->add_option("--index", o.index, "Index file")->required()->check(existing);
    ext->add_option("--questions", o.questions, "Questions JSONL")->required()->check(existing);
    ext->add_option("--output", o.output, "N-gram sets JSONL to write")->required();
    add_estimator(ext);

    auto* cls = app.add_subcommand("classify", "Retrieval path types");
    cls->require_subcommand(1);
    auto* oracle = cls->add_subcommand("oracle", "Path type from the gold supporting documents");
    oracle->add_option("--index", o.index, "Index file")->required()->check(existing);
    oracle->add_option("--corpus", o.corpus, "Corpus JSONL holding the gold documents")->required()->check(existing);
    oracle->add_option("--questions", o.questions, "Questions JSONL with gold_support")->required()->check(existing);
    oracle->add_option("--output", o.output, "Path rows JSONL to write")->required();
    add_estimator(oracle);
    auto* predict = cls->add_subcommand("predict", "Pre-retrieval path type");
    predict->add_option("--questions", o.questions, "Questions JSONL")->required()->check(existing);
    predict->add_option("--labels", o.labels, "External bridge/comparison labels JSONL")->check(existing);
    predict->add_option("--annotations", o.annotations, "Span annotations JSONL")->check(existing);
    predict->add_option("--output", o.output, "Predictions JSONL to write")->required();

    auto* score = app.add_subcommand("score", "Score question difficulty");
    score->add_option("--index", o.index, "Index file")->required()->check(existing);
    score->add_option("--questions", o.questions, "Questions JSONL")->required()->check(existing);
    score->add_option("--method", o.method, "multhp, max_idf, avg_idf, scs, max_scq or avg_scq")->capture_default_str();
    score->add_option("--paths", o.paths, "Path types per question (classify output)")->check(existing);
    score->add_option("--labels", o.labels, "External bridge/comparison labels JSONL")->check(existing);
    score->add_option("--p-hop2", o.est.p_hop2, "Second-hop probability constant")->capture_default_str();
    score->add_option("--epsilon", o.est.epsilon, "Score for questions without evidence")->capture_default_str();
    score->add_option("--output", o.output, "Scores JSONL to write")->required();
    add_estimator(score);

    auto* eval = app.add_subcommand("evaluate", "Correlate scores with retrieval effectiveness");
    eval->add_option("--scores", o.scores, "Scores JSONL")->required()->check(existing);
    eval->add_option("--runs", o.runs, "Retrieval runs JSONL")->required()->check(existing);
    eval->add_option("--k", o.k, "Per-hop cutoff for cost, PEM and PR")->capture_default_str();
    eval->add_option("--questions", o.questions, "Questions JSONL with gold answers")->check(existing);
    eval->add_option("--predictions", o.predictions, "Reader answers JSONL (question_id, question, answer)")->check(existing);
    eval->add_option("--csv", o.csv, "Per-question CSV to write");
    eval->add_option("--output", o.output, "Report JSON to write")->required();
    eval->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

    auto* bucket = app.add_subcommand("bucket", "Assign difficulty classes by score quartile");
    bucket->add_option("--scores", o.scores, "Scores JSONL")->required()->check(existing);
    bucket->add_option("--output", o.output, "Classes JSONL to write")->required();

    auto* plan = app.add_subcommand("plan", "Per-question retrieval budgets");
    plan->add_option("--classes", o.classes, "Classes JSONL")->required()->check(existing);
    plan->add_option("--policy", o.policy_file, "Policy JSON {easy, hard, extra_hard, base_k}")->check(existing);
    plan->add_option("--easy", o.policy.easy, "Easy multiplier")->capture_default_str();
    plan->add_option("--hard", o.policy.hard, "Hard multiplier")->capture_default_str();
    plan->add_option("--extra-hard", o.policy.extra_hard, "Extra-hard multiplier")->capture_default_str();
    plan->add_option("--base-k", o.policy.base_k, "Documents per unit multiplier")->capture_default_str();
    plan->add_option("--output", o.output, "Plan JSONL to write")->required();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus, questions and retrieval runs");
    synth->add_option("--seed", o.synth.seed, "Random seed")->capture_default_str();
    synth->add_option("--questions", o.synth.questions, "Number of questions")->capture_default_str();
    synth->add_option("--bridge-fraction", o.synth.bridge_fraction, "Share of bridge questions")->capture_default_str();
    synth->add_option("--noise", o.synth.noise, "Log-normal sigma on simulated cost")->capture_default_str();
    synth->add_option("--k", o.synth.k, "Documents per hop in each run")->capture_default_str();
    synth->add_option("--filler-docs", o.synth.filler_docs, "Documents without planted text")->capture_default_str();
    synth->add_option("--p-hop2", o.synth.p_hop2, "Second-hop probability used for bridge truth")->capture_default_str();
    synth->add_option("--out-dir", o.out_dir, "Directory for corpus, questions, runs and truth")->required();

    std::optional<fs::path> config_file;
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args), config_file);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    }

    const std::vector<std::pair<CLI::App*, void (*)(Options&, RunLog&)>> commands = {
        {imp, cmd_import_hotpotqa}, {wiki, cmd_import_wiki}, {idx, cmd_index},
        {ext, cmd_extract},         {oracle, cmd_classify_oracle}, {predict, cmd_classify_predict},
        {score, cmd_score},         {eval, cmd_evaluate},  {bucket, cmd_bucket},
        {plan, cmd_plan},           {synth, cmd_synth},
    };
    try {
        for (const auto& [sub, fn] : commands) {
            if (!sub->parsed()) continue;
            RunLog log;
            log.command = sub == oracle || sub == predict ? "classify " + sub->get_name() : sub->get_name();
            fn(o, log);
            fs::path manifest = sub == synth ? o.out_dir / "manifest.json"
                                : sub == imp || sub == wiki ? fs::path(o.corpus_out.string() + ".manifest.json")
                                                            : fs::path(o.output.string() + ".manifest.json");
            write_manifest(manifest, log, *sub, config_file);
            return kOk;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kUsage;
}
