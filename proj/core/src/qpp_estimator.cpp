#include "hopqpp/qpp_estimator.hpp"

#include "hopqpp/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace hopqpp {

namespace {

double inverse(std::uint64_t df) { return 1.0 / static_cast<double>(df); }

double clamp_probability(double p, const EstimatorConfig& cfg)
{
    return std::clamp(p, cfg.epsilon, 1.0);
}

DifficultyEstimate no_evidence(std::string question_id, PathType requested,
                               const EstimatorConfig& cfg)
{
    DifficultyEstimate est;
    est.question_id = std::move(question_id);
    est.requested_type = requested;
    est.path_type = PathType::NoPath;
    est.p_ret = cfg.epsilon;
    return est;
}

struct Pair {
    std::size_t first = 0;
    std::size_t second = 0;
    double product = 0.0;
};

/// Highest-product pair from distinct spans with distinct keys. Iterating in
/// candidate order and requiring a strict improvement makes ties resolve toward
/// the more specific, longer, earlier n-grams.
std::optional<Pair> best_pair(std::span<const ScoredNgram> candidates, bool entities_only)
{
    std::optional<Pair> best;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (entities_only && candidates[i].kind != SpanKind::Entity) {
            continue;
        }
        for (std::size_t j = i + 1; j < candidates.size(); ++j) {
            const auto& a = candidates[i];
            const auto& b = candidates[j];
            if ((entities_only && b.kind != SpanKind::Entity) || a.span_index == b.span_index ||
                a.key == b.key) {
                continue;
            }
            const double product = inverse(a.df) * inverse(b.df);
            if (!best || product > best->product) {
                best = Pair{i, j, product};
            }
            // Candidates are sorted by specificity, so this i cannot do better.
            break;
        }
    }
    return best;
}

}  // namespace

void EstimatorConfig::validate() const
{
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in_unit(p_hop2) || !in_unit(epsilon) || !in_unit(p_thr)) {
        throw Error(ErrorKind::InvalidArgument, "estimator parameters must lie in (0, 1]");
    }
    if (!(epsilon < p_hop2)) {
        throw Error(ErrorKind::InvalidArgument, "epsilon must be smaller than p_hop2");
    }
}

std::optional<double> specificity(std::uint64_t df) noexcept
{
    if (df == 0) {
        return std::nullopt;
    }
    return inverse(df);
}

std::optional<double> specificity(const DfIndex& index, std::span<const std::string> ngram)
{
    return specificity(index.doc_count(ngram));
}

std::vector<ScoredNgram> score_ngrams(const NGramSet& ngrams, const DfIndex& index)
{
    std::vector<ScoredNgram> out;
    std::unordered_map<std::string, std::uint64_t> cache;
    for (const auto& e : ngrams.entries) {
        if (e.length() == 0 || e.length() > index.max_n()) {
            continue;
        }
        auto [it, inserted] = cache.try_emplace(e.key, 0);
        if (inserted) {
            it->second = index.doc_count(e.key);
        }
        if (it->second == 0) {
            continue;
        }
        out.push_back({e.key, it->second, e.span_index, e.length(), e.char_begin, e.kind});
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredNgram& a, const ScoredNgram& b) {
        if (a.df != b.df) return a.df < b.df;
        if (a.length != b.length) return a.length > b.length;
        if (a.char_begin != b.char_begin) return a.char_begin < b.char_begin;
        return a.span_index < b.span_index;
    });
    return out;
}

DifficultyEstimate estimate_bridge(std::string question_id, std::span<const ScoredNgram> candidates,
                                   const EstimatorConfig& cfg)
{
    if (candidates.empty()) {
        return no_evidence(std::move(question_id), PathType::Bridge, cfg);
    }
    const auto& top = candidates.front();
    DifficultyEstimate est;
    est.question_id = std::move(question_id);
    est.requested_type = PathType::Bridge;
    est.path_type = PathType::Bridge;
    est.p_ret = clamp_probability(inverse(top.df) * cfg.p_hop2, cfg);
    est.chosen = {{top.key, top.df}};
    est.p_hop2_used = true;
    return est;
}

DifficultyEstimate estimate_comparison(std::string question_id,
                                       std::span<const ScoredNgram> candidates,
                                       const EstimatorConfig& cfg)
{
    auto pair = best_pair(candidates, false);
    auto entity_pair = best_pair(candidates, true);
    const bool changed =
        pair.has_value() != entity_pair.has_value() ||
        (pair && entity_pair && pair->product != entity_pair->product);

    if (!pair) {
        auto est = estimate_bridge(std::move(question_id), candidates, cfg);
        est.requested_type = PathType::Comparison;
        est.comparison_fallback = true;
        est.frozen_choice_changed = changed;
        return est;
    }
    const auto& a = candidates[pair->first];
    const auto& b = candidates[pair->second];
    DifficultyEstimate est;
    est.question_id = std::move(question_id);
    est.requested_type = PathType::Comparison;
    est.path_type = PathType::Comparison;
    est.p_ret = clamp_probability(pair->product, cfg);
    est.chosen = {{a.key, a.df}, {b.key, b.df}};
    est.frozen_choice_changed = changed;
    return est;
}

DifficultyEstimate estimate_mixed(std::string question_id, std::span<const ScoredNgram> candidates,
                                  const EstimatorConfig& cfg)
{
    if (candidates.empty()) {
        return no_evidence(std::move(question_id), PathType::Mixed, cfg);
    }
    auto comparison = estimate_comparison(question_id, candidates, cfg);
    auto bridge = estimate_bridge(question_id, candidates, cfg);
    auto& winner = (!comparison.comparison_fallback && comparison.p_ret >= bridge.p_ret)
                       ? comparison
                       : bridge;
    DifficultyEstimate est = std::move(winner);
    est.requested_type = PathType::Mixed;
    est.path_type = PathType::Mixed;
    est.comparison_fallback = false;
    return est;
}

DifficultyEstimate estimate_bridge(const NGramSet& ngrams, const DfIndex& index,
                                   const EstimatorConfig& cfg)
{
    return estimate_bridge(ngrams.question_id, score_ngrams(ngrams, index), cfg);
}

DifficultyEstimate estimate_comparison(const NGramSet& ngrams, const DfIndex& index,
                                       const EstimatorConfig& cfg)
{
    return estimate_comparison(ngrams.question_id, score_ngrams(ngrams, index), cfg);
}

DifficultyEstimate estimate_mixed(const NGramSet& ngrams, const DfIndex& index,
                                  const EstimatorConfig& cfg)
{
    return estimate_mixed(ngrams.question_id, score_ngrams(ngrams, index), cfg);
}

DifficultyEstimate estimate(const NGramSet& ngrams, PathType type, const DfIndex& index,
                            const EstimatorConfig& cfg)
{
    switch (type) {
    case PathType::Bridge: return estimate_bridge(ngrams, index, cfg);
    case PathType::Comparison: return estimate_comparison(ngrams, index, cfg);
    case PathType::Mixed: return estimate_mixed(ngrams, index, cfg);
    case PathType::NoPath: break;
    }
    return no_evidence(ngrams.question_id, PathType::NoPath, cfg);
}

namespace {

std::vector<std::string> distinct_tokens(std::span<const std::string> tokens)
{
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        if (std::find(out.begin(), out.end(), t) == out.end()) {
            out.push_back(t);
        }
    }
    return out;
}

double aggregate(const std::vector<double>& values, Aggregation agg)
{
    if (values.empty()) {
        return 0.0;
    }
    if (agg == Aggregation::Max) {
        return *std::max_element(values.begin(), values.end());
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

void require_documents(const DfIndex& index)
{
    if (index.num_docs() == 0) {
        throw Error(ErrorKind::EmptyIndex, "baseline predictors need a non-empty index");
    }
}

}  // namespace

double baseline_idf(std::span<const std::string> tokens, const DfIndex& index, Aggregation agg)
{
    require_documents(index);
    const auto n = static_cast<double>(index.num_docs());
    std::vector<double> scores;
    bool any = false;
    for (const auto& t : distinct_tokens(tokens)) {
        auto df = index.doc_count(t);
        any = any || df > 0;
        scores.push_back(df > 0 ? std::log(n / static_cast<double>(df)) : 0.0);
    }
    return any ? aggregate(scores, agg) : 0.0;
}

double baseline_scs(std::span<const std::string> tokens, const DfIndex& index)
{
    if (index.total_tokens() == 0) {
        throw Error(ErrorKind::EmptyIndex, "simplified clarity needs a non-empty collection");
    }
    if (tokens.empty()) {
        return 0.0;
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& t : tokens) {
        ++counts[t];
    }
    const auto qlen = static_cast<double>(tokens.size());
    const auto total = static_cast<double>(index.total_tokens());
    double score = 0.0;
    for (const auto& [term, count] : counts) {
        auto cf = index.collection_count(term);
        if (cf == 0) {
            continue;
        }
        double pq = static_cast<double>(count) / qlen;
        double pc = static_cast<double>(cf) / total;
        score += pq * std::log2(pq / pc);
    }
    return score;
}

double baseline_scq(std::span<const std::string> tokens, const DfIndex& index, Aggregation agg)
{
    require_documents(index);
    const auto n = static_cast<double>(index.num_docs());
    std::vector<double> scores;
    for (const auto& t : distinct_tokens(tokens)) {
        auto df = index.doc_count(t);
        auto cf = index.collection_count(t);
        if (df == 0 || cf == 0) {
            scores.push_back(0.0);
            continue;
        }
        scores.push_back((1.0 + std::log(static_cast<double>(cf))) *
                         std::log(1.0 + n / static_cast<double>(df)));
    }
    return aggregate(scores, agg);
}

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::MultHP: return "multhp";
    case Method::MaxIdf: return "max_idf";
    case Method::AvgIdf: return "avg_idf";
    case Method::Scs: return "scs";
    case Method::MaxScq: return "max_scq";
    case Method::AvgScq: return "avg_scq";
    }
    return "multhp";
}

Method parse_method(std::string_view text)
{
    for (auto m : {Method::MultHP, Method::MaxIdf, Method::AvgIdf, Method::Scs, Method::MaxScq,
                   Method::AvgScq}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown scoring method: " + std::string(text));
}

}  // namespace hopqpp
