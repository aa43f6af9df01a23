#include "hopqpp/evaluation.hpp"

#include "hopqpp/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

namespace hopqpp {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw Error(ErrorKind::InvalidArgument, "correlation inputs differ in length");
    }
    if (x.size() < 3) {
        throw Error(ErrorKind::InvalidArgument, "correlation needs at least 3 observations");
    }
}

bool is_constant(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v.front(); });
}

void require_variation(std::span<const double> x, std::span<const double> y, std::string_view metric)
{
    if (is_constant(x) || is_constant(y)) {
        throw Error(ErrorKind::UndefinedCoefficient,
                    std::string(metric) + " correlation undefined for constant input");
    }
}

double t_test_p_value(double r, std::size_t n)
{
    if (std::abs(r) >= 1.0) {
        return 0.0;
    }
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1.0 - r * r));
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double raw_pearson(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Sum over tie groups of t(t-1)/2, t(t-1)(t-2) and t(t-1)(2t+5), for sorted input.
struct TieStats {
    double pairs = 0.0;
    double cubic = 0.0;
    double variance_term = 0.0;
};

TieStats tie_stats(std::span<const double> sorted)
{
    TieStats s;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        if (t > 1) {
            s.pairs += t * (t - 1) / 2;
            s.cubic += t * (t - 1) * (t - 2);
            s.variance_term += t * (t - 1) * (2 * t + 5);
        }
        i = j;
    }
    return s;
}

/// Sorts v ascending and returns the number of strictly inverted pairs.
std::uint64_t count_inversions(std::vector<double>& v)
{
    std::vector<double> buf(v.size());
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
            const auto mid = std::min(lo + width, v.size());
            const auto hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo;
            std::size_t j = mid;
            std::size_t k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    inversions += mid - i;
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
        }
        std::swap(v, buf);
    }
    return inversions;
}

}  // namespace

void RetrievalRun::validate() const
{
    if (gold_support.empty()) {
        throw Error(ErrorKind::Validation, "run " + question_id + " has no gold documents");
    }
    for (std::size_t h = 0; h < hops.size(); ++h) {
        std::unordered_set<std::string> seen;
        for (const auto& d : hops[h]) {
            if (!seen.insert(d).second) {
                throw Error(ErrorKind::Validation, "run " + question_id + " hop " +
                                                       std::to_string(h) + " repeats " + d);
            }
        }
    }
}

std::vector<std::string> interleave(const RetrievalRun& run, std::size_t k)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::size_t longest = 0;
    for (const auto& hop : run.hops) {
        longest = std::max(longest, std::min(hop.size(), k));
    }
    for (std::size_t rank = 0; rank < longest; ++rank) {
        for (const auto& hop : run.hops) {
            if (rank < hop.size() && rank < k && seen.insert(hop[rank]).second) {
                out.push_back(hop[rank]);
            }
        }
    }
    return out;
}

std::vector<std::string> interleave(const RetrievalRun& run)
{
    return interleave(run, std::numeric_limits<std::size_t>::max());
}

double average_precision(std::span<const std::string> ranked, std::span<const std::string> gold)
{
    if (gold.empty()) {
        throw Error(ErrorKind::InvalidArgument, "average precision needs a non-empty gold set");
    }
    std::unordered_set<std::string> gold_set(gold.begin(), gold.end());
    std::unordered_set<std::string> found;
    double sum = 0.0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (gold_set.contains(ranked[r]) && found.insert(ranked[r]).second) {
            sum += static_cast<double>(found.size()) / static_cast<double>(r + 1);
        }
    }
    return sum / static_cast<double>(gold_set.size());
}

std::vector<double> average_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (auto k = i; k < j; ++k) {
            ranks[order[k]] = mid;
        }
        i = j;
    }
    return ranks;
}

Coefficient pearson(std::span<const double> x, std::span<const double> y)
{
    check_inputs(x, y);
    require_variation(x, y, "pearson");
    const double r = raw_pearson(x, y);
    return {r, t_test_p_value(r, x.size())};
}

Coefficient spearman(std::span<const double> x, std::span<const double> y)
{
    check_inputs(x, y);
    require_variation(x, y, "spearman");
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    const double r = raw_pearson(rx, ry);
    return {r, t_test_p_value(r, x.size())};
}

Coefficient kendall_tau_b(std::span<const double> x, std::span<const double> y)
{
    check_inputs(x, y);
    require_variation(x, y, "kendall");
    const auto n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
    });

    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }

    double joint_ties = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && xs[j] == xs[i] && ys[j] == ys[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        joint_ties += t * (t - 1) / 2;
        i = j;
    }

    const auto x_ties = tie_stats(xs);
    const auto discordant = static_cast<double>(count_inversions(ys));
    const auto y_ties = tie_stats(ys);

    const auto nd = static_cast<double>(n);
    const double total = nd * (nd - 1) / 2;
    const double s = total - x_ties.pairs - y_ties.pairs + joint_ties - 2 * discordant;
    const double tau =
        std::clamp(s / (std::sqrt(total - x_ties.pairs) * std::sqrt(total - y_ties.pairs)), -1.0, 1.0);

    const double m = nd * (nd - 1);
    const double var = (m * (2 * nd + 5) - x_ties.variance_term - y_ties.variance_term) / 18 +
                       (2 * x_ties.pairs * y_ties.pairs) / m +
                       x_ties.cubic * y_ties.cubic / (9 * m * (nd - 2));
    double p = 0.0;
    if (var > 0) {
        const double z = s / std::sqrt(var);
        p = std::erfc(std::abs(z) / std::sqrt(2.0));
    }
    return {tau, p};
}

Correlations correlations(std::span<const double> x, std::span<const double> y)
{
    return {pearson(x, y), spearman(x, y), kendall_tau_b(x, y)};
}

std::size_t retrieval_cost(const RetrievalRun& run, std::size_t k)
{
    std::unordered_set<std::string> remaining(run.gold_support.begin(), run.gold_support.end());
    auto ranked = interleave(run, k);
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        remaining.erase(ranked[r]);
        if (remaining.empty()) {
            return r + 1;
        }
    }
    return run.hops.size() * k + 1;
}

PairwiseResult pairwise_accuracy(const std::map<std::string, double>& predicted,
                                 std::span<const RetrievalRun> runs, std::size_t k)
{
    std::set<std::string> run_ids;
    for (const auto& run : runs) {
        if (!run_ids.insert(run.question_id).second) {
            throw Error(ErrorKind::Alignment, "duplicate run for question " + run.question_id);
        }
        if (!predicted.contains(run.question_id)) {
            throw Error(ErrorKind::Alignment, "no predicted score for question " + run.question_id);
        }
    }
    if (run_ids.size() != predicted.size()) {
        for (const auto& [id, score] : predicted) {
            if (!run_ids.contains(id)) {
                throw Error(ErrorKind::Alignment, "no retrieval run for question " + id);
            }
        }
    }

    // Deterministic fold in question-id order.
    std::vector<std::pair<double, std::size_t>> rows;
    std::map<std::string, const RetrievalRun*> by_id;
    for (const auto& run : runs) {
        by_id.emplace(run.question_id, &run);
    }
    for (const auto& [id, run] : by_id) {
        rows.emplace_back(predicted.at(id), retrieval_cost(*run, k));
    }

    double correct = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const auto [si, ci] = rows[i];
            const auto [sj, cj] = rows[j];
            if (ci == cj) {
                continue;
            }
            ++counted;
            if (si == sj) {
                correct += 0.5;
            } else if ((si < sj) == (ci > cj)) {
                correct += 1.0;
            }
        }
    }
    PairwiseResult result;
    result.pairs = counted;
    result.accuracy = counted == 0 ? 0.0 : correct / static_cast<double>(counted);
    return result;
}

PemPr pem_pr(std::span<const RetrievalRun> runs, std::size_t k)
{
    if (k == 0) {
        throw Error(ErrorKind::InvalidArgument, "cutoff k must be at least 1");
    }
    if (runs.empty()) {
        return {};
    }
    std::size_t exact = 0;
    std::size_t any = 0;
    for (const auto& run : runs) {
        std::unordered_set<std::string> retrieved;
        for (const auto& hop : run.hops) {
            for (std::size_t r = 0; r < hop.size() && r < k; ++r) {
                retrieved.insert(hop[r]);
            }
        }
        std::size_t hits = 0;
        std::unordered_set<std::string> gold(run.gold_support.begin(), run.gold_support.end());
        for (const auto& g : gold) {
            hits += retrieved.contains(g) ? 1 : 0;
        }
        exact += (hits == gold.size()) ? 1 : 0;
        any += (hits > 0) ? 1 : 0;
    }
    const auto n = static_cast<double>(runs.size());
    return {static_cast<double>(exact) / n, static_cast<double>(any) / n};
}

std::string normalize_answer(std::string_view text)
{
    std::string cleaned;
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::ispunct(u)) {
            continue;
        }
        cleaned.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
    }
    std::string out;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[j]))) {
            ++j;
        }
        if (j > i) {
            auto word = std::string_view(cleaned).substr(i, j - i);
            if (word != "a" && word != "an" && word != "the") {
                if (!out.empty()) {
                    out.push_back(' ');
                }
                out.append(word);
            }
        }
        i = j;
    }
    return out;
}

AnswerScore answer_em_f1(std::string_view predicted, std::string_view gold)
{
    const auto p = normalize_answer(predicted);
    const auto g = normalize_answer(gold);
    AnswerScore score;
    score.em = p == g ? 1 : 0;

    auto split = [](const std::string& s) {
        std::vector<std::string> words;
        std::size_t i = 0;
        while (i <= s.size() && !s.empty()) {
            auto j = s.find(' ', i);
            if (j == std::string::npos) {
                j = s.size();
            }
            words.push_back(s.substr(i, j - i));
            i = j + 1;
        }
        return words;
    };
    const auto pw = split(p);
    const auto gw = split(g);
    if (pw.empty() || gw.empty()) {
        score.f1 = (pw.empty() && gw.empty()) ? 1.0 : 0.0;
        return score;
    }
    std::unordered_map<std::string, int> gold_counts;
    for (const auto& w : gw) {
        ++gold_counts[w];
    }
    int common = 0;
    for (const auto& w : pw) {
        auto it = gold_counts.find(w);
        if (it != gold_counts.end() && it->second > 0) {
            --it->second;
            ++common;
        }
    }
    if (common == 0) {
        return score;
    }
    const double precision = static_cast<double>(common) / static_cast<double>(pw.size());
    const double recall = static_cast<double>(common) / static_cast<double>(gw.size());
    score.f1 = 2 * precision * recall / (precision + recall);
    return score;
}

std::string_view to_string(DifficultyClass c) noexcept
{
    switch (c) {
    case DifficultyClass::Easy: return "easy";
    case DifficultyClass::Hard: return "hard";
    case DifficultyClass::ExtraHard: return "extra_hard";
    }
    return "easy";
}

DifficultyClass parse_difficulty_class(std::string_view text)
{
    if (text == "easy") return DifficultyClass::Easy;
    if (text == "hard") return DifficultyClass::Hard;
    if (text == "extra_hard") return DifficultyClass::ExtraHard;
    throw Error(ErrorKind::Validation, "unknown difficulty class: " + std::string(text));
}

std::vector<ClassAssignment> bucket_by_quartile(std::span<const ScoredQuestion> scores)
{
    const auto n = scores.size();
    if (n < 4) {
        throw Error(ErrorKind::InvalidArgument, "quartile bucketing needs at least 4 questions");
    }
    std::vector<const ScoredQuestion*> order;
    order.reserve(n);
    for (const auto& s : scores) {
        order.push_back(&s);
    }
    std::sort(order.begin(), order.end(), [](const ScoredQuestion* a, const ScoredQuestion* b) {
        return a->score != b->score ? a->score < b->score : a->question_id < b->question_id;
    });
    const auto first = (n + 3) / 4;
    const auto second = (n + 1) / 2;
    std::vector<ClassAssignment> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto c = i < first ? DifficultyClass::ExtraHard
                           : (i < second ? DifficultyClass::Hard : DifficultyClass::Easy);
        out.push_back({order[i]->question_id, c});
    }
    return out;
}

std::vector<ClassAssignment> bucket_by_quartile(std::span<const DifficultyEstimate> estimates)
{
    std::vector<ScoredQuestion> scores;
    scores.reserve(estimates.size());
    for (const auto& e : estimates) {
        scores.push_back({e.question_id, e.p_ret});
    }
    return bucket_by_quartile(scores);
}

}  // namespace hopqpp
