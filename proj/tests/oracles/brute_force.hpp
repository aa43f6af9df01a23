#pragma once

// Slow reference implementations written straight from the textbook definitions.
// They share no code with the library.

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline long double mean(const std::vector<double>& v)
{
    long double s = 0;
    for (double a : v) s += a;
    return s / static_cast<long double>(v.size());
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    long double mx = mean(x), my = mean(y);
    long double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(num / std::sqrt(dx * dy));
}

/// Rank of each value: 1 + number of smaller values + half the number of equal others.
inline std::vector<double> ranks(const std::vector<double>& v)
{
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            else if (v[j] == v[i] && j != i) ++equal;
        }
        r[i] = 1.0 + static_cast<double>(less) + static_cast<double>(equal) / 2.0;
    }
    return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    return pearson(ranks(x), ranks(y));
}

/// Kendall tau-b by enumerating every pair.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y)
{
    long long concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            bool tx = x[i] == x[j];
            bool ty = y[i] == y[j];
            if (tx && ty) continue;
            if (tx) { ++tie_x; continue; }
            if (ty) { ++tie_y; continue; }
            if ((x[i] < x[j]) == (y[i] < y[j])) ++concordant;
            else ++discordant;
        }
    }
    long double denom = std::sqrt(static_cast<long double>(concordant + discordant + tie_x) *
                                  static_cast<long double>(concordant + discordant + tie_y));
    return static_cast<double>((concordant - discordant) / denom);
}

/// Mean over gold documents of precision at the rank where each is found.
inline double average_precision(const std::vector<std::string>& ranked,
                                const std::set<std::string>& gold)
{
    double total = 0;
    for (const auto& g : gold) {
        for (std::size_t r = 0; r < ranked.size(); ++r) {
            if (ranked[r] != g) continue;
            std::size_t relevant = 0;
            for (std::size_t s = 0; s <= r; ++s) relevant += gold.count(ranked[s]);
            total += static_cast<double>(relevant) / static_cast<double>(r + 1);
            break;
        }
    }
    return total / static_cast<double>(gold.size());
}

/// Number of documents a reader has to see until every gold document has appeared.
inline std::size_t cost_from_ranking(const std::vector<std::string>& ranked,
                                     const std::set<std::string>& gold, std::size_t sentinel)
{
    std::set<std::string> seen;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (gold.count(ranked[r])) seen.insert(ranked[r]);
        if (seen.size() == gold.size()) return r + 1;
    }
    return sentinel;
}

/// Budget total from class counts.
inline unsigned long long budget_total(const std::map<int, unsigned long long>& counts,
                                       const std::map<int, unsigned long long>& multipliers,
                                       unsigned long long base_k)
{
    unsigned long long total = 0;
    for (const auto& [cls, count] : counts) total += count * multipliers.at(cls) * base_k;
    return total;
}

/// Best bridge probability by enumerating every n-gram document count.
inline double bridge(const std::vector<unsigned long long>& dfs, double p_hop2, double epsilon)
{
    double best = 0;
    for (auto df : dfs)
        if (df > 0) best = std::max(best, 1.0 / static_cast<double>(df));
    return best > 0 ? best * p_hop2 : epsilon;
}

/// Best comparison probability over every pair from distinct spans.
inline double comparison_pair(const std::vector<std::pair<unsigned long long, int>>& df_span)
{
    double best = 0;
    for (std::size_t i = 0; i < df_span.size(); ++i)
        for (std::size_t j = 0; j < df_span.size(); ++j)
            if (i != j && df_span[i].second != df_span[j].second && df_span[i].first > 0 &&
                df_span[j].first > 0)
                best = std::max(best, 1.0 / static_cast<double>(df_span[i].first) /
                                          static_cast<double>(df_span[j].first));
    return best;
}

}  // namespace oracle
