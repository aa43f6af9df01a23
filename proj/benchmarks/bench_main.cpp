#include "hopqpp/corpus_index.hpp"
#include "hopqpp/evaluation.hpp"
#include "hopqpp/qpp_estimator.hpp"
#include "hopqpp/retrieval_path.hpp"
#include "hopqpp/synth.hpp"
#include "hopqpp/term_extraction.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <random>

using namespace hopqpp;

namespace {

const SynthData& synth_data()
{
    static const SynthData data = [] {
        SynthConfig cfg;
        cfg.questions = 1000;
        cfg.filler_docs = 5000;
        return generate_synthetic(cfg);
    }();
    return data;
}

const DfIndex& synth_index()
{
    static const DfIndex index = build_index(synth_data().corpus, 3, 1);
    return index;
}

void BM_BuildIndex(benchmark::State& state)
{
    const auto& docs = synth_data().corpus;
    for (auto _ : state) {
        auto idx = build_index(docs, 3, static_cast<unsigned>(state.range(0)));
        benchmark::DoNotOptimize(idx.num_docs());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}
BENCHMARK(BM_BuildIndex)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExtractAndEstimate(benchmark::State& state)
{
    const auto& qs = synth_data().questions;
    const auto& idx = synth_index();
    EstimatorConfig cfg;
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& q = qs[i++ % qs.size()];
        auto ng = extract_ngram_set(q.question_id, q.question, idx, cfg.p_thr);
        std::vector<TermSpan> entities;
        for (const auto& s : ng.spans) {
            if (s.kind == SpanKind::Entity) entities.push_back(s);
        }
        auto est = estimate(ng, predict_path_type(q.question, entities), idx, cfg);
        benchmark::DoNotOptimize(est.p_ret);
    }
}
BENCHMARK(BM_ExtractAndEstimate);

void BM_Estimators(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> df(1, 1000);
    std::vector<ScoredNgram> c;
    for (std::size_t i = 0; i < 12; ++i) c.push_back({"g" + std::to_string(i), df(rng), i % 3, 1 + i % 3, i});
    std::sort(c.begin(), c.end(), [](const ScoredNgram& a, const ScoredNgram& b) {
        if (a.df != b.df) return a.df < b.df;
        if (a.length != b.length) return a.length > b.length;
        return a.char_begin < b.char_begin;
    });
    EstimatorConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_bridge("q", c, cfg).p_ret);
        benchmark::DoNotOptimize(estimate_comparison("q", c, cfg).p_ret);
        benchmark::DoNotOptimize(estimate_mixed("q", c, cfg).p_ret);
    }
}
BENCHMARK(BM_Estimators);

std::pair<std::vector<double>, std::vector<double>> random_pair(std::size_t n)
{
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> v(0, 50);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = v(rng);
        y[i] = x[i] + v(rng);
    }
    return {x, y};
}

void BM_KendallTauB(benchmark::State& state)
{
    auto [x, y] = random_pair(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_b(x, y).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTauB)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_Spearman(benchmark::State& state)
{
    auto [x, y] = random_pair(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y).value);
}
BENCHMARK(BM_Spearman)->Arg(1000)->Arg(10000);

void BM_PairwiseAccuracy(benchmark::State& state)
{
    const auto& data = synth_data();
    std::map<std::string, double> predicted;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u;
    for (const auto& r : data.runs) predicted[r.question_id] = u(rng);
    for (auto _ : state) benchmark::DoNotOptimize(pairwise_accuracy(predicted, data.runs, 10).accuracy);
}
BENCHMARK(BM_PairwiseAccuracy)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
