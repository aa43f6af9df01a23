#pragma once

#include "hopqpp/corpus_index.hpp"
#include "hopqpp/dataset.hpp"
#include "hopqpp/evaluation.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace hopqpp {

/// mt19937_64 with hand-rolled draws so output is identical on every standard library.
class PortableRng {
  public:
    explicit PortableRng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next() { return m_engine(); }
    /// Uniform in [0, 1).
    double uniform();
    /// Uniform integer in [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
    double normal();

  private:
    std::mt19937_64 m_engine;
    bool m_has_spare = false;
    double m_spare = 0.0;
};

struct SynthConfig {
    std::uint64_t seed = 7;
    std::size_t questions = 1000;
    /// Share of bridge questions; the rest are comparison questions.
    double bridge_fraction = 0.5;
    /// Planted-entity document counts are log-uniform in [1, max].
    std::uint64_t bridge_max_df = 100;
    std::uint64_t comparison_max_df = 30;
    /// Share of bridge questions that carry a rare non-entity word.
    double distractor_fraction = 0.5;
    std::uint64_t distractor_max_df = 5;
    std::size_t filler_docs = 2000;
    /// Standard deviation of the log-normal factor on simulated cost; 0 gives cost = round(1/p_true).
    double noise = 0.5;
    std::size_t k = 200;
    double p_hop2 = 0.125;
};

struct SynthTruth {
    std::string question_id;
    PathType type = PathType::Bridge;
    double p_true = 0.0;
    std::vector<std::string> entities;
    std::vector<std::uint64_t> entity_df;
    /// Interleaved rank of the last gold document as planted; may exceed the run length.
    std::uint64_t cost = 0;
};

struct SynthData {
    std::vector<Document> corpus;
    std::vector<QuestionRecord> questions;
    std::vector<RetrievalRun> runs;
    std::vector<SynthTruth> truth;
};

SynthData generate_synthetic(const SynthConfig& cfg);

void write_truth(std::ostream& out, const std::vector<SynthTruth>& truth);

}  // namespace hopqpp
