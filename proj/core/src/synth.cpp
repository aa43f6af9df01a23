#include "hopqpp/synth.hpp"

#include "hopqpp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <unordered_set>

namespace hopqpp {

double PortableRng::uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

std::uint64_t PortableRng::uniform_int(std::uint64_t lo, std::uint64_t hi)
{
    if (hi <= lo) {
        return lo;
    }
    std::uint64_t span = hi - lo + 1;
    if (span == 0) {
        return m_engine();
    }
    // rejection keeps the draw unbiased
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = m_engine();
    } while (x >= limit);
    return lo + x % span;
}

double PortableRng::normal()
{
    if (m_has_spare) {
        m_has_spare = false;
        return m_spare;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    m_spare = r * std::sin(theta);
    m_has_spare = true;
    return r * std::cos(theta);
}

namespace {

constexpr std::string_view kBridgeTemplates[][2] = {
    {"What year was the ", "person associated with "},
    {"Which city hosted the ", "team founded by "},
};

const std::set<std::string>& reserved_words()
{
    static const std::set<std::string> words = {
        "what", "year", "was", "the", "person", "associated", "with", "born", "which", "city",
        "hosted", "team", "founded", "by", "were", "and", "from", "same", "region", "who",
        "first", "or", "both", "different", "more", "older", "younger", "longer", "earlier",
        "later", "yes", "no", "a", "an"};
    return words;
}

class WordMaker {
  public:
    explicit WordMaker(PortableRng& rng) : m_rng(rng) {}

    std::string make(std::size_t syllables)
    {
        static constexpr std::string_view consonants = "bdfgklmnprstvz";
        static constexpr std::string_view vowels = "aeiou";
        for (;;) {
            std::string w;
            for (std::size_t i = 0; i < syllables; ++i) {
                w.push_back(consonants[m_rng.uniform_int(0, consonants.size() - 1)]);
                w.push_back(vowels[m_rng.uniform_int(0, vowels.size() - 1)]);
            }
            if (m_rng.uniform() < 0.3) {
                w.push_back("nrxl"[m_rng.uniform_int(0, 3)]);
            }
            if (reserved_words().count(w) == 0 && m_used.insert(w).second) {
                return w;
            }
        }
    }

  private:
    PortableRng& m_rng;
    std::unordered_set<std::string> m_used;
};

std::string capitalise(std::string w)
{
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') {
        w[0] = static_cast<char>(w[0] - 'a' + 'A');
    }
    return w;
}

template <typename T>
void shuffle(std::vector<T>& v, PortableRng& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.uniform_int(0, i - 1)]);
    }
}

std::uint64_t log_uniform_df(PortableRng& rng, std::uint64_t max_df)
{
    double x = std::exp(rng.uniform() * std::log(static_cast<double>(max_df)));
    return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::llround(x)), 1, max_df);
}

class CorpusWriter {
  public:
    CorpusWriter(PortableRng& rng, std::vector<std::string> filler)
        : m_rng(rng), m_filler(std::move(filler))
    {}

    /// Filler text with `plant` inserted at a random position.
    std::string add(const std::string& plant)
    {
        std::size_t len = m_rng.uniform_int(12, 25);
        std::size_t at = m_rng.uniform_int(0, len);
        std::string text;
        for (std::size_t i = 0; i <= len; ++i) {
            if (i == at && !plant.empty()) {
                if (!text.empty()) text.push_back(' ');
                text += plant;
            }
            if (i == len) break;
            if (!text.empty()) text.push_back(' ');
            text += m_filler[m_rng.uniform_int(0, m_filler.size() - 1)];
        }
        char id[32];
        std::snprintf(id, sizeof(id), "d%07zu", corpus.size());
        corpus.push_back({id, "", text});
        return corpus.back().doc_id;
    }

    std::vector<Document> corpus;

  private:
    PortableRng& m_rng;
    std::vector<std::string> m_filler;
};

struct Entity {
    std::string name;
    std::uint64_t df = 0;
    std::string first_doc;
};

}  // namespace

SynthData generate_synthetic(const SynthConfig& cfg)
{
    if (cfg.questions == 0 || cfg.k == 0 || cfg.bridge_max_df == 0 || cfg.comparison_max_df == 0 ||
        cfg.noise < 0.0 || !(cfg.bridge_fraction >= 0.0 && cfg.bridge_fraction <= 1.0) ||
        !(cfg.p_hop2 > 0.0 && cfg.p_hop2 <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "invalid synthetic generator configuration");
    }
    PortableRng rng(cfg.seed);
    WordMaker words(rng);

    std::size_t entities_needed = cfg.questions * 2;
    std::size_t pool = std::max<std::size_t>(
        40, static_cast<std::size_t>(std::ceil(std::sqrt(2.5 * static_cast<double>(entities_needed)))));
    std::vector<std::string> firsts, lasts, filler;
    for (std::size_t i = 0; i < pool; ++i) firsts.push_back(capitalise(words.make(3)));
    for (std::size_t i = 0; i < pool; ++i) lasts.push_back(capitalise(words.make(3)));
    for (std::size_t i = 0; i < 2000; ++i) filler.push_back(words.make(2 + rng.uniform_int(0, 1)));

    std::vector<std::pair<std::size_t, std::size_t>> names;
    for (std::size_t i = 0; i < pool; ++i)
        for (std::size_t j = 0; j < pool; ++j) names.emplace_back(i, j);
    shuffle(names, rng);
    std::size_t next_name = 0;

    CorpusWriter writer(rng, filler);
    auto plant_entity = [&](std::uint64_t max_df) {
        auto [i, j] = names[next_name++];
        Entity e{firsts[i] + " " + lasts[j], log_uniform_df(rng, max_df), {}};
        for (std::uint64_t d = 0; d < e.df; ++d) {
            auto id = writer.add(e.name);
            if (d == 0) e.first_doc = id;
        }
        return e;
    };

    SynthData out;
    std::size_t width = std::to_string(cfg.questions).size();
    for (std::size_t qi = 0; qi < cfg.questions; ++qi) {
        std::string num = std::to_string(qi);
        QuestionRecord q;
        q.question_id = "synth-" + std::string(width - num.size(), '0') + num;
        SynthTruth truth;
        truth.question_id = q.question_id;
        std::vector<std::string> gold;

        if (rng.uniform() < cfg.bridge_fraction) {
            auto e = plant_entity(cfg.bridge_max_df);
            auto which = rng.uniform_int(0, 1);
            const auto& tmpl = kBridgeTemplates[which];
            std::string distractor;
            if (rng.uniform() < cfg.distractor_fraction) {
                distractor = words.make(3);
                auto df = rng.uniform_int(1, std::max<std::uint64_t>(1, cfg.distractor_max_df));
                for (std::uint64_t d = 0; d < df; ++d) writer.add(distractor);
                distractor += ' ';
            }
            q.question = std::string(tmpl[0]) + distractor + std::string(tmpl[1]) + e.name +
                         (which == 0 ? " born?" : "?");
            auto year = std::to_string(1900 + rng.uniform_int(0, 99));
            auto hop2 = writer.add(year);
            q.answer = year;
            q.dataset_type = PathType::Bridge;
            gold = {e.first_doc, hop2};
            truth.type = PathType::Bridge;
            truth.p_true = (1.0 / static_cast<double>(e.df)) * cfg.p_hop2;
            truth.entities = {e.name};
            truth.entity_df = {e.df};
        } else {
            auto a = plant_entity(cfg.comparison_max_df);
            auto b = plant_entity(cfg.comparison_max_df);
            if (rng.uniform() < 0.5) {
                q.question = "Were " + a.name + " and " + b.name + " from the same region?";
                q.answer = rng.uniform() < 0.5 ? "yes" : "no";
            } else {
                q.question = "Who was born first, " + a.name + " or " + b.name + "?";
                q.answer = rng.uniform() < 0.5 ? a.name : b.name;
            }
            q.dataset_type = PathType::Comparison;
            // the less specific entity is the one found last
            gold = a.df >= b.df ? std::vector<std::string>{b.first_doc, a.first_doc}
                                : std::vector<std::string>{a.first_doc, b.first_doc};
            truth.type = PathType::Comparison;
            truth.p_true = (1.0 / static_cast<double>(a.df)) * (1.0 / static_cast<double>(b.df));
            truth.entities = {a.name, b.name};
            truth.entity_df = {a.df, b.df};
        }
        q.gold_support = gold;

        double factor = cfg.noise > 0.0 ? std::exp(cfg.noise * rng.normal()) : 1.0;
        double raw = std::min(factor / truth.p_true, 1e12);
        truth.cost = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(raw)));

        RetrievalRun run;
        run.question_id = q.question_id;
        run.gold_support = gold;
        run.hops.assign(2, std::vector<std::string>(cfg.k));
        std::uint64_t c = truth.cost;
        std::size_t last_hop = c % 2 == 1 ? 0 : 1;
        std::uint64_t last_slot = c % 2 == 1 ? (c + 1) / 2 : c / 2;
        std::uint64_t other_max = c % 2 == 1 ? (c - 1) / 2 : c / 2;
        std::uint64_t other_slot = rng.uniform_int(1, other_max);
        if (last_slot <= cfg.k) {
            run.hops[last_hop][last_slot - 1] = gold[1];
        }
        if (other_slot <= cfg.k) {
            run.hops[1 - last_hop][other_slot - 1] = gold[0];
        }
        out.runs.push_back(std::move(run));
        out.questions.push_back(std::move(q));
        out.truth.push_back(std::move(truth));
    }

    for (std::size_t i = 0; i < cfg.filler_docs; ++i) writer.add("");

    // non-gold slots get distinct corpus documents so interleaving never drops one
    const auto& corpus = writer.corpus;
    for (auto& run : out.runs) {
        std::unordered_set<std::string> taken(run.gold_support.begin(), run.gold_support.end());
        std::size_t need = 2 * cfg.k;
        if (corpus.size() < need + 2) {
            throw Error(ErrorKind::InvalidArgument, "synthetic corpus too small for the requested k");
        }
        for (auto& hop : run.hops) {
            for (auto& slot : hop) {
                if (!slot.empty()) continue;
                for (;;) {
                    const auto& id = corpus[rng.uniform_int(0, corpus.size() - 1)].doc_id;
                    if (taken.insert(id).second) {
                        slot = id;
                        break;
                    }
                }
            }
        }
    }
    out.corpus = std::move(writer.corpus);
    return out;
}

void write_truth(std::ostream& out, const std::vector<SynthTruth>& truth)
{
    for (const auto& t : truth) {
        nlohmann::ordered_json row;
        row["question_id"] = t.question_id;
        row["type"] = std::string(to_string(t.type));
        row["p_true"] = t.p_true;
        row["entities"] = t.entities;
        row["entity_df"] = t.entity_df;
        row["cost"] = t.cost;
        out << row.dump() << '\n';
    }
}

}  // namespace hopqpp
