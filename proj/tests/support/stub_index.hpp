#pragma once

#include "hopqpp/corpus_index.hpp"

#include <map>
#include <string>
#include <vector>

namespace testing_support {

/// Corpus of `num_docs` documents where phrase p appears in exactly counts[p] of them.
/// Phrases are separated by document-unique tokens so no unintended n-gram spans two phrases.
inline std::vector<hopqpp::Document> stub_corpus(const std::map<std::string, std::size_t>& counts,
                                                 std::size_t num_docs)
{
    std::vector<hopqpp::Document> docs;
    for (std::size_t i = 0; i < num_docs; ++i) {
        std::string text = "pad" + std::to_string(i);
        std::size_t slot = 0;
        for (const auto& [phrase, count] : counts) {
            if (i < count) {
                text += " " + phrase + " sep" + std::to_string(i) + "x" + std::to_string(slot++);
            }
        }
        docs.push_back({"doc" + std::to_string(i), "", text});
    }
    return docs;
}

inline hopqpp::DfIndex stub_index(const std::map<std::string, std::size_t>& counts,
                                  std::size_t num_docs)
{
    auto docs = stub_corpus(counts, num_docs);
    return hopqpp::build_index(docs);
}

}  // namespace testing_support
