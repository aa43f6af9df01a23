#pragma once

#include "hopqpp/evaluation.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hopqpp {

/// Retrieval budget per difficulty class: a question of class c gets
/// multiplier(c) * base_k documents.
struct BudgetPolicy {
    std::uint64_t easy = 1;
    std::uint64_t hard = 4;
    std::uint64_t extra_hard = 5;
    std::uint64_t base_k = 5;

    /// Throws InvalidArgument unless all values are >= 1 and easy <= hard <= extra_hard.
    void validate() const;
    [[nodiscard]] std::uint64_t multiplier(DifficultyClass c) const noexcept;
};

std::uint64_t plan_budget(DifficultyClass c, const BudgetPolicy& policy);

struct PlannedQuestion {
    std::string question_id;
    DifficultyClass difficulty = DifficultyClass::Easy;
    std::uint64_t budget = 0;
};

struct BudgetPlan {
    std::vector<PlannedQuestion> questions;
    /// Documents requested by the adaptive policy.
    std::uint64_t total = 0;
    /// Documents a constant retriever with the same base_k would request.
    std::uint64_t constant_total = 0;
};

BudgetPlan plan_batch(std::span<const ClassAssignment> classes, const BudgetPolicy& policy);

}  // namespace hopqpp
