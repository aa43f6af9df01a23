#include "hopqpp/adaptive_budget.hpp"

#include "hopqpp/error.hpp"

namespace hopqpp {

void BudgetPolicy::validate() const
{
    if (easy < 1 || hard < 1 || extra_hard < 1 || base_k < 1) {
        throw Error(ErrorKind::InvalidArgument, "budget multipliers and base_k must be at least 1");
    }
    if (!(easy <= hard && hard <= extra_hard)) {
        throw Error(ErrorKind::InvalidArgument,
                    "budget multipliers must satisfy easy <= hard <= extra_hard");
    }
}

std::uint64_t BudgetPolicy::multiplier(DifficultyClass c) const noexcept
{
    switch (c) {
    case DifficultyClass::Easy: return easy;
    case DifficultyClass::Hard: return hard;
    case DifficultyClass::ExtraHard: return extra_hard;
    }
    return easy;
}

std::uint64_t plan_budget(DifficultyClass c, const BudgetPolicy& policy)
{
    return policy.multiplier(c) * policy.base_k;
}

BudgetPlan plan_batch(std::span<const ClassAssignment> classes, const BudgetPolicy& policy)
{
    policy.validate();
    BudgetPlan plan;
    plan.questions.reserve(classes.size());
    for (const auto& a : classes) {
        auto budget = plan_budget(a.difficulty, policy);
        plan.questions.push_back({a.question_id, a.difficulty, budget});
        plan.total += budget;
        plan.constant_total += policy.base_k;
    }
    return plan;
}

}  // namespace hopqpp
