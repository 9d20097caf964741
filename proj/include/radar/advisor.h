#ifndef RADAR_ADVISOR_H
#define RADAR_ADVISOR_H

#include "landmarks.h"

#include <json.hpp>

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace radar {
enum class AdvisoryKind {
    GoalUnreachable,
    LandmarkUnreachable,
    ResourceShortfall,
    PlanStepInvalid,
    PlanIncomplete,
    GoalAchieved,
    Info
};

enum class Severity {Alert, Suggestion, Info};

const char *to_string(AdvisoryKind kind);
const char *to_string(Severity severity);
AdvisoryKind advisory_kind_from_string(const std::string &text);
Severity severity_from_string(const std::string &text);

struct Advisory {
    AdvisoryKind kind = AdvisoryKind::Info;
    Severity severity = Severity::Info;
    std::string message;
    nlohmann::json payload = nlohmann::json::object();
    bool operator==(const Advisory &) const = default;
};

enum class StepVerdict {Ok, Invalid, NotEvaluated};

const char *to_string(StepVerdict verdict);

struct PlanValidationReport {
    std::vector<std::string> action_ids;
    std::vector<StepVerdict> steps;
    std::optional<std::size_t> first_invalid;
    // Why the first invalid step failed.
    std::optional<ActionClassification> blocking;
    // Set when execution raised NegativeResource.
    std::optional<std::string> error;
    State end_state;
    bool goal_satisfied = false;

    bool operator==(const PlanValidationReport &) const = default;
    bool valid() const {return !first_invalid.has_value();}
};

PlanValidationReport validate_plan(const State &start, std::span<const GroundAction> plan,
                                   const AtomSet &goal);

struct ShortfallAlternative {
    std::string disjunct;
    std::string action_id;
    std::string fluent;
    Quantity required;
    Quantity available;
    Quantity shortfall;
    bool operator==(const ShortfallAlternative &) const = default;
};

struct ResourceShortfall {
    std::vector<ShortfallAlternative> alternatives;
};

// Per disjunct, the blocked first achiever with the smallest total
// shortfall (ties by action id), one entry per failing fluent.
ResourceShortfall resource_shortfall(const LandmarkStatus &status);

struct AnalysisContext {
    State current;
    // Execution history ending with `current`.
    std::vector<State> trace;
    AtomSet goals;
    // Ground actions for the current state (static pruning applied).
    std::span<const GroundAction> actions;
    // Pending plan steps; their session indices start at plan_offset.
    std::vector<GroundAction> pending_plan;
    std::size_t plan_offset = 0;
    std::size_t disjunction_cap = 4;
    Deadline deadline;
};

// Alerts, then suggestions, then info; within a class by landmark level
// and then lexicographically.
std::vector<Advisory> analyze(const AnalysisContext &context);

enum class SearchStatus {Solved, Unsolvable, Timeout};

const char *to_string(SearchStatus status);

struct SearchResult {
    SearchStatus status = SearchStatus::Unsolvable;
    std::vector<GroundAction> plan;
    std::size_t expanded = 0;
};

/*
  Greedy best-first search over full semantics guided by the number of
  landmarks not yet achieved on the path. Unsolvable is only reported
  after the reachable state space is exhausted (or the goal is relaxed
  unreachable); running out of budget reports Timeout.
*/
SearchResult suggest_actions(const State &state, const AtomSet &goal,
                             std::span<const GroundAction> actions,
                             std::chrono::milliseconds budget);

enum class DispatchPolicy {Block, Warn};
enum class DispatchDecision {Allow, AllowWithWarning, Block};

const char *to_string(DispatchPolicy policy);
const char *to_string(DispatchDecision decision);
DispatchPolicy dispatch_policy_from_string(const std::string &text);

DispatchDecision dispatch_gate(const PlanValidationReport &report, DispatchPolicy policy);
}

#endif
