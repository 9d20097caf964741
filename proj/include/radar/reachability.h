#ifndef RADAR_REACHABILITY_H
#define RADAR_REACHABILITY_H

#include "grounding.h"

#include <limits>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace radar {
enum class ActionStatus {Applicable, BlockedPropositional, BlockedResource};

const char *to_string(ActionStatus status);

struct FailedNumeric {
    std::string fluent;
    Quantity required;
    Quantity available;
    bool operator==(const FailedNumeric &) const = default;
};

struct ActionClassification {
    std::string action_id;
    ActionStatus status = ActionStatus::Applicable;
    std::vector<std::string> missing_pre;
    std::vector<std::string> violated_neg_pre;
    std::vector<FailedNumeric> failed_numeric;
    bool operator==(const ActionClassification &) const = default;
};

// Propositional blocking dominates: an action with a missing atom is
// BlockedPropositional even when a numeric precondition also fails.
ActionClassification applicable(const State &state, const GroundAction &action);

// Throws NotApplicable (details carry the classification) or
// NegativeResource when a decrease drives a fluent below zero.
State apply(const State &state, const GroundAction &action);

enum class ResourcePolicy {IgnoreNumeric, EnforceNumericStatic};

const char *to_string(ResourcePolicy policy);

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Optimistic fluent value under the monotone relaxation.
struct FluentBound {
    bool unbounded = false;
    Quantity value;
    bool covers(const Quantity &required) const {return unbounded || value >= required;}
    bool operator==(const FluentBound &) const = default;
};

struct RelaxedPlanningGraph {
    ResourcePolicy policy = ResourcePolicy::IgnoreNumeric;
    // Only finite levels are stored.
    std::map<std::string, int> fact_level;
    std::map<std::string, int> action_level;
    // Number of fact layers built before the fixpoint.
    int levels = 0;
    // Final fluent bounds (EnforceNumericStatic only).
    std::map<std::string, FluentBound> fluent_bounds;

    bool operator==(const RelaxedPlanningGraph &) const = default;

    int fact(const std::string &atom) const;
    int action(const std::string &id) const;
    // Minimum level over the atoms, kUnreachable for an empty set.
    int min_level(const AtomSet &atoms) const;
    bool reachable(const std::string &atom) const {return fact(atom) != kUnreachable;}
};

/*
  Delete-relaxation fixpoint. Negative preconditions count as satisfied.
  Under EnforceNumericStatic an action participates once its numeric
  preconditions hold against the state's fluents raised by every increase
  (unbounded) and assignment of the actions reached so far; decreases
  are ignored.
*/
RelaxedPlanningGraph build_rpg(const State &state, std::span<const GroundAction> actions,
                               ResourcePolicy policy);

// Actions with level below the target's level that add a target atom.
// Throws TargetUnreachable or TargetInitiallyTrue.
std::vector<const GroundAction *> first_achievers(const RelaxedPlanningGraph &rpg,
                                                  std::span<const GroundAction> actions,
                                                  const AtomSet &target);

/*
  Reusable relaxed exploration over a fixed state and action list. Atoms
  are interned once so that repeated explorations (landmark verification
  excludes a different action set each time) stay cheap.
*/
class RelaxedExplorer {
    std::span<const GroundAction> actions;
    std::vector<std::string> atom_names;
    std::unordered_map<std::string, int> atom_ids;
    std::vector<std::vector<int>> pre;
    std::vector<std::vector<int>> add;
    std::vector<int> initial;
    State state;

    int intern(const std::string &atom);

public:
    struct Result {
        std::vector<int> fact_level;
        std::vector<int> action_level;
        int levels = 0;
        std::map<std::string, FluentBound> bounds;
    };

    RelaxedExplorer(const State &state, std::span<const GroundAction> actions);

    // Actions flagged in `disabled` never participate.
    Result explore(ResourcePolicy policy, const std::vector<bool> *disabled = nullptr) const;
    RelaxedPlanningGraph graph(const Result &result, ResourcePolicy policy) const;

    // -1 for atoms mentioned by neither the state nor any action.
    int atom_id(const std::string &atom) const;
    const std::vector<int> &adds(std::size_t action) const {return add[action];}
    std::size_t num_actions() const {return actions.size();}
};
}

#endif
