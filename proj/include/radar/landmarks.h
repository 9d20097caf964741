#ifndef RADAR_LANDMARKS_H
#define RADAR_LANDMARKS_H

#include "reachability.h"

#include <span>
#include <string>
#include <vector>

namespace radar {
enum class LandmarkOrigin {Goal, Derived};

const char *to_string(LandmarkOrigin origin);

// A fact (one disjunct) or disjunctive landmark. All disjuncts of a
// disjunctive landmark share one predicate symbol.
struct Landmark {
    AtomSet disjuncts;
    LandmarkOrigin origin = LandmarkOrigin::Derived;
    bool verified = false;
    // Minimum relaxed level of the disjuncts in the extraction state.
    int min_level = kUnreachable;

    bool operator==(const Landmark &) const = default;
    bool disjunctive() const {return disjuncts.size() > 1;}
    // "a" or "a | b"
    std::string label() const;
};

enum class OrderingKind {GreedyNecessary, Natural};

const char *to_string(OrderingKind kind);

struct LandmarkOrdering {
    std::size_t from = 0;
    std::size_t to = 0;
    OrderingKind kind = OrderingKind::Natural;
    bool operator==(const LandmarkOrdering &) const = default;
};

struct LandmarkGraph {
    // Sorted by min level, then label.
    std::vector<Landmark> nodes;
    // Sorted by (from, to); at most one edge per pair.
    std::vector<LandmarkOrdering> orders;
    // Goal atoms with relaxed level infinity (extraction's GoalUnreachable).
    AtomSet unreachable_goals;
    // The deadline expired before the backchaining queue emptied.
    bool partial = false;

    bool operator==(const LandmarkGraph &) const = default;
    bool goal_unreachable() const {return !unreachable_goals.empty();}
};

struct ExtractionOptions {
    std::size_t disjunction_cap = 4;
    Deadline deadline;
};

LandmarkGraph extract_landmarks(const State &state, const AtomSet &goal,
                                std::span<const GroundAction> actions,
                                const ExtractionOptions &options = {});

// True iff removing every action that adds a candidate atom leaves some
// relaxed-reachable goal atom unreachable. Sound: accepted candidates are
// landmarks.
bool verify_landmark(const AtomSet &candidate, const State &state, const AtomSet &goal,
                     std::span<const GroundAction> actions);

enum class LandmarkState {Achieved, RequiredReachable, RequiredResourceBlocked,
                          RequiredUnreachable};

const char *to_string(LandmarkState state);

struct BlockedAchiever {
    std::string disjunct;
    std::string action_id;
    // Checked against the optimistic fluent bounds of the numeric relaxation.
    std::vector<FailedNumeric> failed;
    bool operator==(const BlockedAchiever &) const = default;
};

struct LandmarkStatus {
    std::size_t node = 0;
    LandmarkState status = LandmarkState::RequiredReachable;
    // Filled for RequiredResourceBlocked.
    std::vector<BlockedAchiever> blocked_achievers;
    bool operator==(const LandmarkStatus &) const = default;
};

/*
  Derived landmarks count as achieved once a disjunct held anywhere in the
  trace (or the current state). Goal landmarks must hold in the current
  state.
*/
std::vector<LandmarkStatus> landmark_status(const LandmarkGraph &graph,
                                            std::span<const State> trace,
                                            const State &current,
                                            std::span<const GroundAction> actions);
}

#endif
