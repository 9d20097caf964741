#ifndef RADAR_GROUNDING_H
#define RADAR_GROUNDING_H

#include "pddl.h"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace radar {
using AtomSet = std::set<std::string>;

// fluent >= required
struct NumericCondition {
    std::string fluent;
    Quantity required;
    bool operator==(const NumericCondition &) const = default;
};

struct NumericEffect {
    std::string fluent;
    NumericOp op;
    Quantity amount;
    bool operator==(const NumericEffect &) const = default;
};

/*
  A schema instantiated with objects. Atoms and fluents are canonical
  strings ("pred(a,b)"). Atom lists are sorted and duplicate free, and
  add and del are disjoint (an atom both added and deleted is added).
*/
struct GroundAction {
    std::string id;
    std::string schema;
    std::vector<std::string> args;
    std::vector<std::string> pre;
    std::vector<std::string> neg_pre;
    std::vector<NumericCondition> numeric_pre;
    std::vector<std::string> add;
    std::vector<std::string> del;
    std::vector<NumericEffect> numeric_eff;

    bool operator==(const GroundAction &) const = default;
};

struct State {
    AtomSet atoms;
    std::map<std::string, Quantity> fluents;

    bool operator==(const State &) const = default;

    bool holds(const std::string &atom) const {return atoms.count(atom) != 0;}
    // Fluents that were never initialised read as zero.
    Quantity fluent(const std::string &name) const;
};

State initial_state(const ProblemInstance &problem);

// All type-consistent instantiations, sorted by id, with actions whose
// static preconditions are false in the initial atoms removed.
std::vector<GroundAction> ground(const DomainModel &domain, const ProblemInstance &problem);

// Instantiates one action from its id without static pruning. Throws
// SemanticError for unknown schemas, objects or type mismatches, and
// when an equality constraint rules the binding out.
GroundAction instantiate(const DomainModel &domain, const ProblemInstance &problem,
                         std::string_view action_id);

// Same problem with the given state as its initial state and goal.
ProblemInstance with_context(const ProblemInstance &problem, const State &state,
                             const AtomSet &goal);
}

#endif
