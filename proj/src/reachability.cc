#include "radar/reachability.h"

#include "radar/errors.h"
#include "radar/json_io.h"

#include <algorithm>

using namespace std;

namespace radar {
using std::to_string;

const char *to_string(ActionStatus status) {
    switch (status) {
    case ActionStatus::Applicable: return "applicable";
    case ActionStatus::BlockedPropositional: return "blocked-propositional";
    case ActionStatus::BlockedResource: return "blocked-resource";
    }
    return "?";
}

const char *to_string(ResourcePolicy policy) {
    return policy == ResourcePolicy::IgnoreNumeric ? "ignore-numeric" : "enforce-numeric-static";
}

ActionClassification applicable(const State &state, const GroundAction &action) {
    ActionClassification result;
    result.action_id = action.id;
    for (const string &p : action.pre)
        if (!state.holds(p))
            result.missing_pre.push_back(p);
    for (const string &p : action.neg_pre)
        if (state.holds(p))
            result.violated_neg_pre.push_back(p);
    for (const NumericCondition &c : action.numeric_pre) {
        Quantity available = state.fluent(c.fluent);
        if (available < c.required)
            result.failed_numeric.push_back({c.fluent, c.required, available});
    }
    if (!result.missing_pre.empty() || !result.violated_neg_pre.empty())
        result.status = ActionStatus::BlockedPropositional;
    else if (!result.failed_numeric.empty())
        result.status = ActionStatus::BlockedResource;
    return result;
}

State apply(const State &state, const GroundAction &action) {
    ActionClassification c = applicable(state, action);
    if (c.status != ActionStatus::Applicable)
        throw NotApplicable(action.id + " is not applicable (" + to_string(c.status) + ")",
                            to_json(c));
    State next = state;
    for (const string &d : action.del)
        next.atoms.erase(d);
    for (const string &a : action.add)
        next.atoms.insert(a);
    for (const NumericEffect &e : action.numeric_eff) {
        Quantity value = next.fluent(e.fluent);
        switch (e.op) {
        case NumericOp::Increase: value += e.amount; break;
        case NumericOp::Decrease: value -= e.amount; break;
        case NumericOp::Assign: value = e.amount; break;
        }
        if (value < 0)
            throw NegativeResource(action.id + " drives " + e.fluent + " below zero",
                                   {{"action", action.id}, {"fluent", e.fluent},
                                    {"value", format_quantity(value)}});
        next.fluents[e.fluent] = value;
    }
    return next;
}

int RelaxedPlanningGraph::fact(const string &atom) const {
    auto it = fact_level.find(atom);
    return it == fact_level.end() ? kUnreachable : it->second;
}

int RelaxedPlanningGraph::action(const string &id) const {
    auto it = action_level.find(id);
    return it == action_level.end() ? kUnreachable : it->second;
}

int RelaxedPlanningGraph::min_level(const AtomSet &atoms) const {
    int best = kUnreachable;
    for (const string &a : atoms)
        best = min(best, fact(a));
    return best;
}

int RelaxedExplorer::intern(const string &atom) {
    auto [it, inserted] = atom_ids.emplace(atom, static_cast<int>(atom_names.size()));
    if (inserted)
        atom_names.push_back(atom);
    return it->second;
}

RelaxedExplorer::RelaxedExplorer(const State &state, span<const GroundAction> actions)
    : actions(actions), state(state) {
    for (const string &a : state.atoms)
        initial.push_back(intern(a));
    pre.reserve(actions.size());
    add.reserve(actions.size());
    for (const GroundAction &a : actions) {
        vector<int> p;
        for (const string &atom : a.pre)
            p.push_back(intern(atom));
        pre.push_back(std::move(p));
        vector<int> e;
        for (const string &atom : a.add)
            e.push_back(intern(atom));
        add.push_back(std::move(e));
    }
}

int RelaxedExplorer::atom_id(const string &atom) const {
    auto it = atom_ids.find(atom);
    return it == atom_ids.end() ? -1 : it->second;
}

RelaxedExplorer::Result RelaxedExplorer::explore(ResourcePolicy policy,
                                                 const vector<bool> *disabled) const {
    Result r;
    r.fact_level.assign(atom_names.size(), kUnreachable);
    r.action_level.assign(actions.size(), kUnreachable);
    for (int a : initial)
        r.fact_level[a] = 0;

    const bool enforce = policy == ResourcePolicy::EnforceNumericStatic;
    if (enforce) {
        for (const auto &[name, value] : state.fluents)
            r.bounds[name] = {false, value};
    }
    auto bound_of = [&](const string &fluent) {
        auto it = r.bounds.find(fluent);
        return it == r.bounds.end() ? FluentBound{false, Quantity(0)} : it->second;
    };

    vector<size_t> pending;
    for (size_t i = 0; i < actions.size(); ++i)
        if (!disabled || !(*disabled)[i])
            pending.push_back(i);

    int level = 0;
    while (true) {
        vector<size_t> fired;
        vector<size_t> waiting;
        for (size_t i : pending) {
            bool ready = all_of(pre[i].begin(), pre[i].end(),
                                [&](int p) {return r.fact_level[p] <= level;});
            if (ready && enforce) {
                for (const NumericCondition &c : actions[i].numeric_pre)
                    if (!bound_of(c.fluent).covers(c.required))
                        ready = false;
            }
            if (ready)
                fired.push_back(i);
            else
                waiting.push_back(i);
        }
        if (fired.empty())
            break;
        bool changed = false;
        for (size_t i : fired) {
            r.action_level[i] = level;
            for (int a : add[i]) {
                if (r.fact_level[a] == kUnreachable) {
                    r.fact_level[a] = level + 1;
                    changed = true;
                }
            }
            if (!enforce)
                continue;
            for (const NumericEffect &e : actions[i].numeric_eff) {
                FluentBound b = bound_of(e.fluent);
                if (b.unbounded)
                    continue;
                if (e.op == NumericOp::Increase && e.amount > 0) {
                    b.unbounded = true;
                    changed = true;
                } else if (e.op == NumericOp::Assign && e.amount > b.value) {
                    b.value = e.amount;
                    changed = true;
                }
                r.bounds[e.fluent] = b;
            }
        }
        pending = std::move(waiting);
        ++level;
        // Waiting actions already saw every fact and bound.
        if (!changed)
            break;
    }
    int max_fact = 0;
    for (int l : r.fact_level)
        if (l != kUnreachable)
            max_fact = max(max_fact, l);
    r.levels = max_fact + 1;
    return r;
}

RelaxedPlanningGraph RelaxedExplorer::graph(const Result &result, ResourcePolicy policy) const {
    RelaxedPlanningGraph rpg;
    rpg.policy = policy;
    rpg.levels = result.levels;
    for (size_t i = 0; i < atom_names.size(); ++i)
        if (result.fact_level[i] != kUnreachable)
            rpg.fact_level[atom_names[i]] = result.fact_level[i];
    for (size_t i = 0; i < actions.size(); ++i)
        if (result.action_level[i] != kUnreachable)
            rpg.action_level[actions[i].id] = result.action_level[i];
    if (policy == ResourcePolicy::EnforceNumericStatic)
        rpg.fluent_bounds = result.bounds;
    return rpg;
}

RelaxedPlanningGraph build_rpg(const State &state, span<const GroundAction> actions,
                               ResourcePolicy policy) {
    RelaxedExplorer explorer(state, actions);
    return explorer.graph(explorer.explore(policy), policy);
}

vector<const GroundAction *> first_achievers(const RelaxedPlanningGraph &rpg,
                                             span<const GroundAction> actions,
                                             const AtomSet &target) {
    int level = rpg.min_level(target);
    if (level == kUnreachable)
        throw TargetUnreachable("target is unreachable in the relaxed planning graph");
    if (level == 0)
        throw TargetInitiallyTrue("target already holds in the evaluated state");
    vector<const GroundAction *> result;
    for (const GroundAction &a : actions) {
        if (rpg.action(a.id) >= level)
            continue;
        bool adds = any_of(a.add.begin(), a.add.end(),
                           [&](const string &atom) {return target.count(atom) != 0;});
        if (adds)
            result.push_back(&a);
    }
    return result;
}
}
