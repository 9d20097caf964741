#include "radar/landmarks.h"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

using namespace std;

namespace radar {
using std::to_string;

namespace {
string predicate_of(const string &atom) {
    return atom.substr(0, atom.find('('));
}

class LandmarkFactory {
    const State &state;
    span<const GroundAction> actions;
    const ExtractionOptions &options;
    RelaxedExplorer explorer;
    RelaxedPlanningGraph rpg;
    vector<int> relevant_goals;

    vector<Landmark> nodes;
    map<AtomSet, size_t> index;
    set<pair<size_t, size_t>> greedy_edges;
    set<AtomSet> rejected;
    deque<size_t> queue;

public:
    LandmarkFactory(const State &state, const AtomSet &goal, span<const GroundAction> actions,
                    const ExtractionOptions &options)
        : state(state), actions(actions), options(options), explorer(state, actions) {
        rpg = explorer.graph(explorer.explore(ResourcePolicy::IgnoreNumeric),
                             ResourcePolicy::IgnoreNumeric);
        for (const string &g : goal)
            if (rpg.reachable(g))
                relevant_goals.push_back(explorer.atom_id(g));
    }

    const RelaxedPlanningGraph &graph() const {return rpg;}

    vector<bool> achievers_of(const AtomSet &candidate) const {
        vector<bool> disabled(explorer.num_actions(), false);
        vector<int> ids;
        for (const string &a : candidate)
            ids.push_back(explorer.atom_id(a));
        for (size_t i = 0; i < explorer.num_actions(); ++i) {
            const vector<int> &adds = explorer.adds(i);
            disabled[i] = any_of(adds.begin(), adds.end(), [&](int a) {
                return find(ids.begin(), ids.end(), a) != ids.end();
            });
        }
        return disabled;
    }

    bool verify(const AtomSet &candidate) const {
        vector<bool> disabled = achievers_of(candidate);
        RelaxedExplorer::Result r = explorer.explore(ResourcePolicy::IgnoreNumeric, &disabled);
        return any_of(relevant_goals.begin(), relevant_goals.end(),
                      [&](int g) {return r.fact_level[g] == kUnreachable;});
    }

    size_t add_node(AtomSet disjuncts, LandmarkOrigin origin) {
        Landmark lm;
        lm.min_level = rpg.min_level(disjuncts);
        lm.disjuncts = std::move(disjuncts);
        lm.origin = origin;
        lm.verified = true;
        size_t id = nodes.size();
        index[lm.disjuncts] = id;
        nodes.push_back(std::move(lm));
        queue.push_back(id);
        return id;
    }

    void consider(const AtomSet &candidate, size_t parent) {
        auto it = index.find(candidate);
        if (it != index.end()) {
            if (it->second != parent)
                greedy_edges.emplace(it->second, parent);
            return;
        }
        if (rejected.count(candidate))
            return;
        if (!verify(candidate)) {
            rejected.insert(candidate);
            return;
        }
        size_t id = add_node(candidate, LandmarkOrigin::Derived);
        greedy_edges.emplace(id, parent);
    }

    void expand(size_t id) {
        AtomSet target = nodes[id].disjuncts;
        int level = rpg.min_level(target);
        if (level == kUnreachable || level == 0)
            return;
        vector<const GroundAction *> achievers = first_achievers(rpg, actions, target);
        if (achievers.empty())
            return;

        vector<string> shared = achievers[0]->pre;
        for (size_t i = 1; i < achievers.size(); ++i) {
            vector<string> next;
            set_intersection(shared.begin(), shared.end(), achievers[i]->pre.begin(),
                             achievers[i]->pre.end(), back_inserter(next));
            shared = std::move(next);
        }
        for (const string &atom : shared)
            if (!state.holds(atom))
                consider({atom}, id);

        // predicate -> (union of matching preconditions, achievers hit)
        map<string, pair<AtomSet, size_t>> by_predicate;
        for (const GroundAction *a : achievers) {
            set<string> seen;
            for (const string &p : a->pre) {
                string pred = predicate_of(p);
                auto &entry = by_predicate[pred];
                entry.first.insert(p);
                if (seen.insert(pred).second)
                    ++entry.second;
            }
        }
        for (const auto &[pred, entry] : by_predicate) {
            const AtomSet &disjuncts = entry.first;
            if (entry.second != achievers.size() || disjuncts.size() < 2 ||
                disjuncts.size() > options.disjunction_cap)
                continue;
            bool trivial = any_of(disjuncts.begin(), disjuncts.end(), [&](const string &a) {
                return state.holds(a) ||
                       binary_search(shared.begin(), shared.end(), a);
            });
            if (!trivial)
                consider(disjuncts, id);
        }
    }

    LandmarkGraph run(const AtomSet &goal) {
        LandmarkGraph result;
        for (const string &g : goal) {
            add_node({g}, LandmarkOrigin::Goal);
            if (!rpg.reachable(g))
                result.unreachable_goals.insert(g);
        }
        while (!queue.empty()) {
            if (options.deadline.expired()) {
                result.partial = true;
                break;
            }
            size_t id = queue.front();
            queue.pop_front();
            expand(id);
        }

        vector<size_t> order(nodes.size());
        iota(order.begin(), order.end(), 0);
        vector<string> labels;
        for (const Landmark &lm : nodes)
            labels.push_back(lm.label());
        sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (nodes[a].min_level != nodes[b].min_level)
                return nodes[a].min_level < nodes[b].min_level;
            return labels[a] < labels[b];
        });
        vector<size_t> position(nodes.size());
        for (size_t i = 0; i < order.size(); ++i) {
            position[order[i]] = i;
            result.nodes.push_back(nodes[order[i]]);
        }

        map<pair<size_t, size_t>, OrderingKind> edges;
        for (const auto &[from, to] : greedy_edges)
            edges[{position[from], position[to]}] = OrderingKind::GreedyNecessary;
        if (!result.partial)
            add_natural_orders(result.nodes, edges);
        for (const auto &[key, kind] : edges)
            result.orders.push_back({key.first, key.second, kind});
        return result;
    }

private:
    // from -> to when every relaxed route to `to` passes `from` first.
    void add_natural_orders(const vector<Landmark> &sorted,
                            map<pair<size_t, size_t>, OrderingKind> &edges) const {
        for (size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i].min_level == 0 || sorted[i].min_level == kUnreachable)
                continue;
            vector<bool> disabled = achievers_of(sorted[i].disjuncts);
            RelaxedExplorer::Result r =
                explorer.explore(ResourcePolicy::IgnoreNumeric, &disabled);
            for (size_t j = 0; j < sorted.size(); ++j) {
                if (sorted[j].min_level <= sorted[i].min_level ||
                    sorted[j].min_level == kUnreachable || edges.count({i, j}))
                    continue;
                bool cut = all_of(sorted[j].disjuncts.begin(), sorted[j].disjuncts.end(),
                                  [&](const string &a) {
                                      int id = explorer.atom_id(a);
                                      return id < 0 || r.fact_level[id] == kUnreachable;
                                  });
                if (cut)
                    edges[{i, j}] = OrderingKind::Natural;
            }
        }
    }
};
}

const char *to_string(LandmarkOrigin origin) {
    return origin == LandmarkOrigin::Goal ? "goal" : "derived";
}

const char *to_string(OrderingKind kind) {
    return kind == OrderingKind::GreedyNecessary ? "greedy-necessary" : "natural";
}

const char *to_string(LandmarkState state) {
    switch (state) {
    case LandmarkState::Achieved: return "achieved";
    case LandmarkState::RequiredReachable: return "required-reachable";
    case LandmarkState::RequiredResourceBlocked: return "required-resource-blocked";
    case LandmarkState::RequiredUnreachable: return "required-unreachable";
    }
    return "?";
}

string Landmark::label() const {
    string result;
    for (const string &d : disjuncts) {
        if (!result.empty())
            result += " | ";
        result += d;
    }
    return result;
}

LandmarkGraph extract_landmarks(const State &state, const AtomSet &goal,
                                span<const GroundAction> actions,
                                const ExtractionOptions &options) {
    return LandmarkFactory(state, goal, actions, options).run(goal);
}

bool verify_landmark(const AtomSet &candidate, const State &state, const AtomSet &goal,
                     span<const GroundAction> actions) {
    ExtractionOptions options;
    return LandmarkFactory(state, goal, actions, options).verify(candidate);
}

vector<LandmarkStatus> landmark_status(const LandmarkGraph &graph, span<const State> trace,
                                       const State &current,
                                       span<const GroundAction> actions) {
    RelaxedExplorer explorer(current, actions);
    RelaxedExplorer::Result relaxed = explorer.explore(ResourcePolicy::IgnoreNumeric);
    RelaxedPlanningGraph ignore = explorer.graph(relaxed, ResourcePolicy::IgnoreNumeric);
    RelaxedPlanningGraph enforce =
        explorer.graph(explorer.explore(ResourcePolicy::EnforceNumericStatic),
                       ResourcePolicy::EnforceNumericStatic);

    auto held_somewhere = [&](const Landmark &lm) {
        auto holds_in = [&](const State &s) {
            return any_of(lm.disjuncts.begin(), lm.disjuncts.end(),
                          [&](const string &d) {return s.holds(d);});
        };
        if (holds_in(current))
            return true;
        if (lm.origin == LandmarkOrigin::Goal)
            return false;
        return any_of(trace.begin(), trace.end(), holds_in);
    };

    auto bound_of = [&](const string &fluent) {
        auto it = enforce.fluent_bounds.find(fluent);
        return it == enforce.fluent_bounds.end() ? FluentBound{} : it->second;
    };

    vector<LandmarkStatus> result;
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const Landmark &lm = graph.nodes[i];
        LandmarkStatus status;
        status.node = i;
        if (held_somewhere(lm)) {
            status.status = LandmarkState::Achieved;
        } else if (ignore.min_level(lm.disjuncts) == kUnreachable) {
            status.status = LandmarkState::RequiredUnreachable;
        } else if (enforce.min_level(lm.disjuncts) == kUnreachable) {
            bool all_blocked = true;
            for (const string &d : lm.disjuncts) {
                if (!ignore.reachable(d))
                    continue;
                for (const GroundAction *a : first_achievers(ignore, actions, {d})) {
                    bool props = all_of(a->pre.begin(), a->pre.end(), [&](const string &p) {
                        return enforce.reachable(p);
                    });
                    BlockedAchiever blocked{d, a->id, {}};
                    for (const NumericCondition &c : a->numeric_pre) {
                        FluentBound b = bound_of(c.fluent);
                        if (!b.covers(c.required))
                            blocked.failed.push_back({c.fluent, c.required, b.value});
                    }
                    if (!props || blocked.failed.empty()) {
                        all_blocked = false;
                        break;
                    }
                    status.blocked_achievers.push_back(std::move(blocked));
                }
                if (!all_blocked)
                    break;
            }
            if (all_blocked && !status.blocked_achievers.empty()) {
                status.status = LandmarkState::RequiredResourceBlocked;
            } else {
                status.status = LandmarkState::RequiredReachable;
                status.blocked_achievers.clear();
            }
        } else {
            status.status = LandmarkState::RequiredReachable;
        }
        result.push_back(std::move(status));
    }
    return result;
}
}
