#include "numeric_oracle.h"

#include <algorithm>
#include <deque>
#include <set>

using namespace std;

namespace radar::test {
namespace {
using Key = pair<set<string>, map<string, Quantity>>;

Quantity value_of(const map<string, Quantity> &fluents, const string &name) {
    auto it = fluents.find(name);
    return it == fluents.end() ? Quantity(0) : it->second;
}

bool can_fire(const Key &s, const GroundAction &a) {
    for (const string &p : a.pre) {
        if (!s.first.count(p))
            return false;
    }
    for (const string &p : a.neg_pre) {
        if (s.first.count(p))
            return false;
    }
    for (const NumericCondition &c : a.numeric_pre) {
        if (value_of(s.second, c.fluent) < c.required)
            return false;
    }
    return true;
}

Key fire(const Key &s, const GroundAction &a) {
    Key next = s;
    for (const string &d : a.del)
        next.first.erase(d);
    for (const string &d : a.add)
        next.first.insert(d);
    for (const NumericEffect &e : a.numeric_eff) {
        Quantity v = value_of(next.second, e.fluent);
        if (e.op == NumericOp::Increase)
            v += e.amount;
        else if (e.op == NumericOp::Decrease)
            v -= e.amount;
        else
            v = e.amount;
        next.second[e.fluent] = v;
    }
    return next;
}
}

optional<int> shortest_plan(const State &start, const AtomSet &goal,
                            span<const GroundAction> actions, bool &complete,
                            const AtomSet &avoid, size_t cap) {
    complete = true;
    auto banned = [&](const Key &s) {
        return any_of(avoid.begin(), avoid.end(), [&](const string &a) {return s.first.count(a);});
    };
    Key init{set<string>(start.atoms.begin(), start.atoms.end()), start.fluents};
    if (banned(init))
        return nullopt;
    deque<pair<Key, int>> queue{{init, 0}};
    set<Key> seen{init};
    while (!queue.empty()) {
        auto [state, depth] = queue.front();
        queue.pop_front();
        bool done = true;
        for (const string &g : goal)
            done = done && state.first.count(g);
        if (done)
            return depth;
        for (const GroundAction &a : actions) {
            if (!can_fire(state, a))
                continue;
            Key next = fire(state, a);
            if (banned(next) || !seen.insert(next).second)
                continue;
            if (seen.size() > cap) {
                complete = false;
                return nullopt;
            }
            queue.push_back({move(next), depth + 1});
        }
    }
    return nullopt;
}

vector<GroundAction> without_numeric(span<const GroundAction> actions) {
    vector<GroundAction> out(actions.begin(), actions.end());
    for (GroundAction &a : out)
        a.numeric_pre.clear();
    return out;
}
}
