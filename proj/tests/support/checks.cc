#include "checks.h"

#include "radar/landmarks.h"
#include "radar/reachability.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

using namespace std;

namespace radar::test {
using std::to_string;

namespace {
string tag(const CorpusEntry &entry) {
    return "seed " + to_string(entry.task.seed) + ": ";
}

string predicate_of(const string &atom) {
    return atom.substr(0, atom.find('('));
}

bool acyclic(size_t n, const vector<LandmarkOrdering> &orders) {
    vector<vector<size_t>> out(n);
    vector<int> indegree(n, 0);
    for (const LandmarkOrdering &o : orders) {
        out[o.from].push_back(o.to);
        ++indegree[o.to];
    }
    vector<size_t> ready;
    for (size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0)
            ready.push_back(i);
    }
    size_t done = 0;
    while (!ready.empty()) {
        size_t v = ready.back();
        ready.pop_back();
        ++done;
        for (size_t w : out[v]) {
            if (--indegree[w] == 0)
                ready.push_back(w);
        }
    }
    return done == n;
}
}

void Report::merge(const Report &other) {
    checked += other.checked;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

LibraryTask load(const StripsInstance &task) {
    LibraryTask lib;
    lib.domain = parse_domain(task.domain_text);
    lib.problem = parse_problem(task.problem_text, lib.domain);
    lib.init = initial_state(lib.problem);
    lib.goal = lib.problem.goal;
    lib.actions = ground(lib.domain, lib.problem);
    return lib;
}

vector<CorpusEntry> solvable_corpus(size_t count, uint64_t first_seed, int max_plan) {
    vector<CorpusEntry> corpus;
    for (uint64_t seed = first_seed; corpus.size() < count; ++seed) {
        GeneratorOptions options;
        options.funnel = seed % 2 == 1;
        StripsInstance task = random_instance(seed, options);
        if (task.goal.empty())
            continue;
        Exploration e = explore(task);
        int min_plan = options.funnel ? 1 : 2;
        if (!e.complete || !e.plan_length || *e.plan_length < min_plan ||
            *e.plan_length > max_plan)
            continue;
        corpus.push_back({move(task), move(e)});
    }
    return corpus;
}

vector<CorpusEntry> unsolvable_corpus(size_t count, uint64_t first_seed) {
    vector<CorpusEntry> corpus;
    for (uint64_t seed = first_seed; corpus.size() < count; ++seed) {
        GeneratorOptions options;
        options.funnel = seed % 2 == 1;
        StripsInstance task = random_instance(seed, options);
        if (task.goal.empty())
            continue;
        Exploration e = explore(task);
        if (!e.complete || e.plan_length)
            continue;
        corpus.push_back({move(task), move(e)});
    }
    return corpus;
}

Report check_landmarks(const CorpusEntry &entry) {
    Report report;
    const StripsInstance &task = entry.task;
    LibraryTask lib = load(task);
    LandmarkGraph graph = extract_landmarks(lib.init, lib.goal, lib.actions);
    string where = tag(entry);

    if (graph.partial)
        report.violations.push_back(where + "extraction ran out of time");
    for (const string &g : lib.goal) {
        bool present = any_of(graph.nodes.begin(), graph.nodes.end(), [&](const Landmark &lm) {
            return lm.origin == LandmarkOrigin::Goal && lm.disjuncts == AtomSet{g};
        });
        if (!present)
            report.violations.push_back(where + "goal " + g + " is not a landmark");
    }
    if (!acyclic(graph.nodes.size(), graph.orders))
        report.violations.push_back(where + "landmark orderings are cyclic");

    for (const LandmarkOrdering &o : graph.orders) {
        if (o.kind == OrderingKind::Natural &&
            !(graph.nodes[o.from].min_level < graph.nodes[o.to].min_level))
            report.violations.push_back(where + "natural edge against RPG levels");
    }

    // Explicit enumeration of short plans as a second witness.
    vector<vector<vector<bool>>> plan_runs;
    int bound = min(8, *entry.exploration.plan_length + 1);
    for_each_plan(task, bound, 2000, [&](const vector<int> &plan) {
        plan_runs.push_back(plan_states(task, plan));
    });

    for (const Landmark &lm : graph.nodes) {
        ++report.checked;
        string label = where + "landmark " + lm.label();
        if (lm.disjuncts.empty() || lm.disjuncts.size() > 4)
            report.violations.push_back(label + " has a bad size");
        set<string> preds;
        for (const string &d : lm.disjuncts)
            preds.insert(predicate_of(d));
        if (preds.size() > 1)
            report.violations.push_back(label + " mixes predicates");
        if (!lm.verified && lm.origin != LandmarkOrigin::Goal)
            report.violations.push_back(label + " is unverified");

        vector<int> avoid;
        for (const string &d : lm.disjuncts) {
            int index = task.atom_index(d);
            if (index < 0)
                report.violations.push_back(label + " names unknown atom " + d);
            else
                avoid.push_back(index);
        }
        if (goal_reachable_avoiding(task, avoid))
            report.violations.push_back(label + " is avoided by some plan");
        for (const auto &states : plan_runs) {
            bool passed = any_of(states.begin(), states.end(), [&](const vector<bool> &s) {
                return any_of(avoid.begin(), avoid.end(), [&](int a) {return s[a];});
            });
            if (!passed) {
                report.violations.push_back(label + " is missed by an enumerated plan");
                break;
            }
        }
    }
    return report;
}

Report check_no_false_impossibility(const CorpusEntry &entry) {
    Report report;
    if (!entry.exploration.plan_length)
        return report;
    LibraryTask lib = load(entry.task);
    AnalysisContext context;
    context.current = lib.init;
    context.trace = {lib.init};
    context.goals = lib.goal;
    context.actions = lib.actions;
    ++report.checked;
    for (const Advisory &a : analyze(context)) {
        if (a.kind == AdvisoryKind::GoalUnreachable || a.kind == AdvisoryKind::LandmarkUnreachable)
            report.violations.push_back(tag(entry) + "false alert: " + a.message);
    }
    return report;
}

Report check_rpg(const CorpusEntry &entry) {
    Report report;
    const StripsInstance &task = entry.task;
    const Exploration &e = entry.exploration;
    if (!e.complete)
        return report;
    LibraryTask lib = load(task);
    RelaxedPlanningGraph rpg = build_rpg(lib.init, lib.actions, ResourcePolicy::IgnoreNumeric);
    string where = tag(entry);
    for (size_t i = 0; i < task.atoms.size(); ++i) {
        ++report.checked;
        int level = rpg.fact(task.atoms[i]);
        int depth = e.first_depth[i];
        if (depth >= 0 && level == kUnreachable)
            report.violations.push_back(where + task.atoms[i] + " reached but relaxed unreachable");
        else if (depth >= 0 && level > depth)
            report.violations.push_back(where + task.atoms[i] + " level " + to_string(level) +
                                        " exceeds real depth " + to_string(depth));
    }
    for (const GroundAction &a : lib.actions) {
        int level = rpg.action(a.id);
        int expect = 0;
        for (const string &p : a.pre)
            expect = max(expect, rpg.fact(p));
        if (level != expect)
            report.violations.push_back(where + "action " + a.id + " level mismatch");
    }
    return report;
}

Report check_suggestions(const CorpusEntry &entry) {
    Report report;
    const StripsInstance &task = entry.task;
    LibraryTask lib = load(task);
    SearchResult result = suggest_actions(lib.init, lib.goal, lib.actions, chrono::seconds(20));
    string where = tag(entry);
    ++report.checked;
    if (!entry.exploration.plan_length) {
        if (result.status != SearchStatus::Unsolvable)
            report.violations.push_back(where + "unsolvable task reported " +
                                        to_string(result.status));
        return report;
    }
    if (result.status != SearchStatus::Solved) {
        report.violations.push_back(where + "solvable task reported " + to_string(result.status));
        return report;
    }
    PlanValidationReport validation = validate_plan(lib.init, result.plan, lib.goal);
    if (!validation.valid() || !validation.goal_satisfied)
        report.violations.push_back(where + "suggested plan does not validate");
    // Replay on the oracle's own semantics.
    map<string, int> index;
    for (size_t i = 0; i < task.actions.size(); ++i)
        index[task.actions[i].id] = static_cast<int>(i);
    vector<int> plan;
    for (const GroundAction &a : result.plan) {
        auto it = index.find(a.id);
        if (it == index.end()) {
            report.violations.push_back(where + "suggested unknown action " + a.id);
            return report;
        }
        plan.push_back(it->second);
    }
    vector<vector<bool>> states = plan_states(task, plan);
    if (states.size() != plan.size() + 1 || !is_goal(task, states.back()))
        report.violations.push_back(where + "suggested plan fails under the oracle");
    return report;
}
}
