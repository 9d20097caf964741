#include "radar/advisor.h"

#include "radar/errors.h"
#include "radar/json_io.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

using namespace std;
using nlohmann::json;

namespace radar {
using std::to_string;

namespace {
struct MessageTemplate {
    AdvisoryKind kind;
    string_view text;
};

// Advisory text is presentation only; clients read the payload.
constexpr MessageTemplate kTemplates[] = {
    {AdvisoryKind::GoalUnreachable,
     "The goals cannot be accomplished: {goals} cannot be reached from the current state."},
    {AdvisoryKind::LandmarkUnreachable,
     "Every plan must reach {landmark}, but no available action leads there."},
    {AdvisoryKind::ResourceShortfall, "Resources are needed to reach {landmark}: {alternatives}."},
    {AdvisoryKind::PlanStepInvalid, "Plan step {step} ({action}) cannot be executed: {reason}."},
    {AdvisoryKind::PlanIncomplete, "The plan is valid but leaves {goals} unaccomplished."},
    {AdvisoryKind::GoalAchieved, "{subject} accomplishes all goals."},
    {AdvisoryKind::Info, "{text}"},
};

string join(const vector<string> &items, const string &sep) {
    string out;
    for (size_t i = 0; i < items.size(); ++i)
        out += (i ? sep : "") + items[i];
    return out;
}

vector<string> strings_of(const json &array) {
    vector<string> out;
    for (const json &j : array)
        out.push_back(j.get<string>());
    return out;
}

string reason_text(const json &classification) {
    vector<string> parts;
    for (const json &m : classification.value("missingPre", json::array()))
        parts.push_back("requires " + m.get<string>());
    for (const json &m : classification.value("violatedNegPre", json::array()))
        parts.push_back("conflicts with " + m.get<string>());
    for (const json &f : classification.value("failedNumeric", json::array()))
        parts.push_back("not enough " + f["fluent"].get<string>() + " (requires " +
                        quantity_text(f["required"]) + ", have " +
                        quantity_text(f["available"]) + ")");
    return parts.empty() ? "execution failed" : join(parts, "; ");
}

map<string, string> fields_of(AdvisoryKind kind, const json &payload) {
    map<string, string> f;
    switch (kind) {
    case AdvisoryKind::GoalUnreachable:
        f["goals"] = join(strings_of(payload["goals"]), ", ");
        break;
    case AdvisoryKind::LandmarkUnreachable:
        f["landmark"] = join(strings_of(payload["landmark"]["disjuncts"]), " or ");
        break;
    case AdvisoryKind::ResourceShortfall: {
        f["landmark"] = join(strings_of(payload["landmark"]["disjuncts"]), " or ");
        map<string, vector<string>> by_disjunct;
        vector<string> order;
        for (const json &alt : payload["alternatives"]) {
            string d = alt["disjunct"].get<string>();
            if (!by_disjunct.count(d))
                order.push_back(d);
            by_disjunct[d].push_back(quantity_text(alt["shortfall"]) + " more " +
                                     alt["fluent"].get<string>() + " for " +
                                     alt["action"].get<string>());
        }
        vector<string> options;
        for (const string &d : order)
            options.push_back(join(by_disjunct[d], " and "));
        f["alternatives"] = options.size() > 1 ? "either " + join(options, " or ")
            : join(options, "");
        break;
    }
    case AdvisoryKind::PlanStepInvalid:
        f["step"] = to_string(payload["step"].get<size_t>());
        f["action"] = payload["action"].get<string>();
        f["reason"] = payload.contains("error") ? payload["error"].get<string>()
            : reason_text(payload["classification"]);
        break;
    case AdvisoryKind::PlanIncomplete:
        f["goals"] = join(strings_of(payload["missingGoals"]), ", ");
        break;
    case AdvisoryKind::GoalAchieved:
        f["subject"] = payload["inCurrentState"].get<bool>() ? "The current state"
            : "The current plan";
        break;
    case AdvisoryKind::Info:
        f["text"] = payload.value("text", "");
        break;
    }
    return f;
}

string render(AdvisoryKind kind, const json &payload) {
    auto it = find_if(begin(kTemplates), end(kTemplates),
                      [&](const MessageTemplate &t) {return t.kind == kind;});
    string text(it->text);
    for (const auto &[key, value] : fields_of(kind, payload)) {
        string placeholder = "{" + key + "}";
        for (size_t pos = text.find(placeholder); pos != string::npos;
             pos = text.find(placeholder, pos + value.size()))
            text.replace(pos, placeholder.size(), value);
    }
    return text;
}

Severity severity_for(AdvisoryKind kind) {
    switch (kind) {
    case AdvisoryKind::GoalUnreachable:
    case AdvisoryKind::LandmarkUnreachable:
    case AdvisoryKind::PlanStepInvalid:
        return Severity::Alert;
    case AdvisoryKind::ResourceShortfall:
        return Severity::Suggestion;
    default:
        return Severity::Info;
    }
}

struct Ranked {
    int severity;
    int level;
    string key;
    int kind;
    Advisory advisory;
};

Ranked make(AdvisoryKind kind, json payload, int level, string key) {
    Advisory a;
    a.kind = kind;
    a.severity = severity_for(kind);
    a.message = render(kind, payload);
    a.payload = std::move(payload);
    return {static_cast<int>(a.severity), level, std::move(key), static_cast<int>(kind),
            std::move(a)};
}

json landmark_json(const Landmark &lm) {
    json j;
    j["disjuncts"] = lm.disjuncts;
    j["origin"] = to_string(lm.origin);
    j["level"] = level_json(lm.min_level);
    return j;
}

// Compact state space for the suggestion search.
class SearchSpace {
    unordered_map<string, int> atom_ids;
    unordered_map<string, int> fluent_ids;
    vector<string> fluent_names;

public:
    struct Op {
        vector<int> pre;
        vector<int> neg_pre;
        vector<pair<int, Quantity>> numeric_pre;
        vector<int> add;
        vector<int> del;
        vector<tuple<int, NumericOp, Quantity>> numeric_eff;
    };

    struct Packed {
        vector<uint64_t> bits;
        vector<Quantity> fluents;
        bool operator==(const Packed &) const = default;

        bool test(int a) const {return (bits[a >> 6] >> (a & 63)) & 1;}
        void set(int a) {bits[a >> 6] |= uint64_t(1) << (a & 63);}
        void reset(int a) {bits[a >> 6] &= ~(uint64_t(1) << (a & 63));}
    };

    struct Hash {
        size_t operator()(const Packed &p) const {
            size_t h = 1469598103934665603ull;
            for (uint64_t w : p.bits)
                h = (h ^ w) * 1099511628211ull;
            for (const Quantity &q : p.fluents)
                h = (h ^ (hash<long long>()(q.numerator()) + 31 * q.denominator())) *
                    1099511628211ull;
            return h;
        }
    };

    vector<Op> ops;

    int atom(const string &a) {
        auto [it, inserted] = atom_ids.emplace(a, static_cast<int>(atom_ids.size()));
        return it->second;
    }

    int fluent(const string &f) {
        auto [it, inserted] = fluent_ids.emplace(f, static_cast<int>(fluent_names.size()));
        if (inserted)
            fluent_names.push_back(f);
        return it->second;
    }

    explicit SearchSpace(span<const GroundAction> actions) {
        for (const GroundAction &a : actions) {
            Op op;
            for (const string &p : a.pre)
                op.pre.push_back(atom(p));
            for (const string &p : a.neg_pre)
                op.neg_pre.push_back(atom(p));
            for (const NumericCondition &c : a.numeric_pre)
                op.numeric_pre.emplace_back(fluent(c.fluent), c.required);
            for (const string &p : a.add)
                op.add.push_back(atom(p));
            for (const string &p : a.del)
                op.del.push_back(atom(p));
            for (const NumericEffect &e : a.numeric_eff)
                op.numeric_eff.emplace_back(fluent(e.fluent), e.op, e.amount);
            ops.push_back(std::move(op));
        }
    }

    Packed pack(const State &s) {
        for (const string &a : s.atoms)
            atom(a);
        for (const auto &[f, v] : s.fluents)
            fluent(f);
        Packed p;
        p.bits.assign((atom_ids.size() + 63) / 64 + 1, 0);
        for (const string &a : s.atoms)
            p.set(atom_ids.at(a));
        p.fluents.assign(fluent_names.size(), Quantity(0));
        for (const auto &[f, v] : s.fluents)
            p.fluents[fluent_ids.at(f)] = v;
        return p;
    }

    int find_atom(const string &a) const {
        auto it = atom_ids.find(a);
        return it == atom_ids.end() ? -1 : it->second;
    }

    bool applicable(const Packed &s, const Op &op) const {
        for (int p : op.pre)
            if (!s.test(p))
                return false;
        for (int p : op.neg_pre)
            if (s.test(p))
                return false;
        for (const auto &[f, required] : op.numeric_pre)
            if (s.fluents[f] < required)
                return false;
        return true;
    }

    // False when the effects would drive a fluent negative.
    bool apply(const Packed &s, const Op &op, Packed &out) const {
        out = s;
        for (int d : op.del)
            out.reset(d);
        for (int a : op.add)
            out.set(a);
        for (const auto &[f, kind, amount] : op.numeric_eff) {
            Quantity &v = out.fluents[f];
            switch (kind) {
            case NumericOp::Increase: v += amount; break;
            case NumericOp::Decrease: v -= amount; break;
            case NumericOp::Assign: v = amount; break;
            }
            if (v < 0)
                return false;
        }
        return true;
    }
};
}

const char *to_string(AdvisoryKind kind) {
    switch (kind) {
    case AdvisoryKind::GoalUnreachable: return "goal-unreachable";
    case AdvisoryKind::LandmarkUnreachable: return "landmark-unreachable";
    case AdvisoryKind::ResourceShortfall: return "resource-shortfall";
    case AdvisoryKind::PlanStepInvalid: return "plan-step-invalid";
    case AdvisoryKind::PlanIncomplete: return "plan-incomplete";
    case AdvisoryKind::GoalAchieved: return "goal-achieved";
    case AdvisoryKind::Info: return "info";
    }
    return "?";
}

const char *to_string(Severity severity) {
    switch (severity) {
    case Severity::Alert: return "alert";
    case Severity::Suggestion: return "suggestion";
    case Severity::Info: return "info";
    }
    return "?";
}

AdvisoryKind advisory_kind_from_string(const string &text) {
    for (int k = 0; k <= static_cast<int>(AdvisoryKind::Info); ++k)
        if (text == to_string(static_cast<AdvisoryKind>(k)))
            return static_cast<AdvisoryKind>(k);
    throw invalid_argument("unknown advisory kind '" + text + "'");
}

Severity severity_from_string(const string &text) {
    for (int k = 0; k <= static_cast<int>(Severity::Info); ++k)
        if (text == to_string(static_cast<Severity>(k)))
            return static_cast<Severity>(k);
    throw invalid_argument("unknown severity '" + text + "'");
}

const char *to_string(StepVerdict verdict) {
    switch (verdict) {
    case StepVerdict::Ok: return "ok";
    case StepVerdict::Invalid: return "invalid";
    case StepVerdict::NotEvaluated: return "not-evaluated";
    }
    return "?";
}

const char *to_string(SearchStatus status) {
    switch (status) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Unsolvable: return "proven-unsolvable";
    case SearchStatus::Timeout: return "timeout";
    }
    return "?";
}

const char *to_string(DispatchPolicy policy) {
    return policy == DispatchPolicy::Block ? "block" : "warn";
}

const char *to_string(DispatchDecision decision) {
    switch (decision) {
    case DispatchDecision::Allow: return "allow";
    case DispatchDecision::AllowWithWarning: return "allow-with-warning";
    case DispatchDecision::Block: return "block";
    }
    return "?";
}

DispatchPolicy dispatch_policy_from_string(const string &text) {
    if (text == "block")
        return DispatchPolicy::Block;
    if (text == "warn")
        return DispatchPolicy::Warn;
    throw invalid_argument("dispatch policy must be 'block' or 'warn', got '" + text + "'");
}

PlanValidationReport validate_plan(const State &start, span<const GroundAction> plan,
                                   const AtomSet &goal) {
    PlanValidationReport report;
    report.steps.assign(plan.size(), StepVerdict::NotEvaluated);
    State state = start;
    for (size_t i = 0; i < plan.size(); ++i) {
        report.action_ids.push_back(plan[i].id);
        if (report.first_invalid)
            continue;
        ActionClassification c = applicable(state, plan[i]);
        if (c.status != ActionStatus::Applicable) {
            report.steps[i] = StepVerdict::Invalid;
            report.first_invalid = i;
            report.blocking = std::move(c);
            continue;
        }
        try {
            state = apply(state, plan[i]);
            report.steps[i] = StepVerdict::Ok;
        } catch (const NegativeResource &e) {
            report.steps[i] = StepVerdict::Invalid;
            report.first_invalid = i;
            report.blocking = std::move(c);
            report.error = e.what();
        }
    }
    report.goal_satisfied = !report.first_invalid &&
        all_of(goal.begin(), goal.end(), [&](const string &g) {return state.holds(g);});
    report.end_state = std::move(state);
    return report;
}

ResourceShortfall resource_shortfall(const LandmarkStatus &status) {
    map<string, const BlockedAchiever *> best;
    map<string, Quantity> best_total;
    for (const BlockedAchiever &b : status.blocked_achievers) {
        Quantity total(0);
        for (const FailedNumeric &f : b.failed)
            total += f.required - f.available;
        auto it = best.find(b.disjunct);
        if (it == best.end() || total < best_total[b.disjunct] ||
            (total == best_total[b.disjunct] && b.action_id < it->second->action_id)) {
            best[b.disjunct] = &b;
            best_total[b.disjunct] = total;
        }
    }
    ResourceShortfall result;
    for (const auto &[disjunct, b] : best) {
        for (const FailedNumeric &f : b->failed) {
            Quantity missing = max(Quantity(0), f.required - f.available);
            result.alternatives.push_back(
                {disjunct, b->action_id, f.fluent, f.required, f.available, missing});
        }
    }
    return result;
}

vector<Advisory> analyze(const AnalysisContext &context) {
    ExtractionOptions options;
    options.disjunction_cap = context.disjunction_cap;
    options.deadline = context.deadline;
    LandmarkGraph graph = extract_landmarks(context.current, context.goals, context.actions,
                                            options);
    vector<State> trace = context.trace;
    if (trace.empty() || trace.back() != context.current)
        trace.push_back(context.current);
    vector<LandmarkStatus> statuses =
        landmark_status(graph, trace, context.current, context.actions);

    vector<Ranked> ranked;
    for (const LandmarkStatus &s : statuses) {
        const Landmark &lm = graph.nodes[s.node];
        if (s.status == LandmarkState::RequiredUnreachable) {
            json payload;
            payload["landmark"] = landmark_json(lm);
            ranked.push_back(make(AdvisoryKind::LandmarkUnreachable, payload, lm.min_level,
                                  lm.label()));
        } else if (s.status == LandmarkState::RequiredResourceBlocked) {
            json payload;
            payload["landmark"] = landmark_json(lm);
            payload["alternatives"] = json::array();
            for (const ShortfallAlternative &alt : resource_shortfall(s).alternatives)
                payload["alternatives"].push_back(to_json(alt));
            ranked.push_back(make(AdvisoryKind::ResourceShortfall, payload, lm.min_level,
                                  lm.label()));
        }
    }
    if (graph.goal_unreachable()) {
        json payload;
        payload["goals"] = graph.unreachable_goals;
        ranked.push_back(make(AdvisoryKind::GoalUnreachable, payload, kUnreachable, ""));
    }

    PlanValidationReport report =
        validate_plan(context.current, context.pending_plan, context.goals);
    size_t plan_length = context.plan_offset + context.pending_plan.size();
    if (!report.valid()) {
        size_t step = context.plan_offset + *report.first_invalid;
        json payload;
        payload["step"] = step;
        payload["action"] = report.action_ids[*report.first_invalid];
        payload["classification"] = to_json(*report.blocking);
        if (report.error)
            payload["error"] = *report.error;
        char key[32];
        snprintf(key, sizeof key, "step:%08zu", step);
        ranked.push_back(make(AdvisoryKind::PlanStepInvalid, payload, kUnreachable, key));
    } else if (report.goal_satisfied) {
        json payload;
        payload["inCurrentState"] = all_of(
            context.goals.begin(), context.goals.end(),
            [&](const string &g) {return context.current.holds(g);});
        payload["planLength"] = plan_length;
        ranked.push_back(make(AdvisoryKind::GoalAchieved, payload, kUnreachable, ""));
    } else {
        json payload;
        vector<string> missing;
        for (const string &g : context.goals)
            if (!report.end_state.holds(g))
                missing.push_back(g);
        payload["missingGoals"] = missing;
        payload["planLength"] = plan_length;
        ranked.push_back(make(AdvisoryKind::PlanIncomplete, payload, kUnreachable, ""));
    }
    if (graph.partial) {
        json payload;
        payload["reason"] = "analysis-budget-exhausted";
        payload["text"] = "Landmark analysis ran out of time; alerts may be incomplete.";
        ranked.push_back(make(AdvisoryKind::Info, payload, kUnreachable, ""));
    }

    stable_sort(ranked.begin(), ranked.end(), [](const Ranked &a, const Ranked &b) {
        return tie(a.severity, a.level, a.key, a.kind) < tie(b.severity, b.level, b.key, b.kind);
    });
    vector<Advisory> result;
    for (Ranked &r : ranked)
        result.push_back(std::move(r.advisory));
    return result;
}

SearchResult suggest_actions(const State &state, const AtomSet &goal,
                             span<const GroundAction> actions, chrono::milliseconds budget) {
    SearchResult result;
    if (all_of(goal.begin(), goal.end(), [&](const string &g) {return state.holds(g);})) {
        result.status = SearchStatus::Solved;
        return result;
    }
    Deadline deadline = Deadline::after(budget);
    ExtractionOptions options;
    options.deadline = deadline;
    LandmarkGraph graph = extract_landmarks(state, goal, actions, options);
    if (graph.goal_unreachable()) {
        result.status = SearchStatus::Unsolvable;
        return result;
    }

    SearchSpace space(actions);
    vector<int> goal_ids;
    for (const string &g : goal)
        goal_ids.push_back(space.atom(g));
    SearchSpace::Packed root = space.pack(state);

    struct LandmarkInfo {
        vector<int> atoms;
        int level;
        bool goal;
    };
    vector<LandmarkInfo> landmarks;
    for (const Landmark &lm : graph.nodes) {
        LandmarkInfo info{{}, lm.min_level == kUnreachable ? 0 : lm.min_level,
                          lm.origin == LandmarkOrigin::Goal};
        for (const string &d : lm.disjuncts) {
            int id = space.find_atom(d);
            if (id >= 0)
                info.atoms.push_back(id);
        }
        landmarks.push_back(std::move(info));
    }
    auto holds = [](const SearchSpace::Packed &s, const LandmarkInfo &lm) {
        return any_of(lm.atoms.begin(), lm.atoms.end(), [&](int a) {return s.test(a);});
    };
    auto is_goal = [&](const SearchSpace::Packed &s) {
        return all_of(goal_ids.begin(), goal_ids.end(), [&](int g) {return s.test(g);});
    };

    struct Node {
        SearchSpace::Packed state;
        int parent;
        int op;
        vector<bool> accepted;
    };
    vector<Node> nodes;
    unordered_map<SearchSpace::Packed, int, SearchSpace::Hash> seen;

    auto evaluate = [&](const Node &n) {
        int h = 0;
        int level_sum = 0;
        for (size_t i = 0; i < landmarks.size(); ++i) {
            bool missing = !n.accepted[i] || (landmarks[i].goal && !holds(n.state, landmarks[i]));
            if (missing) {
                ++h;
                level_sum += landmarks[i].level;
            }
        }
        return make_pair(h, level_sum);
    };

    using Entry = tuple<int, int, string, int>;
    priority_queue<Entry, vector<Entry>, greater<Entry>> open;

    Node first{root, -1, -1, vector<bool>(landmarks.size())};
    for (size_t i = 0; i < landmarks.size(); ++i)
        first.accepted[i] = holds(root, landmarks[i]);
    auto [h0, l0] = evaluate(first);
    seen.emplace(root, 0);
    nodes.push_back(std::move(first));
    open.emplace(h0, l0, "", 0);

    auto extract_plan = [&](int index) {
        vector<GroundAction> plan;
        for (int i = index; nodes[i].parent >= 0; i = nodes[i].parent)
            plan.push_back(actions[nodes[i].op]);
        reverse(plan.begin(), plan.end());
        return plan;
    };

    SearchSpace::Packed succ;
    while (!open.empty()) {
        if ((result.expanded & 63) == 0 && deadline.expired()) {
            result.status = SearchStatus::Timeout;
            return result;
        }
        int index = get<3>(open.top());
        open.pop();
        ++result.expanded;
        for (size_t o = 0; o < space.ops.size(); ++o) {
            const SearchSpace::Packed &parent_state = nodes[index].state;
            if (!space.applicable(parent_state, space.ops[o]) ||
                !space.apply(parent_state, space.ops[o], succ))
                continue;
            if (seen.count(succ))
                continue;
            Node child{succ, index, static_cast<int>(o), nodes[index].accepted};
            for (size_t i = 0; i < landmarks.size(); ++i)
                if (!child.accepted[i] && holds(succ, landmarks[i]))
                    child.accepted[i] = true;
            int child_index = static_cast<int>(nodes.size());
            seen.emplace(succ, child_index);
            auto [h, level_sum] = evaluate(child);
            nodes.push_back(std::move(child));
            if (is_goal(succ)) {
                result.plan = extract_plan(child_index);
                PlanValidationReport check = validate_plan(state, result.plan, goal);
                if (!check.goal_satisfied)
                    throw logic_error("suggested plan failed validation");
                result.status = SearchStatus::Solved;
                return result;
            }
            open.emplace(h, level_sum, actions[o].id, child_index);
        }
    }
    result.status = SearchStatus::Unsolvable;
    return result;
}

DispatchDecision dispatch_gate(const PlanValidationReport &report, DispatchPolicy policy) {
    if (report.valid() && report.goal_satisfied)
        return DispatchDecision::Allow;
    return policy == DispatchPolicy::Block ? DispatchDecision::Block
        : DispatchDecision::AllowWithWarning;
}
}
