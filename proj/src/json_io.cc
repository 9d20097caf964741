#include "radar/json_io.h"

#include <stdexcept>

using namespace std;
using nlohmann::json;

namespace radar {
using std::to_string;

json to_json(const Quantity &q) {
    if (q.denominator() == 1)
        return q.numerator();
    return format_quantity(q);
}

Quantity quantity_from_json(const json &j) {
    if (j.is_number_integer())
        return Quantity(j.get<long long>());
    if (j.is_string())
        return parse_quantity(j.get<string>());
    if (j.is_number_float())
        return parse_quantity(j.dump());
    throw invalid_argument("expected a quantity, got " + j.dump());
}

string quantity_text(const json &j) {
    return format_quantity(quantity_from_json(j));
}

json level_json(int level) {
    return level == kUnreachable ? json(nullptr) : json(level);
}

json to_json(const ActionClassification &c) {
    json failed = json::array();
    for (const FailedNumeric &f : c.failed_numeric)
        failed.push_back({{"fluent", f.fluent}, {"required", to_json(f.required)},
                          {"available", to_json(f.available)}});
    return {{"action", c.action_id},
            {"status", to_string(c.status)},
            {"missingPre", c.missing_pre},
            {"violatedNegPre", c.violated_neg_pre},
            {"failedNumeric", failed}};
}

ActionClassification classification_from_json(const json &j) {
    ActionClassification c;
    c.action_id = j.at("action").get<string>();
    string status = j.at("status").get<string>();
    if (status == "applicable")
        c.status = ActionStatus::Applicable;
    else if (status == "blocked-propositional")
        c.status = ActionStatus::BlockedPropositional;
    else if (status == "blocked-resource")
        c.status = ActionStatus::BlockedResource;
    else
        throw invalid_argument("unknown action status '" + status + "'");
    c.missing_pre = j.at("missingPre").get<vector<string>>();
    c.violated_neg_pre = j.at("violatedNegPre").get<vector<string>>();
    for (const json &f : j.at("failedNumeric"))
        c.failed_numeric.push_back({f.at("fluent").get<string>(),
                                    quantity_from_json(f.at("required")),
                                    quantity_from_json(f.at("available"))});
    return c;
}

json to_json(const State &s) {
    json fluents = json::object();
    for (const auto &[name, value] : s.fluents)
        fluents[name] = to_json(value);
    return {{"atoms", s.atoms}, {"fluents", fluents}};
}

State state_from_json(const json &j) {
    State s;
    for (const json &a : j.at("atoms"))
        s.atoms.insert(a.get<string>());
    for (const auto &[name, value] : j.at("fluents").items())
        s.fluents[name] = quantity_from_json(value);
    return s;
}

json to_json(const GroundAction &a) {
    json numeric_pre = json::array();
    for (const NumericCondition &c : a.numeric_pre)
        numeric_pre.push_back({{"fluent", c.fluent}, {"required", to_json(c.required)}});
    json numeric_eff = json::array();
    for (const NumericEffect &e : a.numeric_eff)
        numeric_eff.push_back({{"fluent", e.fluent}, {"op", to_string(e.op)},
                               {"amount", to_json(e.amount)}});
    return {{"id", a.id}, {"pre", a.pre}, {"negPre", a.neg_pre}, {"numericPre", numeric_pre},
            {"add", a.add}, {"del", a.del}, {"numericEff", numeric_eff}};
}

json to_json(const RelaxedPlanningGraph &rpg) {
    json bounds = json::object();
    for (const auto &[name, b] : rpg.fluent_bounds)
        bounds[name] = b.unbounded ? json("unbounded") : to_json(b.value);
    return {{"policy", to_string(rpg.policy)}, {"levels", rpg.levels},
            {"factLevel", rpg.fact_level}, {"actionLevel", rpg.action_level},
            {"fluentBounds", bounds}};
}

json to_json(const LandmarkGraph &graph, const vector<LandmarkStatus> *statuses) {
    json nodes = json::array();
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const Landmark &lm = graph.nodes[i];
        json node = {{"id", i}, {"disjuncts", lm.disjuncts}, {"origin", to_string(lm.origin)},
                     {"verified", lm.verified}, {"level", level_json(lm.min_level)}};
        if (statuses) {
            const LandmarkStatus &s = (*statuses)[i];
            node["status"] = to_string(s.status);
            if (!s.blocked_achievers.empty()) {
                json blocked = json::array();
                for (const BlockedAchiever &b : s.blocked_achievers) {
                    ActionClassification c;
                    c.action_id = b.action_id;
                    c.status = ActionStatus::BlockedResource;
                    c.failed_numeric = b.failed;
                    json entry = to_json(c);
                    entry["disjunct"] = b.disjunct;
                    blocked.push_back(entry);
                }
                node["blockedAchievers"] = blocked;
            }
        }
        nodes.push_back(node);
    }
    json orders = json::array();
    for (const LandmarkOrdering &o : graph.orders)
        orders.push_back({{"from", o.from}, {"to", o.to}, {"kind", to_string(o.kind)}});
    return {{"nodes", nodes}, {"orders", orders}, {"unreachableGoals", graph.unreachable_goals},
            {"partial", graph.partial}};
}

json to_json(const ShortfallAlternative &alt) {
    return {{"disjunct", alt.disjunct}, {"action", alt.action_id}, {"fluent", alt.fluent},
            {"required", to_json(alt.required)}, {"available", to_json(alt.available)},
            {"shortfall", to_json(alt.shortfall)}};
}

json to_json(const Advisory &a) {
    return {{"kind", to_string(a.kind)}, {"severity", to_string(a.severity)},
            {"message", a.message}, {"payload", a.payload}};
}

Advisory advisory_from_json(const json &j) {
    Advisory a;
    a.kind = advisory_kind_from_string(j.at("kind").get<string>());
    a.severity = severity_from_string(j.at("severity").get<string>());
    a.message = j.at("message").get<string>();
    a.payload = j.at("payload");
    return a;
}

json to_json(const vector<Advisory> &advisories) {
    json out = json::array();
    for (const Advisory &a : advisories)
        out.push_back(to_json(a));
    return out;
}

json to_json(const PlanValidationReport &report) {
    json steps = json::array();
    for (size_t i = 0; i < report.steps.size(); ++i)
        steps.push_back({{"index", i}, {"action", report.action_ids[i]},
                         {"verdict", to_string(report.steps[i])}});
    json j = {{"steps", steps},
              {"firstInvalid", report.first_invalid ? json(*report.first_invalid) : json(nullptr)},
              {"endState", to_json(report.end_state)},
              {"goalSatisfied", report.goal_satisfied}};
    j["blocking"] = report.blocking ? to_json(*report.blocking) : json(nullptr);
    if (report.error)
        j["error"] = *report.error;
    return j;
}

json to_json(const SearchResult &result) {
    json plan = json::array();
    for (const GroundAction &a : result.plan)
        plan.push_back(a.id);
    return {{"status", to_string(result.status)}, {"plan", plan}, {"expanded", result.expanded}};
}
}
