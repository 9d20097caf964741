#include "radar/session.h"

#include "radar/errors.h"
#include "radar/json_io.h"

#include <algorithm>
#include <thread>

using namespace std;
using nlohmann::json;

namespace radar {
using std::to_string;

namespace {
const char *const kSnapshotSchema = "radar.session";

const char *to_string(StepStatus status) {
    return status == StepStatus::Executed ? "executed" : "pending";
}

StepStatus step_status_from_string(const string &text) {
    if (text == "executed")
        return StepStatus::Executed;
    if (text == "pending")
        return StepStatus::Pending;
    throw SchemaVersionMismatch("unknown step status '" + text + "'");
}

const json &field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key))
        throw InvalidCommand(string("missing field '") + key + "'", {{"field", key}});
    return j.at(key);
}

string string_field(const json &j, const char *key) {
    const json &v = field(j, key);
    if (!v.is_string())
        throw InvalidCommand(string("field '") + key + "' must be a string", {{"field", key}});
    return v.get<string>();
}

long long integer_field(const json &j, const char *key) {
    const json &v = field(j, key);
    if (!v.is_number_integer())
        throw InvalidCommand(string("field '") + key + "' must be an integer", {{"field", key}});
    return v.get<long long>();
}

Quantity quantity_field(const json &j, const char *key) {
    const json &v = field(j, key);
    try {
        if (v.is_number_integer())
            return Quantity(v.get<long long>());
        if (v.is_string())
            return parse_quantity(v.get<string>());
    } catch (const invalid_argument &) {
    }
    throw InvalidCommand(string("field '") + key + "' must be a quantity", {{"field", key}});
}

long long positive_integer(const string &key, const string &value) {
    size_t used = 0;
    long long n = 0;
    try {
        n = stoll(value, &used);
    } catch (const exception &) {
        used = 0;
    }
    if (used == 0 || used != value.size() || n <= 0)
        throw InvalidCommand("config '" + key + "' needs a positive integer, got '" + value + "'",
                             {{"key", key}, {"value", value}});
    return n;
}

// Model lookups report unknown symbols as rejected commands.
template<typename F>
auto checked(F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const SemanticError &e) {
        throw InvalidCommand(e.what(), e.details());
    }
}

json error_json(const Error &e) {
    return {{"code", e.code()}, {"message", e.what()}, {"details", e.details()}};
}
}

json to_json(const SessionConfig &config) {
    return {
        {"dispatchPolicy", to_string(config.dispatch_policy)},
        {"suggestBudgetMs", config.suggest_budget.count()},
        {"analysisBudgetMs", config.analysis_budget.count()},
        {"disjunctionCap", config.disjunction_cap}
    };
}

void set_config(SessionConfig &config, const string &key, const string &value) {
    if (key == "dispatchPolicy") {
        try {
            config.dispatch_policy = dispatch_policy_from_string(value);
        } catch (const exception &) {
            throw InvalidCommand("unknown dispatch policy '" + value + "'",
                                 {{"key", key}, {"value", value}});
        }
    } else if (key == "suggestBudgetMs") {
        config.suggest_budget = chrono::milliseconds(positive_integer(key, value));
    } else if (key == "analysisBudgetMs") {
        config.analysis_budget = chrono::milliseconds(positive_integer(key, value));
    } else if (key == "disjunctionCap") {
        config.disjunction_cap = static_cast<size_t>(positive_integer(key, value));
    } else {
        throw InvalidCommand("unknown config key '" + key + "'", {{"key", key}});
    }
}

SessionConfig config_from_json(const json &j, SessionConfig base) {
    if (!j.is_object())
        throw InvalidCommand("config must be an object");
    SessionConfig config = base;
    for (auto &[key, value] : j.items()) {
        string text = value.is_string() ? value.get<string>() : value.dump();
        set_config(config, key, text);
    }
    return config;
}

SessionCommand command_from_json(const json &j) {
    string type = string_field(j, "type");
    if (type == "AddGoal")
        return command::AddGoal{string_field(j, "atom")};
    if (type == "RemoveGoal")
        return command::RemoveGoal{string_field(j, "atom")};
    if (type == "AddFact")
        return command::AddFact{string_field(j, "atom")};
    if (type == "RemoveFact")
        return command::RemoveFact{string_field(j, "atom")};
    if (type == "AdjustResource")
        return command::AdjustResource{string_field(j, "fluent"), quantity_field(j, "delta")};
    if (type == "AppendStep")
        return command::AppendStep{string_field(j, "action")};
    if (type == "RemoveStep") {
        long long index = integer_field(j, "index");
        if (index < 0)
            throw InvalidCommand("step index must be nonnegative", {{"index", index}});
        return command::RemoveStep{static_cast<size_t>(index)};
    }
    if (type == "ExecuteStep")
        return command::ExecuteStep{};
    if (type == "RequestSuggestions") {
        command::RequestSuggestions cmd;
        if (j.contains("budgetMs") && !j.at("budgetMs").is_null()) {
            long long ms = integer_field(j, "budgetMs");
            if (ms <= 0)
                throw InvalidCommand("budgetMs must be positive", {{"budgetMs", ms}});
            cmd.budget = chrono::milliseconds(ms);
        }
        return cmd;
    }
    if (type == "Dispatch")
        return command::Dispatch{};
    if (type == "SetConfig") {
        const json &value = field(j, "value");
        string text = value.is_string() ? value.get<string>() : value.dump();
        return command::SetConfig{string_field(j, "key"), text};
    }
    throw InvalidCommand("unknown command type '" + type + "'", {{"type", type}});
}

json to_json(const SessionCommand &cmd) {
    json j = {{"type", command_name(cmd)}};
    visit([&](const auto &c) {
        using T = decay_t<decltype(c)>;
        if constexpr (is_same_v<T, command::AddGoal> || is_same_v<T, command::RemoveGoal> ||
                      is_same_v<T, command::AddFact> || is_same_v<T, command::RemoveFact>) {
            j["atom"] = c.atom;
        } else if constexpr (is_same_v<T, command::AdjustResource>) {
            j["fluent"] = c.fluent;
            j["delta"] = to_json(c.delta);
        } else if constexpr (is_same_v<T, command::AppendStep>) {
            j["action"] = c.action;
        } else if constexpr (is_same_v<T, command::RemoveStep>) {
            j["index"] = c.index;
        } else if constexpr (is_same_v<T, command::RequestSuggestions>) {
            if (c.budget)
                j["budgetMs"] = c.budget->count();
        } else if constexpr (is_same_v<T, command::SetConfig>) {
            j["key"] = c.key;
            j["value"] = c.value;
        }
    }, cmd);
    return j;
}

string command_name(const SessionCommand &cmd) {
    static const char *const names[] = {
        "AddGoal", "RemoveGoal", "AddFact", "RemoveFact", "AdjustResource", "AppendStep",
        "RemoveStep", "ExecuteStep", "RequestSuggestions", "Dispatch", "SetConfig"
    };
    return names[cmd.index()];
}

json to_json(const CommandResult &result) {
    json j = {{"revision", result.revision}, {"advisories", to_json(result.advisories)}};
    if (result.dispatch)
        j["dispatch"] = to_string(*result.dispatch);
    if (result.report)
        j["report"] = to_json(*result.report);
    if (result.suggestion)
        j["suggestion"] = to_json(*result.suggestion);
    return j;
}

Session Session::create(string id, string domain_text, string problem_text,
                        SessionConfig config) {
    auto domain = make_shared<const DomainModel>(parse_domain(domain_text));
    auto problem = make_shared<const ProblemInstance>(parse_problem(problem_text, *domain));
    Session s;
    s.id_ = move(id);
    s.domain_text_ = move(domain_text);
    s.problem_text_ = move(problem_text);
    s.domain_ = move(domain);
    s.problem_ = move(problem);
    s.current_ = initial_state(*s.problem_);
    s.trace_.push_back({s.current_, "init"});
    s.goals_ = s.problem_->goal;
    s.config_ = config;
    s.advisories_ = s.analyze();
    return s;
}

vector<GroundAction> Session::ground_actions() const {
    return ground(*domain_, with_context(*problem_, current_, goals_));
}

vector<GroundAction> Session::pending_actions() const {
    vector<GroundAction> result;
    for (const PlanStep &step : plan_) {
        if (step.status == StepStatus::Pending)
            result.push_back(instantiate(*domain_, *problem_, step.action_id));
    }
    return result;
}

vector<Advisory> Session::analyze() const {
    vector<GroundAction> actions = ground_actions();
    AnalysisContext context;
    context.current = current_;
    for (const TraceEntry &entry : trace_)
        context.trace.push_back(entry.state);
    context.goals = goals_;
    context.actions = actions;
    context.pending_plan = pending_actions();
    context.plan_offset = plan_.size() - context.pending_plan.size();
    context.disjunction_cap = config_.disjunction_cap;
    context.deadline = Deadline::after(config_.analysis_budget);
    return radar::analyze(context);
}

PlanValidationReport Session::validate() const {
    return validate_plan(current_, pending_actions(), goals_);
}

SearchResult Session::suggest(optional<chrono::milliseconds> budget) const {
    // Suggestions continue from the end of the valid pending prefix.
    PlanValidationReport report = validate();
    vector<GroundAction> actions =
        ground(*domain_, with_context(*problem_, report.end_state, goals_));
    return suggest_actions(report.end_state, goals_, actions,
                           budget.value_or(config_.suggest_budget));
}

LandmarkGraph Session::landmarks(vector<LandmarkStatus> *statuses) const {
    vector<GroundAction> actions = ground_actions();
    ExtractionOptions options;
    options.disjunction_cap = config_.disjunction_cap;
    options.deadline = Deadline::after(config_.analysis_budget);
    LandmarkGraph graph = extract_landmarks(current_, goals_, actions, options);
    if (statuses) {
        vector<State> trace;
        for (const TraceEntry &entry : trace_)
            trace.push_back(entry.state);
        *statuses = landmark_status(graph, trace, current_, actions);
    }
    return graph;
}

void Session::apply_command(const SessionCommand &cmd, CommandResult &result) {
    string name = command_name(cmd);
    auto record = [&](const string &cause) {
        trace_.push_back({current_, cause});
    };
    visit([&](const auto &c) {
        using T = decay_t<decltype(c)>;
        if constexpr (is_same_v<T, command::AddGoal>) {
            string atom = checked([&] {return check_ground_atom(*domain_, *problem_, c.atom);});
            if (!goals_.insert(atom).second)
                throw InvalidCommand("goal '" + atom + "' already present", {{"atom", atom}});
        } else if constexpr (is_same_v<T, command::RemoveGoal>) {
            string atom = checked([&] {return check_ground_atom(*domain_, *problem_, c.atom);});
            if (!goals_.erase(atom))
                throw InvalidCommand("'" + atom + "' is not a goal", {{"atom", atom}});
        } else if constexpr (is_same_v<T, command::AddFact>) {
            string atom = checked([&] {return check_ground_atom(*domain_, *problem_, c.atom);});
            if (!current_.atoms.insert(atom).second)
                throw InvalidCommand("'" + atom + "' already holds", {{"atom", atom}});
            record(name + " " + atom);
        } else if constexpr (is_same_v<T, command::RemoveFact>) {
            string atom = checked([&] {return check_ground_atom(*domain_, *problem_, c.atom);});
            if (!current_.atoms.erase(atom))
                throw InvalidCommand("'" + atom + "' does not hold", {{"atom", atom}});
            record(name + " " + atom);
        } else if constexpr (is_same_v<T, command::AdjustResource>) {
            string fluent =
                checked([&] {return check_ground_fluent(*domain_, *problem_, c.fluent);});
            if (c.delta == Quantity(0))
                throw InvalidCommand("zero adjustment of '" + fluent + "'",
                                     {{"fluent", fluent}});
            Quantity value = current_.fluent(fluent) + c.delta;
            if (value < 0)
                throw InvalidCommand("'" + fluent + "' would become negative",
                                     {{"fluent", fluent}, {"value", to_json(value)}});
            current_.fluents[fluent] = value;
            record(name + " " + fluent + " " + format_quantity(c.delta));
        } else if constexpr (is_same_v<T, command::AppendStep>) {
            GroundAction a = checked([&] {return instantiate(*domain_, *problem_, c.action);});
            plan_.push_back({a.id, StepStatus::Pending});
        } else if constexpr (is_same_v<T, command::RemoveStep>) {
            if (c.index >= plan_.size())
                throw InvalidCommand("no plan step " + std::to_string(c.index),
                                     {{"index", c.index}, {"planLength", plan_.size()}});
            if (plan_[c.index].status == StepStatus::Executed)
                throw InvalidCommand("step " + std::to_string(c.index) + " was already executed",
                                     {{"index", c.index}});
            plan_.erase(plan_.begin() + static_cast<ptrdiff_t>(c.index));
        } else if constexpr (is_same_v<T, command::ExecuteStep>) {
            auto it = find_if(plan_.begin(), plan_.end(), [](const PlanStep &s) {
                return s.status == StepStatus::Pending;
            });
            if (it == plan_.end())
                throw InvalidCommand("no pending plan step");
            size_t index = static_cast<size_t>(it - plan_.begin());
            GroundAction a = instantiate(*domain_, *problem_, it->action_id);
            ActionClassification cls = applicable(current_, a);
            json details = {{"step", index}, {"classification", to_json(cls)}};
            if (cls.status != ActionStatus::Applicable)
                throw StepNotApplicable("step " + std::to_string(index) + " (" + a.id +
                                        ") is not applicable", details);
            try {
                current_ = apply(current_, a);
            } catch (const NegativeResource &e) {
                details["error"] = e.what();
                throw StepNotApplicable("step " + std::to_string(index) + " (" + a.id +
                                        ") would drive a resource negative", details);
            }
            it->status = StepStatus::Executed;
            record("execute:" + std::to_string(index));
        } else if constexpr (is_same_v<T, command::RequestSuggestions>) {
            result.suggestion = suggest(c.budget);
        } else if constexpr (is_same_v<T, command::Dispatch>) {
            PlanValidationReport report = validate();
            DispatchDecision decision = dispatch_gate(report, config_.dispatch_policy);
            if (decision == DispatchDecision::Block) {
                string where = report.first_invalid
                    ? "step " + std::to_string(*report.first_invalid + plan_.size() -
                                               report.steps.size()) + " is invalid"
                    : "the plan does not reach the goals";
                throw DispatchBlocked("dispatch blocked: " + where,
                                      {{"report", to_json(report)}});
            }
            last_dispatch_ = decision;
            result.dispatch = decision;
            result.report = move(report);
        } else if constexpr (is_same_v<T, command::SetConfig>) {
            set_config(config_, c.key, c.value);
        }
    }, cmd);
}

CommandResult Session::handle(const SessionCommand &cmd) {
    Session next = *this;
    CommandResult result;
    next.apply_command(cmd, result);
    ++next.revision_;
    next.advisories_ = next.analyze();
    result.revision = next.revision_;
    result.advisories = next.advisories_;
    *this = move(next);
    return result;
}

json Session::snapshot() const {
    json trace = json::array();
    for (const TraceEntry &entry : trace_)
        trace.push_back({{"state", to_json(entry.state)}, {"cause", entry.cause}});
    json plan = json::array();
    for (const PlanStep &step : plan_)
        plan.push_back({{"action", step.action_id}, {"status", to_string(step.status)}});
    return {
        {"schema", kSnapshotSchema},
        {"version", kSnapshotVersion},
        {"id", id_},
        {"revision", revision_},
        {"domainText", domain_text_},
        {"problemText", problem_text_},
        {"config", to_json(config_)},
        {"goals", goals_},
        {"plan", plan},
        {"currentState", to_json(current_)},
        {"trace", trace},
        {"advisories", to_json(advisories_)},
        {"lastDispatch", last_dispatch_ ? json(to_string(*last_dispatch_)) : json(nullptr)}
    };
}

Session Session::restore(const json &doc) {
    if (!doc.is_object() || doc.value("schema", "") != kSnapshotSchema)
        throw SchemaVersionMismatch("not a session snapshot");
    if (!doc.contains("version") || doc.at("version") != kSnapshotVersion)
        throw SchemaVersionMismatch(
            "unsupported snapshot version",
            {{"expected", kSnapshotVersion}, {"found", doc.value("version", json())}});
    try {
        Session s = create(doc.at("id").get<string>(), doc.at("domainText").get<string>(),
                           doc.at("problemText").get<string>(),
                           config_from_json(doc.at("config")));
        s.revision_ = doc.at("revision").get<uint64_t>();
        s.goals_ = doc.at("goals").get<AtomSet>();
        s.plan_.clear();
        for (const json &step : doc.at("plan"))
            s.plan_.push_back({step.at("action").get<string>(),
                               step_status_from_string(step.at("status").get<string>())});
        s.current_ = state_from_json(doc.at("currentState"));
        s.trace_.clear();
        for (const json &entry : doc.at("trace"))
            s.trace_.push_back({state_from_json(entry.at("state")),
                                entry.at("cause").get<string>()});
        if (s.trace_.empty() || s.trace_.back().state != s.current_)
            throw SchemaVersionMismatch("snapshot trace does not end in the current state");
        s.advisories_.clear();
        for (const json &a : doc.at("advisories"))
            s.advisories_.push_back(advisory_from_json(a));
        const json &dispatch = doc.at("lastDispatch");
        s.last_dispatch_.reset();
        if (!dispatch.is_null()) {
            string text = dispatch.get<string>();
            for (DispatchDecision d : {DispatchDecision::Allow, DispatchDecision::AllowWithWarning,
                                       DispatchDecision::Block}) {
                if (text == to_string(d))
                    s.last_dispatch_ = d;
            }
            if (!s.last_dispatch_)
                throw SchemaVersionMismatch("unknown dispatch decision '" + text + "'");
        }
        return s;
    } catch (const json::exception &e) {
        throw SchemaVersionMismatch(string("malformed snapshot: ") + e.what());
    } catch (const InvalidCommand &e) {
        throw SchemaVersionMismatch(string("malformed snapshot: ") + e.what());
    }
}

json Session::view() const {
    json plan = json::array();
    PlanValidationReport report = validate();
    size_t offset = plan_.size() - report.steps.size();
    for (size_t i = 0; i < plan_.size(); ++i) {
        json step = {{"index", i}, {"action", plan_[i].action_id},
                     {"status", to_string(plan_[i].status)}};
        if (i >= offset)
            step["verdict"] = radar::to_string(report.steps[i - offset]);
        plan.push_back(step);
    }
    json trace = json::array();
    for (const TraceEntry &entry : trace_)
        trace.push_back({{"state", to_json(entry.state)}, {"cause", entry.cause}});
    return {
        {"id", id_},
        {"revision", revision_},
        {"domain", domain_->name},
        {"problem", problem_->name},
        {"config", to_json(config_)},
        {"goals", goals_},
        {"currentState", to_json(current_)},
        {"plan", plan},
        {"validation", to_json(report)},
        {"trace", trace},
        {"advisories", to_json(advisories_)},
        {"lastDispatch", last_dispatch_ ? json(to_string(*last_dispatch_)) : json(nullptr)}
    };
}

bool Session::operator==(const Session &other) const {
    return id_ == other.id_ && domain_text_ == other.domain_text_ &&
           problem_text_ == other.problem_text_ && *domain_ == *other.domain_ &&
           *problem_ == *other.problem_ && current_ == other.current_ &&
           trace_ == other.trace_ && goals_ == other.goals_ && plan_ == other.plan_ &&
           advisories_ == other.advisories_ && config_ == other.config_ &&
           revision_ == other.revision_ && last_dispatch_ == other.last_dispatch_;
}

vector<ScenarioEvent> parse_scenario(string_view text) {
    vector<ScenarioEvent> events;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == string_view::npos)
            end = text.size();
        string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == string_view::npos)
            continue;
        auto at = [&](const string &msg, const json &details = json::object()) {
            json d = details;
            d["line"] = line_no;
            return InvalidCommand("scenario line " + std::to_string(line_no) + ": " + msg, d);
        };
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error &e) {
            throw at(e.what());
        }
        ScenarioEvent event;
        try {
            event.at_millis = integer_field(j, "atMillis");
            event.command = command_from_json(field(j, "command"));
            if (j.contains("note"))
                event.note = j.at("note").get<string>();
        } catch (const InvalidCommand &e) {
            throw at(e.what(), e.details());
        } catch (const json::exception &e) {
            throw at(e.what());
        }
        if (event.at_millis < 0)
            throw at("atMillis must be nonnegative");
        if (!events.empty() && event.at_millis < events.back().at_millis)
            throw at("events are not sorted by atMillis");
        events.push_back(move(event));
    }
    return events;
}

json replay(Session &session, const vector<ScenarioEvent> &events, bool realtime) {
    json transcript = {
        {"session", session.id()},
        {"initial", {{"revision", session.revision()},
                     {"advisories", to_json(session.advisories())}}}
    };
    json records = json::array();
    auto start = chrono::steady_clock::now();
    for (size_t i = 0; i < events.size(); ++i) {
        const ScenarioEvent &event = events[i];
        if (realtime)
            this_thread::sleep_until(start + chrono::milliseconds(event.at_millis));
        json record = {{"index", i}, {"atMillis", event.at_millis}, {"note", event.note},
                       {"command", to_json(event.command)}};
        try {
            CommandResult result = session.handle(event.command);
            record["accepted"] = true;
            json r = to_json(result);
            for (auto &[key, value] : r.items())
                record[key] = value;
        } catch (const Error &e) {
            record["accepted"] = false;
            record["error"] = error_json(e);
            record["revision"] = session.revision();
            record["advisories"] = to_json(session.advisories());
        }
        records.push_back(move(record));
    }
    transcript["events"] = move(records);
    transcript["final"] = {
        {"revision", session.revision()},
        {"advisories", to_json(session.advisories())},
        {"validation", to_json(session.validate())}
    };
    return transcript;
}
}
