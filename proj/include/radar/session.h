#ifndef RADAR_SESSION_H
#define RADAR_SESSION_H

#include "advisor.h"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace radar {
struct SessionConfig {
    DispatchPolicy dispatch_policy = DispatchPolicy::Block;
    std::chrono::milliseconds suggest_budget{2000};
    std::chrono::milliseconds analysis_budget{2000};
    std::size_t disjunction_cap = 4;
    bool operator==(const SessionConfig &) const = default;
};

// Keys: dispatchPolicy, suggestBudgetMs, analysisBudgetMs, disjunctionCap.
// Throws InvalidCommand for unknown keys or bad values.
void set_config(SessionConfig &config, const std::string &key, const std::string &value);
// Applies the members of a JSON object on top of `base`.
SessionConfig config_from_json(const nlohmann::json &j, SessionConfig base = {});
nlohmann::json to_json(const SessionConfig &config);

enum class StepStatus {Pending, Executed};

struct PlanStep {
    std::string action_id;
    StepStatus status = StepStatus::Pending;
    bool operator==(const PlanStep &) const = default;
};

// `cause` is "init", "execute:<step>" or the name of the editing command.
struct TraceEntry {
    State state;
    std::string cause;
    bool operator==(const TraceEntry &) const = default;
};

namespace command {
struct AddGoal {std::string atom;};
struct RemoveGoal {std::string atom;};
struct AddFact {std::string atom;};
struct RemoveFact {std::string atom;};
struct AdjustResource {std::string fluent; Quantity delta;};
struct AppendStep {std::string action;};
struct RemoveStep {std::size_t index = 0;};
struct ExecuteStep {};
struct RequestSuggestions {std::optional<std::chrono::milliseconds> budget;};
struct Dispatch {};
struct SetConfig {std::string key; std::string value;};
}

using SessionCommand = std::variant<
    command::AddGoal, command::RemoveGoal, command::AddFact, command::RemoveFact,
    command::AdjustResource, command::AppendStep, command::RemoveStep, command::ExecuteStep,
    command::RequestSuggestions, command::Dispatch, command::SetConfig>;

// Throws InvalidCommand for unknown types or missing fields.
SessionCommand command_from_json(const nlohmann::json &j);
nlohmann::json to_json(const SessionCommand &cmd);
std::string command_name(const SessionCommand &cmd);

struct CommandResult {
    std::uint64_t revision = 0;
    std::vector<Advisory> advisories;
    std::optional<DispatchDecision> dispatch;
    std::optional<PlanValidationReport> report;
    std::optional<SearchResult> suggestion;
};

nlohmann::json to_json(const CommandResult &result);

inline constexpr int kSnapshotVersion = 1;

/*
  The live decision context. Commands are the only mutation path: each
  accepted command bumps the revision by one and re-runs the analysis
  before returning, and a rejected command leaves the session untouched.
*/
class Session {
    std::string id_;
    std::string domain_text_;
    std::string problem_text_;
    std::shared_ptr<const DomainModel> domain_;
    std::shared_ptr<const ProblemInstance> problem_;
    State current_;
    std::vector<TraceEntry> trace_;
    AtomSet goals_;
    std::vector<PlanStep> plan_;
    std::vector<Advisory> advisories_;
    SessionConfig config_;
    std::uint64_t revision_ = 0;
    std::optional<DispatchDecision> last_dispatch_;

    Session() = default;
    void apply_command(const SessionCommand &cmd, CommandResult &result);
    std::vector<GroundAction> pending_actions() const;

public:
    // Throws the parser's errors; no session exists on failure.
    static Session create(std::string id, std::string domain_text, std::string problem_text,
                          SessionConfig config = {});
    // Throws SchemaVersionMismatch for documents of another schema or
    // version and for truncated documents.
    static Session restore(const nlohmann::json &document);

    CommandResult handle(const SessionCommand &cmd);

    // From-scratch analysis of the current context.
    std::vector<Advisory> analyze() const;
    std::vector<GroundAction> ground_actions() const;
    PlanValidationReport validate() const;
    SearchResult suggest(std::optional<std::chrono::milliseconds> budget = {}) const;
    LandmarkGraph landmarks(std::vector<LandmarkStatus> *statuses = nullptr) const;

    nlohmann::json snapshot() const;
    nlohmann::json view() const;

    bool operator==(const Session &other) const;

    const std::string &id() const {return id_;}
    std::uint64_t revision() const {return revision_;}
    const State &current_state() const {return current_;}
    const std::vector<TraceEntry> &trace() const {return trace_;}
    const AtomSet &goals() const {return goals_;}
    const std::vector<PlanStep> &plan() const {return plan_;}
    const std::vector<Advisory> &advisories() const {return advisories_;}
    const SessionConfig &config() const {return config_;}
    const DomainModel &domain() const {return *domain_;}
    const ProblemInstance &problem() const {return *problem_;}
    std::optional<DispatchDecision> last_dispatch() const {return last_dispatch_;}
};

struct ScenarioEvent {
    long long at_millis = 0;
    SessionCommand command;
    std::string note;
};

// Line-delimited JSON, one event per line; blank lines are skipped.
// Throws InvalidCommand (with the line number) on malformed or unsorted
// input.
std::vector<ScenarioEvent> parse_scenario(std::string_view text);

/*
  Applies the events in order and records the outcome of each. Failed
  events are recorded and leave the session unchanged. Without
  `realtime` the time offsets are compressed.
*/
nlohmann::json replay(Session &session, const std::vector<ScenarioEvent> &events,
                      bool realtime = false);
}

#endif
