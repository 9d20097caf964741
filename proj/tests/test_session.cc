#include "fixtures.h"
#include "random_strips.h"
#include "session_fuzz.h"

#include "radar/errors.h"
#include "radar/json_io.h"

#include <doctest.h>


using namespace std;
using namespace radar;
using namespace radar::test;
using nlohmann::json;

namespace {
vector<string> kinds(const vector<Advisory> &advisories) {
    vector<string> out;
    for (const Advisory &a : advisories)
        out.push_back(to_string(a.kind));
    return out;
}

SessionCommand cmd(const string &text) {
    return command_from_json(json::parse(text));
}

string rejection(Session &s, const SessionCommand &c) {
    try {
        s.handle(c);
    } catch (const Error &e) {
        return e.code();
    }
    return "";
}

void check_trace(const Session &s) {
    CHECK(trace_violations(s) == vector<string>{});
}

void check_fuzz(const FuzzReport &r) {
    for (const string &v : r.report.violations)
        FAIL_CHECK(v);
}
}

TEST_CASE("creating a session runs the analysis") {
    Session s = example_session("firefighting/scenario1");
    CHECK(s.revision() == 0);
    CHECK(kinds(s.advisories()) == vector<string>{"resource-shortfall", "plan-incomplete"});
    CHECK(s.advisories() == s.analyze());
    REQUIRE(s.trace().size() == 1);
    CHECK(s.trace()[0].cause == "init");
    CHECK(s.goals() == AtomSet{"fire-out"});
    CHECK(s.id() == "firefighting/scenario1");
}

TEST_CASE("malformed input creates no session") {
    string domain = read_data("firefighting/domain.pddl");
    string problem = read_data("firefighting/scenario1.pddl");
    CHECK_THROWS_AS(Session::create("x", domain.substr(0, domain.size() / 2), problem),
                    SyntaxError);
    CHECK_THROWS_AS(Session::create("x", domain, "(define (problem p) (:domain other)"
                                                 " (:init) (:goal (fire-out)))"),
                    SemanticError);
}

TEST_CASE("scenario 2 session") {
    Session s = example_session("firefighting/scenario2");
    CHECK(kinds(s.advisories()) ==
          vector<string>{"resource-shortfall", "resource-shortfall", "plan-incomplete"});
    s.handle(cmd(R"j({"type": "AdjustResource", "fluent": "available-big(station1)", "delta": 1})j"));
    CHECK(kinds(s.advisories()) == vector<string>{"resource-shortfall", "plan-incomplete"});
    CHECK(s.current_state().fluent("available-big(station1)") == Quantity(2));
    CHECK(s.trace().back().cause == "AdjustResource available-big(station1) 1");
    s.handle(command::RemoveGoal{"fire-out"});
    CHECK(kinds(s.advisories()) == vector<string>{"goal-achieved"});
    CHECK(s.revision() == 2);
}

TEST_CASE("blocked commands leave the session unchanged") {
    Session s = example_session("firefighting/scenario1");
    s.handle(command::AppendStep{"dispatch-big-engines(station1)"});
    s.handle(command::AppendStep{"extinguish-small-with-big"});
    Session before = s;
    try {
        s.handle(command::ExecuteStep{});
        FAIL("step executed");
    } catch (const StepNotApplicable &e) {
        CHECK(e.details().at("step") == 0);
        CHECK(e.details().at("classification").at("status") == "blocked-resource");
        CHECK(e.details().at("classification").at("failedNumeric") ==
              json::parse(R"j([{"fluent": "available-big(station1)", "required": 2,
                               "available": 1}])j"));
    }
    CHECK(s == before);
    try {
        s.handle(command::Dispatch{});
        FAIL("dispatch allowed");
    } catch (const DispatchBlocked &e) {
        CHECK(e.details().at("report").at("firstInvalid") == 0);
    }
    CHECK(s == before);
    CHECK_FALSE(s.last_dispatch().has_value());

    s.handle(command::SetConfig{"dispatchPolicy", "warn"});
    CommandResult r = s.handle(command::Dispatch{});
    CHECK(r.dispatch == DispatchDecision::AllowWithWarning);
    CHECK(s.last_dispatch() == DispatchDecision::AllowWithWarning);
}

TEST_CASE("command validation") {
    Session s = example_session("firefighting/scenario1");
    CHECK(rejection(s, command::AddGoal{"fire-out"}) == "InvalidCommand");
    CHECK(rejection(s, command::RemoveGoal{"fire-small"}) == "InvalidCommand");
    CHECK(rejection(s, command::AddFact{"fire-small"}) == "InvalidCommand");
    CHECK(rejection(s, command::RemoveFact{"fire-out"}) == "InvalidCommand");
    CHECK(rejection(s, command::AddFact{"no-such-atom"}) == "InvalidCommand");
    CHECK(rejection(s, command::AddFact{"on-scene(station1)"}) == "InvalidCommand");
    CHECK(rejection(s, command::AdjustResource{"available-big(station1)", Quantity(-2)}) ==
          "InvalidCommand");
    CHECK(rejection(s, command::AdjustResource{"fire-out", Quantity(1)}) == "InvalidCommand");
    CHECK(rejection(s, command::AppendStep{"dispatch-big-engines(nowhere)"}) ==
          "InvalidCommand");
    CHECK(rejection(s, command::RemoveStep{0}) == "InvalidCommand");
    CHECK(rejection(s, command::ExecuteStep{}) == "InvalidCommand");
    CHECK(rejection(s, command::SetConfig{"colour", "red"}) == "InvalidCommand");
    CHECK(rejection(s, command::SetConfig{"dispatchPolicy", "sometimes"}) == "InvalidCommand");
    CHECK(s.revision() == 0);

    CHECK_THROWS_AS(cmd(R"({"type": "Teleport"})"), InvalidCommand);
    CHECK_THROWS_AS(cmd(R"({"type": "AddGoal"})"), InvalidCommand);
    CHECK_THROWS_AS(cmd(R"({"type": "AdjustResource", "fluent": "f", "delta": "x"})"),
                    InvalidCommand);
    CHECK_THROWS_AS(cmd("[1, 2]"), InvalidCommand);
}

TEST_CASE("executed steps cannot be removed") {
    Session s = example_session("firefighting/scenario1");
    s.handle(command::AdjustResource{"available-big(station1)", Quantity(2)});
    s.handle(command::AppendStep{"dispatch-big-engines(station1)"});
    s.handle(command::AppendStep{"extinguish-small-with-big"});
    s.handle(command::ExecuteStep{});
    CHECK(s.plan()[0].status == StepStatus::Executed);
    CHECK(rejection(s, command::RemoveStep{0}) == "InvalidCommand");
    s.handle(command::RemoveStep{1});
    CHECK(s.plan().size() == 1);
    CHECK(kinds(s.advisories()) == vector<string>{"plan-incomplete"});
    check_trace(s);
}

TEST_CASE("command json round trip") {
    vector<SessionCommand> all = {
        command::AddGoal{"a"}, command::RemoveGoal{"b"}, command::AddFact{"c"},
        command::RemoveFact{"d"}, command::AdjustResource{"f(x)", Quantity(-3, 4)},
        command::AppendStep{"act(x)"}, command::RemoveStep{3}, command::ExecuteStep{},
        command::RequestSuggestions{chrono::milliseconds(10)}, command::RequestSuggestions{},
        command::Dispatch{}, command::SetConfig{"suggestBudgetMs", "10"}};
    for (const SessionCommand &c : all) {
        json j = to_json(c);
        CHECK(j.at("type") == command_name(c));
        CHECK(to_json(command_from_json(j)) == j);
    }
    SessionCommand numeric = cmd(R"({"type": "SetConfig", "key": "disjunctionCap", "value": 2})");
    CHECK(get<command::SetConfig>(numeric).value == "2");
}

TEST_CASE("configuration") {
    SessionConfig config;
    set_config(config, "dispatchPolicy", "warn");
    set_config(config, "suggestBudgetMs", "150");
    set_config(config, "analysisBudgetMs", "300");
    set_config(config, "disjunctionCap", "2");
    CHECK(config.dispatch_policy == DispatchPolicy::Warn);
    CHECK(config.suggest_budget == chrono::milliseconds(150));
    CHECK(config.analysis_budget == chrono::milliseconds(300));
    CHECK(config.disjunction_cap == 2);
    CHECK(config_from_json(to_json(config)) == config);
    CHECK_THROWS_AS(set_config(config, "disjunctionCap", "0"), InvalidCommand);
    CHECK_THROWS_AS(set_config(config, "suggestBudgetMs", "-5"), InvalidCommand);

    Session s = example_session("firefighting/scenario1");
    s.handle(command::SetConfig{"disjunctionCap", "1"});
    CHECK(s.config().disjunction_cap == 1);
    // Without the disjunction there is no resource landmark left.
    CHECK(kinds(s.advisories()) == vector<string>{"plan-incomplete"});
}

TEST_CASE("suggestions from the session") {
    Session s = example_session("firefighting/scenario1");
    CommandResult r = s.handle(command::RequestSuggestions{});
    REQUIRE(r.suggestion.has_value());
    CHECK(r.suggestion->status == SearchStatus::Unsolvable);
    s.handle(command::AdjustResource{"available-small(station1)", Quantity(1)});
    SearchResult found = s.suggest();
    REQUIRE(found.status == SearchStatus::Solved);
    vector<string> ids;
    for (const GroundAction &a : found.plan)
        ids.push_back(a.id);
    CHECK(ids == vector<string>{"dispatch-small-engines(station1)",
                                "extinguish-small-with-small"});
    // The suggestion continues from the end of the pending plan.
    s.handle(command::AppendStep{"dispatch-small-engines(station1)"});
    found = s.suggest();
    REQUIRE(found.status == SearchStatus::Solved);
    CHECK(found.plan.size() == 1);
}

TEST_CASE("snapshot and restore") {
    Session s = example_session("firefighting/scenario1");
    s.handle(command::AppendStep{"dispatch-big-engines(station1)"});
    s.handle(command::AppendStep{"extinguish-small-with-big"});
    s.handle(command::AdjustResource{"available-big(station1)", Quantity(2)});
    s.handle(command::Dispatch{});
    s.handle(command::ExecuteStep{});
    CHECK(s.revision() == 5);
    json doc = s.snapshot();
    CHECK(doc.at("schema") == "radar.session");
    CHECK(doc.at("version") == kSnapshotVersion);
    CHECK(doc.at("revision") == 5);
    CHECK(doc.at("lastDispatch") == "allow");
    Session restored = Session::restore(doc);
    CHECK(restored == s);
    CHECK(restored.snapshot() == doc);
    CHECK(Session::restore(json::parse(doc.dump())) == s);

    restored.handle(command::ExecuteStep{});
    s.handle(command::ExecuteStep{});
    CHECK(restored == s);

    json wrong_version = doc;
    wrong_version["version"] = kSnapshotVersion + 1;
    CHECK_THROWS_AS(Session::restore(wrong_version), SchemaVersionMismatch);
    json wrong_schema = doc;
    wrong_schema["schema"] = "something-else";
    CHECK_THROWS_AS(Session::restore(wrong_schema), SchemaVersionMismatch);
    json truncated = doc;
    truncated.erase("trace");
    CHECK_THROWS_AS(Session::restore(truncated), SchemaVersionMismatch);
    json inconsistent = doc;
    inconsistent["trace"].erase(inconsistent["trace"].size() - 1);
    CHECK_THROWS_AS(Session::restore(inconsistent), SchemaVersionMismatch);
    string text = doc.dump();
    CHECK_THROWS(Session::restore(json::parse(text.substr(0, text.size() / 2))));
}

TEST_CASE("scenario 1 replay") {
    Session s = example_session("firefighting/scenario1");
    auto events = parse_scenario(read_data("firefighting/scenario1.events"));
    REQUIRE(events.size() == 8);
    json t = replay(s, events);
    CHECK(t.at("initial").at("revision") == 0);
    REQUIRE(t.at("events").size() == 8);
    vector<bool> accepted;
    for (const json &e : t.at("events"))
        accepted.push_back(e.at("accepted"));
    CHECK(accepted == vector<bool>{true, true, false, false, true, true, true, true});
    CHECK(t["events"][2]["error"]["code"] == "DispatchBlocked");
    CHECK(t["events"][3]["error"]["code"] == "StepNotApplicable");
    CHECK(t["events"][5]["dispatch"] == "allow");
    CHECK(t["events"][4]["advisories"].size() == 1);
    CHECK(t["final"]["validation"]["goalSatisfied"] == true);
    CHECK(t["final"]["revision"] == 6);
    CHECK(s.revision() == 6);
    CHECK(s.current_state().holds("fire-out"));
}

TEST_CASE("scenario 2 replay") {
    Session s = example_session("firefighting/scenario2");
    json t = replay(s, parse_scenario(read_data("firefighting/scenario2.events")));
    for (const json &e : t.at("events"))
        CHECK(e.at("accepted") == true);
    CHECK(t["events"][0]["advisories"].size() == 2);
    CHECK(t["events"][1]["advisories"][0]["kind"] == "plan-incomplete");
    CHECK(t["events"].back()["dispatch"] == "allow");
    CHECK(t["final"]["validation"]["goalSatisfied"] == true);
}

TEST_CASE("empty scenario") {
    Session s = example_session("chain/problem");
    json t = replay(s, parse_scenario(read_data("chain/empty.events")));
    CHECK(t.at("events").empty());
    CHECK(t.at("final").at("advisories") == t.at("initial").at("advisories"));
    CHECK(s.revision() == 0);
}

TEST_CASE("replay is deterministic") {
    auto events = parse_scenario(read_data("firefighting/scenario1.events"));
    Session a = example_session("firefighting/scenario1");
    Session b = example_session("firefighting/scenario1");
    CHECK(replay(a, events).dump() == replay(b, events).dump());
    CHECK(a == b);
}

TEST_CASE("scenario parse errors") {
    CHECK(parse_scenario("\n\n").empty());
    CHECK_THROWS_AS(parse_scenario(R"({"atMillis": 5, "command": {"type": "Dispatch"}}
{"atMillis": 1, "command": {"type": "Dispatch"}})"),
                    InvalidCommand);
    CHECK_THROWS_AS(parse_scenario("{not json"), InvalidCommand);
    CHECK_THROWS_AS(parse_scenario(R"({"atMillis": 0})"), InvalidCommand);
    CHECK_THROWS_AS(parse_scenario(R"({"atMillis": 0, "command": {"type": "Nope"}})"),
                    InvalidCommand);
    try {
        parse_scenario("{\"atMillis\": 0, \"command\": {\"type\": \"Dispatch\"}}\n{oops");
        FAIL("parsed");
    } catch (const InvalidCommand &e) {
        CHECK(string(e.what()).find("2") != string::npos);
    }
}

TEST_CASE("random command sequences on the firefighting domain") {
    int accepted = 0;
    int rejected = 0;
    for (const string name : {"firefighting/scenario1", "firefighting/scenario2"}) {
        Session s = example_session(name);
        CommandSource source = firefighting_source();
        source.rng.seed(name.size());
        FuzzReport r = fuzz_session(s, source, 150);
        check_fuzz(r);
        accepted += r.accepted;
        rejected += r.rejected;
    }
    CHECK(accepted > 100);
    CHECK(rejected > 20);
}

TEST_CASE("random command sequences on generated domains") {
    int accepted = 0;
    int rejected = 0;
    for (uint64_t seed = 60000; seed < 60020; ++seed) {
        StripsInstance task = random_instance(seed);
        Session s = Session::create("t", task.domain_text, task.problem_text);
        CommandSource source = command_source(task);
        FuzzReport r = fuzz_session(s, source, 40);
        check_fuzz(r);
        accepted += r.accepted;
        rejected += r.rejected;
    }
    CHECK(accepted > 200);
    CHECK(rejected > 50);
}
