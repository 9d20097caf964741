#include "radar/errors.h"
#include "radar/json_io.h"
#include "radar/service.h"
#include "radar/session.h"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace std;
using nlohmann::json;
using namespace radar;

#ifndef RADAR_EXAMPLES_DIR
#define RADAR_EXAMPLES_DIR "data"
#endif

namespace {
enum ExitCode {
    EXIT_OK = 0,
    EXIT_ALERTS = 1,
    EXIT_USAGE = 2
};

string read_file(const string &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw runtime_error("cannot read '" + path + "'");
    ostringstream out;
    out << in.rdbuf();
    return out.str();
}

vector<string> read_plan(const string &path) {
    istringstream in(read_file(path));
    vector<string> ids;
    string line;
    while (getline(in, line)) {
        size_t comment = line.find(';');
        if (comment != string::npos)
            line.erase(comment);
        size_t first = line.find_first_not_of(" \t\r");
        if (first == string::npos)
            continue;
        size_t last = line.find_last_not_of(" \t\r");
        ids.push_back(line.substr(first, last - first + 1));
    }
    return ids;
}

string severity_tag(const Advisory &a) {
    return string("[") + to_string(a.severity) + "] " + to_string(a.kind);
}

void print_advisories(ostream &out, const vector<Advisory> &advisories, const string &indent) {
    if (advisories.empty())
        out << indent << "(no advisories)\n";
    for (const Advisory &a : advisories)
        out << indent << severity_tag(a) << ": " << a.message << "\n";
}

void print_json(const json &doc) {
    cout << doc.dump(2) << "\n";
}

string describe_command(const json &cmd) {
    string text = cmd.at("type").get<string>();
    for (auto &[key, value] : cmd.items()) {
        if (key != "type")
            text += " " + key + "=" + (value.is_string() ? value.get<string>() : value.dump());
    }
    return text;
}

bool has_alert(const vector<Advisory> &advisories) {
    return any_of(advisories.begin(), advisories.end(),
                  [](const Advisory &a) {return a.severity == Severity::Alert;});
}

struct AnalyzeOptions {
    string domain;
    string problem;
    string plan;
    string format = "text";
};

int run_analyze(const AnalyzeOptions &opt) {
    Session session = Session::create("cli", read_file(opt.domain), read_file(opt.problem));
    vector<Advisory> advisories = session.advisories();
    optional<PlanValidationReport> report;
    if (!opt.plan.empty()) {
        for (const string &id : read_plan(opt.plan))
            session.handle(command::AppendStep{id});
        advisories = session.advisories();
        report = session.validate();
    }
    if (opt.format == "json") {
        json doc = {{"domain", session.domain().name}, {"problem", session.problem().name},
                    {"advisories", to_json(advisories)}};
        if (report)
            doc["validation"] = to_json(*report);
        print_json(doc);
    } else {
        cout << "domain " << session.domain().name << ", problem " << session.problem().name
             << "\n";
        print_advisories(cout, advisories, "");
        if (report) {
            cout << "plan: " << report->action_ids.size() << " steps, "
                 << (report->valid() ? "valid" : "invalid") << ", goals "
                 << (report->goal_satisfied ? "satisfied" : "not satisfied") << "\n";
        }
    }
    return has_alert(advisories) ? EXIT_ALERTS : EXIT_OK;
}

int run_landmarks(const AnalyzeOptions &opt) {
    Session session = Session::create("cli", read_file(opt.domain), read_file(opt.problem));
    vector<LandmarkStatus> statuses;
    LandmarkGraph graph = session.landmarks(&statuses);
    if (opt.format == "json") {
        print_json(to_json(graph, &statuses));
        return EXIT_OK;
    }
    cout << graph.nodes.size() << " landmarks, " << graph.orders.size() << " orderings"
         << (graph.partial ? " (partial)" : "") << "\n";
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const Landmark &lm = graph.nodes[i];
        cout << "L" << i << " " << lm.label() << "  [" << to_string(lm.origin) << ", level "
             << (lm.min_level == kUnreachable ? string("inf") : std::to_string(lm.min_level))
             << ", " << to_string(statuses[i].status) << "]\n";
        for (const BlockedAchiever &b : statuses[i].blocked_achievers) {
            for (const FailedNumeric &f : b.failed) {
                cout << "    " << b.action_id << " needs " << f.fluent << " >= "
                     << format_quantity(f.required) << ", bound " << format_quantity(f.available)
                     << "\n";
            }
        }
    }
    for (const LandmarkOrdering &o : graph.orders)
        cout << "L" << o.from << " -> L" << o.to << "  " << to_string(o.kind) << "\n";
    for (const string &g : graph.unreachable_goals)
        cout << "unreachable goal " << g << "\n";
    return EXIT_OK;
}

struct ReplayOptions {
    string scenario;
    string domain;
    string problem;
    string format = "text";
};

int run_replay(const ReplayOptions &opt) {
    Session session = Session::create("replay", read_file(opt.domain), read_file(opt.problem));
    vector<ScenarioEvent> events = parse_scenario(read_file(opt.scenario));
    json transcript = replay(session, events);
    if (opt.format == "json") {
        print_json(transcript);
        return EXIT_OK;
    }
    const json &initial = transcript.at("initial");
    cout << "initial (revision " << initial.at("revision") << ")\n";
    for (const json &a : initial.at("advisories"))
        cout << "  " << severity_tag(advisory_from_json(a)) << ": " << a.at("message").get<string>()
             << "\n";
    for (const json &e : transcript.at("events")) {
        cout << "event " << e.at("index") << " @" << e.at("atMillis") << "ms "
             << describe_command(e.at("command"));
        if (!e.at("note").get<string>().empty())
            cout << "  -- " << e.at("note").get<string>();
        cout << "\n";
        if (e.at("accepted").get<bool>()) {
            cout << "  accepted, revision " << e.at("revision");
            if (e.contains("dispatch"))
                cout << ", dispatch " << e.at("dispatch").get<string>();
            cout << "\n";
        } else {
            const json &err = e.at("error");
            cout << "  rejected " << err.at("code").get<string>() << ": "
                 << err.at("message").get<string>() << "\n";
            continue;
        }
        vector<Advisory> advisories;
        for (const json &a : e.at("advisories"))
            advisories.push_back(advisory_from_json(a));
        print_advisories(cout, advisories, "  ");
    }
    const json &final = transcript.at("final");
    cout << "final (revision " << final.at("revision") << "), goals "
         << (final.at("validation").at("goalSatisfied").get<bool>() ? "satisfied"
                                                                     : "not satisfied")
         << "\n";
    return EXIT_OK;
}

struct ServeOptions {
    int port = 8080;
    string data_dir;
    string dispatch_policy = "block";
};

int run_serve(const ServeOptions &opt) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ServiceOptions options;
    options.data_dir = opt.data_dir;
    options.examples_dir = RADAR_EXAMPLES_DIR;
    options.defaults.dispatch_policy = dispatch_policy_from_string(opt.dispatch_policy);
    SessionService service(options);

    httplib::Server server;
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    install_routes(server, service);
    if (!server.bind_to_port("0.0.0.0", opt.port)) {
        cerr << "radar: cannot bind port " << opt.port << "\n";
        return EXIT_USAGE;
    }
    thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    cerr << "radar: serving on port " << opt.port;
    if (opt.data_dir.empty())
        cerr << " (no data directory, sessions are not persisted)";
    cerr << "\n";
    bool ok = server.listen_after_bind();
    if (waiter.joinable()) {
        if (!ok)
            kill(getpid(), SIGTERM);
        waiter.join();
    }
    service.flush();
    return ok ? EXIT_OK : EXIT_USAGE;
}
}

int main(int argc, char **argv) {
    CLI::App app{"Landmark-based decision support for human-in-the-loop planning"};
    app.require_subcommand(1);

    AnalyzeOptions analyze_opt;
    CLI::App *analyze = app.add_subcommand("analyze", "Print the advisories for a problem");
    analyze->add_option("--domain", analyze_opt.domain, "Domain file")->required();
    analyze->add_option("--problem", analyze_opt.problem, "Problem file")->required();
    analyze->add_option("--plan", analyze_opt.plan, "Plan file, one ground action per line");
    analyze->add_option("--format", analyze_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    AnalyzeOptions landmarks_opt;
    CLI::App *landmarks = app.add_subcommand("landmarks", "Print the landmark graph");
    landmarks->add_option("--domain", landmarks_opt.domain, "Domain file")->required();
    landmarks->add_option("--problem", landmarks_opt.problem, "Problem file")->required();
    landmarks->add_option("--format", landmarks_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    ServeOptions serve_opt;
    if (const char *dir = getenv("RADAR_DATA_DIR"))
        serve_opt.data_dir = dir;
    CLI::App *serve = app.add_subcommand("serve", "Host the session API");
    serve->add_option("--port", serve_opt.port, "TCP port")->check(CLI::Range(0, 65535));
    serve->add_option("--data-dir", serve_opt.data_dir,
                      "Snapshot directory (default: $RADAR_DATA_DIR)");
    serve->add_option("--dispatch-policy", serve_opt.dispatch_policy, "block or warn")
        ->check(CLI::IsMember({"block", "warn"}));

    ReplayOptions replay_opt;
    CLI::App *replay_cmd = app.add_subcommand("replay", "Replay a scenario event file");
    replay_cmd->add_option("scenario", replay_opt.scenario, "Scenario file")->required();
    replay_cmd->add_option("--domain", replay_opt.domain, "Domain file")->required();
    replay_cmd->add_option("--problem", replay_opt.problem, "Problem file")->required();
    replay_cmd->add_option("--format", replay_opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    try {
        if (*analyze)
            return run_analyze(analyze_opt);
        if (*landmarks)
            return run_landmarks(landmarks_opt);
        if (*serve)
            return run_serve(serve_opt);
        return run_replay(replay_opt);
    } catch (const Error &e) {
        cerr << "radar: " << e.code() << ": " << e.what() << "\n";
    } catch (const exception &e) {
        cerr << "radar: " << e.what() << "\n";
    }
    return EXIT_USAGE;
}
