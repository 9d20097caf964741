#include "radar/service.h"

#include "radar/errors.h"
#include "radar/json_io.h"

#include <httplib.h>

#include <fstream>
#include <regex>
#include <sstream>

using namespace std;
using nlohmann::json;
namespace fs = std::filesystem;

namespace radar {
namespace {
const regex kExampleName("[a-z0-9_-]+/[a-z0-9_-]+");
const regex kSessionId("s[0-9]+");

string read_file(const fs::path &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw InvalidCommand("cannot read '" + path.string() + "'");
    ostringstream out;
    out << in.rdbuf();
    return out.str();
}

string body_text(const json &body, const char *key) {
    if (!body.contains(key) || !body.at(key).is_string())
        throw InvalidCommand(string("request needs a string field '") + key + "'",
                             {{"field", key}});
    return body.at(key).get<string>();
}

json parse_body(const httplib::Request &req, bool optional) {
    if (req.body.empty()) {
        if (optional)
            return json::object();
        throw InvalidCommand("request body is empty");
    }
    try {
        return json::parse(req.body);
    } catch (const json::parse_error &e) {
        throw InvalidCommand(string("request body is not JSON: ") + e.what());
    }
}

void send(httplib::Response &res, int status, const json &doc) {
    res.status = status;
    res.set_content(doc.dump(), "application/json");
}

void send_error(httplib::Response &res, const Error &e) {
    res.status = http_status(e);
    res.set_content(problem_document(e).dump(), "application/problem+json");
}

template<typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request &req, httplib::Response &res) {
        try {
            f(req, res);
        } catch (const Error &e) {
            send_error(res, e);
        } catch (const exception &e) {
            send_error(res, Error("InternalError", e.what()));
        }
    };
}
}

json problem_document(const Error &e) {
    return {{"code", e.code()}, {"message", e.what()}, {"details", e.details()}};
}

int http_status(const Error &e) {
    const string &code = e.code();
    if (code == "SessionNotFound")
        return 404;
    if (code == "StepNotApplicable" || code == "DispatchBlocked")
        return 409;
    if (code == "InternalError")
        return 500;
    if (code == "SyntaxError" || code == "UnsupportedFeature" || code == "SemanticError")
        return 422;
    return 400;
}

SessionService::SessionService(ServiceOptions options)
    : options_(move(options)) {
    if (options_.data_dir.empty())
        return;
    fs::create_directories(options_.data_dir);
    vector<fs::path> files;
    for (const fs::directory_entry &entry : fs::directory_iterator(options_.data_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            regex_match(entry.path().stem().string(), kSessionId))
            files.push_back(entry.path());
    }
    sort(files.begin(), files.end());
    for (const fs::path &path : files) {
        json doc = json::parse(read_file(path));
        auto session = make_shared<const Session>(Session::restore(doc));
        auto s = make_shared<Slot>();
        s->current = session;
        next_id_ = max<uint64_t>(next_id_, stoull(session->id().substr(1)) + 1);
        slots_[session->id()] = s;
    }
}

shared_ptr<SessionService::Slot> SessionService::slot(const string &id) const {
    lock_guard lock(slots_mutex_);
    auto it = slots_.find(id);
    if (it == slots_.end())
        throw SessionNotFound("no session '" + id + "'", {{"id", id}});
    return it->second;
}

void SessionService::persist(const Session &session) const {
    if (options_.data_dir.empty())
        return;
    fs::path target = options_.data_dir / (session.id() + ".json");
    fs::path tmp = target;
    tmp += ".tmp";
    {
        ofstream out(tmp, ios::binary | ios::trunc);
        out << session.snapshot().dump(1) << '\n';
        if (!out)
            throw runtime_error("cannot write snapshot '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

shared_ptr<const Session> SessionService::create(const json &body) {
    if (!body.is_object())
        throw InvalidCommand("request body must be an object");
    string domain_text;
    string problem_text;
    if (body.contains("example")) {
        string name = body_text(body, "example");
        if (!regex_match(name, kExampleName))
            throw InvalidCommand("bad example name '" + name + "'", {{"example", name}});
        fs::path dir = options_.examples_dir / name.substr(0, name.find('/'));
        fs::path problem = dir / (name.substr(name.find('/') + 1) + ".pddl");
        if (!fs::exists(dir / "domain.pddl") || !fs::exists(problem))
            throw InvalidCommand("unknown example '" + name + "'", {{"example", name}});
        domain_text = read_file(dir / "domain.pddl");
        problem_text = read_file(problem);
    } else {
        domain_text = body_text(body, "domain");
        problem_text = body_text(body, "problem");
    }
    SessionConfig config = options_.defaults;
    if (body.contains("config"))
        config = config_from_json(body.at("config"), config);

    string id;
    {
        lock_guard lock(slots_mutex_);
        id = "s" + std::to_string(next_id_++);
    }
    auto s = make_shared<Slot>();
    s->current = make_shared<const Session>(
        Session::create(id, move(domain_text), move(problem_text), config));
    persist(*s->current);
    {
        lock_guard lock(slots_mutex_);
        slots_[id] = s;
    }
    return s->current;
}

shared_ptr<const Session> SessionService::get(const string &id) const {
    shared_ptr<Slot> s = slot(id);
    lock_guard lock(s->publish);
    return s->current;
}

CommandResult SessionService::submit(const string &id, const SessionCommand &cmd) {
    shared_ptr<Slot> s = slot(id);
    lock_guard writer(s->writer);
    Session next = *get(id);
    CommandResult result = next.handle(cmd);
    auto published = make_shared<const Session>(move(next));
    persist(*published);
    {
        lock_guard lock(s->publish);
        s->current = published;
    }
    return result;
}

vector<string> SessionService::list() const {
    lock_guard lock(slots_mutex_);
    vector<string> ids;
    for (const auto &entry : slots_)
        ids.push_back(entry.first);
    return ids;
}

void SessionService::flush() const {
    for (const string &id : list()) {
        shared_ptr<Slot> s = slot(id);
        lock_guard writer(s->writer);
        persist(*get(id));
    }
}

void install_routes(httplib::Server &server, SessionService &service) {
    server.Get("/health", guarded([](const httplib::Request &, httplib::Response &res) {
        send(res, 200, {{"status", "ok"}});
    }));
    server.Get("/sessions", guarded([&service](const httplib::Request &, httplib::Response &res) {
        send(res, 200, {{"sessions", service.list()}});
    }));
    server.Post("/sessions", guarded([&service](const httplib::Request &req,
                                                httplib::Response &res) {
        auto session = service.create(parse_body(req, false));
        send(res, 201, session->view());
    }));
    server.Get(R"(/sessions/([^/]+))", guarded([&service](const httplib::Request &req,
                                                          httplib::Response &res) {
        send(res, 200, service.get(req.matches[1])->view());
    }));
    server.Post(R"(/sessions/([^/]+)/commands)", guarded([&service](const httplib::Request &req,
                                                                    httplib::Response &res) {
        string id = req.matches[1];
        service.get(id);
        SessionCommand cmd = command_from_json(parse_body(req, false));
        send(res, 200, to_json(service.submit(id, cmd)));
    }));
    server.Get(R"(/sessions/([^/]+)/advisories)", guarded([&service](const httplib::Request &req,
                                                                    httplib::Response &res) {
        auto session = service.get(req.matches[1]);
        send(res, 200, {{"revision", session->revision()},
                        {"advisories", to_json(session->advisories())}});
    }));
    server.Get(R"(/sessions/([^/]+)/landmarks)", guarded([&service](const httplib::Request &req,
                                                                   httplib::Response &res) {
        auto session = service.get(req.matches[1]);
        vector<LandmarkStatus> statuses;
        LandmarkGraph graph = session->landmarks(&statuses);
        send(res, 200, {{"revision", session->revision()},
                        {"landmarks", to_json(graph, &statuses)}});
    }));
    server.Post(R"(/sessions/([^/]+)/suggest)", guarded([&service](const httplib::Request &req,
                                                                  httplib::Response &res) {
        auto session = service.get(req.matches[1]);
        json body = parse_body(req, true);
        optional<chrono::milliseconds> budget;
        if (body.contains("budgetMs")) {
            const json &ms = body.at("budgetMs");
            if (!ms.is_number_integer() || ms.get<long long>() <= 0)
                throw InvalidCommand("budgetMs must be a positive integer");
            budget = chrono::milliseconds(ms.get<long long>());
        }
        send(res, 200, {{"revision", session->revision()},
                        {"suggestion", to_json(session->suggest(budget))}});
    }));
}
}
