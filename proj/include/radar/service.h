#ifndef RADAR_SERVICE_H
#define RADAR_SERVICE_H

#include "errors.h"
#include "session.h"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace radar {
struct ServiceOptions {
    // Snapshot directory; empty disables persistence.
    std::filesystem::path data_dir;
    // Root of the bundled examples ("<name>/domain.pddl", "<name>/<problem>.pddl").
    std::filesystem::path examples_dir;
    SessionConfig defaults;
};

/*
  Owns the sessions. Commands to one session are serialized by that
  session's writer lock; readers get the last published revision and are
  never blocked by a command in flight.
*/
class SessionService {
    struct Slot {
        std::mutex writer;
        std::mutex publish;
        std::shared_ptr<const Session> current;
    };

    ServiceOptions options_;
    mutable std::mutex slots_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::uint64_t next_id_ = 1;

    std::shared_ptr<Slot> slot(const std::string &id) const;
    void persist(const Session &session) const;

public:
    // Loads every snapshot found in the data directory.
    explicit SessionService(ServiceOptions options);

    const ServiceOptions &options() const {return options_;}

    // Body: {"domain": text, "problem": text} or {"example": "dir/problem"},
    // plus an optional "config" object.
    std::shared_ptr<const Session> create(const nlohmann::json &body);
    // Throws SessionNotFound.
    std::shared_ptr<const Session> get(const std::string &id) const;
    CommandResult submit(const std::string &id, const SessionCommand &cmd);
    std::vector<std::string> list() const;
    // Rewrites the snapshot of every session.
    void flush() const;
};

// Problem document for an error: {"code", "message", "details"}.
nlohmann::json problem_document(const Error &e);
int http_status(const Error &e);

void install_routes(httplib::Server &server, SessionService &service);
}

#endif
