#ifndef RADAR_ERRORS_H
#define RADAR_ERRORS_H

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace radar {
/*
  Every error carries a machine-readable code (the class name) and an
  optional structured payload. The service and CLI render both verbatim.
*/
class Error : public std::runtime_error {
    std::string code_;
    nlohmann::json details_;
public:
    Error(std::string code, const std::string &message,
          nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(message), code_(std::move(code)),
          details_(std::move(details)) {
    }

    const std::string &code() const {return code_;}
    const nlohmann::json &details() const {return details_;}
};

class SyntaxError : public Error {
    int line_;
    int column_;
public:
    SyntaxError(const std::string &message, int line, int column)
        : Error("SyntaxError",
                std::to_string(line) + ":" + std::to_string(column) + ": " + message,
                {{"line", line}, {"column", column}}),
          line_(line), column_(column) {
    }
    int line() const {return line_;}
    int column() const {return column_;}
};

class UnsupportedFeature : public Error {
    std::string feature_;
public:
    UnsupportedFeature(const std::string &feature, int line, int column)
        : Error("UnsupportedFeature",
                std::to_string(line) + ":" + std::to_string(column) +
                ": unsupported PDDL feature " + feature,
                {{"feature", feature}, {"line", line}, {"column", column}}),
          feature_(feature) {
    }
    const std::string &feature() const {return feature_;}
};

class SemanticError : public Error {
public:
    SemanticError(const std::string &message, int line = 0, int column = 0)
        : Error("SemanticError",
                line > 0 ? std::to_string(line) + ":" + std::to_string(column) +
                ": " + message : message,
                {{"line", line}, {"column", column}}) {
    }
};

#define RADAR_SIMPLE_ERROR(Name) \
    class Name : public Error { \
public: \
        explicit Name(const std::string &message, \
                      nlohmann::json details = nlohmann::json::object()) \
            : Error(#Name, message, std::move(details)) {} \
    };

RADAR_SIMPLE_ERROR(NotApplicable)
RADAR_SIMPLE_ERROR(NegativeResource)
RADAR_SIMPLE_ERROR(TargetUnreachable)
RADAR_SIMPLE_ERROR(TargetInitiallyTrue)
RADAR_SIMPLE_ERROR(InvalidCommand)
RADAR_SIMPLE_ERROR(StepNotApplicable)
RADAR_SIMPLE_ERROR(DispatchBlocked)
RADAR_SIMPLE_ERROR(SchemaVersionMismatch)
RADAR_SIMPLE_ERROR(SessionNotFound)

#undef RADAR_SIMPLE_ERROR
}

#endif
