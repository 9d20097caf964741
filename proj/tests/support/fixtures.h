#ifndef TESTS_FIXTURES_H
#define TESTS_FIXTURES_H

#include "radar/session.h"

#include <string>

namespace radar::test {
std::string data_path(const std::string &relative);
std::string read_text(const std::string &path);
std::string read_data(const std::string &relative);

// "firefighting/scenario1" -> session over the bundled files.
Session example_session(const std::string &name, SessionConfig config = {});

struct Output {
    int status = 0;
    std::string text;
};

// Runs the radar binary with the given arguments; stdout only.
Output run_radar(const std::string &args);
}

#endif
