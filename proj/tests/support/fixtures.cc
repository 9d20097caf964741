#include "fixtures.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

using namespace std;

namespace radar::test {
string data_path(const string &relative) {
    return string(RADAR_DATA_DIR_PATH) + "/" + relative;
}

string read_text(const string &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw runtime_error("cannot read " + path);
    ostringstream out;
    out << in.rdbuf();
    return out.str();
}

string read_data(const string &relative) {
    return read_text(data_path(relative));
}

Session example_session(const string &name, SessionConfig config) {
    string dir = name.substr(0, name.find('/'));
    string problem = name.substr(name.find('/') + 1);
    return Session::create(name, read_data(dir + "/domain.pddl"),
                           read_data(dir + "/" + problem + ".pddl"), config);
}

Output run_radar(const string &args) {
    string command = string(RADAR_BINARY_PATH) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(command.c_str(), "r");
    if (!pipe)
        throw runtime_error("cannot run " + command);
    Output out;
    array<char, 4096> buffer;
    size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        out.text.append(buffer.data(), n);
    int status = pclose(pipe);
    out.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}
}
