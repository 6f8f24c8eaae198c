#pragma once

// Runs the installed CLI binary with shell redirection and captures exit
// code, stdout, and stderr through temp files.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace testsupport {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

/// args is the raw argument string, e.g. "evolve --steps 3".
inline CliResult run_cli(const std::string& args, const std::string& tag) {
    const std::string base = std::string(QWALK_TEST_TMPDIR) + "/cli_" + tag;
    const std::string out_path = base + ".out";
    const std::string err_path = base + ".err";
    const std::string cmd = std::string(QWALK_CLI_PATH) + " " + args + " > " +
                            out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

} // namespace testsupport
