#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace conetree::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kUsage = 2,
    kDomainRejection = 3,
    kNumericFailure = 4,
};

/// Runs the command line `args` (without the program name).  Primary output
/// goes to `--out` or to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One produced artifact, e.g. the main result or the spectrum trace.
struct Artifact {
    std::string role;
    std::optional<std::string> path;  ///< nullopt means standard output
    std::string content;
};

/// Thrown by execute() for --help; carries the help text.
struct HelpRequested {
    std::string text;
};

/// Outcome of a command before anything is written.
struct Execution {
    std::string command;
    int exit_code = kOk;
    std::optional<std::string> manifest_path;
    nlohmann::json parameters;
    std::optional<std::uint64_t> seed;
    std::vector<Artifact> artifacts;
    std::vector<std::string> warnings;
};

/// Parses and executes without touching the file system, except that replay
/// reads its manifest.  Throws the library's exception types; CLI parse
/// errors surface as InvalidArgument.
Execution execute(const std::vector<std::string>& args);

std::string sha256_hex(std::string_view data);

/// JSON record of a run, with a SHA-256 digest per output.
nlohmann::json make_manifest(const std::vector<std::string>& args, const Execution& ex,
                             double wall_seconds);

/// The flag wins over CONETREE_THREADS; with neither set, the hardware count.
unsigned resolve_threads(std::optional<int> flag);

/// "a,b,c" -> {a, b, c}.
std::vector<double> parse_number_list(const std::string& text);

/// "lo:hi:n" -> n equally spaced points from lo to hi inclusive.
std::vector<double> parse_grid(const std::string& text);

std::string format_double(double x);

}  // namespace conetree::cli
