#pragma once

#include "amortize/coalgebra.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace amortize {

enum class Command { List, Verify, Trace, All };
enum class Format { Text, Csv };

struct CliConfig {
    Command command = Command::List;
    std::vector<std::string> cases;
    std::optional<Mode> mode;  // nullopt: each case's documented mode
    std::size_t max_depth = 12;
    std::size_t max_states = 5000;
    std::size_t limit = 10;
    Format format = Format::Text;
    std::string out;   // empty: the `out` stream
    std::string file;  // trace file for `trace`
    unsigned threads = 0;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

// 0 when every report passes, 1 when any fails, 2 on configuration, file or
// parse errors (diagnostic written to `err`).
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (including AMORTIZE_THREADS) and runs. Help exits with 0.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace amortize
