#include "amortize/cli.hpp"

#include "amortize/catalog.hpp"
#include "amortize/checker.hpp"
#include "amortize/errors.hpp"
#include "amortize/report.hpp"
#include "amortize/trace.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace amortize {

namespace {

struct UsageError : Error {
    using Error::Error;
};

std::vector<VerificationCase> selected_cases(const CliConfig& config)
{
    std::vector<VerificationCase> cases;
    if (config.command == Command::All) {
        for (const CatalogEntry& e : catalog()) {
            if (!e.negative_control) {
                cases.push_back(e.make());
            }
        }
        return cases;
    }
    if (config.cases.empty()) {
        throw UsageError("no case given");
    }
    for (const std::string& name : config.cases) {
        if (find_case(name) == nullptr) {
            throw UsageError("unknown case '" + name + "' (see `amortize list`)");
        }
        cases.push_back(make_case(name));
    }
    return cases;
}

void check_config(const std::vector<VerificationCase>& cases, const CliConfig& config)
{
    for (const VerificationCase& c : cases) {
        validate_case(c);
        if (config.mode) {
            try {
                require_mode_supported(c.cost, *config.mode);
            } catch (const OrderUnavailable& e) {
                throw UsageError(c.name + ": " + e.what());
            }
        }
    }
}

std::string list_text()
{
    std::ostringstream os;
    for (const CatalogEntry& e : catalog()) {
        const VerificationCase c = e.make();
        std::string mode(to_string(c.mode()));
        if (c.expected) {
            mode += ", expected";
        }
        os << e.name << std::string(e.name.size() < 24 ? 24 - e.name.size() : 1, ' ') << mode
           << std::string(mode.size() < 17 ? 17 - mode.size() : 1, ' ') << e.summary
           << (e.negative_control ? " [negative control]" : "") << "\n";
    }
    return os.str();
}

std::string render(std::vector<Report> reports, Format format)
{
    if (format == Format::Csv) {
        return format_csv(std::move(reports));
    }
    std::string out;
    for (const Report& r : reports) {
        out += format_report(r);
    }
    return out;
}

int run_checked(const CliConfig& config, std::ostream& out)
{
    if (config.command == Command::List) {
        out << list_text();
        return kExitPass;
    }
    std::vector<VerificationCase> cases = selected_cases(config);
    check_config(cases, config);

    std::vector<Report> reports;
    if (config.command == Command::Trace) {
        if (cases.size() != 1) {
            throw UsageError("trace takes exactly one case");
        }
        if (config.file.empty()) {
            throw UsageError("trace needs --file");
        }
        const Trace t = read_trace_file(config.file);
        reports.push_back(check_trace(cases.front(), t, config.mode));
    } else {
        const ExploreOptions options{.max_depth = config.max_depth,
                                     .max_states = config.max_states,
                                     .counterexample_limit = config.limit,
                                     .mode = config.mode,
                                     .threads = config.threads};
        for (const VerificationCase& c : cases) {
            reports.push_back(explore(c, options));
        }
    }

    const bool all_pass = std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.passed(); });
    const std::string text = render(std::move(reports), config.format);
    if (config.out.empty()) {
        out << text;
    } else {
        std::ofstream f(config.out, std::ios::binary);
        if (!f) {
            throw UsageError("cannot open output file '" + config.out + "'");
        }
        f << text;
    }
    return all_pass ? kExitPass : kExitFail;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        return run_checked(config, out);
    } catch (const ParseError& e) {
        err << "amortize: " << (config.file.empty() ? "" : config.file + ":") << e.what() << "\n";
    } catch (const Error& e) {
        err << "amortize: " << e.what() << "\n";
    }
    return kExitUsage;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CliConfig config;
    std::string mode = "default";
    std::string format = "text";

    CLI::App app{"Checks amortized cost bounds by exploring potential-function squares.", "amortize"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--mode", mode, "exact, colax, or each case's default")
        ->check(CLI::IsMember({"exact", "colax", "default"}));
    app.add_option("--max-depth", config.max_depth, "exploration depth")->capture_default_str();
    app.add_option("--max-states", config.max_states, "state budget")->capture_default_str();
    app.add_option("--limit", config.limit, "counterexamples shown per case")->capture_default_str();
    app.add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--out", config.out, "write the report to this file");
    app.add_option("--file", config.file, "trace file (trace command)");

    CLI::App* list = app.add_subcommand("list", "list registered cases");
    CLI::App* verify = app.add_subcommand("verify", "explore the given cases");
    verify->add_option("cases", config.cases, "case names")->required();
    CLI::App* trace = app.add_subcommand("trace", "check a trace file against one case");
    trace->add_option("case", config.cases, "case name")->required()->expected(1);
    CLI::App* all = app.add_subcommand("all", "explore every registered case except negative controls");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    if (*list) {
        config.command = Command::List;
    } else if (*verify) {
        config.command = Command::Verify;
    } else if (*trace) {
        config.command = Command::Trace;
    } else if (*all) {
        config.command = Command::All;
    }
    config.mode = parse_mode(mode);
    config.format = format == "csv" ? Format::Csv : Format::Text;

    if (const char* env = std::getenv("AMORTIZE_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long n = std::strtoul(env, &end, 10);
        if (*end != '\0' || n > 1024) {
            err << "amortize: AMORTIZE_THREADS must be a number of threads, got '" << env << "'\n";
            return kExitUsage;
        }
        config.threads = static_cast<unsigned>(n);
    }
    return run(config, out, err);
}

}  // namespace amortize
