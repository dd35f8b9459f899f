#include "amortize/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace amortize {

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::string millis(std::chrono::nanoseconds t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f ms", static_cast<double>(t.count()) / 1e6);
    return buf;
}

}  // namespace

std::string format_counterexample(const Counterexample& cx)
{
    std::ostringstream os;
    os << to_string(cx.finding);
    if (cx.step) {
        os << " at step " << *cx.step;
    }
    os << ": " << cx.method << " on (";
    for (std::size_t i = 0; i < cx.inputs.size(); ++i) {
        os << (i ? ", " : "") << cx.inputs[i].to_string();
    }
    os << ") with " << cx.arg.to_string() << "\n";
    os << "      lhs: " << cx.lhs << "\n";
    os << "      rhs: " << cx.rhs << "\n";
    if (!cx.note.empty()) {
        os << "      " << cx.note << "\n";
    }
    return os.str();
}

std::string format_report(const Report& r)
{
    std::ostringstream os;
    os << r.case_name << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << to_string(r.mode) << ")\n";
    if (r.trace) {
        const TraceTotals& t = *r.trace;
        os << "  steps: " << t.steps << (t.stopped ? " (stopped)" : "") << "\n";
        os << "  phi(start) + spec total: " << t.phi_start << " + " << t.spec_total << "\n";
        os << "  impl total + phi(end):   " << t.impl_total << " + " << t.phi_end << "\n";
        os << "  observable mismatches: " << t.observable_mismatches << "\n";
    } else {
        os << "  states explored: " << r.states_explored << "\n";
        os << "  squares checked: " << r.squares_checked << "\n";
    }
    if (r.slack_max) {
        os << "  slack_max: " << to_string(*r.slack_max) << "\n";
    }
    os << "  time: " << millis(r.wall_time) << "\n";
    if (r.failures > 0) {
        os << "  failures: " << r.failures << " (" << r.counterexamples.size() << " shown)\n";
        for (const Counterexample& cx : r.counterexamples) {
            os << "    " << format_counterexample(cx);
        }
    }
    return os.str();
}

std::string csv_row(const Report& r)
{
    std::ostringstream os;
    os << csv_field(r.case_name) << ',' << to_string(r.mode) << ',' << r.states_explored << ',' << r.squares_checked
       << ',' << (r.passed() ? "pass" : "fail") << ',' << (r.slack_max ? to_string(*r.slack_max) : "-");
    return os.str();
}

std::string format_csv(std::vector<Report> reports)
{
    std::stable_sort(reports.begin(), reports.end(),
                     [](const Report& a, const Report& b) { return a.case_name < b.case_name; });
    std::string out = std::string(kCsvHeader) + "\n";
    for (const Report& r : reports) {
        out += csv_row(r) + "\n";
    }
    return out;
}

}  // namespace amortize
