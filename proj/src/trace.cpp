#include "amortize/trace.hpp"

#include "amortize/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace amortize {

namespace {

bool is_name_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
}

// Drops a trailing `#` comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line)
{
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
        } else if (c == '"') {
            in_string = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

std::size_t skip_blank(std::string_view s, std::size_t i)
{
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
        ++i;
    }
    return i;
}

std::string_view trim_right(std::string_view s)
{
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

Trace parse_trace(std::string_view text)
{
    Trace t;
    bool seed_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const std::string_view line = trim_right(strip_comment(raw));
        std::size_t i = skip_blank(line, 0);
        if (i == line.size()) {
            continue;
        }
        if (line[i] == '@') {
            const std::size_t start = i + 1;
            std::size_t j = start;
            while (j < line.size() && is_name_char(line[j])) {
                ++j;
            }
            if (line.substr(start, j - start) != "seed") {
                throw ParseError("unknown directive", line_no, i + 1);
            }
            if (seed_seen || !t.steps.empty()) {
                throw ParseError("@seed must appear once, before any record", line_no, i + 1);
            }
            j = skip_blank(line, j);
            std::size_t seed = 0;
            auto [ptr, ec] = std::from_chars(line.data() + j, line.data() + line.size(), seed);
            if (ec != std::errc{} || ptr != line.data() + line.size()) {
                throw ParseError("expected a non-negative seed index", line_no, j + 1);
            }
            t.seed = seed;
            seed_seen = true;
            continue;
        }

        const std::size_t name_start = i;
        while (i < line.size() && is_name_char(line[i])) {
            ++i;
        }
        if (i == name_start) {
            throw ParseError("expected a method name", line_no, name_start + 1);
        }
        TraceStep step;
        step.method = std::string(line.substr(name_start, i - name_start));
        step.line = line_no;
        if (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            throw ParseError("expected whitespace after the method name", line_no, i + 1);
        }
        const std::size_t arg_start = skip_blank(line, i);
        if (arg_start == line.size()) {
            step.arg = Value::unit();
        } else {
            try {
                step.arg = parse_value(line.substr(arg_start));
            } catch (const ParseError& e) {
                throw ParseError("malformed argument literal", line_no, arg_start + e.column());
            }
        }
        t.steps.push_back(std::move(step));
    }
    return t;
}

Trace read_trace_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open trace file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_trace(buf.str());
}

std::string format_trace(const Trace& t)
{
    std::string out = "@seed " + std::to_string(t.seed) + "\n";
    for (const TraceStep& s : t.steps) {
        out += s.method + " " + s.arg.to_string() + "\n";
    }
    return out;
}

void validate_trace(const VerificationCase& c, const Trace& t)
{
    if (t.seed >= c.impl.seeds().size()) {
        throw ParseError("seed index " + std::to_string(t.seed) + " out of range (case has " +
                             std::to_string(c.impl.seeds().size()) + " seeds)",
                         0, 1);
    }
    for (const TraceStep& s : t.steps) {
        if (!c.impl.has_method(s.method)) {
            throw ParseError("unknown method '" + s.method + "' for case '" + c.name + "'", s.line, 1);
        }
        const MethodSig& sig = c.impl.method(s.method).sig;
        if (std::find(sig.args.begin(), sig.args.end(), s.arg) == sig.args.end()) {
            throw ParseError("argument " + s.arg.to_string() + " is not in the domain of '" + s.method + "'", s.line,
                             s.method.size() + 2);
        }
    }
}

namespace {

void require_sequential(const VerificationCase& c, const Trace& t)
{
    for (const TraceStep& s : t.steps) {
        const MethodSig& sig = c.impl.method(s.method).sig;
        if (sig.in_arity != 1 || sig.out_arity != 1) {
            throw UnsupportedArity("method '" + s.method + "' is not a single-slot method and cannot appear in a trace");
        }
    }
}

Counterexample trace_failure(Finding f, const TraceStep& s, std::size_t index, const Value& state, std::string lhs,
                             std::string rhs, std::string note)
{
    Counterexample cx;
    cx.finding = f;
    cx.method = s.method;
    cx.inputs = {state};
    cx.arg = s.arg;
    cx.step = index;
    cx.lhs = std::move(lhs);
    cx.rhs = std::move(rhs);
    cx.note = std::move(note);
    return cx;
}

Counterexample telescope_failure(std::size_t steps, const Value& state, std::string lhs, std::string rhs)
{
    Counterexample cx;
    cx.finding = Finding::CostMismatch;
    cx.method = "<telescope>";
    cx.inputs = {state};
    cx.step = steps;
    cx.lhs = std::move(lhs);
    cx.rhs = std::move(rhs);
    cx.note = "phi(d0) + spec total vs impl total + phi(dn)";
    return cx;
}

std::string observable_key(const Outcome& o)
{
    return o.stopped ? "Stop" : o.observable.to_string();
}

Report check_trace_deterministic(const VerificationCase& c, const Trace& t, Mode mode)
{
    const CostMonoid& m = c.cost;
    Report report;
    report.case_name = c.name;
    report.mode = mode;
    TraceTotals totals;

    auto fail = [&](Counterexample cx) {
        ++report.failures;
        report.counterexamples.push_back(std::move(cx));
    };

    Value impl_state = c.impl.seeds()[t.seed];
    const Charged<Value> phi_start = c.phi(impl_state);
    m.require(phi_start.cost, "potential");
    Value spec_state = phi_start.value;
    Cost impl_total = m.identity();
    Cost spec_total = m.identity();
    std::set<std::string> visited{impl_state.to_string()};

    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const TraceStep& s = t.steps[i];
        const Charged<Outcome> ri = c.impl.step(s.method, std::span<const Value>(&impl_state, 1), s.arg);
        const Charged<Outcome> rs = c.spec.step(s.method, std::span<const Value>(&spec_state, 1), s.arg);
        impl_total = m.combine(impl_total, ri.cost);
        spec_total = m.combine(spec_total, rs.cost);
        ++totals.steps;
        ++report.squares_checked;

        if (observable_key(ri.value) != observable_key(rs.value)) {
            ++totals.observable_mismatches;
            fail(trace_failure(Finding::BehaviorMismatch, s, i, impl_state, observable_key(rs.value),
                               observable_key(ri.value), "observables differ"));
            if (ri.value.stopped != rs.value.stopped) {
                break;
            }
        }
        if (ri.value.stopped) {
            totals.stopped = true;
            const Cost lhs = m.combine(phi_start.cost, spec_total);
            const bool ok = mode == Mode::Exact ? lhs == impl_total : m.leq(impl_total, lhs);
            if (!ok) {
                fail(telescope_failure(i + 1, impl_state, lhs.to_string(), impl_total.to_string()));
            }
            totals.phi_start = phi_start.cost.to_string();
            totals.spec_total = spec_total.to_string();
            totals.impl_total = impl_total.to_string();
            totals.phi_end = m.identity().to_string();
            report.states_explored = visited.size();
            report.trace = totals;
            return report;
        }
        impl_state = ri.value.states.front();
        spec_state = rs.value.states.front();
        visited.insert(impl_state.to_string());
    }

    const Charged<Value> phi_end = c.phi(impl_state);
    m.require(phi_end.cost, "potential");
    if (!(phi_end.value == spec_state)) {
        Counterexample cx = telescope_failure(totals.steps, impl_state, spec_state.to_string(),
                                              phi_end.value.to_string());
        cx.finding = Finding::BehaviorMismatch;
        cx.note = "specification state differs from the potential's image of the final state";
        fail(std::move(cx));
    }
    const Cost lhs = m.combine(phi_start.cost, spec_total);
    const Cost rhs = m.combine(impl_total, phi_end.cost);
    const bool ok = mode == Mode::Exact ? lhs == rhs : m.leq(rhs, lhs);
    if (!ok) {
        fail(telescope_failure(totals.steps, impl_state, lhs.to_string(), rhs.to_string()));
    }
    totals.phi_start = phi_start.cost.to_string();
    totals.spec_total = spec_total.to_string();
    totals.impl_total = impl_total.to_string();
    totals.phi_end = phi_end.cost.to_string();
    report.states_explored = visited.size();
    report.trace = totals;
    return report;
}

// Sub-probability distribution over states, keyed by serialization.
using StateMass = std::map<std::string, Weighted<Value>>;

void add_mass(StateMass& d, const Value& v, const Rational& w)
{
    auto [it, inserted] = d.try_emplace(v.to_string(), Weighted<Value>{w, v});
    if (!inserted) {
        it->second.weight += w;
    }
}

void add_mass(std::map<std::string, Rational>& d, const std::string& key, const Rational& w)
{
    d[key] += w;
}

std::string describe(const std::map<std::string, Rational>& d)
{
    std::string out = "{";
    for (const auto& [k, w] : d) {
        out += (out.size() > 1 ? ", " : "") + to_string(w) + ": " + k;
    }
    return out + "}";
}

Report check_trace_expected(const VerificationCase& c, const Trace& t, Mode mode)
{
    const CostMonoid& m = c.cost;
    Report report;
    report.case_name = c.name;
    report.mode = mode;
    TraceTotals totals;

    auto fail = [&](Counterexample cx) {
        ++report.failures;
        report.counterexamples.push_back(std::move(cx));
    };

    const Value& seed = c.impl.seeds()[t.seed];
    StateMass impl_mass;
    add_mass(impl_mass, seed, Rational{1});
    StateMass spec_mass;
    Rational phi_start{0};
    for (const auto& b : c.phi.random(seed)) {
        phi_start += b.weight * b.value.cost.as_rational();
        add_mass(spec_mass, b.value.value, b.weight);
    }
    Rational impl_total{0};
    Rational spec_total{0};
    std::set<std::string> visited{seed.to_string()};

    for (std::size_t i = 0; i < t.steps.size() && !impl_mass.empty(); ++i) {
        const TraceStep& s = t.steps[i];
        std::map<std::string, Rational> impl_obs;
        std::map<std::string, Rational> spec_obs;
        StateMass impl_next;
        StateMass spec_next;
        for (const auto& [key, wd] : impl_mass) {
            for (const auto& b : c.impl.random_step(c.impl.method(s.method), std::span<const Value>(&wd.value, 1), s.arg)) {
                const Rational w = wd.weight * b.weight;
                impl_total += w * b.value.cost.as_rational();
                add_mass(impl_obs, observable_key(b.value.value), w);
                if (!b.value.value.stopped) {
                    add_mass(impl_next, b.value.value.states.front(), w);
                    visited.insert(b.value.value.states.front().to_string());
                }
            }
        }
        for (const auto& [key, ws] : spec_mass) {
            for (const auto& b : c.spec.random_step(c.spec.method(s.method), std::span<const Value>(&ws.value, 1), s.arg)) {
                const Rational w = ws.weight * b.weight;
                spec_total += w * b.value.cost.as_rational();
                add_mass(spec_obs, observable_key(b.value.value), w);
                if (!b.value.value.stopped) {
                    add_mass(spec_next, b.value.value.states.front(), w);
                }
            }
        }
        ++totals.steps;
        ++report.squares_checked;
        if (impl_obs != spec_obs) {
            ++totals.observable_mismatches;
            fail(trace_failure(Finding::BehaviorMismatch, s, i, impl_mass.begin()->second.value, describe(spec_obs),
                               describe(impl_obs), "observable distributions differ"));
        }
        if (impl_obs.count("Stop") != 0) {
            totals.stopped = true;
        }
        impl_mass = std::move(impl_next);
        spec_mass = std::move(spec_next);
    }

    Rational phi_end{0};
    std::map<std::string, Rational> image;
    for (const auto& [key, wd] : impl_mass) {
        for (const auto& b : c.phi.random(wd.value)) {
            phi_end += wd.weight * b.weight * b.value.cost.as_rational();
            add_mass(image, b.value.value.to_string(), wd.weight * b.weight);
        }
    }
    std::map<std::string, Rational> spec_final;
    for (const auto& [key, ws] : spec_mass) {
        add_mass(spec_final, key, ws.weight);
    }
    const Value last = impl_mass.empty() ? seed : impl_mass.begin()->second.value;
    if (image != spec_final) {
        Counterexample cx = telescope_failure(totals.steps, last, describe(spec_final), describe(image));
        cx.finding = Finding::BehaviorMismatch;
        cx.note = "specification state distribution differs from the potential's image";
        fail(std::move(cx));
    }
    const Cost lhs = Cost::rational(phi_start + spec_total);
    const Cost rhs = Cost::rational(impl_total + phi_end);
    const bool ok = mode == Mode::Exact ? lhs == rhs : m.leq(rhs, lhs);
    if (!ok) {
        fail(telescope_failure(totals.steps, last, lhs.to_string(), rhs.to_string()));
    }
    totals.phi_start = to_string(phi_start);
    totals.spec_total = to_string(spec_total);
    totals.impl_total = to_string(impl_total);
    totals.phi_end = to_string(phi_end);
    report.states_explored = visited.size();
    report.trace = totals;
    return report;
}

}  // namespace

Report check_trace(const VerificationCase& c, const Trace& t, std::optional<Mode> mode)
{
    const auto start = std::chrono::steady_clock::now();
    validate_case(c);
    validate_trace(c, t);
    require_sequential(c, t);
    const Mode effective = mode.value_or(c.mode());
    require_mode_supported(c.cost, effective);
    Report r = c.expected ? check_trace_expected(c, t, effective) : check_trace_deterministic(c, t, effective);
    std::sort(r.counterexamples.begin(), r.counterexamples.end(),
              [](const Counterexample& a, const Counterexample& b) { return a.key() < b.key(); });
    r.wall_time = std::chrono::steady_clock::now() - start;
    return r;
}

Trace random_trace(const VerificationCase& c, std::mt19937_64& rng, std::size_t max_steps)
{
    std::vector<const Method*> usable;
    for (const Method& m : c.impl.methods()) {
        if (m.sig.in_arity == 1 && m.sig.out_arity == 1) {
            usable.push_back(&m);
        }
    }
    Trace t;
    t.seed = std::uniform_int_distribution<std::size_t>(0, c.impl.seeds().size() - 1)(rng);
    if (usable.empty()) {
        return t;
    }
    const std::size_t length = std::uniform_int_distribution<std::size_t>(0, max_steps)(rng);
    for (std::size_t i = 0; i < length; ++i) {
        const Method& m = *usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)];
        const Value& arg = m.sig.args[std::uniform_int_distribution<std::size_t>(0, m.sig.args.size() - 1)(rng)];
        t.steps.push_back(TraceStep{m.sig.name, arg, 0});
    }
    return t;
}

}  // namespace amortize
