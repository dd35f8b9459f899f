#include "amortize/checker.hpp"

#include "amortize/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <unordered_set>

namespace amortize {

std::string_view to_string(Verdict v)
{
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::CostMismatch:
            return "cost-mismatch";
        case Verdict::BehaviorMismatch:
            return "behavior-mismatch";
    }
    return "?";
}

std::string_view to_string(Finding f)
{
    switch (f) {
        case Finding::CostMismatch:
            return "cost-mismatch";
        case Finding::BehaviorMismatch:
            return "behavior-mismatch";
        case Finding::InvariantViolation:
            return "invariant-violation";
    }
    return "?";
}

std::string SquareSide::to_string() const
{
    const std::string b = std::holds_alternative<Outcome>(behavior) ? std::get<Outcome>(behavior).to_string()
                                                                     : std::get<Dist<Outcome>>(behavior).to_string();
    return cost.to_string() + " | " + b;
}

std::optional<Rational> SquareCheck::slack() const
{
    auto l = lhs.cost.numeric();
    auto r = rhs.cost.numeric();
    if (!l || !r) {
        return std::nullopt;
    }
    return *l - *r;
}

std::string Counterexample::key() const
{
    std::string k = step ? std::to_string(*step) : std::string{};
    k += "|" + method + "|";
    for (const Value& v : inputs) {
        k += v.to_string() + ";";
    }
    return k + "|" + arg.to_string() + "|" + std::string(to_string(finding));
}

namespace {

struct SquareSetup {
    Mode mode;
    const Method& impl_method;
    const Method& spec_method;
};

SquareSetup prepare(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                    std::optional<Mode> override_mode)
{
    const Mode mode = override_mode.value_or(c.mode());
    require_mode_supported(c.cost, mode);
    const Method& im = c.impl.method(method);
    const Method& sm = c.spec.method(method);
    if (inputs.size() != im.sig.in_arity) {
        throw ArityMismatch("method '" + im.sig.name + "' takes " + std::to_string(im.sig.in_arity) + " states, got " +
                            std::to_string(inputs.size()));
    }
    if ((im.sig.in_arity > 1 || im.sig.out_arity > 1) && !c.cost.is_commutative()) {
        throw NonCommutativeTensor(c.cost.name());
    }
    return SquareSetup{mode, im, sm};
}

bool cost_holds(const CostMonoid& m, Mode mode, const Cost& lhs, const Cost& rhs)
{
    return mode == Mode::Exact ? lhs == rhs : m.leq(rhs, lhs);
}

Verdict decide(const CostMonoid& m, Mode mode, const SquareSide& lhs, const SquareSide& rhs)
{
    if (!(lhs.behavior == rhs.behavior)) {
        return Verdict::BehaviorMismatch;
    }
    return cost_holds(m, mode, lhs.cost, rhs.cost) ? Verdict::Pass : Verdict::CostMismatch;
}

}  // namespace

SquareCheck check_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                         const Value& arg, std::optional<Mode> mode)
{
    const SquareSetup setup = prepare(c, method, inputs, mode);
    const CostMonoid& m = c.cost;

    const Charged<Outcome> lhs =
        amortize::bind(m, apply_phi_tuple(m, c.phi, inputs), [&](const std::vector<Value>& spec_states) {
            Charged<Outcome> r = c.spec.step(setup.spec_method, spec_states, arg);
            m.require(r.cost, "specification cost");
            return r;
        });

    const Charged<Outcome> impl_result = c.impl.step(setup.impl_method, inputs, arg);
    m.require(impl_result.cost, "implementation cost");
    const Charged<Outcome> rhs = amortize::bind(m, impl_result, [&](const Outcome& o) {
        if (o.stopped) {
            return ret(m, Outcome::stop());
        }
        Charged<std::vector<Value>> mapped = apply_phi_tuple(m, c.phi, o.states);
        return Charged<Outcome>{mapped.cost, Outcome::next(o.observable, std::move(mapped.value))};
    });

    SquareCheck out;
    out.method = std::string(method);
    out.inputs.assign(inputs.begin(), inputs.end());
    out.arg = arg;
    out.mode = setup.mode;
    out.lhs = SquareSide{lhs.cost, lhs.value};
    out.rhs = SquareSide{rhs.cost, rhs.value};
    out.verdict = decide(m, setup.mode, out.lhs, out.rhs);
    if (!impl_result.value.stopped) {
        out.impl_successors = impl_result.value.states;
    }
    return out;
}

SquareCheck check_expected_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                                  const Value& arg, std::optional<Mode> mode)
{
    const SquareSetup setup = prepare(c, method, inputs, mode);
    const CostMonoid& m = c.cost;

    const Stochastic<Outcome> lhs =
        amortize::bind(m, apply_phi_tuple_random(m, c.phi, inputs), [&](const std::vector<Value>& spec_states) {
            return c.spec.random_step(setup.spec_method, spec_states, arg);
        });

    const Stochastic<Outcome> impl_result = c.impl.random_step(setup.impl_method, inputs, arg);
    const Stochastic<Outcome> rhs = amortize::bind(m, impl_result, [&](const Outcome& o) {
        if (o.stopped) {
            return certainly(ret(m, Outcome::stop()));
        }
        Stochastic<Outcome> mapped;
        for (auto& b : apply_phi_tuple_random(m, c.phi, o.states)) {
            mapped.push_back({b.weight, {b.value.cost, Outcome::next(o.observable, std::move(b.value.value))}});
        }
        return mapped;
    });

    const ExpectedCharged<Outcome> lhs_e = expect(m, lhs);
    const ExpectedCharged<Outcome> rhs_e = expect(m, rhs);

    SquareCheck out;
    out.method = std::string(method);
    out.inputs.assign(inputs.begin(), inputs.end());
    out.arg = arg;
    out.mode = setup.mode;
    out.lhs = SquareSide{Cost::rational(lhs_e.expected_cost), lhs_e.dist};
    out.rhs = SquareSide{Cost::rational(rhs_e.expected_cost), rhs_e.dist};
    out.verdict = decide(m, setup.mode, out.lhs, out.rhs);
    for (const auto& b : impl_result) {
        if (!b.value.value.stopped) {
            for (const Value& s : b.value.value.states) {
                out.impl_successors.push_back(s);
            }
        }
    }
    return out;
}

SquareCheck evaluate_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                            const Value& arg, std::optional<Mode> mode)
{
    return c.expected ? check_expected_square(c, method, inputs, arg, mode)
                      : check_square(c, method, inputs, arg, mode);
}

namespace {

struct WorkItem {
    std::size_t method = 0;
    std::vector<std::size_t> inputs;
    std::size_t arg = 0;
    std::size_t depth = 0;
};

struct WorkResult {
    std::optional<SquareCheck> square;
    std::exception_ptr error;
};

void run_items(const VerificationCase& c, const std::vector<Value>& states, const std::vector<WorkItem>& items,
               std::vector<WorkResult>& results, Mode mode, unsigned threads)
{
    results.assign(items.size(), WorkResult{});
    auto work = [&](std::size_t i) {
        const WorkItem& item = items[i];
        const Method& m = c.impl.methods()[item.method];
        std::vector<Value> inputs;
        inputs.reserve(item.inputs.size());
        for (std::size_t idx : item.inputs) {
            inputs.push_back(states[idx]);
        }
        try {
            results[i].square = evaluate_square(c, m.sig.name, inputs, m.sig.args[item.arg], mode);
        } catch (...) {
            results[i].error = std::current_exception();
        }
    };

    if (threads <= 1 || items.size() < 64) {
        for (std::size_t i = 0; i < items.size(); ++i) {
            work(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
                work(i);
            }
        });
    }
}

// Appends every ordered k-tuple over [0, end) that touches [begin, end), in
// lexicographic order, until `budget` runs out.
void tuples_touching(std::size_t k, std::size_t begin, std::size_t end, std::size_t& budget,
                     const std::vector<std::size_t>& depth, std::size_t method, std::size_t arg_count,
                     std::vector<WorkItem>& out)
{
    if (end == 0 || budget == 0) {
        return;
    }
    std::vector<std::size_t> idx(k, 0);
    while (budget > 0) {
        const bool touches = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= begin; });
        if (touches) {
            std::size_t d = 0;
            for (std::size_t i : idx) {
                d = std::max(d, depth[i]);
            }
            for (std::size_t a = 0; a < arg_count; ++a) {
                out.push_back(WorkItem{method, idx, a, d});
            }
            --budget;
        }
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < end) {
                break;
            }
            idx[pos] = 0;
            if (pos == 0) {
                return;
            }
        }
    }
}

Counterexample from_square(const SquareCheck& sq)
{
    Counterexample cx;
    cx.finding = sq.verdict == Verdict::BehaviorMismatch ? Finding::BehaviorMismatch : Finding::CostMismatch;
    cx.method = sq.method;
    cx.inputs = sq.inputs;
    cx.arg = sq.arg;
    cx.lhs = sq.lhs.to_string();
    cx.rhs = sq.rhs.to_string();
    return cx;
}

}  // namespace

Report explore(const VerificationCase& c, const ExploreOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    validate_case(c);
    const Mode mode = options.mode.value_or(c.mode());
    require_mode_supported(c.cost, mode);
    if (options.max_states < c.impl.seeds().size()) {
        throw InvalidCase("max_states is smaller than the number of seeds of '" + c.name + "'");
    }
    const unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;

    Report report;
    report.case_name = c.name;
    report.mode = mode;

    std::vector<Value> states;
    std::vector<std::size_t> depth;
    std::unordered_set<std::string> seen;
    std::vector<Counterexample> found;

    auto record = [&](Counterexample cx) {
        ++report.failures;
        if (found.size() < options.counterexample_limit) {
            found.push_back(std::move(cx));
        }
    };

    auto admit = [&](const Value& s, std::size_t d, const std::string& via) {
        if (!c.in_bounds(s) || states.size() >= options.max_states) {
            return;
        }
        if (!seen.insert(s.to_string()).second) {
            return;
        }
        if (!c.impl.invariant_holds(s)) {
            Counterexample cx;
            cx.finding = Finding::InvariantViolation;
            cx.method = via;
            cx.inputs = {s};
            cx.note = "state invariant violated";
            record(std::move(cx));
        }
        states.push_back(s);
        depth.push_back(d);
    };

    for (const Value& seed : c.impl.seeds()) {
        admit(seed, 0, "seed");
    }

    const auto& methods = c.impl.methods();
    std::vector<std::size_t> tuple_budget(methods.size(), options.max_states * options.max_states);
    std::vector<WorkItem> items;
    std::vector<WorkResult> results;
    std::size_t level_begin = 0;
    while (level_begin < states.size()) {
        const std::size_t level_end = states.size();
        items.clear();
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const MethodSig& sig = methods[mi].sig;
            if (sig.in_arity == 1) {
                for (std::size_t i = level_begin; i < level_end; ++i) {
                    for (std::size_t a = 0; a < sig.args.size(); ++a) {
                        items.push_back(WorkItem{mi, {i}, a, depth[i]});
                    }
                }
            } else {
                tuples_touching(sig.in_arity, level_begin, level_end, tuple_budget[mi], depth, mi, sig.args.size(),
                                items);
            }
        }

        run_items(c, states, items, results, mode, threads);

        for (std::size_t i = 0; i < items.size(); ++i) {
            if (results[i].error) {
                std::rethrow_exception(results[i].error);
            }
            const SquareCheck& sq = *results[i].square;
            ++report.squares_checked;
            if (mode == Mode::Colax) {
                if (auto s = sq.slack()) {
                    report.slack_max = report.slack_max ? std::max(*report.slack_max, *s) : *s;
                }
            }
            if (!sq.passed()) {
                record(from_square(sq));
            }
            if (items[i].depth + 1 <= options.max_depth) {
                for (const Value& s : sq.impl_successors) {
                    admit(s, items[i].depth + 1, sq.method);
                }
            }
        }
        level_begin = level_end;
    }

    std::sort(found.begin(), found.end(),
              [](const Counterexample& a, const Counterexample& b) { return a.key() < b.key(); });
    report.counterexamples = std::move(found);
    report.states_explored = states.size();
    report.wall_time = std::chrono::steady_clock::now() - start;
    return report;
}

}  // namespace amortize
