// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include "amortize/catalog.hpp"
#include "amortize/checker.hpp"
#include "amortize/cli.hpp"
#include "amortize/compose.hpp"
#include "amortize/structures.hpp"
#include "amortize/trace.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace amortize;

namespace {

struct Outcome_ {
    bool ok = true;
    std::string detail;
};

// Collects the first failed expectation of a criterion.
class Check
{
   public:
    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok_) {
            ok_ = false;
            first_failure_ = what;
        }
    }

    void note(const std::string& s)
    {
        notes_ += notes_.empty() ? s : "; " + s;
    }

    Outcome_ result() const
    {
        return {ok_, ok_ ? notes_ : first_failure_};
    }

   private:
    bool ok_ = true;
    std::string first_failure_;
    std::string notes_;
};

Charged<Outcome> step1(const Coalgebra& c, std::string_view m, const Value& s, const Value& arg)
{
    return c.step(m, std::span(&s, 1), arg);
}

std::int64_t int_cost(const Cost& c)
{
    return c.as_integer();
}

Outcome_ allocator_exactness()
{
    Check k;
    const VerificationCase c = allocator_case();
    const Report r = explore(c);
    k.expect(r.passed() && r.mode == Mode::Exact, "explore failed");
    k.expect(r.states_explored == 8, "explored " + std::to_string(r.states_explored) + " states, expected 8");

    Trace t{7, {}};
    std::int64_t impl = 0, spec = 0;
    Value d = c.impl.seeds()[7];
    Value u = c.phi(d).value;
    for (int i = 0; i < 8; ++i) {
        t.steps.push_back({"alloc", Value::unit(), 0});
        const auto a = step1(c.impl, "alloc", d, Value::unit());
        const auto b = step1(c.spec, "alloc", u, Value::unit());
        impl += int_cost(a.cost);
        spec += int_cost(b.cost);
        d = a.value.states.front();
        u = b.value.states.front();
    }
    const Report tr = check_trace(c, t);
    k.expect(tr.passed(), "trace from seed 7 failed");
    k.expect(impl == 8 && spec == 8, "direct totals " + std::to_string(impl) + "/" + std::to_string(spec));
    k.expect(tr.trace && tr.trace->impl_total == "8" && tr.trace->spec_total == "8", "trace totals differ from 8");
    k.note("8 states, trace impl 8 = spec 8");
    return k.result();
}

Outcome_ dynamic_array_exactness()
{
    Check k;
    const VerificationCase c = dynamic_array_case(false);
    Value s = c.impl.seeds().front();
    std::int64_t total = 0;
    std::size_t squares = 0;
    constexpr std::int64_t pushes = 300;
    for (std::int64_t m = 1; m <= pushes; ++m) {
        for (const Value& e : element_domain()) {
            const SquareCheck sq = check_square(c, "push", std::span(&s, 1), e, Mode::Exact);
            ++squares;
            k.expect(sq.passed(), "square failed after " + std::to_string(m - 1) + " pushes");
        }
        const auto r = step1(c.impl, "push", s, Value::integer(m % 2));
        total += int_cost(r.cost);
        s = r.value.states.front();
        const BoundedArray a = BoundedArray::decode(s);
        k.expect(array_invariant(a), "carrier invariant violated at " + std::to_string(m));
        k.expect(total == 3 * m - array_potential(a), "total cost differs from 3m - phi at m = " + std::to_string(m));
    }
    k.expect(explore(c).passed(), "explore failed");
    k.note(std::to_string(pushes) + " pushes, " + std::to_string(squares) + " squares, total = 3m - phi throughout");
    return k.result();
}

Outcome_ queue_dichotomy()
{
    Check k;
    const ExploreOptions wide{.max_depth = 64, .max_states = 100000, .counterexample_limit = 100000};
    const Report exact = explore(batched_queue_case(2), wide);
    k.expect(exact.passed() && exact.mode == Mode::Exact, "queue-exact failed Exact");

    const VerificationCase lax = batched_queue_case(1);
    const Report colax = explore(lax, wide);
    k.expect(colax.passed() && colax.mode == Mode::Colax, "queue-lax failed Colax");

    ExploreOptions forced = wide;
    forced.mode = Mode::Exact;
    const Report fail = explore(lax, forced);
    k.expect(!fail.passed(), "queue-lax passed Exact");
    std::size_t flushes = 0;
    for (const Counterexample& cx : fail.counterexamples) {
        const BatchedQueueState q = BatchedQueueState::decode(cx.inputs.front());
        if (cx.method != "dequeue" || !q.outbox.empty() || q.inbox.empty()) {
            continue;
        }
        ++flushes;
        const SquareCheck sq = check_square(lax, "dequeue", cx.inputs, cx.arg, Mode::Exact);
        k.expect(int_cost(sq.lhs.cost) == 2 * int_cost(sq.rhs.cost),
                 "flush counterexample with lhs " + sq.lhs.cost.to_string() + ", rhs " + sq.rhs.cost.to_string());
    }
    k.expect(flushes > 0, "no flush counterexample");
    k.note(std::to_string(exact.states_explored) + " states; " + std::to_string(flushes) +
           " flush counterexamples, each lhs = 2 rhs");
    return k.result();
}

Outcome_ behavioral_simulation()
{
    Check k;
    std::mt19937_64 rng(2024);
    std::size_t dequeues = 0;
    for (const VerificationCase& c : {batched_queue_case(1), batched_queue_case(2)}) {
        for (int i = 0; i < 100; ++i) {
            const Trace t = random_trace(c, rng, 32);
            Value d = c.impl.seeds()[t.seed];
            Value u = c.phi(d).value;
            for (const TraceStep& st : t.steps) {
                const auto a = step1(c.impl, st.method, d, st.arg);
                const auto b = step1(c.spec, st.method, u, st.arg);
                if (st.method == "dequeue") {
                    ++dequeues;
                }
                k.expect(a.value.stopped == b.value.stopped && a.value.observable == b.value.observable,
                         c.name + ": observable mismatch\n" + format_trace(t));
                if (a.value.stopped || b.value.stopped) {
                    break;
                }
                d = a.value.states.front();
                u = b.value.states.front();
            }
            const Report r = check_trace(c, t);
            k.expect(r.trace && r.trace->observable_mismatches == 0, c.name + ": check_trace reported mismatches");
        }
    }
    k.note("200 traces, " + std::to_string(dequeues) + " dequeues, 0 mismatches");
    return k.result();
}

// Expected heads of `n` independent coins with bias p, by enumerating 2^n sequences.
Rational enumerate_heads(std::int64_t n, const Rational& p)
{
    Rational e{0};
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Rational w{1};
        std::int64_t heads = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const bool head = (mask >> i) & 1u;
            w *= head ? p : Rational{1} - p;
            heads += head ? 1 : 0;
        }
        e += w * heads;
    }
    return e;
}

Outcome_ expected_amortization()
{
    Check k;
    std::size_t squares = 0;
    for (std::int64_t n : {2, 3, 4}) {
        for (const Rational p : {Rational{1, 2}, Rational{1, 3}}) {
            const std::string tag = "k=" + std::to_string(n) + " p=" + to_string(p);
            const VerificationCase c = randomized_allocator_case(n, p);
            const Report r = explore(c);
            k.expect(r.passed() && r.states_explored == static_cast<std::size_t>(n), tag + ": explore failed");
            for (std::int64_t d = 0; d < n; ++d) {
                const Value s = Value::integer(d);
                const SquareCheck sq = check_expected_square(c, "alloc", std::span(&s, 1), Value::unit());
                ++squares;
                // lhs: potential coins (n - d - 1) then one spec coin.
                const Rational lhs = enumerate_heads(n - d - 1, p) + enumerate_heads(1, p);
                // rhs: n coins at zero (landing on n - 1, potential 0), else the potential at d - 1.
                const Rational rhs = d == 0 ? enumerate_heads(n, p) : enumerate_heads(n - d, p);
                k.expect(sq.passed(), tag + ": square failed at d = " + std::to_string(d));
                k.expect(sq.lhs.cost == Cost::rational(lhs) && sq.rhs.cost == Cost::rational(rhs),
                         tag + ": expected costs differ from enumeration at d = " + std::to_string(d));
            }
        }
    }
    k.note(std::to_string(squares) + " squares equal to coin enumeration");
    return k.result();
}

Outcome_ multi_input_summation()
{
    Check k;
    const VerificationCase c = piggy_bank_case();
    const Report r = explore(c);
    k.expect(r.passed() && r.states_explored == static_cast<std::size_t>(kPiggyBound) + 1, "explore failed");
    std::size_t merges = 0, splits = 0;
    for (std::int64_t a = 0; a <= kPiggyBound; ++a) {
        for (std::int64_t b = 0; b <= kPiggyBound; ++b) {
            const Value in[] = {Value::integer(a), Value::integer(b)};
            const SquareCheck sq = check_square(c, "merge", in, Value::unit());
            ++merges;
            k.expect(sq.passed() && sq.lhs.cost == Cost::integer(a + b), "merge square failed");
        }
        const Value s = Value::integer(a);
        const SquareCheck sq = check_square(c, "split", std::span(&s, 1), Value::unit());
        ++splits;
        // Two successor potentials, summed on the right.
        k.expect(sq.passed() && sq.rhs.cost == Cost::integer((a + 1) / 2 + a / 2), "split square failed");
    }
    k.note(std::to_string(merges) + " merge and " + std::to_string(splits) + " split squares");
    return k.result();
}

Outcome_ noncommutative_amortization()
{
    Check k;
    std::mt19937_64 rng(7);
    for (std::int64_t n : {2, 3, 4}) {
        const VerificationCase c = buffer_case(n);
        const Report r = explore(c);
        k.expect(r.passed() && r.mode == Mode::Exact, "buffer n=" + std::to_string(n) + " failed");
        for (int i = 0; i < 100; ++i) {
            const Trace t = random_trace(c, rng, 32);
            Value s = c.impl.seeds()[t.seed];
            std::string emitted, inputs;
            for (const TraceStep& st : t.steps) {
                const auto a = step1(c.impl, "write", s, st.arg);
                emitted += a.cost.as_text();
                inputs += st.arg.as_str();
                s = a.value.states.front();
                k.expect(emitted + s.as_str() == inputs, "emitted ++ residue differs from the inputs");
            }
            k.expect(check_trace(c, t).passed(), "trace check failed");
        }
    }
    k.note("n = 2, 3, 4; 300 traces");
    return k.result();
}

Outcome_ composition_pipeline()
{
    Check k;
    const auto start = std::chrono::steady_clock::now();
    const Report counter = explore(counter_via_stack_case());
    k.expect(counter.passed() && counter.mode == Mode::Exact, "counter-via-stack failed");

    // Flushing moves one element with a pop (2) and a push (3).
    const VerificationCase stack = stack_case();
    const Value empty = stack.spec.seeds().front();
    const auto push = step1(stack.spec, "push", empty, Value::integer(0));
    const auto pop = step1(stack.spec, "pop", push.value.states.front(), Value::unit());
    const std::int64_t move = int_cost(push.cost) + int_cost(pop.cost);
    const VerificationCase q = queue_via_stacks_case();
    const Value qe = q.spec.seeds().front();
    k.expect(move == 5, "flush cost per element is not 5");
    k.expect(int_cost(step1(q.spec, "enqueue", qe, Value::integer(0)).cost) == int_cost(push.cost) + move,
             "enqueue cost is not push + 5");
    const Report queue = explore(q);
    k.expect(queue.passed() && queue.mode == Mode::Exact, "queue-via-stacks failed");

    const Report pipeline = explore(queue_via_array_stacks_case());
    k.expect(pipeline.passed() && pipeline.mode == Mode::Colax, "array pipeline failed Colax");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    k.expect(secs < 60.0, "took " + std::to_string(secs) + " s");
    char buf[96];
    std::snprintf(buf, sizeof buf, "enqueue 8 / dequeue 2 derived; pipeline slack_max %s; %.2f s",
                  pipeline.slack_max ? to_string(*pipeline.slack_max).c_str() : "-", secs);
    k.note(buf);
    return k.result();
}

int cli_status(std::vector<std::string> args)
{
    std::vector<const char*> argv{"amortize"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome_ negative_controls()
{
    Check k;
    k.expect(cli_status({"verify", "allocator-broken"}) == 1, "allocator-broken did not exit 1");
    k.expect(cli_status({"verify", "queue-lax", "--mode", "exact"}) == 1, "forced exact queue-lax did not exit 1");
    std::size_t replayed = 0;
    const std::pair<VerificationCase, Mode> controls[] = {{broken_allocator_case(), Mode::Exact},
                                                          {batched_queue_case(1), Mode::Exact}};
    for (const auto& [c, mode] : controls) {
        const Report r = explore(c, ExploreOptions{.mode = mode});
        k.expect(!r.counterexamples.empty(), c.name + ": no counterexample");
        for (const Counterexample& cx : r.counterexamples) {
            const SquareCheck sq = check_square(c, cx.method, cx.inputs, cx.arg, mode);
            const Finding f = sq.verdict == Verdict::BehaviorMismatch ? Finding::BehaviorMismatch : Finding::CostMismatch;
            k.expect(!sq.passed() && f == cx.finding && sq.lhs.to_string() == cx.lhs && sq.rhs.to_string() == cx.rhs,
                     c.name + ": counterexample did not reproduce");
            ++replayed;
        }
    }
    k.note(std::to_string(replayed) + " counterexamples replayed");
    return k.result();
}

Outcome_ square_implies_telescope()
{
    Check k;
    std::mt19937_64 rng(10);
    std::size_t cases = 0, traces = 0;
    for (const CatalogEntry& e : catalog()) {
        if (e.negative_control) {
            continue;
        }
        const VerificationCase c = e.make();
        if (!explore(c).passed()) {
            continue;
        }
        ++cases;
        for (int i = 0; i < 100; ++i) {
            const Trace t = random_trace(c, rng, 64);
            ++traces;
            k.expect(check_trace(c, t, c.mode()).passed(), e.name + ": trace failed\n" + format_trace(t));
        }
    }
    k.note(std::to_string(cases) + " passing cases, " + std::to_string(traces) + " traces");
    return k.result();
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome_()>> criteria[] = {
        {"allocator exactness", allocator_exactness},
        {"dynamic array exactness", dynamic_array_exactness},
        {"queue dichotomy", queue_dichotomy},
        {"behavioral simulation", behavioral_simulation},
        {"expected amortization", expected_amortization},
        {"multi-input potential summation", multi_input_summation},
        {"non-commutative amortization", noncommutative_amortization},
        {"composition pipeline", composition_pipeline},
        {"negative controls", negative_controls},
        {"square implies telescope", square_implies_telescope},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome_ o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.ok ? 0 : 1;
        std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << index << ". " << name << ": " << o.detail << std::endl;
    }
    std::cout << (10 - failed) << "/10 criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
