#include "amortize/checker.hpp"
#include "amortize/errors.hpp"
#include "amortize/structures.hpp"

#include <doctest.h>

#include <deque>
#include <set>

using namespace amortize;

namespace {

std::vector<std::string> keys(const Report& r)
{
    std::vector<std::string> out;
    for (const auto& cx : r.counterexamples) {
        out.push_back(cx.key() + cx.lhs + cx.rhs);
    }
    return out;
}

}  // namespace

TEST_CASE("allocator squares")
{
    const VerificationCase c = allocator_case();
    for (std::int64_t d = 0; d < 8; ++d) {
        const Value s = Value::integer(d);
        const SquareCheck sq = check_square(c, "alloc", std::span(&s, 1), Value::unit());
        CHECK(sq.passed());
        // phi(d) + 1 on the left, true cost + phi(successor) on the right.
        CHECK(sq.lhs.cost == Cost::integer(7 - d + 1));
        CHECK(sq.rhs.cost == Cost::integer((d == 0 ? 8 : 0) + 7 - (d == 0 ? 7 : d - 1)));
    }
    const VerificationCase broken = broken_allocator_case();
    const Value one = Value::integer(1);
    const SquareCheck bad = check_square(broken, "alloc", std::span(&one, 1), Value::unit());
    CHECK(bad.verdict == Verdict::CostMismatch);
    CHECK(bad.lhs.cost == Cost::integer(2));
    CHECK(bad.rhs.cost == Cost::integer(0));
}

TEST_CASE("colax squares and slack")
{
    const VerificationCase c = batched_queue_case(1);
    const Value s = BatchedQueueState{{0, 0}, {}}.encode();
    const SquareCheck lax = check_square(c, "dequeue", std::span(&s, 1), Value::unit());
    CHECK(lax.passed());
    CHECK(lax.lhs.cost == Cost::integer(4));
    CHECK(lax.rhs.cost == Cost::integer(2));
    CHECK(*lax.slack() == Rational{2});
    const SquareCheck exact = check_square(c, "dequeue", std::span(&s, 1), Value::unit(), Mode::Exact);
    CHECK(exact.verdict == Verdict::CostMismatch);
}

TEST_CASE("a behavior mismatch takes precedence over the cost verdict")
{
    VerificationCase c = allocator_case();
    c.spec = Coalgebra{"counting-spec",
                       {Value::integer(0)},
                       {deterministic(MethodSig{.name = "alloc"}, [](std::span<const Value> in, const Value&) {
                           return charge(Cost::integer(100), Outcome::step(Value::integer(in[0].as_int() + 1)));
                       })}};
    c.phi.phi = [](const Value& d) { return charge(Cost::integer(0), d); };
    const Value s = Value::integer(3);
    CHECK(check_square(c, "alloc", std::span(&s, 1), Value::unit()).verdict == Verdict::BehaviorMismatch);
}

TEST_CASE("stopping squares")
{
    const VerificationCase c = stack_case();
    const Value empty = BoundedArray{}.encode();
    const SquareCheck sq = check_square(c, "pop", std::span(&empty, 1), Value::unit());
    CHECK(sq.passed());
    CHECK(std::get<Outcome>(sq.rhs.behavior).stopped);
    CHECK(sq.impl_successors.empty());
}

TEST_CASE("explore visits every allocator state")
{
    const Report r = explore(allocator_case());
    CHECK(r.passed());
    CHECK(r.states_explored == 8);
    CHECK(r.squares_checked == 8);
    CHECK_FALSE(r.slack_max.has_value());

    const Report bad = explore(broken_allocator_case(), ExploreOptions{.counterexample_limit = 3});
    CHECK(bad.failures == 8);
    CHECK(bad.counterexamples.size() == 3);
}

TEST_CASE("explore agrees with an independent reachability oracle")
{
    // Reachable batched-queue states with both lists of length <= 3.
    using State = std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>;
    std::set<State> seen{{}};
    std::deque<State> todo{{}};
    auto push = [&](State s) {
        if (s.first.size() <= 3 && s.second.size() <= 3 && seen.insert(s).second) {
            todo.push_back(std::move(s));
        }
    };
    while (!todo.empty()) {
        State s = todo.front();
        todo.pop_front();
        for (std::int64_t e : {0, 1}) {
            State t = s;
            t.first.insert(t.first.begin(), e);
            push(t);
        }
        State t = s;
        if (t.second.empty()) {
            t.second.assign(t.first.rbegin(), t.first.rend());
            t.first.clear();
        }
        if (!t.second.empty()) {
            t.second.erase(t.second.begin());
            push(t);
        }
    }

    VerificationCase c = batched_queue_case(2);
    c.within_bounds = [](const Value& v) {
        const auto q = BatchedQueueState::decode(v);
        return q.inbox.size() <= 3 && q.outbox.size() <= 3;
    };
    const Report r = explore(c, ExploreOptions{.max_depth = 100, .max_states = 100000});
    CHECK(r.passed());
    CHECK(r.states_explored == seen.size());
}

TEST_CASE("explore reports invariant violations")
{
    VerificationCase c = allocator_case();
    c.impl = Coalgebra{"strict", c.impl.seeds(), c.impl.methods(), [](const Value& v) { return v.as_int() != 5; }};
    const Report r = explore(c);
    CHECK(r.failures == 1);
    REQUIRE(r.counterexamples.size() == 1);
    CHECK(r.counterexamples[0].finding == Finding::InvariantViolation);
}

TEST_CASE("explore honours its limits")
{
    const Report r = explore(dynamic_array_case(false), ExploreOptions{.max_depth = 3, .max_states = 100000});
    CHECK(r.states_explored == 1 + 2 + 4 + 8);
    const Report capped = explore(dynamic_array_case(false), ExploreOptions{.max_states = 50});
    CHECK(capped.states_explored == 50);
    CHECK_THROWS_AS(explore(allocator_case(), ExploreOptions{.max_states = 3}), InvalidCase);
    CHECK_THROWS_AS(explore(buffer_case(2), ExploreOptions{.mode = Mode::Colax}), OrderUnavailable);
}

TEST_CASE("multi-input methods see every ordered pair")
{
    const Report r = explore(piggy_bank_case());
    CHECK(r.passed());
    CHECK(r.states_explored == kPiggyBound + 1);
    const std::size_t n = kPiggyBound + 1;
    CHECK(r.squares_checked == 3 * n + n * n);
}

TEST_CASE("reports do not depend on the thread count")
{
    for (const VerificationCase& c : {dynamic_array_case(true), batched_queue_case(1), broken_allocator_case()}) {
        for (auto mode : {std::optional<Mode>{}, std::optional<Mode>{Mode::Exact}}) {
            const Report one = explore(c, ExploreOptions{.mode = mode, .threads = 1});
            const Report four = explore(c, ExploreOptions{.mode = mode, .threads = 4});
            CHECK(one.states_explored == four.states_explored);
            CHECK(one.squares_checked == four.squares_checked);
            CHECK(one.failures == four.failures);
            CHECK(one.slack_max == four.slack_max);
            CHECK(keys(one) == keys(four));
        }
    }
}
