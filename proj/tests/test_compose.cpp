#include "amortize/compose.hpp"
#include "amortize/checker.hpp"
#include "amortize/errors.hpp"
#include "amortize/structures.hpp"

#include <doctest.h>

using namespace amortize;

namespace {

const PotentialMorphism identity_phi{[](const Value& v) { return charge(Cost::integer(0), v); }, Mode::Exact, {}};

}  // namespace

TEST_CASE("composition with the identity potential")
{
    const CostMonoid m = CostMonoid::nat();
    const VerificationCase c = dynamic_array_case(true);
    const PotentialMorphism left = compose_phi(m, identity_phi, c.phi);
    const PotentialMorphism right = compose_phi(m, c.phi, identity_phi);
    Value s = BoundedArray{}.encode();
    for (int i = 0; i < 40; ++i) {
        CHECK(left(s) == c.phi(s));
        CHECK(right(s) == c.phi(s));
        s = c.impl.step("push", std::span(&s, 1), Value::integer(i % 2)).value.states.front();
    }
}

TEST_CASE("composition is associative")
{
    const CostMonoid m = CostMonoid::nat();
    const PotentialMorphism a{[](const Value& v) { return charge(Cost::integer(v.as_int() % 3), Value::integer(v.as_int() + 1)); },
                              Mode::Exact,
                              {}};
    const PotentialMorphism b{[](const Value& v) { return charge(Cost::integer(2 * v.as_int()), Value::integer(v.as_int() / 2)); },
                              Mode::Colax,
                              {}};
    const PotentialMorphism c{[](const Value& v) { return charge(Cost::integer(1), Value::str(v.to_string())); },
                              Mode::Exact,
                              {}};
    const PotentialMorphism ab_c = compose_phi(m, compose_phi(m, a, b), c);
    const PotentialMorphism a_bc = compose_phi(m, a, compose_phi(m, b, c));
    CHECK(ab_c.mode == Mode::Colax);
    for (std::int64_t i = 0; i < 50; ++i) {
        CHECK(ab_c(Value::integer(i)) == a_bc(Value::integer(i)));
    }
    const PotentialMorphism text{[](const Value& v) { return charge(Cost::text("x"), v); }, Mode::Colax, {}};
    CHECK_THROWS_AS(compose_phi(CostMonoid::trace(), text, text), OrderUnavailable);
}

TEST_CASE("allocator 16 through 8")
{
    const VerificationCase first = allocator_16_to_8_case();
    CHECK(explore(first).passed());
    const VerificationCase c = alloc16_via_8_case();
    for (std::int64_t d = 0; d < 16; ++d) {
        CHECK(c.phi(Value::integer(d)).cost == Cost::integer(15 - d));
    }
    const Report r = explore(c);
    CHECK(r.passed());
    CHECK(r.states_explored == 16);
}

TEST_CASE("functoriality: composites of passing cases pass")
{
    CHECK(explore(compose_cases("dyn-then-id",
                                dynamic_array_case(false),
                                VerificationCase{.name = "id",
                                                 .cost = CostMonoid::nat(),
                                                 .impl = dynamic_array_case(false).spec,
                                                 .spec = dynamic_array_case(false).spec,
                                                 .phi = identity_phi}))
              .passed());
    CHECK_FALSE(explore(compose_cases("broken", allocator_16_to_8_case(), broken_allocator_case())).passed());
    CHECK_THROWS_AS(compose_cases("mismatch", allocator_case(), stack_case()), InvalidCase);
}

TEST_CASE("pairing")
{
    const VerificationCase both = pair_cases(allocator_case(), allocator_case());
    const Report r = explore(both, ExploreOptions{.max_states = 100000});
    CHECK(r.passed());
    CHECK(r.states_explored == 64);
    const Value s = Value::tuple({Value::integer(2), Value::integer(6)});
    CHECK(both.phi(s).cost == Cost::integer(5 + 1));
    const auto step = both.impl.step("left.alloc", std::span(&s, 1), Value::unit());
    CHECK(step.value.states.front() == Value::tuple({Value::integer(1), Value::integer(6)}));

    CHECK_FALSE(explore(pair_cases(allocator_case(), broken_allocator_case())).passed());
    CHECK_THROWS_AS(pair_cases(buffer_case(2), buffer_case(2)), NonCommutativeTensor);
    CHECK_THROWS_AS(pair_cases(piggy_bank_case(), allocator_case()), UnsupportedArity);
    CHECK(pair_cases(stack_case(), allocator_case()).mode() == Mode::Colax);
}

TEST_CASE("counter from a stack")
{
    const VerificationCase c = counter_via_stack_case();
    const Report r = explore(c);
    CHECK(r.passed());
    CHECK(r.mode == Mode::Exact);
    const Value empty = Value::list({});
    const auto dec = c.impl.step("decrement", std::span(&empty, 1), Value::unit());
    CHECK(dec.value.stopped);
    CHECK(dec.cost == Cost::integer(0));
}

TEST_CASE("queue from two stacks")
{
    const VerificationCase c = queue_via_stacks_case();
    CHECK(explore(c).passed());

    const Value empty = Value::tuple({Value::list({}), Value::list({})});
    const auto r = c.impl.step("dequeue", std::span(&empty, 1), Value::unit());
    CHECK(r.value.stopped);
    CHECK(r.cost == Cost::integer(0));
    const Value none = Value::list({});
    const auto spec = c.spec.step("dequeue", std::span(&none, 1), Value::unit());
    CHECK(spec.value.stopped);
    CHECK(spec.cost == Cost::integer(0));
}

TEST_CASE("translated methods cost exactly their substrate calls")
{
    const VerificationCase stacks = pair_cases(stack_case(), stack_case());
    const Translation t = queue_from_two_stacks();
    const Coalgebra& source = stacks.spec;
    const CostMonoid m = CostMonoid::nat();
    Value s = Value::tuple({Value::list({}), Value::list({})});
    for (int i = 0; i < 40; ++i) {
        const bool enqueue = i % 5 != 3 && i % 7 != 6;
        const Value arg = enqueue ? Value::integer(i % 2) : Value::unit();
        const ProgramRun run = run_program(source, m, t, enqueue ? "enqueue" : "dequeue", std::span(&s, 1), arg);
        std::int64_t sum = 0;
        for (const auto& call : run.calls) {
            sum += call.cost.as_integer();
            CHECK(call.cost == source.step(call.method, std::span(&call.state, 1), call.arg).cost);
        }
        CHECK(run.explicit_charges.empty());
        CHECK(run.result.cost == Cost::integer(sum));
        if (!run.result.value.stopped) {
            s = run.result.value.states.front();
        }
    }
}

TEST_CASE("runaway programs hit the step budget")
{
    Translation t = counter_from_stack();
    t.budget = 50;
    t.programs["increment"] = [](Substrate& s, std::span<const Value> in, const Value&) {
        Value cur = in[0];
        for (;;) {
            cur = s.call("push", cur, Value::integer(0)).states.front();
        }
        return Outcome::step(cur);
    };
    const Coalgebra c = translate(stack_spec(), CostMonoid::nat(), t, "runaway");
    const Value empty = Value::list({});
    CHECK_THROWS_AS(c.step("increment", std::span(&empty, 1), Value::unit()), StepBudgetExceeded);

    Translation missing = counter_from_stack();
    missing.programs.erase("decrement");
    CHECK_THROWS_AS(translate(stack_spec(), CostMonoid::nat(), missing, "partial"), InvalidCase);
    CHECK_THROWS_AS(translate(cycle_allocator(4), CostMonoid::nat(), counter_from_stack(), "wrong"), InvalidCase);
}

TEST_CASE("the array-backed pipeline passes laxly")
{
    const VerificationCase c = queue_via_array_stacks_case();
    CHECK(c.mode() == Mode::Colax);
    const Report r = explore(c);
    CHECK(r.passed());
    CHECK(r.slack_max.has_value());
}
