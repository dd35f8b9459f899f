#pragma once

#include "amortize/coalgebra.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

/// Sequential composition: phi(a) = bind(phi1(a), phi2). The result is colax
/// when either side is; that requires an ordered cost model.
PotentialMorphism compose_phi(const CostMonoid& m, const PotentialMorphism& phi1, const PotentialMorphism& phi2);

// first: A -> B, second: B -> C. Checks A against C through the composite.
VerificationCase compose_cases(std::string name, const VerificationCase& first, const VerificationCase& second);

/// Product of two coalgebras. States are pairs `(l, r)`; every method of each
/// side appears tagged "left." / "right." and leaves the other side untouched.
/// A Stop from either component stops the pair. Only single-input,
/// single-output methods can be paired (UnsupportedArity otherwise).
Coalgebra pair_coalgebras(const Coalgebra& l, const Coalgebra& r);

// Product case with the potential tensor(phi_l, phi_r). Throws
// NonCommutativeTensor unless both sides share a commutative cost model.
VerificationCase pair_cases(const VerificationCase& l, const VerificationCase& r);

inline constexpr std::size_t kDefaultStepBudget = 10000;

/// Access a translation program has to the source interface. Every call is
/// charged through the source coalgebra and logged.
class Substrate
{
   public:
    struct Call {
        std::string method;
        Value state;
        Value arg;
        Cost cost;
        bool stopped = false;
    };

    Substrate(const Coalgebra& source, const CostMonoid& m, std::size_t budget = kDefaultStepBudget);

    // Runs a single-input source method. A Stop leaves the caller's state value
    // intact, so programs may keep working from it. Throws StepBudgetExceeded.
    Outcome call(std::string_view method, const Value& state, const Value& arg = Value::unit());

    // An explicit charge not caused by a source call.
    void pay(const Cost& c);

    const Cost& total() const noexcept
    {
        return total_;
    }

    const std::vector<Call>& log() const noexcept
    {
        return log_;
    }

    const std::vector<Cost>& explicit_charges() const noexcept
    {
        return paid_;
    }

   private:
    const Coalgebra& source_;
    const CostMonoid& m_;
    std::size_t budget_;
    Cost total_;
    std::vector<Call> log_;
    std::vector<Cost> paid_;
};

// A target method implemented over the substrate. Returns the observable and
// successor states (or Stop); the cost is whatever the substrate accumulated.
using Program = std::function<Outcome(Substrate& s, std::span<const Value> inputs, const Value& arg)>;

struct Translation {
    std::vector<MethodSig> source;
    std::vector<MethodSig> target;
    std::map<std::string, Program, std::less<>> programs;
    std::size_t budget = kDefaultStepBudget;
};

struct ProgramRun {
    Charged<Outcome> result;
    std::vector<Substrate::Call> calls;
    std::vector<Cost> explicit_charges;
};

// Runs one target method over `source`, returning the result and call log.
ProgramRun run_program(const Coalgebra& source, const CostMonoid& m, const Translation& t, std::string_view method,
                       std::span<const Value> inputs, const Value& arg);

// The target interface realized over `source` (same states and seeds).
Coalgebra translate(const Coalgebra& source, const CostMonoid& m, const Translation& t, std::string name);

// Checks that t's source table matches `source` and t.target has a program per
// method. Throws InvalidCase.
void check_translation(const Coalgebra& source, const Translation& t);

/// The translation run over base.spec, verified against target_spec with
/// phi_extra.
VerificationCase translate_case(std::string name, const VerificationCase& base, const Translation& t,
                                const Coalgebra& target_spec, const PotentialMorphism& phi_extra);

/// The translation run over base.impl, verified with compose_phi(base.phi,
/// phi_extra): the composite of base's argument and the translated one.
VerificationCase translate_pipeline(std::string name, const VerificationCase& base, const Translation& t,
                                    const Coalgebra& target_spec, const PotentialMorphism& phi_extra);

// Fin 16 -> Fin 8 with phi(d) = (8 if d < 8 else 0, d mod 8).
VerificationCase allocator_16_to_8_case();
// The composite Fin 16 -> Fin 8 -> unit allocator.
VerificationCase alloc16_via_8_case();

// Counter: increment charges 3, decrement 2 (Stop at zero); state is the count.
Coalgebra counter_spec();
Translation counter_from_stack();
VerificationCase counter_via_stack_case();

// Enqueue pushes onto the left (inbox) stack; dequeue pops the right (outbox)
// stack, flushing the inbox into it first when it is empty.
Translation queue_from_two_stacks();
// (5 |inbox|, outbox ++ reverse(inbox)) on a pair of stack-spec states.
PotentialMorphism queue_from_stacks_potential();
VerificationCase queue_via_stacks_case();
// The same translation over two array-backed stacks, checked against the
// queue spec through compose_phi(pair(stack, stack).phi, extra).
VerificationCase queue_via_array_stacks_case();

}  // namespace amortize
