#pragma once

#include "amortize/charged.hpp"
#include "amortize/cost.hpp"
#include "amortize/value.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

/// Result of one method call: Stop (the structure is consumed, e.g. pop on
/// empty) or Continue with an observable and `out_arity` successor states.
struct Outcome {
    bool stopped = false;
    Value observable;
    std::vector<Value> states;

    static Outcome stop()
    {
        return Outcome{true, Value::unit(), {}};
    }

    static Outcome next(Value observable, std::vector<Value> states)
    {
        return Outcome{false, std::move(observable), std::move(states)};
    }

    // Continue with a unit observable and a single successor.
    static Outcome step(Value state)
    {
        return next(Value::unit(), {std::move(state)});
    }

    std::string to_string() const;

    friend bool operator==(const Outcome&, const Outcome&) = default;
};

inline std::string to_key(const Outcome& o)
{
    return o.to_string();
}

struct MethodSig {
    std::string name;
    std::size_t in_arity = 1;
    std::size_t out_arity = 1;
    // Finite argument domain; `{()}` for methods without an argument.
    std::vector<Value> args{Value::unit()};
    bool may_stop = false;
    // Free-form description of the observable results.
    std::string observes = "()";
};

// Same name, arities and stopping behavior (argument domains may differ).
bool same_shape(const MethodSig& a, const MethodSig& b);

using StepFn = std::function<Charged<Outcome>(std::span<const Value> inputs, const Value& arg)>;
using RandomStepFn = std::function<Stochastic<Outcome>(std::span<const Value> inputs, const Value& arg)>;
using StatePredicate = std::function<bool(const Value&)>;

/// One method of a coalgebra. Exactly one of `step` / `random_step` is set;
/// deterministic methods can still be run in randomized mode as point
/// distributions.
struct Method {
    MethodSig sig;
    StepFn step;
    RandomStepFn random_step;
};

/// A data-structure implementation: a set of states (encoded as Values),
/// seeds, and a table of methods. Transitions must be pure and reentrant.
class Coalgebra
{
   public:
    Coalgebra(std::string name, std::vector<Value> seeds, std::vector<Method> methods, StatePredicate invariant = {});

    const std::string& name() const noexcept
    {
        return name_;
    }

    const std::vector<Value>& seeds() const noexcept
    {
        return seeds_;
    }

    const std::vector<Method>& methods() const noexcept
    {
        return methods_;
    }

    // Throws UnknownMethod.
    const Method& method(std::string_view name) const;
    bool has_method(std::string_view name) const;

    std::vector<MethodSig> signature() const;

    bool invariant_holds(const Value& state) const
    {
        return !invariant_ || invariant_(state);
    }

    bool has_invariant() const noexcept
    {
        return static_cast<bool>(invariant_);
    }

    const StatePredicate& invariant() const noexcept
    {
        return invariant_;
    }

    // Runs a deterministic transition, checking input arity and the outcome's
    // shape against the signature.
    Charged<Outcome> step(const Method& m, std::span<const Value> inputs, const Value& arg) const;
    Charged<Outcome> step(std::string_view method, std::span<const Value> inputs, const Value& arg) const;

    // Runs a transition in randomized mode (deterministic ones as a point).
    Stochastic<Outcome> random_step(const Method& m, std::span<const Value> inputs, const Value& arg) const;

   private:
    void check_outcome(const Method& m, const Outcome& o) const;

    std::string name_;
    std::vector<Value> seeds_;
    std::vector<Method> methods_;
    StatePredicate invariant_;
};

enum class Mode { Exact, Colax };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

using PhiFn = std::function<Charged<Value>(const Value&)>;
using RandomPhiFn = std::function<Stochastic<Value>(const Value&)>;

/// A generalized potential function: each implementation state maps to a
/// stored potential cost plus the specification state it simulates.
struct PotentialMorphism {
    PhiFn phi;
    Mode mode = Mode::Exact;
    // When set, the potential is itself randomized (expected-cost mode only).
    RandomPhiFn random_phi;

    Charged<Value> operator()(const Value& state) const;
    Stochastic<Value> random(const Value& state) const;
};

// Applies phi to each state and combines the potentials left to right.
// More than one state needs a commutative cost model.
Charged<std::vector<Value>> apply_phi_tuple(const CostMonoid& m, const PotentialMorphism& phi,
                                            std::span<const Value> states);

Stochastic<std::vector<Value>> apply_phi_tuple_random(const CostMonoid& m, const PotentialMorphism& phi,
                                                      std::span<const Value> states);

/// Everything needed to verify one amortization claim.
struct VerificationCase {
    std::string name;
    std::string description;
    CostMonoid cost;
    Coalgebra impl;
    Coalgebra spec;
    PotentialMorphism phi;
    // Verify with expected costs over distributions instead of exact costs.
    bool expected = false;
    // Exploration never enqueues states outside this bound (empty = unbounded).
    StatePredicate within_bounds;

    Mode mode() const noexcept
    {
        return phi.mode;
    }

    bool in_bounds(const Value& state) const
    {
        return !within_bounds || within_bounds(state);
    }
};

// Checks signature agreement, the commutativity requirement of multi-slot
// methods, the order requirement of colax mode and the rational requirement
// of expected mode. Throws InvalidCase, NonCommutativeTensor or OrderUnavailable.
void validate_case(const VerificationCase& c);

// Colax mode on an unordered cost model throws OrderUnavailable.
void require_mode_supported(const CostMonoid& m, Mode mode);

// Builds a one-method coalgebra table entry.
Method deterministic(MethodSig sig, StepFn step);
Method randomized(MethodSig sig, RandomStepFn step);

}  // namespace amortize
