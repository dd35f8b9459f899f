#pragma once

#include "amortize/charged.hpp"
#include "amortize/coalgebra.hpp"

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace amortize {

enum class Verdict { Pass, CostMismatch, BehaviorMismatch };

std::string_view to_string(Verdict v);

// The behavioral part of one side of a square: a single outcome, or a
// distribution of outcomes in expected-cost mode.
using Behavior = std::variant<Outcome, Dist<Outcome>>;

struct SquareSide {
    Cost cost;
    Behavior behavior;

    std::string to_string() const;
};

/// One instance of the amortization square. `lhs` runs the potential and then
/// the specification; `rhs` runs the implementation and then the potential on
/// every successor.
struct SquareCheck {
    std::string method;
    std::vector<Value> inputs;
    Value arg;
    Mode mode = Mode::Exact;
    SquareSide lhs;
    SquareSide rhs;
    Verdict verdict = Verdict::Pass;
    // Every implementation successor (all branches in expected mode).
    std::vector<Value> impl_successors;

    bool passed() const noexcept
    {
        return verdict == Verdict::Pass;
    }

    // lhs cost minus rhs cost, when both are numeric.
    std::optional<Rational> slack() const;
};

SquareCheck check_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                         const Value& arg, std::optional<Mode> mode = std::nullopt);

SquareCheck check_expected_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                                  const Value& arg, std::optional<Mode> mode = std::nullopt);

// check_expected_square for expected-mode cases, check_square otherwise.
SquareCheck evaluate_square(const VerificationCase& c, std::string_view method, std::span<const Value> inputs,
                            const Value& arg, std::optional<Mode> mode = std::nullopt);

enum class Finding { CostMismatch, BehaviorMismatch, InvariantViolation };

std::string_view to_string(Finding f);

/// A reproducible failure: re-running the square on (method, inputs, arg)
/// yields the same verdict. Trace failures also carry the step index.
struct Counterexample {
    Finding finding = Finding::CostMismatch;
    std::string method;
    std::vector<Value> inputs;
    Value arg;
    std::string lhs;
    std::string rhs;
    std::optional<std::size_t> step;
    std::string note;

    std::string key() const;
};

struct TraceTotals {
    std::size_t steps = 0;
    bool stopped = false;
    std::string phi_start;
    std::string spec_total;
    std::string impl_total;
    std::string phi_end;
    std::size_t observable_mismatches = 0;
};

struct Report {
    std::string case_name;
    Mode mode = Mode::Exact;
    std::size_t states_explored = 0;
    std::size_t squares_checked = 0;
    std::size_t failures = 0;
    // First failures (at most the configured limit), canonically sorted.
    std::vector<Counterexample> counterexamples;
    // Largest lhs-minus-rhs gap of a colax run over a numeric cost model.
    std::optional<Rational> slack_max;
    std::chrono::nanoseconds wall_time{0};
    std::optional<TraceTotals> trace;

    bool passed() const noexcept
    {
        return failures == 0;
    }
};

struct ExploreOptions {
    std::size_t max_depth = 12;
    std::size_t max_states = 5000;
    std::size_t counterexample_limit = 10;
    std::optional<Mode> mode;
    // Worker threads evaluating squares; 0 picks the hardware concurrency.
    unsigned threads = 1;
};

/// Breadth-first exploration of implementation states from the seeds,
/// checking every square (every method, argument and input tuple) on every
/// reached state. Multi-slot methods draw ordered tuples from the reached set,
/// at most max_states^2 per method. The report is independent of `threads`.
Report explore(const VerificationCase& c, const ExploreOptions& options = {});

}  // namespace amortize
