#pragma once

#include "amortize/checker.hpp"
#include "amortize/coalgebra.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

struct TraceStep {
    std::string method;
    Value arg;
    std::size_t line = 0;  // source line, 0 when generated
};

/// A sequential usage of a data structure, starting from one seed.
///
/// Text form, one record per line:
///
///     # comment
///     @seed 3
///     enqueue 1
///     dequeue ()
///
/// A record is `method_name argument_literal`; a missing literal means `()`.
struct Trace {
    std::size_t seed = 0;
    std::vector<TraceStep> steps;
};

// Syntax only; throws ParseError with line and column.
Trace parse_trace(std::string_view text);

// Throws Error if the file cannot be read, ParseError on malformed content.
Trace read_trace_file(const std::string& path);

std::string format_trace(const Trace& t);

// Resolves method names and argument domains; throws ParseError.
void validate_trace(const VerificationCase& c, const Trace& t);

/// Runs the trace on the implementation and, from the potential's image of
/// the seed, on the specification, then checks the telescoped condition
/// phi(d0) + spec_total against impl_total + phi(dn) (equal, or >= in colax
/// mode). Observables must agree step by step. Expected-mode cases compare
/// expected totals and per-step observable distributions.
Report check_trace(const VerificationCase& c, const Trace& t, std::optional<Mode> mode = std::nullopt);

// Uniform random trace of at most max_steps single-slot calls.
Trace random_trace(const VerificationCase& c, std::mt19937_64& rng, std::size_t max_steps);

}  // namespace amortize
