#pragma once

#include "amortize/coalgebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amortize {

// Elements stored by the container examples: the two symbols 0 and 1.
std::vector<Value> element_domain();

/// A dynamic array with log-size bound n, nominally holding between 2^n - 1
/// and 2^(n+1) - 2 items.
struct BoundedArray {
    std::int64_t log_bound = 0;
    std::vector<std::int64_t> items;

    Value encode() const;
    static BoundedArray decode(const Value& v);

    // 2^(n+1) - 1, the length that triggers a resize on the next push.
    std::int64_t capacity() const;
};

// 2(|a| + 1) - 2^(n+1); may be negative outside the carrier invariant.
std::int64_t array_potential(const BoundedArray& a);
bool array_invariant(const BoundedArray& a);

// Lists are stored head first: `outbox.front()` is the next element dequeued.
struct BatchedQueueState {
    std::vector<std::int64_t> inbox;
    std::vector<std::int64_t> outbox;

    Value encode() const;
    static BatchedQueueState decode(const Value& v);
};

// The deque's sequence is front ++ reverse(back).
struct DequeState {
    std::vector<std::int64_t> front;
    std::vector<std::int64_t> back;

    Value encode() const;
    static DequeState decode(const Value& v);
};

// Fin(period) allocator: pays `period` when no free cell is left.
Coalgebra cycle_allocator(std::int64_t period);
// Trivial carrier, one unit per allocation.
Coalgebra unit_allocator_spec();

VerificationCase allocator_case(std::int64_t potential_shift = 0);
// Planted defect: phi(d) = d.
VerificationCase broken_allocator_case();

std::int64_t varying_spec_cost(std::int64_t i);
std::int64_t varying_impl_cost(std::int64_t i);
std::int64_t varying_potential(std::int64_t i);
inline constexpr std::int64_t kVaryingBound = 64;

// `spec_defect_at` lowers the specification cost at that index by one.
VerificationCase varying_cost_case(std::optional<std::int64_t> spec_defect_at = std::nullopt);

// Push-only (or push + update-all) dynamic array against a constant-cost spec.
Coalgebra dynamic_array(bool with_update);
VerificationCase dynamic_array_case(bool with_update);

// Stack specification over lists (head = top): push 3, pop 2, Stop when empty.
Coalgebra stack_spec();
// Array-backed stack: push as the dynamic array, pop costs 1 and never shrinks.
Coalgebra array_stack();
PotentialMorphism stack_potential();
VerificationCase stack_case();

// Queue specification over lists: enqueue and nonempty dequeue charges.
Coalgebra queue_spec(std::int64_t enqueue_cost, std::int64_t dequeue_cost);
Coalgebra batched_queue(std::int64_t reverse_cost_per_element);
VerificationCase batched_queue_case(std::int64_t reverse_cost_per_element);

VerificationCase deque_case();

VerificationCase buffer_case(std::int64_t buffer_size);

// Binomial(k, p) cost distribution with a fixed result.
Stochastic<Value> binomial_charge(std::int64_t trials, const Rational& p, const Value& result);
VerificationCase randomized_allocator_case(std::int64_t k, const Rational& p);

inline constexpr std::int64_t kPiggyBound = 32;
VerificationCase piggy_bank_case();

}  // namespace amortize
