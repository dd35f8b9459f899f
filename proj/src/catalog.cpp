#include "amortize/catalog.hpp"

#include "amortize/compose.hpp"
#include "amortize/errors.hpp"
#include "amortize/structures.hpp"

#include <algorithm>

namespace amortize {

namespace {

std::vector<CatalogEntry> build()
{
    std::vector<CatalogEntry> out{
        {"allocator", "Fin 8 allocator vs 1 per call", false, [] { return allocator_case(); }},
        {"allocator-broken", "allocator with a wrong potential (negative control)", true, broken_allocator_case},
        {"varying", "operation-indexed costs settled every fourth step", false, [] { return varying_cost_case(); }},
        {"dynarray", "doubling array vs 3 per push", false, [] { return dynamic_array_case(false); }},
        {"dynarray-update", "doubling array with update-all", false, [] { return dynamic_array_case(true); }},
        {"stack", "array-backed stack vs list stack", false, stack_case},
        {"queue-lax", "batched queue, reversal at 1 per element", false, [] { return batched_queue_case(1); }},
        {"queue-exact", "batched queue, reversal at 2 per element", false, [] { return batched_queue_case(2); }},
        {"deque", "two-list deque with halving rebalance", false, deque_case},
        {"buffer", "chunked output over strings, chunk size 4", false, [] { return buffer_case(4); }},
        {"rand-alloc", "binomial allocator, k = 4, p = 1/2 (expected cost)", false,
         [] { return randomized_allocator_case(4, Rational{1, 2}); }},
        {"piggy", "token bank with merge and split", false, piggy_bank_case},
        {"alloc16-via-8", "Fin 16 allocator through Fin 8", false, alloc16_via_8_case},
        {"counter-via-stack", "counter as a stack of sentinels", false, counter_via_stack_case},
        {"queue-via-stacks", "queue over two spec stacks", false, queue_via_stacks_case},
        {"queue-via-array-stacks", "queue over two array-backed stacks", false, queue_via_array_stacks_case},
    };
    std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
    return out;
}

}  // namespace

const std::vector<CatalogEntry>& catalog()
{
    static const std::vector<CatalogEntry> entries = build();
    return entries;
}

const CatalogEntry* find_case(std::string_view name)
{
    for (const CatalogEntry& e : catalog()) {
        if (e.name == name) {
            return &e;
        }
    }
    return nullptr;
}

VerificationCase make_case(std::string_view name)
{
    const CatalogEntry* e = find_case(name);
    if (e == nullptr) {
        throw InvalidCase("unknown case '" + std::string(name) + "'");
    }
    return e->make();
}

}  // namespace amortize
