#include "amortize/structures.hpp"

#include "amortize/errors.hpp"

#include <algorithm>

namespace amortize {

namespace {

const Value kUnit = Value::unit();

std::int64_t pow2(std::int64_t e)
{
    if (e < 0 || e > 62) {
        throw ContractViolation("log bound " + std::to_string(e) + " out of range");
    }
    return std::int64_t{1} << e;
}

std::vector<Value> all_strings_up_to(std::size_t max_len)
{
    std::vector<Value> out{Value::str("")};
    std::vector<std::string> layer{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const std::string& s : layer) {
            for (char c : {'a', 'b'}) {
                next.push_back(s + c);
            }
        }
        for (const std::string& s : next) {
            out.push_back(Value::str(s));
        }
        layer = std::move(next);
    }
    return out;
}

std::vector<std::int64_t> reversed(std::vector<std::int64_t> v)
{
    std::reverse(v.begin(), v.end());
    return v;
}

std::vector<std::int64_t> concat(std::vector<std::int64_t> a, const std::vector<std::int64_t>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Charged<Outcome> nat_step(std::int64_t cost, Value next)
{
    return charge(Cost::integer(cost), Outcome::step(std::move(next)));
}

}  // namespace

std::vector<Value> element_domain()
{
    return {Value::integer(0), Value::integer(1)};
}

Value BoundedArray::encode() const
{
    return Value::tuple({Value::integer(log_bound), Value::int_list(items)});
}

BoundedArray BoundedArray::decode(const Value& v)
{
    return BoundedArray{v.at(0).as_int(), v.at(1).as_int_list()};
}

std::int64_t BoundedArray::capacity() const
{
    return pow2(log_bound + 1) - 1;
}

std::int64_t array_potential(const BoundedArray& a)
{
    return 2 * (static_cast<std::int64_t>(a.items.size()) + 1) - pow2(a.log_bound + 1);
}

bool array_invariant(const BoundedArray& a)
{
    const auto len = static_cast<std::int64_t>(a.items.size());
    return a.log_bound >= 0 && pow2(a.log_bound) - 1 <= len && len < a.capacity();
}

Value BatchedQueueState::encode() const
{
    return Value::tuple({Value::int_list(inbox), Value::int_list(outbox)});
}

BatchedQueueState BatchedQueueState::decode(const Value& v)
{
    return BatchedQueueState{v.at(0).as_int_list(), v.at(1).as_int_list()};
}

Value DequeState::encode() const
{
    return Value::tuple({Value::int_list(front), Value::int_list(back)});
}

DequeState DequeState::decode(const Value& v)
{
    return DequeState{v.at(0).as_int_list(), v.at(1).as_int_list()};
}

// ---------------------------------------------------------------------------
// Allocation counter

Coalgebra cycle_allocator(std::int64_t period)
{
    if (period < 1) {
        throw InvalidCase("allocator period must be positive");
    }
    std::vector<Value> seeds;
    for (std::int64_t d = 0; d < period; ++d) {
        seeds.push_back(Value::integer(d));
    }
    MethodSig sig{.name = "alloc"};
    return Coalgebra{"fin" + std::to_string(period) + "-allocator",
                     std::move(seeds),
                     {deterministic(sig,
                                    [period](std::span<const Value> in, const Value&) {
                                        const std::int64_t d = in[0].as_int();
                                        return d == 0 ? nat_step(period, Value::integer(period - 1))
                                                      : nat_step(0, Value::integer(d - 1));
                                    })},
                     [period](const Value& v) { return v.as_int() >= 0 && v.as_int() < period; }};
}

Coalgebra unit_allocator_spec()
{
    MethodSig sig{.name = "alloc"};
    return Coalgebra{"unit-allocator",
                     {kUnit},
                     {deterministic(sig, [](std::span<const Value>, const Value&) { return nat_step(1, kUnit); })}};
}

VerificationCase allocator_case(std::int64_t potential_shift)
{
    VerificationCase c{
        .name = "allocator",
        .description = "Fin 8 allocator paying 8 every eighth call vs 1 per call, phi(d) = 7 - d",
        .cost = CostMonoid::nat(),
        .impl = cycle_allocator(8),
        .spec = unit_allocator_spec(),
        .phi = {[potential_shift](const Value& d) {
                    return charge(Cost::integer(7 - d.as_int() + potential_shift), Value::unit());
                },
                Mode::Exact,
                {}},
    };
    return c;
}

VerificationCase broken_allocator_case()
{
    VerificationCase c = allocator_case();
    c.name = "allocator-broken";
    c.description = "negative control: allocator with phi(d) = d";
    c.phi.phi = [](const Value& d) { return charge(Cost::integer(d.as_int()), Value::unit()); };
    return c;
}

// ---------------------------------------------------------------------------
// Time-varying costs: spec charges 1 + (i mod 4), the implementation charges 1
// per step and settles the rest of each block of four at its last step.

std::int64_t varying_spec_cost(std::int64_t i)
{
    return 1 + i % 4;
}

std::int64_t varying_impl_cost(std::int64_t i)
{
    return i % 4 == 3 ? 7 : 1;
}

std::int64_t varying_potential(std::int64_t i)
{
    static constexpr std::int64_t table[] = {0, 0, 1, 3};
    return table[i % 4];
}

VerificationCase varying_cost_case(std::optional<std::int64_t> spec_defect_at)
{
    MethodSig sig{.name = "tick"};
    std::vector<Value> seeds;
    for (std::int64_t i = 0; i <= kVaryingBound; ++i) {
        seeds.push_back(Value::integer(i));
    }
    Coalgebra impl{"indexed-impl",
                   std::move(seeds),
                   {deterministic(sig, [](std::span<const Value> in, const Value&) {
                       const std::int64_t i = in[0].as_int();
                       return nat_step(varying_impl_cost(i), Value::integer(i + 1));
                   })}};
    Coalgebra spec{"indexed-spec",
                   {Value::integer(0)},
                   {deterministic(sig, [spec_defect_at](std::span<const Value> in, const Value&) {
                       const std::int64_t i = in[0].as_int();
                       const std::int64_t defect = spec_defect_at && *spec_defect_at == i ? 1 : 0;
                       return nat_step(varying_spec_cost(i) - defect, Value::integer(i + 1));
                   })}};
    return VerificationCase{
        .name = "varying",
        .description = "operation-indexed costs: spec 1 + (i mod 4), impl settles each block of four at its end",
        .cost = CostMonoid::nat(),
        .impl = std::move(impl),
        .spec = std::move(spec),
        .phi = {[](const Value& i) { return charge(Cost::integer(varying_potential(i.as_int())), i); }, Mode::Exact,
                {}},
        .within_bounds = [](const Value& i) { return i.as_int() <= kVaryingBound; },
    };
}

// ---------------------------------------------------------------------------
// Dynamic array and update-all

namespace {

Charged<Outcome> array_push(const Value& state, const Value& arg)
{
    BoundedArray a = BoundedArray::decode(state);
    const auto len = static_cast<std::int64_t>(a.items.size());
    a.items.push_back(arg.as_int());
    if (len + 1 == a.capacity()) {
        ++a.log_bound;
        return nat_step(3 + len, a.encode());
    }
    return nat_step(1, a.encode());
}

std::int64_t apply_update(const std::string& f, std::int64_t x)
{
    if (f == "id") {
        return x;
    }
    if (f == "const") {
        return 0;
    }
    if (f == "swap") {
        return 1 - x;
    }
    throw ContractViolation("unknown update function '" + f + "'");
}

std::vector<Value> update_domain()
{
    return {Value::str("id"), Value::str("const"), Value::str("swap")};
}

const Value kEmptyArray = BoundedArray{}.encode();

}  // namespace

Coalgebra dynamic_array(bool with_update)
{
    std::vector<Method> methods{deterministic(
        MethodSig{.name = "push", .args = element_domain()},
        [](std::span<const Value> in, const Value& e) { return array_push(in[0], e); })};
    if (with_update) {
        methods.push_back(deterministic(MethodSig{.name = "update", .args = update_domain()},
                                        [](std::span<const Value> in, const Value& f) {
                                            BoundedArray a = BoundedArray::decode(in[0]);
                                            for (auto& x : a.items) {
                                                x = apply_update(f.as_str(), x);
                                            }
                                            const auto len = static_cast<std::int64_t>(a.items.size());
                                            return nat_step(len, a.encode());
                                        }));
    }
    return Coalgebra{"dynamic-array", {kEmptyArray}, std::move(methods),
                     [](const Value& v) { return array_invariant(BoundedArray::decode(v)); }};
}

VerificationCase dynamic_array_case(bool with_update)
{
    std::vector<Method> spec_methods;
    PotentialMorphism phi;
    if (!with_update) {
        spec_methods.push_back(deterministic(MethodSig{.name = "push", .args = element_domain()},
                                             [](std::span<const Value>, const Value&) { return nat_step(3, kUnit); }));
        phi.phi = [](const Value& v) {
            return charge(Cost::integer(array_potential(BoundedArray::decode(v))), Value::unit());
        };
    } else {
        spec_methods.push_back(deterministic(MethodSig{.name = "push", .args = element_domain()},
                                             [](std::span<const Value> in, const Value&) {
                                                 return nat_step(3, Value::integer(in[0].as_int() + 1));
                                             }));
        spec_methods.push_back(deterministic(MethodSig{.name = "update", .args = update_domain()},
                                             [](std::span<const Value> in, const Value&) {
                                                 return nat_step(in[0].as_int(), in[0]);
                                             }));
        phi.phi = [](const Value& v) {
            const BoundedArray a = BoundedArray::decode(v);
            return charge(Cost::integer(array_potential(a)),
                          Value::integer(static_cast<std::int64_t>(a.items.size())));
        };
    }
    Coalgebra spec{with_update ? "length-spec" : "unit-push-spec",
                   {with_update ? Value::integer(0) : kUnit},
                   std::move(spec_methods)};
    return VerificationCase{
        .name = with_update ? "dynarray-update" : "dynarray",
        .description = with_update ? "doubling array with update-all vs push 3 / update |a|, phi = (2(|a|+1) - 2^(n+1), |a|)"
                                   : "doubling array vs push 3, phi(n, a) = 2(|a|+1) - 2^(n+1)",
        .cost = CostMonoid::nat(),
        .impl = dynamic_array(with_update),
        .spec = std::move(spec),
        .phi = std::move(phi),
    };
}

// ---------------------------------------------------------------------------
// Stack

Coalgebra stack_spec()
{
    return Coalgebra{
        "stack-spec",
        {Value::list({})},
        {deterministic(MethodSig{.name = "push", .args = element_domain()},
                       [](std::span<const Value> in, const Value& e) {
                           std::vector<Value> l = in[0].items();
                           l.insert(l.begin(), e);
                           return nat_step(3, Value::list(std::move(l)));
                       }),
         deterministic(MethodSig{.name = "pop", .may_stop = true, .observes = "element"},
                       [](std::span<const Value> in, const Value&) {
                           const std::vector<Value>& l = in[0].items();
                           if (l.empty()) {
                               return charge(Cost::integer(0), Outcome::stop());
                           }
                           return charge(Cost::integer(2),
                                         Outcome::next(l.front(), {Value::list({l.begin() + 1, l.end()})}));
                       })}};
}

Coalgebra array_stack()
{
    return Coalgebra{"array-stack",
                     {kEmptyArray},
                     {deterministic(MethodSig{.name = "push", .args = element_domain()},
                                    [](std::span<const Value> in, const Value& e) { return array_push(in[0], e); }),
                      deterministic(MethodSig{.name = "pop", .may_stop = true, .observes = "element"},
                                    [](std::span<const Value> in, const Value&) {
                                        BoundedArray a = BoundedArray::decode(in[0]);
                                        if (a.items.empty()) {
                                            return charge(Cost::integer(0), Outcome::stop());
                                        }
                                        const std::int64_t top = a.items.back();
                                        a.items.pop_back();
                                        return charge(Cost::integer(1),
                                                      Outcome::next(Value::integer(top), {a.encode()}));
                                    })},
                     [](const Value& v) {
                         const BoundedArray a = BoundedArray::decode(v);
                         return a.log_bound >= 0 && static_cast<std::int64_t>(a.items.size()) < a.capacity();
                     }};
}

PotentialMorphism stack_potential()
{
    return PotentialMorphism{[](const Value& v) {
                                 const BoundedArray a = BoundedArray::decode(v);
                                 return charge(Cost::integer(std::max<std::int64_t>(0, array_potential(a))),
                                               Value::int_list(reversed(a.items)));
                             },
                             Mode::Colax,
                             {}};
}

VerificationCase stack_case()
{
    return VerificationCase{
        .name = "stack",
        .description = "array-backed stack vs push 3 / pop 2, phi = max(0, 2(|a|+1) - 2^(n+1)), colax",
        .cost = CostMonoid::nat(),
        .impl = array_stack(),
        .spec = stack_spec(),
        .phi = stack_potential(),
    };
}

// ---------------------------------------------------------------------------
// Batched queue

Coalgebra queue_spec(std::int64_t enqueue_cost, std::int64_t dequeue_cost)
{
    return Coalgebra{
        "queue-spec",
        {Value::list({})},
        {deterministic(MethodSig{.name = "enqueue", .args = element_domain()},
                       [enqueue_cost](std::span<const Value> in, const Value& e) {
                           std::vector<Value> l = in[0].items();
                           l.push_back(e);
                           return nat_step(enqueue_cost, Value::list(std::move(l)));
                       }),
         deterministic(MethodSig{.name = "dequeue", .may_stop = true, .observes = "element"},
                       [dequeue_cost](std::span<const Value> in, const Value&) {
                           const std::vector<Value>& l = in[0].items();
                           if (l.empty()) {
                               return charge(Cost::integer(0), Outcome::stop());
                           }
                           return charge(Cost::integer(dequeue_cost),
                                         Outcome::next(l.front(), {Value::list({l.begin() + 1, l.end()})}));
                       })}};
}

Coalgebra batched_queue(std::int64_t reverse_cost_per_element)
{
    return Coalgebra{
        "batched-queue",
        {BatchedQueueState{}.encode()},
        {deterministic(MethodSig{.name = "enqueue", .args = element_domain()},
                       [](std::span<const Value> in, const Value& e) {
                           BatchedQueueState q = BatchedQueueState::decode(in[0]);
                           q.inbox.insert(q.inbox.begin(), e.as_int());
                           return nat_step(0, q.encode());
                       }),
         deterministic(MethodSig{.name = "dequeue", .may_stop = true, .observes = "element"},
                       [reverse_cost_per_element](std::span<const Value> in, const Value&) {
                           BatchedQueueState q = BatchedQueueState::decode(in[0]);
                           std::int64_t cost = 0;
                           if (q.outbox.empty()) {
                               if (q.inbox.empty()) {
                                   return charge(Cost::integer(0), Outcome::stop());
                               }
                               cost = reverse_cost_per_element * static_cast<std::int64_t>(q.inbox.size());
                               q.outbox = reversed(std::move(q.inbox));
                               q.inbox.clear();
                           }
                           const std::int64_t e = q.outbox.front();
                           q.outbox.erase(q.outbox.begin());
                           return charge(Cost::integer(cost), Outcome::next(Value::integer(e), {q.encode()}));
                       })}};
}

VerificationCase batched_queue_case(std::int64_t reverse_cost_per_element)
{
    if (reverse_cost_per_element != 1 && reverse_cost_per_element != 2) {
        throw InvalidCase("reverse cost per element must be 1 or 2");
    }
    const bool exact = reverse_cost_per_element == 2;
    return VerificationCase{
        .name = exact ? "queue-exact" : "queue-lax",
        .description = std::string("batched queue, reverse charged ") + (exact ? "2" : "1") +
                       " per element, vs enqueue 2 / dequeue 0, phi = (2|inbox|, outbox ++ reverse(inbox))",
        .cost = CostMonoid::nat(),
        .impl = batched_queue(reverse_cost_per_element),
        .spec = queue_spec(2, 0),
        .phi = {[](const Value& v) {
                    const BatchedQueueState q = BatchedQueueState::decode(v);
                    return charge(Cost::integer(2 * static_cast<std::int64_t>(q.inbox.size())),
                                  Value::int_list(concat(q.outbox, reversed(q.inbox))));
                },
                exact ? Mode::Exact : Mode::Colax,
                {}},
        .within_bounds =
            [](const Value& v) {
                const BatchedQueueState q = BatchedQueueState::decode(v);
                return q.inbox.size() <= 6 && q.outbox.size() <= 6;
            },
    };
}

// ---------------------------------------------------------------------------
// Deque

namespace {

// Pops from `near`; when it is empty, the half of `far` nearest to this end is
// moved over (reversed) first, one unit per moved element.
Charged<Outcome> deque_pop(std::vector<std::int64_t> near, std::vector<std::int64_t> far, bool pop_front)
{
    std::int64_t cost = 1;
    if (near.empty()) {
        if (far.empty()) {
            return charge(Cost::integer(0), Outcome::stop());
        }
        const std::size_t keep = far.size() / 2;
        std::vector<std::int64_t> moved(far.begin() + static_cast<std::ptrdiff_t>(keep), far.end());
        far.resize(keep);
        near = reversed(std::move(moved));
        cost += static_cast<std::int64_t>(near.size());
    }
    const std::int64_t e = near.front();
    near.erase(near.begin());
    const DequeState next = pop_front ? DequeState{std::move(near), std::move(far)}
                                      : DequeState{std::move(far), std::move(near)};
    return charge(Cost::integer(cost), Outcome::next(Value::integer(e), {next.encode()}));
}

Charged<Outcome> list_step(std::vector<Value> l, Value obs, bool stopped)
{
    if (stopped) {
        return charge(Cost::integer(0), Outcome::stop());
    }
    return charge(Cost::integer(2), Outcome::next(std::move(obs), {Value::list(std::move(l))}));
}

}  // namespace

VerificationCase deque_case()
{
    const MethodSig push_front{.name = "push_front", .args = element_domain()};
    const MethodSig push_back{.name = "push_back", .args = element_domain()};
    const MethodSig pop_front{.name = "pop_front", .may_stop = true, .observes = "element"};
    const MethodSig pop_back{.name = "pop_back", .may_stop = true, .observes = "element"};

    Coalgebra impl{
        "two-list-deque",
        {DequeState{}.encode()},
        {deterministic(push_front,
                       [](std::span<const Value> in, const Value& e) {
                           DequeState d = DequeState::decode(in[0]);
                           d.front.insert(d.front.begin(), e.as_int());
                           return nat_step(1, d.encode());
                       }),
         deterministic(push_back,
                       [](std::span<const Value> in, const Value& e) {
                           DequeState d = DequeState::decode(in[0]);
                           d.back.insert(d.back.begin(), e.as_int());
                           return nat_step(1, d.encode());
                       }),
         deterministic(pop_front,
                       [](std::span<const Value> in, const Value&) {
                           DequeState d = DequeState::decode(in[0]);
                           return deque_pop(std::move(d.front), std::move(d.back), true);
                       }),
         deterministic(pop_back, [](std::span<const Value> in, const Value&) {
             DequeState d = DequeState::decode(in[0]);
             return deque_pop(std::move(d.back), std::move(d.front), false);
         })}};

    Coalgebra spec{"deque-spec",
                   {Value::list({})},
                   {deterministic(push_front,
                                  [](std::span<const Value> in, const Value& e) {
                                      std::vector<Value> l = in[0].items();
                                      l.insert(l.begin(), e);
                                      return list_step(std::move(l), Value::unit(), false);
                                  }),
                    deterministic(push_back,
                                  [](std::span<const Value> in, const Value& e) {
                                      std::vector<Value> l = in[0].items();
                                      l.push_back(e);
                                      return list_step(std::move(l), Value::unit(), false);
                                  }),
                    deterministic(pop_front,
                                  [](std::span<const Value> in, const Value&) {
                                      std::vector<Value> l = in[0].items();
                                      if (l.empty()) {
                                          return list_step({}, {}, true);
                                      }
                                      Value e = l.front();
                                      l.erase(l.begin());
                                      return list_step(std::move(l), std::move(e), false);
                                  }),
                    deterministic(pop_back, [](std::span<const Value> in, const Value&) {
                        std::vector<Value> l = in[0].items();
                        if (l.empty()) {
                            return list_step({}, {}, true);
                        }
                        Value e = l.back();
                        l.pop_back();
                        return list_step(std::move(l), std::move(e), false);
                    })}};

    return VerificationCase{
        .name = "deque",
        .description = "two-list deque splitting the other list on an empty pop, vs 2 per call, "
                       "phi = |front| - |back| in absolute value, colax",
        .cost = CostMonoid::nat(),
        .impl = std::move(impl),
        .spec = std::move(spec),
        .phi = {[](const Value& v) {
                    const DequeState d = DequeState::decode(v);
                    const auto gap = static_cast<std::int64_t>(d.front.size()) - static_cast<std::int64_t>(d.back.size());
                    return charge(Cost::integer(gap < 0 ? -gap : gap),
                                  Value::int_list(concat(d.front, reversed(d.back))));
                },
                Mode::Colax,
                {}},
        .within_bounds =
            [](const Value& v) {
                const DequeState d = DequeState::decode(v);
                return d.front.size() <= 6 && d.back.size() <= 6;
            },
    };
}

// ---------------------------------------------------------------------------
// Output buffering over the string monoid

VerificationCase buffer_case(std::int64_t buffer_size)
{
    if (buffer_size < 1) {
        throw InvalidCase("buffer size must be at least 1");
    }
    const auto n = static_cast<std::size_t>(buffer_size);
    const MethodSig write{.name = "write", .args = all_strings_up_to(3)};
    Coalgebra impl{"chunked-buffer",
                   {Value::str("")},
                   {deterministic(write,
                                  [n](std::span<const Value> in, const Value& s) {
                                      const std::string all = in[0].as_str() + s.as_str();
                                      const std::size_t flushed = all.size() - all.size() % n;
                                      return charge(Cost::text(all.substr(0, flushed)),
                                                    Outcome::step(Value::str(all.substr(flushed))));
                                  })},
                   [n](const Value& v) { return v.as_str().size() < n; }};
    Coalgebra spec{"direct-print",
                   {kUnit},
                   {deterministic(write, [](std::span<const Value>, const Value& s) {
                       return charge(Cost::text(s.as_str()), Outcome::step(kUnit));
                   })}};
    return VerificationCase{
        .name = "buffer",
        .description = "buffered printing in chunks of " + std::to_string(n) + " vs direct printing, phi = residue",
        .cost = CostMonoid::trace(),
        .impl = std::move(impl),
        .spec = std::move(spec),
        .phi = {[](const Value& r) { return charge(Cost::text(r.as_str()), Value::unit()); }, Mode::Exact, {}},
    };
}

// ---------------------------------------------------------------------------
// Randomized allocation

Stochastic<Value> binomial_charge(std::int64_t trials, const Rational& p, const Value& result)
{
    if (p < 0 || p > 1 || trials < 0) {
        throw BadWeights("binomial parameters out of range");
    }
    Stochastic<Value> out;
    std::int64_t choose = 1;
    for (std::int64_t j = 0; j <= trials; ++j) {
        Rational w{choose};
        for (std::int64_t i = 0; i < j; ++i) {
            w *= p;
        }
        for (std::int64_t i = j; i < trials; ++i) {
            w *= 1 - p;
        }
        if (w > 0) {
            out.push_back({w, {Cost::rational(Rational{j}), result}});
        }
        choose = choose * (trials - j) / (j + 1);
    }
    return out;
}

VerificationCase randomized_allocator_case(std::int64_t k, const Rational& p)
{
    if (k < 1) {
        throw InvalidCase("k must be at least 1");
    }
    if (p < 0 || p > 1) {
        throw InvalidCase("p must be a probability");
    }
    std::vector<Value> seeds;
    for (std::int64_t d = 0; d < k; ++d) {
        seeds.push_back(Value::integer(d));
    }
    const MethodSig sig{.name = "alloc"};
    Coalgebra impl{"binomial-allocator",
                   std::move(seeds),
                   {randomized(sig,
                               [k, p](std::span<const Value> in, const Value&) {
                                   const std::int64_t d = in[0].as_int();
                                   Stochastic<Outcome> out;
                                   if (d == 0) {
                                       for (auto& b : binomial_charge(k, p, Value::integer(k - 1))) {
                                           out.push_back({b.weight, {b.value.cost, Outcome::step(b.value.value)}});
                                       }
                                       return out;
                                   }
                                   return certainly(charge(Cost::rational(0), Outcome::step(Value::integer(d - 1))));
                               })},
                   [k](const Value& v) { return v.as_int() >= 0 && v.as_int() < k; }};
    Coalgebra spec{"bernoulli-spec",
                   {kUnit},
                   {randomized(sig, [p](std::span<const Value>, const Value&) {
                       Stochastic<Outcome> out;
                       for (auto& b : binomial_charge(1, p, kUnit)) {
                           out.push_back({b.weight, {b.value.cost, Outcome::step(kUnit)}});
                       }
                       return out;
                   })}};
    PotentialMorphism phi;
    phi.mode = Mode::Exact;
    phi.random_phi = [k, p](const Value& d) { return binomial_charge(k - d.as_int() - 1, p, kUnit); };
    return VerificationCase{
        .name = "rand-alloc",
        .description = "counter sampling Binomial(" + std::to_string(k) + ", " + to_string(p) +
                       ") at zero vs one Bernoulli per call, phi(d) = Binomial(k - d - 1, p)",
        .cost = CostMonoid::rational(),
        .impl = std::move(impl),
        .spec = std::move(spec),
        .phi = std::move(phi),
        .expected = true,
    };
}

// ---------------------------------------------------------------------------
// Piggy bank: summed potentials over merges and splits

VerificationCase piggy_bank_case()
{
    const MethodSig deposit{.name = "deposit"};
    const MethodSig spend{.name = "spend"};
    const MethodSig merge{.name = "merge", .in_arity = 2};
    const MethodSig split{.name = "split", .out_arity = 2};

    Coalgebra impl{"piggy-bank",
                   {Value::integer(0)},
                   {deterministic(deposit,
                                  [](std::span<const Value> in, const Value&) {
                                      return nat_step(0, Value::integer(in[0].as_int() + 1));
                                  }),
                    deterministic(spend,
                                  [](std::span<const Value> in, const Value&) {
                                      const std::int64_t n = in[0].as_int();
                                      return n == 0 ? nat_step(0, in[0]) : nat_step(1, Value::integer(n - 1));
                                  }),
                    deterministic(merge,
                                  [](std::span<const Value> in, const Value&) {
                                      return nat_step(0, Value::integer(in[0].as_int() + in[1].as_int()));
                                  }),
                    deterministic(split, [](std::span<const Value> in, const Value&) {
                        const std::int64_t n = in[0].as_int();
                        return charge(Cost::integer(0),
                                      Outcome::next(Value::unit(), {Value::integer((n + 1) / 2), Value::integer(n / 2)}));
                    })},
                   [](const Value& v) { return v.as_int() >= 0; }};

    Coalgebra spec{"piggy-spec",
                   {kUnit},
                   {deterministic(deposit, [](std::span<const Value>, const Value&) { return nat_step(1, kUnit); }),
                    deterministic(spend, [](std::span<const Value>, const Value&) { return nat_step(0, kUnit); }),
                    deterministic(merge, [](std::span<const Value>, const Value&) { return nat_step(0, kUnit); }),
                    deterministic(split, [](std::span<const Value>, const Value&) {
                        return charge(Cost::integer(0), Outcome::next(Value::unit(), {kUnit, kUnit}));
                    })}};

    return VerificationCase{
        .name = "piggy",
        .description = "token bank with merge (2 in) and split (2 out), phi(n) = n summed over slots",
        .cost = CostMonoid::nat(),
        .impl = std::move(impl),
        .spec = std::move(spec),
        .phi = {[](const Value& n) { return charge(Cost::integer(n.as_int()), Value::unit()); }, Mode::Exact, {}},
        .within_bounds = [](const Value& n) { return n.as_int() <= kPiggyBound; },
    };
}

}  // namespace amortize
