#include "amortize/compose.hpp"

#include "amortize/errors.hpp"
#include "amortize/structures.hpp"

#include <algorithm>
#include <utility>

namespace amortize {

PotentialMorphism compose_phi(const CostMonoid& m, const PotentialMorphism& phi1, const PotentialMorphism& phi2)
{
    const Mode mode = phi1.mode == Mode::Colax || phi2.mode == Mode::Colax ? Mode::Colax : Mode::Exact;
    require_mode_supported(m, mode);
    PotentialMorphism out;
    out.mode = mode;
    if (!phi1.random_phi && !phi2.random_phi) {
        out.phi = [m, phi1, phi2](const Value& a) {
            return amortize::bind(m, phi1(a), [&](const Value& b) { return phi2(b); });
        };
    } else {
        out.random_phi = [m, phi1, phi2](const Value& a) {
            return amortize::bind(m, phi1.random(a), [&](const Value& b) { return phi2.random(b); });
        };
    }
    return out;
}

namespace {

void require_same_table(const std::vector<MethodSig>& a, const std::vector<MethodSig>& b, const std::string& what)
{
    auto shape_key = [](std::vector<MethodSig> v) {
        std::sort(v.begin(), v.end(), [](const MethodSig& x, const MethodSig& y) { return x.name < y.name; });
        return v;
    };
    const auto sa = shape_key(a);
    const auto sb = shape_key(b);
    if (sa.size() != sb.size() ||
        !std::equal(sa.begin(), sa.end(), sb.begin(), [](const MethodSig& x, const MethodSig& y) {
            return same_shape(x, y);
        })) {
        throw InvalidCase(what + ": method tables differ");
    }
}

void require_same_monoid(const CostMonoid& a, const CostMonoid& b)
{
    if (a.name() != b.name()) {
        throw InvalidCase("cost models differ: '" + a.name() + "' vs '" + b.name() + "'");
    }
}

}  // namespace

VerificationCase compose_cases(std::string name, const VerificationCase& first, const VerificationCase& second)
{
    require_same_monoid(first.cost, second.cost);
    require_same_table(first.spec.signature(), second.impl.signature(), "composition");
    VerificationCase out{
        .name = std::move(name),
        .description = first.name + " then " + second.name,
        .cost = first.cost,
        .impl = first.impl,
        .spec = second.spec,
        .phi = compose_phi(first.cost, first.phi, second.phi),
        .expected = first.expected || second.expected,
        .within_bounds = first.within_bounds,
    };
    return out;
}

// ---------------------------------------------------------------------------
// Pairing

namespace {

Outcome lift(const Outcome& o, const Value& other, bool left)
{
    if (o.stopped) {
        return Outcome::stop();
    }
    const Value& s = o.states.front();
    return Outcome::next(o.observable, {left ? Value::tuple({s, other}) : Value::tuple({other, s})});
}

void lift_methods(const Coalgebra& c, bool left, std::vector<Method>& out)
{
    const std::string tag = left ? "left." : "right.";
    const std::size_t slot = left ? 0 : 1;
    for (const Method& m : c.methods()) {
        if (m.sig.in_arity != 1 || m.sig.out_arity != 1) {
            throw UnsupportedArity("cannot pair method '" + m.sig.name + "' of arity " +
                                   std::to_string(m.sig.in_arity) + " -> " + std::to_string(m.sig.out_arity));
        }
        MethodSig sig = m.sig;
        sig.name = tag + m.sig.name;
        const std::string name = m.sig.name;
        if (m.step) {
            out.push_back(deterministic(sig, [c, name, slot, left](std::span<const Value> in, const Value& arg) {
                const Value& mine = in[0].at(slot);
                const Value& other = in[0].at(1 - slot);
                Charged<Outcome> r = c.step(name, std::span<const Value>(&mine, 1), arg);
                return charge(std::move(r.cost), lift(r.value, other, left));
            }));
        } else {
            out.push_back(randomized(sig, [c, name, slot, left](std::span<const Value> in, const Value& arg) {
                const Value& mine = in[0].at(slot);
                const Value& other = in[0].at(1 - slot);
                Stochastic<Outcome> r = c.random_step(c.method(name), std::span<const Value>(&mine, 1), arg);
                for (auto& b : r) {
                    b.value.value = lift(b.value.value, other, left);
                }
                return r;
            }));
        }
    }
}

}  // namespace

Coalgebra pair_coalgebras(const Coalgebra& l, const Coalgebra& r)
{
    std::vector<Method> methods;
    lift_methods(l, true, methods);
    lift_methods(r, false, methods);
    std::vector<Value> seeds;
    for (const Value& a : l.seeds()) {
        for (const Value& b : r.seeds()) {
            seeds.push_back(Value::tuple({a, b}));
        }
    }
    StatePredicate invariant;
    if (l.has_invariant() || r.has_invariant()) {
        invariant = [l, r](const Value& v) { return l.invariant_holds(v.at(0)) && r.invariant_holds(v.at(1)); };
    }
    return Coalgebra{l.name() + " x " + r.name(), std::move(seeds), std::move(methods), std::move(invariant)};
}

VerificationCase pair_cases(const VerificationCase& l, const VerificationCase& r)
{
    require_same_monoid(l.cost, r.cost);
    if (!l.cost.is_commutative()) {
        throw NonCommutativeTensor(l.cost.name());
    }
    if (l.expected || r.expected) {
        throw InvalidCase("pairing expected-cost cases is not supported");
    }
    const Mode mode = l.mode() == Mode::Colax || r.mode() == Mode::Colax ? Mode::Colax : Mode::Exact;
    require_mode_supported(l.cost, mode);

    const CostMonoid m = l.cost;
    const PotentialMorphism pl = l.phi;
    const PotentialMorphism pr = r.phi;
    PotentialMorphism phi{[m, pl, pr](const Value& v) {
                              Charged<std::pair<Value, Value>> t = tensor(m, pl(v.at(0)), pr(v.at(1)));
                              return charge(std::move(t.cost), Value::tuple({t.value.first, t.value.second}));
                          },
                          mode,
                          {}};

    StatePredicate bounds;
    if (l.within_bounds || r.within_bounds) {
        bounds = [l, r](const Value& v) { return l.in_bounds(v.at(0)) && r.in_bounds(v.at(1)); };
    }
    return VerificationCase{
        .name = l.name + "*" + r.name,
        .description = "pair of " + l.name + " and " + r.name,
        .cost = l.cost,
        .impl = pair_coalgebras(l.impl, r.impl),
        .spec = pair_coalgebras(l.spec, r.spec),
        .phi = std::move(phi),
        .within_bounds = std::move(bounds),
    };
}

// ---------------------------------------------------------------------------
// Translation

Substrate::Substrate(const Coalgebra& source, const CostMonoid& m, std::size_t budget)
    : source_(source), m_(m), budget_(budget), total_(m.identity())
{
}

Outcome Substrate::call(std::string_view method, const Value& state, const Value& arg)
{
    if (log_.size() >= budget_) {
        throw StepBudgetExceeded("translation program exceeded " + std::to_string(budget_) + " substrate calls");
    }
    Charged<Outcome> r = source_.step(method, std::span<const Value>(&state, 1), arg);
    total_ = m_.combine(total_, r.cost);
    log_.push_back(Call{std::string(method), state, arg, r.cost, r.value.stopped});
    return std::move(r.value);
}

void Substrate::pay(const Cost& c)
{
    m_.require(c, "explicit charge");
    total_ = m_.combine(total_, c);
    paid_.push_back(c);
}

void check_translation(const Coalgebra& source, const Translation& t)
{
    require_same_table(t.source, source.signature(), "translation source");
    for (const MethodSig& sig : t.target) {
        if (!t.programs.contains(sig.name)) {
            throw InvalidCase("translation has no program for '" + sig.name + "'");
        }
    }
}

ProgramRun run_program(const Coalgebra& source, const CostMonoid& m, const Translation& t, std::string_view method,
                       std::span<const Value> inputs, const Value& arg)
{
    const auto it = t.programs.find(method);
    if (it == t.programs.end()) {
        throw UnknownMethod(std::string(method));
    }
    Substrate s(source, m, t.budget);
    Outcome o = it->second(s, inputs, arg);
    return ProgramRun{charge(s.total(), std::move(o)), s.log(), s.explicit_charges()};
}

Coalgebra translate(const Coalgebra& source, const CostMonoid& m, const Translation& t, std::string name)
{
    check_translation(source, t);
    std::vector<Method> methods;
    for (const MethodSig& sig : t.target) {
        const Program program = t.programs.find(sig.name)->second;
        const std::size_t budget = t.budget;
        methods.push_back(deterministic(sig, [source, m, program, budget](std::span<const Value> in, const Value& arg) {
            Substrate s(source, m, budget);
            Outcome o = program(s, in, arg);
            return charge(s.total(), std::move(o));
        }));
    }
    return Coalgebra{std::move(name), source.seeds(), std::move(methods), source.invariant()};
}

VerificationCase translate_case(std::string name, const VerificationCase& base, const Translation& t,
                                const Coalgebra& target_spec, const PotentialMorphism& phi_extra)
{
    require_same_table(t.target, target_spec.signature(), "translation target");
    std::string description = name + ": " + base.spec.name() + " programs vs " + target_spec.name();
    Coalgebra impl = translate(base.spec, base.cost, t, name + "-impl");
    return VerificationCase{
        .name = std::move(name),
        .description = std::move(description),
        .cost = base.cost,
        .impl = std::move(impl),
        .spec = target_spec,
        .phi = phi_extra,
    };
}

VerificationCase translate_pipeline(std::string name, const VerificationCase& base, const Translation& t,
                                    const Coalgebra& target_spec, const PotentialMorphism& phi_extra)
{
    require_same_table(t.target, target_spec.signature(), "translation target");
    std::string description = name + ": " + base.impl.name() + " programs vs " + target_spec.name() +
                              " through " + base.name;
    Coalgebra impl = translate(base.impl, base.cost, t, name + "-impl");
    return VerificationCase{
        .name = std::move(name),
        .description = std::move(description),
        .cost = base.cost,
        .impl = std::move(impl),
        .spec = target_spec,
        .phi = compose_phi(base.cost, base.phi, phi_extra),
        .within_bounds = base.within_bounds,
    };
}

// ---------------------------------------------------------------------------
// Composite examples

VerificationCase allocator_16_to_8_case()
{
    return VerificationCase{
        .name = "alloc16-to-8",
        .description = "Fin 16 allocator vs Fin 8 allocator, phi(d) = (8 if d < 8 else 0, d mod 8)",
        .cost = CostMonoid::nat(),
        .impl = cycle_allocator(16),
        .spec = cycle_allocator(8),
        .phi = {[](const Value& d) {
                    const std::int64_t n = d.as_int();
                    return charge(Cost::integer(n < 8 ? 8 : 0), Value::integer(n % 8));
                },
                Mode::Exact,
                {}},
    };
}

VerificationCase alloc16_via_8_case()
{
    VerificationCase c = compose_cases("alloc16-via-8", allocator_16_to_8_case(), allocator_case());
    c.description = "Fin 16 allocator vs unit allocator through Fin 8, composite phi(d) = 15 - d";
    return c;
}

Coalgebra counter_spec()
{
    return Coalgebra{"counter-spec",
                     {Value::integer(0)},
                     {deterministic(MethodSig{.name = "increment"},
                                    [](std::span<const Value> in, const Value&) {
                                        return charge(Cost::integer(3), Outcome::step(Value::integer(in[0].as_int() + 1)));
                                    }),
                      deterministic(MethodSig{.name = "decrement", .may_stop = true},
                                    [](std::span<const Value> in, const Value&) {
                                        const std::int64_t n = in[0].as_int();
                                        if (n == 0) {
                                            return charge(Cost::integer(0), Outcome::stop());
                                        }
                                        return charge(Cost::integer(2), Outcome::step(Value::integer(n - 1)));
                                    })}};
}

Translation counter_from_stack()
{
    Translation t{.source = stack_spec().signature(), .target = counter_spec().signature()};
    const Value sentinel = element_domain().front();
    t.programs.emplace("increment", [sentinel](Substrate& s, std::span<const Value> in, const Value&) {
        return s.call("push", in[0], sentinel);
    });
    t.programs.emplace("decrement", [](Substrate& s, std::span<const Value> in, const Value&) {
        Outcome o = s.call("pop", in[0]);
        return o.stopped ? o : Outcome::step(o.states.front());
    });
    return t;
}

VerificationCase counter_via_stack_case()
{
    VerificationCase c = translate_case("counter-via-stack", stack_case(), counter_from_stack(), counter_spec(),
                                        PotentialMorphism{[](const Value& l) {
                                                              return charge(Cost::integer(0),
                                                                            Value::integer(static_cast<std::int64_t>(
                                                                                l.items().size())));
                                                          },
                                                          Mode::Exact,
                                                          {}});
    c.description = "counter as a stack of sentinels vs increment 3 / decrement 2, phi = (0, length)";
    return c;
}

Translation queue_from_two_stacks()
{
    const Coalgebra stacks = pair_coalgebras(stack_spec(), stack_spec());
    Translation t{.source = stacks.signature(), .target = queue_spec(8, 2).signature()};
    t.programs.emplace("enqueue", [](Substrate& s, std::span<const Value> in, const Value& e) {
        return s.call("left.push", in[0], e);
    });
    t.programs.emplace("dequeue", [](Substrate& s, std::span<const Value> in, const Value&) {
        Outcome o = s.call("right.pop", in[0]);
        if (!o.stopped) {
            return o;
        }
        Value cur = in[0];
        for (;;) {
            Outcome popped = s.call("left.pop", cur);
            if (popped.stopped) {
                break;
            }
            cur = s.call("right.push", popped.states.front(), popped.observable).states.front();
        }
        return s.call("right.pop", cur);
    });
    return t;
}

PotentialMorphism queue_from_stacks_potential()
{
    return PotentialMorphism{[](const Value& v) {
                                 const std::vector<Value>& inbox = v.at(0).items();
                                 std::vector<Value> seq = v.at(1).items();
                                 seq.insert(seq.end(), inbox.rbegin(), inbox.rend());
                                 return charge(Cost::integer(5 * static_cast<std::int64_t>(inbox.size())),
                                               Value::list(std::move(seq)));
                             },
                             Mode::Exact,
                             {}};
}

namespace {

bool stacks_within(const Value& v, std::size_t bound)
{
    return v.at(0).items().size() <= bound && v.at(1).items().size() <= bound;
}

}  // namespace

VerificationCase queue_via_stacks_case()
{
    const VerificationCase stacks = pair_cases(stack_case(), stack_case());
    VerificationCase c = translate_case("queue-via-stacks", stacks, queue_from_two_stacks(), queue_spec(8, 2),
                                        queue_from_stacks_potential());
    c.description = "queue over two spec stacks vs enqueue 8 / dequeue 2, phi = (5 |inbox|, outbox ++ reverse(inbox))";
    c.within_bounds = [](const Value& v) { return stacks_within(v, 6); };
    return c;
}

VerificationCase queue_via_array_stacks_case()
{
    VerificationCase stacks = pair_cases(stack_case(), stack_case());
    stacks.within_bounds = [](const Value& v) {
        return BoundedArray::decode(v.at(0)).items.size() <= 6 && BoundedArray::decode(v.at(1)).items.size() <= 6;
    };
    VerificationCase c = translate_pipeline("queue-via-array-stacks", stacks, queue_from_two_stacks(),
                                            queue_spec(8, 2), queue_from_stacks_potential());
    c.description = "queue over two array-backed stacks vs enqueue 8 / dequeue 2, composite potential, colax";
    return c;
}

}  // namespace amortize
