#include "amortize/coalgebra.hpp"

#include "amortize/errors.hpp"

#include <set>

namespace amortize {

std::string Outcome::to_string() const
{
    if (stopped) {
        return "Stop";
    }
    std::string out = "Continue(" + observable.to_string() + ";";
    for (std::size_t i = 0; i < states.size(); ++i) {
        out += (i == 0 ? "" : ",") + states[i].to_string();
    }
    return out + ")";
}

bool same_shape(const MethodSig& a, const MethodSig& b)
{
    return a.name == b.name && a.in_arity == b.in_arity && a.out_arity == b.out_arity && a.may_stop == b.may_stop;
}

Coalgebra::Coalgebra(std::string name, std::vector<Value> seeds, std::vector<Method> methods, StatePredicate invariant)
    : name_{std::move(name)}
    , seeds_{std::move(seeds)}
    , methods_{std::move(methods)}
    , invariant_{std::move(invariant)}
{
    std::set<std::string> names;
    for (const Method& m : methods_) {
        if (m.sig.in_arity == 0) {
            throw InvalidCase("method '" + m.sig.name + "' of '" + name_ + "' has no input state");
        }
        if (m.sig.args.empty()) {
            throw InvalidCase("method '" + m.sig.name + "' of '" + name_ + "' has an empty argument domain");
        }
        if (static_cast<bool>(m.step) == static_cast<bool>(m.random_step)) {
            throw InvalidCase("method '" + m.sig.name + "' must have exactly one transition");
        }
        if (!names.insert(m.sig.name).second) {
            throw InvalidCase("duplicate method '" + m.sig.name + "' in '" + name_ + "'");
        }
    }
}

const Method& Coalgebra::method(std::string_view name) const
{
    for (const Method& m : methods_) {
        if (m.sig.name == name) {
            return m;
        }
    }
    throw UnknownMethod(std::string(name));
}

bool Coalgebra::has_method(std::string_view name) const
{
    for (const Method& m : methods_) {
        if (m.sig.name == name) {
            return true;
        }
    }
    return false;
}

std::vector<MethodSig> Coalgebra::signature() const
{
    std::vector<MethodSig> out;
    for (const Method& m : methods_) {
        out.push_back(m.sig);
    }
    return out;
}

void Coalgebra::check_outcome(const Method& m, const Outcome& o) const
{
    if (o.stopped) {
        if (!m.sig.may_stop) {
            throw ContractViolation("method '" + m.sig.name + "' of '" + name_ + "' stopped but may not stop");
        }
        return;
    }
    if (o.states.size() != m.sig.out_arity) {
        throw ContractViolation("method '" + m.sig.name + "' of '" + name_ + "' produced " +
                                std::to_string(o.states.size()) + " states, expected " +
                                std::to_string(m.sig.out_arity));
    }
}

Charged<Outcome> Coalgebra::step(const Method& m, std::span<const Value> inputs, const Value& arg) const
{
    if (inputs.size() != m.sig.in_arity) {
        throw ArityMismatch("method '" + m.sig.name + "' takes " + std::to_string(m.sig.in_arity) +
                            " states, got " + std::to_string(inputs.size()));
    }
    if (!m.step) {
        throw ContractViolation("method '" + m.sig.name + "' of '" + name_ + "' is randomized");
    }
    Charged<Outcome> result = m.step(inputs, arg);
    check_outcome(m, result.value);
    return result;
}

Charged<Outcome> Coalgebra::step(std::string_view method_name, std::span<const Value> inputs, const Value& arg) const
{
    return step(method(method_name), inputs, arg);
}

Stochastic<Outcome> Coalgebra::random_step(const Method& m, std::span<const Value> inputs, const Value& arg) const
{
    if (inputs.size() != m.sig.in_arity) {
        throw ArityMismatch("method '" + m.sig.name + "' takes " + std::to_string(m.sig.in_arity) +
                            " states, got " + std::to_string(inputs.size()));
    }
    Stochastic<Outcome> result = m.random_step ? m.random_step(inputs, arg) : certainly(m.step(inputs, arg));
    for (const auto& branch : result) {
        check_outcome(m, branch.value.value);
    }
    return result;
}

std::string_view to_string(Mode m)
{
    return m == Mode::Exact ? "exact" : "colax";
}

std::optional<Mode> parse_mode(std::string_view s)
{
    if (s == "exact") {
        return Mode::Exact;
    }
    if (s == "colax") {
        return Mode::Colax;
    }
    return std::nullopt;
}

Charged<Value> PotentialMorphism::operator()(const Value& state) const
{
    if (!phi) {
        throw ContractViolation("potential is randomized; use the expected-cost checker");
    }
    return phi(state);
}

Stochastic<Value> PotentialMorphism::random(const Value& state) const
{
    return random_phi ? random_phi(state) : certainly(phi(state));
}

Charged<std::vector<Value>> apply_phi_tuple(const CostMonoid& m, const PotentialMorphism& phi,
                                            std::span<const Value> states)
{
    if (states.size() > 1 && !m.is_commutative()) {
        throw NonCommutativeTensor(m.name());
    }
    Charged<std::vector<Value>> acc = ret(m, std::vector<Value>{});
    for (const Value& s : states) {
        Charged<Value> one = phi(s);
        m.require(one.cost, "potential");
        acc.cost = m.combine(acc.cost, one.cost);
        acc.value.push_back(std::move(one.value));
    }
    return acc;
}

Stochastic<std::vector<Value>> apply_phi_tuple_random(const CostMonoid& m, const PotentialMorphism& phi,
                                                      std::span<const Value> states)
{
    if (states.size() > 1 && !m.is_commutative()) {
        throw NonCommutativeTensor(m.name());
    }
    Stochastic<std::vector<Value>> acc = certainly(ret(m, std::vector<Value>{}));
    for (const Value& s : states) {
        Stochastic<Value> one = phi.random(s);
        Stochastic<std::vector<Value>> next;
        for (const auto& prefix : acc) {
            for (const auto& branch : one) {
                m.require(branch.value.cost, "potential");
                std::vector<Value> values = prefix.value.value;
                values.push_back(branch.value.value);
                next.push_back({prefix.weight * branch.weight,
                                {m.combine(prefix.value.cost, branch.value.cost), std::move(values)}});
            }
        }
        acc = std::move(next);
    }
    return acc;
}

void require_mode_supported(const CostMonoid& m, Mode mode)
{
    if (mode == Mode::Colax && !m.is_ordered()) {
        throw OrderUnavailable(m.name());
    }
}

void validate_case(const VerificationCase& c)
{
    const auto impl_sig = c.impl.signature();
    const auto spec_sig = c.spec.signature();
    if (impl_sig.size() != spec_sig.size()) {
        throw InvalidCase("case '" + c.name + "': implementation and specification have different method tables");
    }
    for (const MethodSig& s : impl_sig) {
        if (!c.spec.has_method(s.name) || !same_shape(s, c.spec.method(s.name).sig)) {
            throw InvalidCase("case '" + c.name + "': method '" + s.name + "' differs between implementation and specification");
        }
        if ((s.in_arity >= 2 || s.out_arity >= 2) && !c.cost.is_commutative()) {
            throw NonCommutativeTensor(c.cost.name());
        }
    }
    if (c.impl.seeds().empty()) {
        throw InvalidCase("case '" + c.name + "' has no seed states");
    }
    require_mode_supported(c.cost, c.mode());
    if (c.expected && c.cost.kind() != CostKind::Rational) {
        throw InvalidCase("case '" + c.name + "': expected-cost mode needs the rational cost model");
    }
    if (!c.phi.phi && !c.phi.random_phi) {
        throw InvalidCase("case '" + c.name + "' has no potential");
    }
}

Method deterministic(MethodSig sig, StepFn step)
{
    return Method{std::move(sig), std::move(step), {}};
}

Method randomized(MethodSig sig, RandomStepFn step)
{
    return Method{std::move(sig), {}, std::move(step)};
}

}  // namespace amortize
