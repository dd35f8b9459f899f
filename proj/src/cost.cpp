#include "amortize/cost.hpp"

#include "amortize/errors.hpp"
#include "amortize/value.hpp"

namespace amortize {

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1) {
        return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t Cost::as_integer() const
{
    if (!is_integer()) {
        throw ContractViolation("expected an integer cost, got " + to_string());
    }
    return std::get<std::int64_t>(repr_);
}

const Rational& Cost::as_rational() const
{
    if (!is_rational()) {
        throw ContractViolation("expected a rational cost, got " + to_string());
    }
    return std::get<Rational>(repr_);
}

const std::string& Cost::as_text() const
{
    if (!is_text()) {
        throw ContractViolation("expected a text cost, got " + to_string());
    }
    return std::get<std::string>(repr_);
}

std::optional<Rational> Cost::numeric() const
{
    if (is_integer()) {
        return Rational{as_integer()};
    }
    if (is_rational()) {
        return as_rational();
    }
    return std::nullopt;
}

std::string Cost::to_string() const
{
    if (is_integer()) {
        return std::to_string(as_integer());
    }
    if (is_rational()) {
        return amortize::to_string(as_rational());
    }
    return quote(as_text());
}

CostMonoid::CostMonoid(std::string name, CostKind kind, Cost identity, Combine combine, bool commutative,
                       Order leq, Membership contains)
    : name_{std::move(name)}
    , kind_{kind}
    , identity_{std::move(identity)}
    , combine_{std::move(combine)}
    , commutative_{commutative}
    , leq_{std::move(leq)}
    , contains_{std::move(contains)}
{
}

bool CostMonoid::leq(const Cost& a, const Cost& b) const
{
    if (!leq_) {
        throw OrderUnavailable(name_);
    }
    return leq_(a, b);
}

bool CostMonoid::contains(const Cost& c) const
{
    return !contains_ || contains_(c);
}

void CostMonoid::require(const Cost& c, const char* what) const
{
    if (!contains(c)) {
        throw ContractViolation(std::string(what) + " " + c.to_string() + " is not a " + name_ + " cost");
    }
}

namespace {

Cost add_integers(const Cost& a, const Cost& b)
{
    std::int64_t sum = 0;
    if (__builtin_add_overflow(a.as_integer(), b.as_integer(), &sum)) {
        throw Error("integer cost overflow");
    }
    return Cost::integer(sum);
}

bool integer_leq(const Cost& a, const Cost& b)
{
    return a.as_integer() <= b.as_integer();
}

}  // namespace

CostMonoid CostMonoid::nat()
{
    return CostMonoid{"nat", CostKind::Nat, Cost::integer(0), add_integers, true, integer_leq,
                      [](const Cost& c) { return c.is_integer() && c.as_integer() >= 0; }};
}

CostMonoid CostMonoid::integer()
{
    return CostMonoid{"int", CostKind::Int, Cost::integer(0), add_integers, true, integer_leq,
                      [](const Cost& c) { return c.is_integer(); }};
}

CostMonoid CostMonoid::trace()
{
    return CostMonoid{"trace",
                      CostKind::Trace,
                      Cost::text(""),
                      [](const Cost& a, const Cost& b) { return Cost::text(a.as_text() + b.as_text()); },
                      false,
                      {},
                      [](const Cost& c) { return c.is_text(); }};
}

CostMonoid CostMonoid::rational()
{
    return CostMonoid{"rational",
                      CostKind::Rational,
                      Cost::rational(0),
                      [](const Cost& a, const Cost& b) { return Cost::rational(a.as_rational() + b.as_rational()); },
                      true,
                      [](const Cost& a, const Cost& b) { return a.as_rational() <= b.as_rational(); },
                      [](const Cost& c) { return c.is_rational() && c.as_rational() >= 0; }};
}

Cost combine_all(const CostMonoid& m, std::span<const Cost> costs)
{
    Cost acc = m.identity();
    for (const Cost& c : costs) {
        acc = m.combine(acc, c);
    }
    return acc;
}

CostMonoid opposite(const CostMonoid& m)
{
    return CostMonoid{"op(" + m.name() + ")",
                      CostKind::Custom,
                      m.identity(),
                      [m](const Cost& a, const Cost& b) { return m.combine(b, a); },
                      m.is_commutative(),
                      m.is_ordered() ? CostMonoid::Order{[m](const Cost& a, const Cost& b) { return m.leq(a, b); }}
                                     : CostMonoid::Order{},
                      [m](const Cost& c) { return m.contains(c); }};
}

}  // namespace amortize
