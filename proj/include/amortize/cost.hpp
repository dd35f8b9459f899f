#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace amortize {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// A cost value: an integer (Nat and Int models), an exact rational, or a
/// string (the trace/buffering model). Equality is structural; rationals are
/// kept in lowest terms by construction.
class Cost
{
   public:
    Cost() = default;

    static Cost integer(std::int64_t i)
    {
        return Cost{Repr{i}};
    }

    static Cost rational(Rational r)
    {
        return Cost{Repr{r}};
    }

    static Cost text(std::string s)
    {
        return Cost{Repr{std::move(s)}};
    }

    bool is_integer() const noexcept
    {
        return std::holds_alternative<std::int64_t>(repr_);
    }

    bool is_rational() const noexcept
    {
        return std::holds_alternative<Rational>(repr_);
    }

    bool is_text() const noexcept
    {
        return std::holds_alternative<std::string>(repr_);
    }

    std::int64_t as_integer() const;
    const Rational& as_rational() const;
    const std::string& as_text() const;

    // Integer and rational costs as an exact rational; nullopt for text.
    std::optional<Rational> numeric() const;

    std::string to_string() const;

    friend bool operator==(const Cost&, const Cost&) = default;

   private:
    using Repr = std::variant<std::int64_t, Rational, std::string>;

    explicit Cost(Repr r) : repr_{std::move(r)}
    {
    }

    Repr repr_{std::int64_t{0}};
};

enum class CostKind { Nat, Int, Trace, Rational, Custom };

/// An abstract cost model: identity, associative combine, and the optional
/// commutativity and order capabilities.
class CostMonoid
{
   public:
    using Combine = std::function<Cost(const Cost&, const Cost&)>;
    using Order = std::function<bool(const Cost&, const Cost&)>;
    using Membership = std::function<bool(const Cost&)>;

    CostMonoid(std::string name, CostKind kind, Cost identity, Combine combine, bool commutative,
               Order leq = {}, Membership contains = {});

    static CostMonoid nat();
    static CostMonoid integer();
    static CostMonoid trace();
    static CostMonoid rational();

    const std::string& name() const noexcept
    {
        return name_;
    }

    CostKind kind() const noexcept
    {
        return kind_;
    }

    const Cost& identity() const noexcept
    {
        return identity_;
    }

    Cost combine(const Cost& a, const Cost& b) const
    {
        return combine_(a, b);
    }

    bool is_commutative() const noexcept
    {
        return commutative_;
    }

    bool is_ordered() const noexcept
    {
        return static_cast<bool>(leq_);
    }

    // Throws OrderUnavailable on unordered models.
    bool leq(const Cost& a, const Cost& b) const;

    // Whether `c` is a value of this model (e.g. Nat rejects negatives).
    bool contains(const Cost& c) const;

    // Throws ContractViolation naming `what` unless contains(c).
    void require(const Cost& c, const char* what) const;

   private:
    std::string name_;
    CostKind kind_;
    Cost identity_;
    Combine combine_;
    bool commutative_;
    Order leq_;
    Membership contains_;
};

// Left-to-right fold of combine starting at identity.
Cost combine_all(const CostMonoid& m, std::span<const Cost> costs);

// The opposite monoid: combine(a, b) = m.combine(b, a).
CostMonoid opposite(const CostMonoid& m);

}  // namespace amortize
