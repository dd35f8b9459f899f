#pragma once

#include "amortize/cost.hpp"
#include "amortize/errors.hpp"

#include <algorithm>
#include <concepts>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace amortize {

/// A value paired with the cost accumulated while producing it.
template <typename T>
struct Charged {
    Cost cost;
    T value;

    friend bool operator==(const Charged&, const Charged&) = default;
};

template <typename T>
Charged<T> charge(Cost c, T value)
{
    return Charged<T>{std::move(c), std::move(value)};
}

template <typename T>
Charged<T> ret(const CostMonoid& m, T value)
{
    return Charged<T>{m.identity(), std::move(value)};
}

// Sequencing: the cost of `a` is combined on the left of the cost of f(a.value).
template <typename T, typename F>
auto bind(const CostMonoid& m, const Charged<T>& a, F&& f) -> decltype(f(a.value))
{
    auto next = f(a.value);
    next.cost = m.combine(a.cost, next.cost);
    return next;
}

template <typename A, typename B>
Charged<std::pair<A, B>> tensor(const CostMonoid& m, Charged<A> a, Charged<B> b)
{
    if (!m.is_commutative()) {
        throw NonCommutativeTensor(m.name());
    }
    return Charged<std::pair<A, B>>{m.combine(a.cost, b.cost), {std::move(a.value), std::move(b.value)}};
}

template <typename T>
struct Weighted {
    Rational weight;
    T value;

    friend bool operator==(const Weighted&, const Weighted&) = default;
};

/// A finitely-branching randomized charged computation: each branch is a
/// charged result with a positive exact probability.
template <typename T>
using Stochastic = std::vector<Weighted<Charged<T>>>;

template <typename T>
Stochastic<T> certainly(Charged<T> c)
{
    return Stochastic<T>{Weighted<Charged<T>>{Rational{1}, std::move(c)}};
}

// Sequencing of randomized computations: weights multiply, costs combine.
template <typename T, typename F>
auto bind(const CostMonoid& m, const Stochastic<T>& xs, F&& f) -> decltype(f(xs.front().value.value))
{
    decltype(f(xs.front().value.value)) out;
    for (const auto& x : xs) {
        for (auto& y : f(x.value.value)) {
            out.push_back({x.weight * y.weight, {m.combine(x.value.cost, y.value.cost), std::move(y.value.value)}});
        }
    }
    return out;
}

template <typename T>
concept Keyed = requires(const T& t) {
    { to_key(t) } -> std::convertible_to<std::string>;
};

/// A finitely supported probability distribution in canonical form: equal
/// outcomes merged, branches ordered by the serialization of the outcome.
template <Keyed T>
class Dist
{
   public:
    static Dist point(T value)
    {
        Dist d;
        d.branches_.push_back({Rational{1}, std::move(value)});
        return d;
    }

    // Throws BadWeights unless every weight is positive and they sum to 1.
    static Dist from(std::vector<Weighted<T>> branches)
    {
        Rational total{0};
        for (const auto& b : branches) {
            if (b.weight <= 0) {
                throw BadWeights("non-positive weight " + amortize::to_string(b.weight));
            }
            total += b.weight;
        }
        if (total != Rational{1}) {
            throw BadWeights("weights sum to " + amortize::to_string(total) + ", expected 1");
        }
        return canonical(std::move(branches));
    }

    // weight * a + (1 - weight) * b, for 0 < weight < 1.
    static Dist mix(const Rational& weight, const Dist& a, const Dist& b)
    {
        if (weight <= 0 || weight >= 1) {
            throw BadWeights("mixture weight " + amortize::to_string(weight) + " outside (0,1)");
        }
        std::vector<Weighted<T>> out;
        for (const auto& x : a.branches_) {
            out.push_back({weight * x.weight, x.value});
        }
        for (const auto& x : b.branches_) {
            out.push_back({(1 - weight) * x.weight, x.value});
        }
        return canonical(std::move(out));
    }

    const std::vector<Weighted<T>>& branches() const noexcept
    {
        return branches_;
    }

    std::string to_string() const
    {
        std::string out = "{";
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            if (i != 0) {
                out += ", ";
            }
            out += amortize::to_string(branches_[i].weight) + ": " + to_key(branches_[i].value);
        }
        return out + "}";
    }

    friend bool operator==(const Dist&, const Dist&) = default;

   private:
    static Dist canonical(std::vector<Weighted<T>> branches)
    {
        std::map<std::string, Weighted<T>> merged;
        for (auto& b : branches) {
            std::string key = to_key(b.value);
            auto it = merged.find(key);
            if (it == merged.end()) {
                merged.emplace(std::move(key), std::move(b));
            } else {
                it->second.weight += b.weight;
            }
        }
        Dist d;
        for (auto& [key, b] : merged) {
            d.branches_.push_back(std::move(b));
        }
        return d;
    }

    std::vector<Weighted<T>> branches_;
};

template <Keyed T>
struct ExpectedCharged {
    Rational expected_cost;
    Dist<T> dist;

    friend bool operator==(const ExpectedCharged&, const ExpectedCharged&) = default;
};

/// Collapses weighted charged branches to their expected cost and the
/// canonical distribution of results. Requires the rational cost model.
template <Keyed T>
ExpectedCharged<T> expect(const CostMonoid& m, const Stochastic<T>& branches)
{
    if (m.kind() != CostKind::Rational) {
        throw ContractViolation("expected-cost analysis needs the rational cost model, got '" + m.name() + "'");
    }
    Rational expected{0};
    std::vector<Weighted<T>> outcomes;
    outcomes.reserve(branches.size());
    for (const auto& b : branches) {
        expected += b.weight * b.value.cost.as_rational();
        outcomes.push_back({b.weight, b.value.value});
    }
    return ExpectedCharged<T>{expected, Dist<T>::from(std::move(outcomes))};
}

}  // namespace amortize
