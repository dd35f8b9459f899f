#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

/// A structured, serializable value used for states, arguments and observables.
///
/// The textual encoding is deterministic and doubles as the identity key of a
/// value: `()` for unit, decimal integers, double-quoted strings with `\"` and
/// `\\` escapes, `[a,b]` for lists and `(a,b)` for tuples (a 1-tuple is `(a,)`).
/// `parse_value(v.to_string()) == v` for every value.
class Value
{
   public:
    enum class Kind : std::uint8_t { Unit, Int, Str, List, Tuple };

    Value() = default;

    static Value unit();
    static Value integer(std::int64_t i);
    static Value str(std::string s);
    static Value list(std::vector<Value> items);
    static Value tuple(std::vector<Value> items);

    static Value int_list(const std::vector<std::int64_t>& ints);

    Kind kind() const noexcept
    {
        return kind_;
    }

    bool is_unit() const noexcept
    {
        return kind_ == Kind::Unit;
    }

    std::int64_t as_int() const;
    const std::string& as_str() const;

    // Elements of a list or tuple.
    const std::vector<Value>& items() const;
    const Value& at(std::size_t i) const;

    std::vector<std::int64_t> as_int_list() const;

    std::string to_string() const;

    friend bool operator==(const Value&, const Value&) = default;

   private:
    void write(std::string& out) const;

    Kind kind_ = Kind::Unit;
    std::int64_t int_ = 0;
    std::string str_;
    std::vector<Value> items_;
};

Value parse_value(std::string_view text);

std::string quote(std::string_view s);

inline std::string to_key(const Value& v)
{
    return v.to_string();
}

std::ostream& operator<<(std::ostream& out, const Value& v);

}  // namespace amortize
