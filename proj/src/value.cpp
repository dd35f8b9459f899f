#include "amortize/value.hpp"

#include "amortize/errors.hpp"

#include <charconv>
#include <ostream>

namespace amortize {

Value Value::unit()
{
    return Value{};
}

Value Value::integer(std::int64_t i)
{
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = i;
    return v;
}

Value Value::str(std::string s)
{
    Value v;
    v.kind_ = Kind::Str;
    v.str_ = std::move(s);
    return v;
}

Value Value::list(std::vector<Value> items)
{
    Value v;
    v.kind_ = Kind::List;
    v.items_ = std::move(items);
    return v;
}

Value Value::tuple(std::vector<Value> items)
{
    if (items.empty()) {
        return unit();
    }
    Value v;
    v.kind_ = Kind::Tuple;
    v.items_ = std::move(items);
    return v;
}

Value Value::int_list(const std::vector<std::int64_t>& ints)
{
    std::vector<Value> items;
    items.reserve(ints.size());
    for (std::int64_t i : ints) {
        items.push_back(integer(i));
    }
    return list(std::move(items));
}

std::int64_t Value::as_int() const
{
    if (kind_ != Kind::Int) {
        throw ContractViolation("expected an integer value, got " + to_string());
    }
    return int_;
}

const std::string& Value::as_str() const
{
    if (kind_ != Kind::Str) {
        throw ContractViolation("expected a string value, got " + to_string());
    }
    return str_;
}

const std::vector<Value>& Value::items() const
{
    if (kind_ != Kind::List && kind_ != Kind::Tuple) {
        throw ContractViolation("expected a list or tuple value, got " + to_string());
    }
    return items_;
}

const Value& Value::at(std::size_t i) const
{
    const auto& xs = items();
    if (i >= xs.size()) {
        throw ContractViolation("index " + std::to_string(i) + " out of range in " + to_string());
    }
    return xs[i];
}

std::vector<std::int64_t> Value::as_int_list() const
{
    std::vector<std::int64_t> out;
    for (const Value& v : items()) {
        out.push_back(v.as_int());
    }
    return out;
}

std::string quote(std::string_view s)
{
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            default:
                out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

void Value::write(std::string& out) const
{
    switch (kind_) {
        case Kind::Unit:
            out += "()";
            break;
        case Kind::Int:
            out += std::to_string(int_);
            break;
        case Kind::Str:
            out += quote(str_);
            break;
        case Kind::List:
        case Kind::Tuple: {
            const bool is_list = kind_ == Kind::List;
            out.push_back(is_list ? '[' : '(');
            for (std::size_t i = 0; i < items_.size(); ++i) {
                if (i != 0) {
                    out.push_back(',');
                }
                items_[i].write(out);
            }
            if (!is_list && items_.size() == 1) {
                out.push_back(',');
            }
            out.push_back(is_list ? ']' : ')');
            break;
        }
    }
}

std::string Value::to_string() const
{
    std::string out;
    write(out);
    return out;
}

std::ostream& operator<<(std::ostream& out, const Value& v)
{
    return out << v.to_string();
}

namespace {

class ValueParser
{
   public:
    explicit ValueParser(std::string_view text) : text_{text}
    {
    }

    Value parse_all()
    {
        Value v = parse();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return v;
    }

   private:
    [[noreturn]] void fail(const std::string& message) const
    {
        throw ParseError(message, 1, pos_ + 1);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool eat(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Value parse()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("expected a value");
        }
        const char c = text_[pos_];
        if (c == '"') {
            return Value::str(parse_string());
        }
        if (c == '[') {
            ++pos_;
            std::vector<Value> items;
            if (eat(']')) {
                return Value::list(std::move(items));
            }
            do {
                items.push_back(parse());
            } while (eat(','));
            if (!eat(']')) {
                fail("expected ',' or ']'");
            }
            return Value::list(std::move(items));
        }
        if (c == '(') {
            ++pos_;
            if (eat(')')) {
                return Value::unit();
            }
            std::vector<Value> items;
            items.push_back(parse());
            while (eat(',')) {
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ')') {
                    break;
                }
                items.push_back(parse());
            }
            if (!eat(')')) {
                fail("expected ',' or ')'");
            }
            return Value::tuple(std::move(items));
        }
        if (c == '-' || (c >= '0' && c <= '9')) {
            std::int64_t i = 0;
            const char* first = text_.data() + pos_;
            const char* last = text_.data() + text_.size();
            auto [ptr, ec] = std::from_chars(first, last, i);
            if (ec != std::errc{} || ptr == first) {
                fail("malformed integer");
            }
            pos_ += static_cast<std::size_t>(ptr - first);
            return Value::integer(i);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string parse_string()
    {
        ++pos_;  // opening quote
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_++];
            if (c == '"') {
                return out;
            }
            if (c == '\\') {
                if (pos_ >= text_.size()) {
                    break;
                }
                const char e = text_[pos_++];
                switch (e) {
                    case '"':
                    case '\\':
                        out.push_back(e);
                        break;
                    case 'n':
                        out.push_back('\n');
                        break;
                    default:
                        --pos_;
                        fail(std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            out.push_back(c);
        }
        fail("unterminated string");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Value parse_value(std::string_view text)
{
    return ValueParser{text}.parse_all();
}

}  // namespace amortize
