#include "amortize/errors.hpp"
#include "amortize/value.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace amortize;

TEST_CASE("serialization round-trips on generated values")
{
    gen::Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Value v = gen::value(rng);
        const std::string s = v.to_string();
        CHECK_MESSAGE(parse_value(s) == v, s);
        CHECK(parse_value(s).to_string() == s);
    }
}

TEST_CASE("literal forms")
{
    CHECK(Value::unit().to_string() == "()");
    CHECK(Value::tuple({}).to_string() == "()");
    CHECK(Value::tuple({Value::integer(1)}).to_string() == "(1,)");
    CHECK(Value::tuple({Value::integer(1), Value::str("a")}).to_string() == "(1,\"a\")");
    CHECK(Value::int_list({0, 1, 1}).to_string() == "[0,1,1]");
    CHECK(parse_value(" ( 3 , [ ] ) ") == Value::tuple({Value::integer(3), Value::list({})}));
    CHECK(parse_value("-12") == Value::integer(-12));
    CHECK(parse_value("\"a\\nb\"") == Value::str("a\nb"));
}

TEST_CASE("malformed literals report a column")
{
    for (const char* bad : {"", "(", "[1,", "\"abc", "1 2", "(1,,)", "x", "[1;2]"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_value(bad), ParseError);
    }
    try {
        parse_value("[1, 2, ?]");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 8);
    }
}

TEST_CASE("accessors reject the wrong kind")
{
    CHECK_THROWS_AS(Value::str("a").as_int(), ContractViolation);
    CHECK_THROWS_AS(Value::integer(1).items(), ContractViolation);
    CHECK_THROWS_AS(Value::list({Value::str("a")}).as_int_list(), ContractViolation);
    CHECK(Value::int_list({4, 5}).as_int_list() == std::vector<std::int64_t>{4, 5});
}
