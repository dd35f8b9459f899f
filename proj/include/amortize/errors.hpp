#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amortize {

// Base of every error raised by the library.
class Error : public std::runtime_error
{
   public:
    using std::runtime_error::runtime_error;
};

// Combining parallel states needs a commutative cost monoid.
class NonCommutativeTensor : public Error
{
   public:
    explicit NonCommutativeTensor(const std::string& monoid)
        : Error("cost model '" + monoid + "' is not commutative; parallel states cannot be combined")
    {
    }
};

// Colax comparison requested on a cost model without an order.
class OrderUnavailable : public Error
{
   public:
    explicit OrderUnavailable(const std::string& monoid)
        : Error("cost model '" + monoid + "' has no order; colax checking is unavailable")
    {
    }
};

class BadWeights : public Error
{
   public:
    using Error::Error;
};

class ArityMismatch : public Error
{
   public:
    using Error::Error;
};

class UnsupportedArity : public Error
{
   public:
    using Error::Error;
};

class StepBudgetExceeded : public Error
{
   public:
    using Error::Error;
};

class UnknownMethod : public Error
{
   public:
    explicit UnknownMethod(const std::string& name) : Error("unknown method '" + name + "'")
    {
    }
};

// A transition, potential, or value accessor broke its own contract
// (wrong value kind, Stop from a non-stopping method, wrong output arity).
class ContractViolation : public Error
{
   public:
    using Error::Error;
};

class InvalidCase : public Error
{
   public:
    using Error::Error;
};

// Syntax or semantic error in textual input, with a 1-based position.
class ParseError : public Error
{
   public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
        , line_{line}
        , column_{column}
    {
    }

    std::size_t line() const noexcept
    {
        return line_;
    }

    std::size_t column() const noexcept
    {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace amortize
