#pragma once

#include <stdexcept>
#include <string>

namespace expoly {

// Three-valued verdict of the constant zero test. ZERO and NONZERO are
// certified; UNDECIDED is the honest fallback, never a guess.
enum class Ternary { ZERO, NONZERO, UNDECIDED };

inline const char* to_string(Ternary t) {
    switch (t) {
    case Ternary::ZERO: return "ZERO";
    case Ternary::NONZERO: return "NONZERO";
    default: return "UNDECIDED";
    }
}

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what_arg)
        : Error("division by zero: " + what_arg) {}
};

// Raised whenever a sound answer would require deciding a constant
// identity the zero test cannot certify at maximum precision.
struct UndecidedError : Error {
    explicit UndecidedError(const std::string& what_arg)
        : Error("undecided: " + what_arg) {}
};

struct UnassignedParameter : Error {
    explicit UnassignedParameter(const std::string& name)
        : Error("parameter '" + name + "' has no assigned value") {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what_arg) : Error(what_arg) {}
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int line_, int col_, const std::string& msg)
        : Error("parse error at " + std::to_string(line_) + ":" +
                std::to_string(col_) + ": " + msg),
          line(line_), column(col_) {}
};

}  // namespace expoly
