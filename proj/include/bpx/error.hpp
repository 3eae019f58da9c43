#pragma once
// Exception types shared by every bpx module.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpx {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation applied to an IntSet representation it does not support.
class WrongVariant : public Error {
public:
    using Error::Error;
};

/// Horizon too small for the request, or two Window operands disagree.
class HorizonError : public Error {
public:
    using Error::Error;
};

/// Violated precondition on an argument (range, arity, ordering).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Enumeration would exceed the configured size budget.
class ResourceLimit : public Error {
public:
    using Error::Error;
};

/// Arithmetic left the 63-bit index range during evaluation.
class EvalOverflow : public Error {
public:
    using Error::Error;
};

/// A constructive search got stuck; `prefix` is the word it could not extend.
class ExtensionFailure : public Error {
public:
    ExtensionFailure(const std::string& what, std::string prefix)
        : Error(what), prefix_(std::move(prefix)) {}
    const std::string& prefix() const noexcept { return prefix_; }

private:
    std::string prefix_;
};

/// A library invariant did not hold on an emitted value.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
        : Error(format(offset, expected, message)), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string format(std::size_t offset, const std::vector<std::string>& expected,
                              const std::string& message) {
        std::string s = "syntax error at offset " + std::to_string(offset) + ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) s += i + 1 == expected.size() ? " or " : ", ";
                s += expected[i];
            }
            s += ")";
        }
        return s;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace bpx
