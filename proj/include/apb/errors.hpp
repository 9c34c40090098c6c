#pragma once

#include <stdexcept>
#include <string>

namespace apb {

// Malformed svmlight input; message names the offending line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed an argument outside the documented domain.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A documented call-sequence precondition was broken (e.g. out-of-order batch).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// All weights are zero; normalization is undefined.
class DegenerateWeights : public std::runtime_error {
public:
    explicit DegenerateWeights(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal inconsistency between an exhaustive oracle pass and a bound
// computation; signals a bug upstream, never a data problem.
class OracleMismatch : public std::logic_error {
public:
    explicit OracleMismatch(const std::string& msg) : std::logic_error(msg) {}
};

// Branch-and-bound node budget exhausted. `partial` is a still-valid lower
// estimate assembled from the incumbent and all abandoned subtree bounds.
class BoundTimeout : public std::runtime_error {
public:
    BoundTimeout(const std::string& msg, long long partial_estimate)
        : std::runtime_error(msg), partial(partial_estimate) {}
    long long partial;
};

// KL(p||q) with q in {0,1} and p != q diverges; reported explicitly so the
// caller can distinguish it from accumulated floating-point overflow.
class DivergenceInfinite : public std::domain_error {
public:
    explicit DivergenceInfinite(const std::string& msg) : std::domain_error(msg) {}
};

}  // namespace apb
