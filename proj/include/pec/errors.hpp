#pragma once

#include <stdexcept>
#include <string>

namespace pec {

// Error taxonomy. Everything derives from Error so callers can catch
// coarsely; the CLI maps configuration problems to exit code 2 and
// infeasibility (empty search space, impossible tuple) to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInverse : Error {
    ZeroInverse() : Error("inverse of zero requested") {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w = "dimension mismatch") : Error(w) {}
};

struct InvalidParams : Error {
    explicit InvalidParams(const std::string& w = "invalid parameters") : Error(w) {}
};

struct NotEnoughShares : Error {
    explicit NotEnoughShares(const std::string& w = "not enough shares to decode") : Error(w) {}
};

struct InconsistentShares : Error {
    explicit InconsistentShares(const std::string& w = "shares are mutually inconsistent") : Error(w) {}
};

struct SubsetTooLarge : Error {
    explicit SubsetTooLarge(const std::string& w = "subset must be smaller than the code dimension") : Error(w) {}
};

struct InfeasibleFill : Error {
    explicit InfeasibleFill(const std::string& w = "cannot fill index matrix without a column duplicate") : Error(w) {}
};

struct InfeasibleT : Error {
    explicit InfeasibleT(const std::string& w = "stopping threshold t unreachable") : Error(w) {}
};

struct Deadlock : Error {
    explicit Deadlock(const std::string& w = "simulation deadlocked before termination") : Error(w) {}
};

struct EmptySpace : Error {
    explicit EmptySpace(const std::string& w = "search space has no feasible tuple") : Error(w) {}
};

struct InfeasibleConfig : Error {
    explicit InfeasibleConfig(const std::string& w = "configuration violates a feasibility constraint") : Error(w) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w = "bad configuration") : Error(w) {}
};

} // namespace pec
