#pragma once

#include <stdexcept>
#include <string>

namespace csdp {

// Every library failure carries a short machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct ParameterError : Error {
    explicit ParameterError(const std::string& w) : Error("parameter", w) {}
};

// Likelihood ratio is infinite (p = 1 or q = 0).
struct DegenerateLikelihood : Error {
    explicit DegenerateLikelihood(const std::string& w) : Error("degenerate_likelihood", w) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& w) : Error("contract", w) {}
};

// A root or quantity the caller asked for does not exist.
struct WellDefinednessError : Error {
    explicit WellDefinednessError(const std::string& w) : Error("well_definedness", w) {}
};

struct WitnessFailed : Error {
    explicit WitnessFailed(const std::string& w) : Error("witness_failed", w) {}
};

struct GuardError : Error {
    explicit GuardError(const std::string& w) : Error("guard", w) {}
};

struct IoError : Error {
    explicit IoError(const std::string& w) : Error("io", w) {}
};

}  // namespace csdp
