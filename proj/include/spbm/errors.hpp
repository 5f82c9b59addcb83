#pragma once
#include <stdexcept>
#include <string>

namespace spbm {

// invalid arguments / violated preconditions
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// solver failed to reach its tolerance within the iteration cap
struct NumericError : std::runtime_error {
    double residual;
    explicit NumericError(const std::string& what, double res = 0.0)
        : std::runtime_error(what), residual(res) {}
};

// a module contract was violated at runtime (bad configuration upstream)
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GammaTooLarge : ContractError {
    double gamma;
    explicit GammaTooLarge(double g)
        : ContractError("exploration rate " + std::to_string(g) + " exceeds 1/2"),
          gamma(g) {}
};

struct RTooLarge : ContractError {
    double rate;
    explicit RTooLarge(double r)
        : ContractError("observation rate " + std::to_string(r) + " exceeds 1/2"),
          rate(r) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// partial-monitoring analysis failures
struct NonParetoAction : DomainError {
    int action;  // 1-based
    explicit NonParetoAction(int a)
        : DomainError("action " + std::to_string(a) + " is not Pareto optimal"),
          action(a) {}
};

struct DuplicateAction : DomainError {
    int a, b;  // 1-based
    DuplicateAction(int a_, int b_)
        : DomainError("actions " + std::to_string(a_) + " and " + std::to_string(b_) +
                      " have identical loss rows"),
          a(a_), b(b_) {}
};

struct NotGloballyObservable : DomainError {
    int a, b;  // 1-based edge
    NotGloballyObservable(int a_, int b_)
        : DomainError("no estimation function exists for neighbors {" +
                      std::to_string(a_) + "," + std::to_string(b_) + "}"),
          a(a_), b(b_) {}
};

struct DisconnectedNeighborGraph : DomainError {
    DisconnectedNeighborGraph() : DomainError("neighbor graph is disconnected") {}
};

// linear algebra / LP failures
struct Inconsistent : DomainError {
    double residual;
    explicit Inconsistent(double res)
        : DomainError("linear system inconsistent, residual " + std::to_string(res)),
          residual(res) {}
};

struct Infeasible : DomainError {
    Infeasible() : DomainError("linear program infeasible") {}
};

struct Unbounded : DomainError {
    Unbounded() : DomainError("linear program unbounded") {}
};

} // namespace spbm
