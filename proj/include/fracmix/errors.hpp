#pragma once

#include <stdexcept>
#include <string>

namespace fracmix {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularOperator : std::runtime_error {
    SingularOperator(const std::string& what, double cond)
        : std::runtime_error(what), condition(cond) {}
    double condition;
};

}  // namespace fracmix
