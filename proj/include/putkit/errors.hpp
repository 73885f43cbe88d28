#pragma once

#include <stdexcept>
#include <string>

namespace putkit {

/// Parameter set is outside the region where the model is well defined
/// (e.g. a boundary formula turns non-positive). Distinct from plain
/// argument errors so callers can map it to its own exit code.
class model_validity_error : public std::runtime_error {
public:
    explicit model_validity_error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to converge within its iteration budget.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace putkit
