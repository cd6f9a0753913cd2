#pragma once

#include <stdexcept>
#include <string>

namespace poincare {

// Every failure the library reports derives from `error`; `kind()` is the
// machine-readable tag the CLI puts in its error object.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

#define POINCARE_ERROR_TYPE(name, tag)                                        \
    class name : public error {                                               \
    public:                                                                   \
        explicit name(const std::string& what) : error(what) {}               \
        const char* kind() const noexcept override { return tag; }            \
    }

POINCARE_ERROR_TYPE(domain_error, "domain");
POINCARE_ERROR_TYPE(parameter_error, "parameter");
POINCARE_ERROR_TYPE(ingestion_error, "ingestion");
POINCARE_ERROR_TYPE(moment_error, "moment");
POINCARE_ERROR_TYPE(precondition_error, "precondition");
POINCARE_ERROR_TYPE(contract_error, "contract");
POINCARE_ERROR_TYPE(normalization_error, "normalization");
POINCARE_ERROR_TYPE(not_available, "not_available");
POINCARE_ERROR_TYPE(range_error, "range");
POINCARE_ERROR_TYPE(construction_error, "construction");

#undef POINCARE_ERROR_TYPE

// Adaptive integration gave up; the best estimate is still useful to callers
// that can tolerate a looser answer.
class accuracy_error : public error {
public:
    accuracy_error(const std::string& what, double estimate, double error_bound)
        : error(what), estimate_(estimate), error_bound_(error_bound) {}
    const char* kind() const noexcept override { return "accuracy"; }
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class assembly_error : public error {
public:
    assembly_error(const std::string& what, std::size_t node, double x)
        : error(what), node_(node), x_(x) {}
    const char* kind() const noexcept override { return "assembly"; }
    std::size_t node() const noexcept { return node_; }
    double x() const noexcept { return x_; }

private:
    std::size_t node_;
    double x_;
};

} // namespace poincare
