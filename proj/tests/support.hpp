#pragma once

#include <string>
#include <vector>

#include <poincare/poincare.hpp>

namespace poincare::testing {

struct named_density {
    std::string label;
    density_spec d;
};

// One representative of each catalog family.
inline std::vector<named_density> catalog_zoo()
{
    return {
        {"gaussian", catalog("gaussian", {})},
        {"exponential", catalog("exponential", {{"theta", 1.0}})},
        {"uniform", catalog("uniform", {{"lo", 0.0}, {"hi", 1.0}})},
        {"beta22", catalog("beta", {{"alpha", 2.0}, {"beta", 2.0}})},
        {"gamma2", catalog("gamma", {{"k", 2.0}, {"theta", 1.0}})},
        {"subbotin3", catalog("subbotin", {{"alpha", 3.0}})},
        {"weibull15", catalog("weibull", {{"k", 1.5}, {"lambda", 1.0}})},
    };
}

inline double one_fn(double) { return 1.0; }

} // namespace poincare::testing
