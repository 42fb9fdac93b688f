#pragma once

#include <vector>

#include "fracterm/nonlinearity.hpp"

namespace golden {

struct ValidatorCase {
    const char* label;
    fracterm::NonlinearityKind kind;
    fracterm::ApplicationParams p;
    bool expect_pass;
    const char* expect_route;
};

// Hand-checked parameter tuples for the application theorems. Each entry
// was verified against the interval chains by direct substitution.
inline std::vector<ValidatorCase> validator_cases() {
    using K = fracterm::NonlinearityKind;
    using P = fracterm::ApplicationParams;
    std::vector<ValidatorCase> v;
    auto add = [&](const char* label, K kind, P p, bool pass, const char* route) {
        v.push_back({label, kind, p, pass, route});
    };
    // N, alpha, s, varrho, nu, sigma, vartheta, vartheta', b
    add("gl sub N4 baseline", K::ginzburg_landau,
        P{4, 1.5, 0.5, 0.25, 0.6, -0.2, 0.9, 0.95, 0.7}, true, "subcritical");
    add("gl sub b too small", K::ginzburg_landau,
        P{4, 1.5, 0.5, 0.25, 0.6, -0.2, 0.9, 0.95, 0.5}, false, "subcritical");
    add("gl sub varrho too big", K::ginzburg_landau,
        P{4, 1.5, 0.5, 0.30, 0.6, -0.2, 0.9, 0.95, 0.7}, false, "subcritical");
    add("gl sub nu too small", K::ginzburg_landau,
        P{4, 1.5, 0.5, 0.25, 0.45, -0.2, 0.9, 0.95, 0.7}, false, "subcritical");
    add("gl sub N2 baseline", K::ginzburg_landau,
        P{2, 1.2, 1.0, 0.25, 0.4, -0.1, 0.6, 0.9, 0.6}, true, "subcritical");
    add("gl super N4 baseline", K::ginzburg_landau,
        P{4, 1.5, 1.0, 0.0, 0.8, -0.1, 0.95, 0.97, 1.3}, true, "supercritical");
    add("gl super nu too small", K::ginzburg_landau,
        P{4, 1.5, 1.0, 0.0, 0.45, -0.1, 0.95, 0.97, 1.3}, false, "supercritical");
    add("gl super vartheta below mu", K::ginzburg_landau,
        P{4, 1.5, 1.0, 0.0, 0.8, -0.1, 0.85, 0.97, 1.3}, false, "supercritical");
    add("gl N out of range", K::ginzburg_landau,
        P{5, 1.5, 1.0, 0.0, 0.8, -0.1, 0.95, 0.97, 1.3}, false, "supercritical");
    add("gl sub N3 baseline", K::ginzburg_landau,
        P{3, 1.4, 1.0, 0.375, 0.5, -0.1, 0.7, 0.85, 0.7}, true, "subcritical");
    add("gl super N2 cubic", K::ginzburg_landau,
        P{2, 1.1, 3.0, 0.0, 0.4, -0.1, 0.55, 0.85, 1.7}, true, "supercritical");
    add("gl sub N4 weak growth", K::ginzburg_landau,
        P{4, 1.9, 0.25, 0.125, 0.7, -0.1, 0.85, 0.9, 0.6}, true, "subcritical");
    add("burgers N4 baseline", K::burgers,
        P{4, 1.5, 1.0, 0.0, 0.6, -0.32, 0.94, 0.96, 1.3}, true, "burgers");
    add("burgers nu too small", K::burgers,
        P{4, 1.5, 1.0, 0.0, 0.4, -0.32, 0.94, 0.96, 1.3}, false, "burgers");
    add("burgers N3 baseline", K::burgers,
        P{3, 1.5, 1.0, 0.0, 0.6, -0.1, 0.8, 0.95, 1.0}, true, "burgers");
    add("burgers N3 smoother data", K::burgers,
        P{3, 1.8, 1.0, 0.0, 0.7, -0.05, 0.8, 0.93, 1.1}, true, "burgers");
    add("burgers N out of range", K::burgers,
        P{2, 1.5, 1.0, 0.0, 0.6, -0.1, 0.8, 0.95, 1.0}, false, "burgers");
    add("burgers b too small", K::burgers,
        P{4, 1.5, 1.0, 0.0, 0.6, -0.32, 0.94, 0.96, 1.2}, false, "burgers");
    add("burgers vartheta' gap", K::burgers,
        P{3, 1.5, 1.0, 0.0, 0.6, -0.1, 0.8, 0.90, 1.0}, false, "burgers");
    add("gl boundary s=4/N", K::ginzburg_landau,
        P{2, 1.2, 2.0, 0.0, 0.4, -0.2, 0.65, 0.92, 1.3}, true, "supercritical");
    return v;
}

}  // namespace golden
