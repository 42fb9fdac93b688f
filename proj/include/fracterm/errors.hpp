#pragma once

#include <stdexcept>
#include <string>

namespace fracterm {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// No evaluation branch could certify the requested tolerance.
/// Carries the best available estimate and its certified error bound.
struct AccuracyError : std::runtime_error {
    double best_estimate;
    double error_bound;
    AccuracyError(const std::string& msg, double estimate, double bound)
        : std::runtime_error(msg), best_estimate(estimate), error_bound(bound) {}
};

/// Collocation grid too coarse for the requested bandwidth.
struct AliasError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested time is not a node of the grid.
struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// E_{alpha,1}(-lambda_j T^alpha) fell below the denominator guard for some mode.
struct TerminalTimeInadmissible : std::runtime_error {
    int mode_index;        // 1-based offending mode
    double denominator;    // the violating value
    TerminalTimeInadmissible(const std::string& msg, int j, double den)
        : std::runtime_error(msg), mode_index(j), denominator(den) {}
};

/// Fixed-point iteration failed to reach tolerance.
struct NonConvergence : std::runtime_error {
    int iterations;
    double last_ratio;
    NonConvergence(const std::string& msg, int iters, double ratio)
        : std::runtime_error(msg), iterations(iters), last_ratio(ratio) {}
};

/// Regression window too short or degenerate.
struct DegenerateWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid experiment configuration; message names the field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace fracterm
