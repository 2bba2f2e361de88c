#pragma once

// Scalar root finding on a bracket: secant steps clipped to the bracket,
// falling back to bisection whenever the secant step leaves it or stalls.

#include <functional>
#include <string>
#include <vector>

namespace arctic {

struct RootConfig {
    double xtol = 1e-13;  // absolute width of the final bracket
    double ftol = 0.0;    // early accept when |f| <= ftol (0 disables)
    int max_iter = 200;
};

// Requires sign(f(lo)) != sign(f(hi)); throws bracket_error otherwise and
// convergence_error if max_iter is exhausted before the bracket shrinks.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootConfig cfg = {});

// Samples f at n+1 equally spaced points of [lo, hi] looking for adjacent
// sign changes. Evaluation failures are recorded in notes (if given) and
// treated as gaps. Returns all sign-change brackets found, in order.
std::vector<std::pair<double, double>> scan_brackets(
    const std::function<double(double)>& f, double lo, double hi, int n,
    std::vector<std::string>* notes = nullptr);

} // namespace arctic
