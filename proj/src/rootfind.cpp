#include "arctic/rootfind.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "arctic/errors.hpp"

namespace arctic {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootConfig cfg) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << lo << ", " << hi << "]: f(lo)=" << fa
            << ", f(hi)=" << fb;
        throw bracket_error(msg.str());
    }
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (std::fabs(b - a) <= cfg.xtol) return 0.5 * (a + b);
        double x = b - fb * (b - a) / (fb - fa);
        double margin = 0.01 * (b - a);
        if (!std::isfinite(x) || x <= std::fmin(a, b) + std::fabs(margin) ||
            x >= std::fmax(a, b) - std::fabs(margin))
            x = 0.5 * (a + b);
        double fx = f(x);
        if (fx == 0.0 || std::fabs(fx) <= cfg.ftol) return x;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if (std::fabs(b - a) <= 1e3 * cfg.xtol) return 0.5 * (a + b);
    std::ostringstream msg;
    msg << "find_root: bracket [" << a << ", " << b << "] still wider than " << cfg.xtol
        << " after " << cfg.max_iter << " iterations";
    throw convergence_error(msg.str());
}

std::vector<std::pair<double, double>> scan_brackets(
    const std::function<double(double)>& f, double lo, double hi, int n,
    std::vector<std::string>* notes) {
    std::vector<std::pair<double, double>> out;
    double prev_x = 0.0, prev_f = 0.0;
    bool have_prev = false;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double fx;
        try {
            fx = f(x);
        } catch (const std::exception& e) {
            if (notes) {
                std::ostringstream msg;
                msg << "scan: evaluation failed at " << x << ": " << e.what();
                notes->push_back(msg.str());
            }
            have_prev = false;
            continue;
        }
        if (!std::isfinite(fx)) {
            if (notes) {
                std::ostringstream msg;
                msg << "scan: non-finite value at " << x;
                notes->push_back(msg.str());
            }
            have_prev = false;
            continue;
        }
        if (have_prev && std::signbit(prev_f) != std::signbit(fx))
            out.emplace_back(prev_x, x);
        prev_x = x;
        prev_f = fx;
        have_prev = true;
    }
    return out;
}

} // namespace arctic
