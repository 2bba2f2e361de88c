#include "arctic/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace arctic {

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx iu{0.0, 1.0};

std::string lattice_desc(double im_tau, double q) {
    std::ostringstream os;
    os << "tau = " << im_tau << "i, q = " << q;
    return os.str();
}

[[noreturn]] void throw_nonconvergent(const char* what, double im_tau, double q) {
    throw convergence_error(std::string(what) + " series hit max_terms for lattice " +
                            lattice_desc(im_tau, q));
}

// Shared truncation loop for the theta series and their derivatives.
// term(n) returns the n-th term; env(n) is an upper bound on its magnitude,
// decreasing once n is large, used for the stopping rule so that an accidental
// zero of sin/cos cannot stop the sum early.
template <typename Term, typename Env>
cplx theta_sum(cplx seed, Term term, Env env, const SeriesConfig& cfg, double im_tau, double q,
               const char* name) {
    cplx sum = seed;
    double peak = std::abs(seed);
    double prev_env = -1.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        const double e = env(n);
        if (n > 0 && e < prev_env && e < cfg.rel_tol * peak)
            return sum;
        sum += term(n);
        peak = std::max(peak, e);
        prev_env = e;
    }
    throw_nonconvergent(name, im_tau, q);
}

double sq(double x) { return x * x; }

// q^e for real positive q.
double qpow(double lnq, double e) { return std::exp(lnq * e); }

struct Reduced {
    cplx z;
    long m; // multiples of omega1 = 2 removed
    long n; // multiples of omega2 = 2*tau removed
};

Reduced reduce_mod_lattice(cplx z, double im_tau) {
    const long m = std::lround(z.real() / 2.0);
    const long n = std::lround(z.imag() / (2.0 * im_tau));
    return {z - cplx(2.0 * m, 2.0 * n * im_tau), m, n};
}

} // namespace

Lattice::Lattice(cplx tau, SeriesConfig cfg) : tau_(tau), cfg_(cfg) {
    if (!(tau.imag() > 0.0))
        throw construction_error("Lattice: Im tau must be positive");
    if (std::abs(tau.real()) > 1e-12)
        throw construction_error("Lattice: only rectangular lattices supported (tau purely imaginary)");
    if (cfg.max_terms < 16)
        throw construction_error("Lattice: SeriesConfig.max_terms must be >= 16");
    if (!(cfg.rel_tol > 0.0) || cfg.rel_tol >= 1.0)
        throw construction_error("Lattice: SeriesConfig.rel_tol must lie in (0, 1)");
    tau_ = cplx(0.0, tau.imag());
    q_ = std::exp(-pi * tau_.imag());

    // eta_1 = -(pi^2/12) theta_1'''(0) / theta_1'(0) for omega_1 = 2.
    const double lnq = std::log(q_);
    double d1 = 0.0, d3 = 0.0;
    {
        double peak = 0.0;
        bool done = false;
        for (int n = 0; n < cfg_.max_terms; ++n) {
            const double k = 2.0 * n + 1.0;
            const double t1 = 2.0 * ((n % 2) ? -1.0 : 1.0) * k * qpow(lnq, sq(n + 0.5));
            if (n > 0 && std::abs(t1) < cfg_.rel_tol * peak) {
                done = true;
                break;
            }
            d1 += t1;
            d3 += -t1 * k * k;
            peak = std::max(peak, std::abs(t1));
        }
        if (!done)
            throw_nonconvergent("theta1'(0)", tau_.imag(), q_);
    }
    eta1_ = -(pi * pi / 12.0) * (d3 / d1);

    // eta_2 = zeta(tau) evaluated directly from the series (not via the
    // Legendre relation, which stays an independent cross-check).
    const cplx v = pi * tau_ / 2.0;
    eta2_ = eta1_ * tau_ + (pi / 2.0) * detail::theta1_dv(v, *this) / detail::theta1_v(v, *this);

    const cplx legendre = eta1_ * omega2() - eta2_ * omega1() - iu * pi;
    if (std::abs(legendre) > 1e-10)
        throw construction_error("Lattice: Legendre relation residual " +
                                 std::to_string(std::abs(legendre)) + " for " +
                                 lattice_desc(tau_.imag(), q_));
}

std::pair<cplx, cplx> eta_constants(const Lattice& lat) {
    return {cplx(lat.eta1(), 0.0), lat.eta2()};
}

namespace detail {

cplx theta1_v(cplx v, const Lattice& lat) {
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(0.0),
        [&](int n) {
            return 2.0 * ((n % 2) ? -1.0 : 1.0) * qpow(lnq, sq(n + 0.5)) *
                   std::sin((2.0 * n + 1.0) * v);
        },
        [&](int n) { return 2.0 * std::exp(lnq * sq(n + 0.5) + (2.0 * n + 1.0) * a); },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta1");
}

cplx theta1_dv(cplx v, const Lattice& lat) {
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(0.0),
        [&](int n) {
            const double k = 2.0 * n + 1.0;
            return 2.0 * ((n % 2) ? -1.0 : 1.0) * k * qpow(lnq, sq(n + 0.5)) * std::cos(k * v);
        },
        [&](int n) {
            const double k = 2.0 * n + 1.0;
            return 2.0 * k * std::exp(lnq * sq(n + 0.5) + k * a);
        },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta1'");
}

cplx theta1_dv2(cplx v, const Lattice& lat) {
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(0.0),
        [&](int n) {
            const double k = 2.0 * n + 1.0;
            return -2.0 * ((n % 2) ? -1.0 : 1.0) * k * k * qpow(lnq, sq(n + 0.5)) *
                   std::sin(k * v);
        },
        [&](int n) {
            const double k = 2.0 * n + 1.0;
            return 2.0 * k * k * std::exp(lnq * sq(n + 0.5) + k * a);
        },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta1''");
}

} // namespace detail

cplx theta1(cplx z, const Lattice& lat) { return detail::theta1_v(pi * z / 2.0, lat); }

cplx theta2(cplx z, const Lattice& lat) {
    const cplx v = pi * z / 2.0;
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(0.0),
        [&](int n) { return 2.0 * qpow(lnq, sq(n + 0.5)) * std::cos((2.0 * n + 1.0) * v); },
        [&](int n) { return 2.0 * std::exp(lnq * sq(n + 0.5) + (2.0 * n + 1.0) * a); },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta2");
}

cplx theta3(cplx z, const Lattice& lat) {
    const cplx v = pi * z / 2.0;
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(1.0),
        [&](int n) { return 2.0 * qpow(lnq, sq(n + 1.0)) * std::cos(2.0 * (n + 1.0) * v); },
        [&](int n) { return 2.0 * std::exp(lnq * sq(n + 1.0) + 2.0 * (n + 1.0) * a); },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta3");
}

cplx theta4(cplx z, const Lattice& lat) {
    const cplx v = pi * z / 2.0;
    const double lnq = std::log(lat.nome_q());
    const double a = std::abs(v.imag());
    return theta_sum(
        cplx(1.0),
        [&](int n) {
            return 2.0 * ((n % 2) ? 1.0 : -1.0) * qpow(lnq, sq(n + 1.0)) *
                   std::cos(2.0 * (n + 1.0) * v);
        },
        [&](int n) { return 2.0 * std::exp(lnq * sq(n + 1.0) + 2.0 * (n + 1.0) * a); },
        lat.series(), lat.im_tau(), lat.nome_q(), "theta4");
}

double theta1_deriv0(const Lattice& lat) {
    const double lnq = std::log(lat.nome_q());
    const SeriesConfig& cfg = lat.series();
    double sum = 0.0, peak = 0.0;
    for (int n = 0; n < cfg.max_terms; ++n) {
        const double t = 2.0 * ((n % 2) ? -1.0 : 1.0) * (2.0 * n + 1.0) * qpow(lnq, sq(n + 0.5));
        if (n > 0 && std::abs(t) < cfg.rel_tol * peak)
            return sum;
        sum += t;
        peak = std::max(peak, std::abs(t));
    }
    throw_nonconvergent("theta1'(0)", lat.im_tau(), lat.nome_q());
}

cplx weier_sigma(cplx z, const Lattice& lat) {
    const auto [zr, m, n] = reduce_mod_lattice(z, lat.im_tau());
    const cplx v = pi * zr / 2.0;
    cplx s = (2.0 / pi) * std::exp(lat.eta1() * zr * zr / 2.0) * detail::theta1_v(v, lat) /
             theta1_deriv0(lat);
    if (m != 0 || n != 0) {
        // sigma(zr + lambda) = (-1)^{mn+m+n} exp(eta_lambda (zr + lambda/2)) sigma(zr)
        // for lambda = m omega_1 + n omega_2, eta_lambda = 2 m eta_1 + 2 n eta_2.
        const cplx lam = cplx(2.0 * m, 2.0 * n * lat.im_tau());
        const cplx eta_lam = 2.0 * double(m) * lat.eta1() + 2.0 * double(n) * lat.eta2();
        const double sign = ((m * n + m + n) % 2) ? -1.0 : 1.0;
        s *= sign * std::exp(eta_lam * (zr + lam / 2.0));
    }
    return s;
}

cplx weier_zeta(cplx z, const Lattice& lat) {
    const auto [zr, m, n] = reduce_mod_lattice(z, lat.im_tau());
    if (std::abs(zr) < 1e-9)
        throw domain_error("weier_zeta: argument within 1e-9 of a lattice point");
    const cplx v = pi * zr / 2.0;
    cplx zeta = lat.eta1() * zr + (pi / 2.0) * detail::theta1_dv(v, lat) / detail::theta1_v(v, lat);
    if (m != 0 || n != 0)
        zeta += 2.0 * double(m) * lat.eta1() + 2.0 * double(n) * lat.eta2();
    return zeta;
}

namespace detail {

cplx weier_p(cplx z, const Lattice& lat) {
    const auto [zr, m, n] = reduce_mod_lattice(z, lat.im_tau());
    (void)m;
    (void)n;
    if (std::abs(zr) < 1e-9)
        throw domain_error("weier_p: argument within 1e-9 of a lattice point");
    const cplx v = pi * zr / 2.0;
    const cplx t = theta1_v(v, lat);
    const cplx t1 = theta1_dv(v, lat);
    const cplx t2 = theta1_dv2(v, lat);
    return -lat.eta1() - (pi * pi / 4.0) * (t2 * t - t1 * t1) / (t * t);
}

} // namespace detail

double im_log_sigma(cplx z, const Lattice& lat) {
    const double T = lat.im_tau();
    if (std::abs(z.imag()) >= 1.5 * T)
        throw domain_error("im_log_sigma: |Im z| must stay below 1.5 Im tau");
    if (z.imag() < 0.0)
        return -im_log_sigma(std::conj(z), lat);

    // Zeros of sigma inside the strip sit on the real axis at 2Z.
    const double dre = z.real() - 2.0 * std::lround(z.real() / 2.0);
    if (std::hypot(dre, z.imag()) < 1e-9)
        throw domain_error("im_log_sigma: argument within 1e-9 of a zero of sigma");

    // Product form of theta_1 (DLMF 20.5.3), term by term through principal
    // logarithms: each factor 1 - w below has |w| < 1 once Im z > 0, so each
    // arg(1 - w) is continuous in z and their sum carries the branch.
    const cplx v = pi * z / 2.0;
    const double q = lat.nome_q();
    const cplx e2iv = std::exp(2.0 * iu * v);   // |.| = exp(-pi Im z) <= 1
    const cplx e2ivm = std::exp(-2.0 * iu * v); // grows with Im z, tamed by q^{2m}
    double acc = std::imag(lat.eta1() * z * z / 2.0) + pi / 2.0 - v.real() +
                 std::arg(1.0 - e2iv);
    const double growth = std::exp(pi * z.imag());
    const double q2 = q * q;
    cplx w1 = e2iv, w2 = e2ivm;
    double q2m = 1.0;
    for (int m = 1; m < 500; ++m) {
        w1 *= q2;
        w2 *= q2;
        q2m *= q2;
        acc += std::arg(1.0 - w1) + std::arg(1.0 - w2);
        if (q2m * growth < 1e-17)
            return acc;
    }
    throw_nonconvergent("im_log_sigma product", T, q);
}

double im_log_sigma_ratio(cplx u, cplx b, cplx a, const Lattice& lat) {
    if (a == b)
        return 0.0;
    return im_log_sigma(u - b, lat) - im_log_sigma(u - a, lat);
}

} // namespace arctic
