#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arctic/elliptic.hpp"

using namespace arctic;

namespace {

constexpr double pi = std::numbers::pi;
constexpr cplx iu{0.0, 1.0};

// Truncated lattice-sum oracle for Weierstrass P:
//   P(z) ~ 1/z^2 + sum_{0<|lam|<=R} [1/(z-lam)^2 - 1/lam^2].
// Summing over the symmetric disc cancels the odd 2z/lam^3 tail term, leaving
// a tail of order 3|z|^2 * pi/(4 T R^2); R = 50 is good to ~1e-3 here and
// R = 800 to ~1e-6, which is how the two tolerances below are chosen.
cplx p_lattice_sum(cplx z, double im_tau, double radius) {
    cplx sum = 1.0 / (z * z);
    const long mmax = std::lround(radius / 2.0) + 1;
    const long nmax = std::lround(radius / (2.0 * im_tau)) + 1;
    for (long m = -mmax; m <= mmax; ++m) {
        for (long n = -nmax; n <= nmax; ++n) {
            if (m == 0 && n == 0)
                continue;
            const cplx lam(2.0 * m, 2.0 * n * im_tau);
            if (std::abs(lam) > radius)
                continue;
            sum += 1.0 / ((z - lam) * (z - lam)) - 1.0 / (lam * lam);
        }
    }
    return sum;
}

std::mt19937 rng_for(const char* tag) {
    std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
    return std::mt19937(seq);
}

cplx random_strip_point(std::mt19937& g, double im_tau) {
    std::uniform_real_distribution<double> re(-0.95, 0.95);
    std::uniform_real_distribution<double> im(0.08, 0.92);
    return {re(g), im(g) * im_tau};
}

} // namespace

TEST_CASE("lattice construction and invariants") {
    CHECK_THROWS_AS(Lattice(cplx(0.0, -1.0)), construction_error);
    CHECK_THROWS_AS(Lattice(cplx(0.0, 0.0)), construction_error);
    CHECK_THROWS_AS(Lattice(cplx(0.3, 1.0)), construction_error);
    CHECK_THROWS_AS(Lattice(cplx(0.0, 1.0), SeriesConfig{1e-12, 8}), construction_error);

    // Legendre relation across the scenario range of tau.
    for (int k = 0; k < 20; ++k) {
        const double t = 0.3 + (5.0 - 0.3) * k / 19.0;
        Lattice lat(cplx(0.0, t));
        const cplx res = lat.eta1() * lat.omega2() - lat.eta2() * lat.omega1() - iu * pi;
        CHECK(std::abs(res) < 1e-10);
    }
}

TEST_CASE("eta constants") {
    Lattice sq(cplx(0.0, 1.0));
    CHECK(std::abs(sq.eta1() - pi / 4.0) < 1e-10);

    // eta_i = zeta(omega_i / 2), checked against direct zeta evaluation.
    for (double t : {0.4, 1.0, 2.3}) {
        Lattice lat(cplx(0.0, t));
        CHECK(std::abs(weier_zeta(1.0, lat) - lat.eta1()) < 1e-11);
        CHECK(std::abs(weier_zeta(lat.tau(), lat) - lat.eta2()) < 1e-11);
    }

    // Determinism under a tighter truncation tolerance.
    Lattice a(cplx(0.0, 2.0), SeriesConfig{1e-12, 64});
    Lattice b(cplx(0.0, 2.0), SeriesConfig{1e-15, 64});
    CHECK(std::abs(a.eta2() - b.eta2()) < 1e-12);
}

TEST_CASE("theta basics") {
    Lattice lat(cplx(0.0, 0.7));
    CHECK(std::abs(theta1(cplx(0.0), lat)) == 0.0);

    // Antiperiodicity under z -> z + omega_1 in the lattice coordinate.
    auto g = rng_for("theta-antiperiod");
    for (int k = 0; k < 10; ++k) {
        const cplx z = random_strip_point(g, 0.7);
        const cplx lhs = theta1(z + 2.0, lat);
        const cplx rhs = -theta1(z, lat);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }

    // k' = theta4(0)^2 / theta3(0)^2 = 1/sqrt(2) on the square lattice.
    Lattice sqlat(cplx(0.0, 1.0));
    const cplx kp = theta4(cplx(0.0), sqlat) * theta4(cplx(0.0), sqlat) /
                    (theta3(cplx(0.0), sqlat) * theta3(cplx(0.0), sqlat));
    CHECK(std::abs(kp - 1.0 / std::sqrt(2.0)) < 1e-10);

    // Truncation tolerance is honored: refining rel_tol moves the value by
    // less than the coarse rel_tol relative to the term peak.
    Lattice coarse(cplx(0.0, 0.3), SeriesConfig{1e-12, 64});
    Lattice fine(cplx(0.0, 0.3), SeriesConfig{1e-16, 64});
    const cplx zt(0.31, 0.22);
    CHECK(std::abs(theta1(zt, coarse) - theta1(zt, fine)) < 1e-12);

    // Series stay short over the whole scenario range.
    for (double t : {0.3, 0.5, 1.0, 2.0, 5.0}) {
        Lattice l(cplx(0.0, t));
        CHECK(std::abs(theta3(cplx(0.5, 0.1), l)) > 0.0); // converged without throwing
    }
}

TEST_CASE("sigma normalization, parity, quasi-periodicity") {
    auto g = rng_for("sigma");
    for (double t : {0.45, 1.0, 3.0}) {
        Lattice lat(cplx(0.0, t));

        CHECK(std::abs(weier_sigma(cplx(0.0), lat)) == 0.0);
        const cplx z0(1e-4, 0.0);
        CHECK(std::abs(weier_sigma(z0, lat) / z0 - 1.0) < 1e-6);

        for (int k = 0; k < 20; ++k) {
            const cplx z = random_strip_point(g, t);
            CHECK(std::abs(weier_sigma(-z, lat) + weier_sigma(z, lat)) <
                  1e-12 * std::abs(weier_sigma(z, lat)));

            // Quasi-periodicity with the empirically frozen sign s_i = -1:
            //   sigma(z + omega_i) = -exp(2 eta_i (z + omega_i/2)) sigma(z).
            const cplx s = weier_sigma(z, lat);
            const cplx lhs1 = weier_sigma(z + lat.omega1(), lat);
            const cplx rhs1 = -std::exp(2.0 * lat.eta1() * (z + lat.omega1() / 2.0)) * s;
            CHECK(std::abs(lhs1 - rhs1) < 1e-9 * std::abs(lhs1));

            const cplx lhs2 = weier_sigma(z + lat.omega2(), lat);
            const cplx rhs2 = -std::exp(2.0 * lat.eta2() * (z + lat.omega2() / 2.0)) * s;
            CHECK(std::abs(lhs2 - rhs2) < 1e-9 * std::abs(lhs2));
        }
    }
}

TEST_CASE("zeta increments, parity, pole guard") {
    auto g = rng_for("zeta");
    for (double t : {0.5, 1.0, 2.2}) {
        Lattice lat(cplx(0.0, t));
        for (int k = 0; k < 12; ++k) {
            const cplx z = random_strip_point(g, t);
            CHECK(std::abs(weier_zeta(z + lat.omega1(), lat) - weier_zeta(z, lat) -
                           2.0 * lat.eta1()) < 1e-10);
            CHECK(std::abs(weier_zeta(z + lat.omega2(), lat) - weier_zeta(z, lat) -
                           2.0 * lat.eta2()) < 1e-10);
            CHECK(std::abs(weier_zeta(-z, lat) + weier_zeta(z, lat)) < 1e-12);
        }
    }
    Lattice lat(cplx(0.0, 1.0));
    CHECK_THROWS_AS(weier_zeta(cplx(2.0, 2e-10), lat), domain_error);
    CHECK(std::abs(weier_zeta(cplx(0.001, 0.0), lat) - 1000.0) < 0.01); // 1/z behavior
}

TEST_CASE("zeta' = -P against finite differences and the lattice-sum oracle") {
    auto g = rng_for("zeta-derivative");
    const double h = 1e-5;
    for (double t : {0.6, 1.0}) {
        Lattice lat(cplx(0.0, t));
        for (int k = 0; k < 10; ++k) {
            const cplx z = random_strip_point(g, t);
            const cplx fd = (weier_zeta(z + h, lat) - weier_zeta(z - h, lat)) / (2.0 * h);
            const cplx p = detail::weier_p(z, lat);
            CHECK(std::abs(fd + p) < 1e-6);
        }
        // Independent oracle for P itself.
        const cplx z(0.37, 0.41 * t);
        CHECK(std::abs(detail::weier_p(z, lat) - p_lattice_sum(z, t, 50.0)) < 1e-3);
        CHECK(std::abs(detail::weier_p(z, lat) - p_lattice_sum(z, t, 800.0)) < 1e-6);
    }
}

TEST_CASE("im_log_sigma: branch structure") {
    Lattice lat(cplx(0.0, 1.0));

    // Equals the phase of sigma itself (mod 2pi) everywhere in the strip.
    auto g = rng_for("ils-phase");
    for (int k = 0; k < 30; ++k) {
        cplx z = random_strip_point(g, 1.0);
        if (k % 2)
            z = std::conj(z);
        const cplx s = weier_sigma(z, lat);
        CHECK(std::abs(std::exp(iu * im_log_sigma(z, lat)) - s / std::abs(s)) < 1e-9);
    }

    // Normalization: zero for small positive real arguments.
    CHECK(std::abs(im_log_sigma(cplx(0.03, 0.0), lat)) < 1e-12);

    // Upper-half formula limits on the real axis: -pi * floor(x/2).
    CHECK(std::abs(im_log_sigma(cplx(2.5, 1e-9), lat) + pi) < 1e-7);
    CHECK(std::abs(im_log_sigma(cplx(-0.5, 1e-9), lat) - pi) < 1e-7);

    // Domain guards.
    CHECK_THROWS_AS(im_log_sigma(cplx(0.3, 1.6), lat), domain_error);
    CHECK_THROWS_AS(im_log_sigma(cplx(2.0, 0.0), lat), domain_error);
}

TEST_CASE("im_log_sigma_ratio: identity, reflection, winding") {
    Lattice lat(cplx(0.0, 1.0));
    const cplx a(-0.8, 0.0), b(0.3, 0.0);

    CHECK(im_log_sigma_ratio(cplx(0.4, 0.2), a, a, lat) == 0.0);

    // Schwarz reflection for real a, b.
    auto g = rng_for("ils-ratio");
    for (int k = 0; k < 20; ++k) {
        const cplx u = random_strip_point(g, 1.0);
        const double up = im_log_sigma_ratio(u, b, a, lat);
        const double dn = im_log_sigma_ratio(std::conj(u), b, a, lat);
        CHECK(std::abs(up + dn) < 1e-12);
    }

    // Accumulated increment along a small square loop around b (zero of the
    // numerator, a stays outside): one positive winding, 2*pi.
    const double r = 0.2;
    const int steps_per_side = 800;
    std::vector<cplx> path;
    const cplx corners[4] = {b + cplx(r, r), b + cplx(-r, r), b + cplx(-r, -r), b + cplx(r, -r)};
    for (int side = 0; side < 4; ++side) {
        const cplx from = corners[side], to = corners[(side + 1) % 4];
        for (int i = 0; i < steps_per_side; ++i)
            path.push_back(from + (to - from) * (double(i) / steps_per_side));
    }
    path.push_back(path.front());
    double winding = 0.0;
    double prev = im_log_sigma_ratio(path[0], b, a, lat);
    for (size_t i = 1; i < path.size(); ++i) {
        const double cur = im_log_sigma_ratio(path[i], b, a, lat);
        double d = cur - prev;
        d -= 2.0 * pi * std::round(d / (2.0 * pi));
        winding += d;
        prev = cur;
    }
    CHECK(std::abs(winding - 2.0 * pi) < 1e-8);
}
