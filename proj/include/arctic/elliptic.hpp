#pragma once

// Elliptic building blocks on the rectangular lattice with periods 2 and 2*tau,
// tau purely imaginary. Everything is evaluated through Jacobi theta q-series
// (DLMF 20.2) with nome q = exp(i*pi*tau), which is real in (0,1) here; no
// modular transforms are applied, so tau is expected in the regime Im tau >~ 0.3
// where the series are short.
//
// Conventions (DLMF 23.6 with omega_1 = 2, omega_2 = 2*tau):
//   sigma(z) = (2/pi) exp(eta_1 z^2/2) theta_1(pi z/2) / theta_1'(0)
//   zeta(z)  = eta_1 z + (pi/2) theta_1'(pi z/2) / theta_1(pi z/2)
//   eta_1    = zeta(1) = -(pi^2/12) theta_1'''(0) / theta_1'(0),   eta_2 = zeta(tau)
// and the Legendre relation reads eta_1*omega_2 - eta_2*omega_1 = i*pi.
//
// Quasi-periodicity as verified by this implementation (the sign is frozen in
// the tests): sigma(z + omega_i) = -exp(+2 eta_i (z + omega_i/2)) sigma(z).

#include <complex>
#include <utility>

#include "arctic/errors.hpp"

namespace arctic {

using cplx = std::complex<double>;

// Truncation policy for all q-series: stop once the next term falls below
// rel_tol times the largest retained term; max_terms is a hard cap that turns
// non-convergence into a diagnostic error instead of a silent wrong value.
struct SeriesConfig {
    double rel_tol = 1e-12;
    int max_terms = 64; // must be >= 16
};

class Lattice {
  public:
    explicit Lattice(cplx tau, SeriesConfig cfg = {});

    cplx tau() const { return tau_; }
    double im_tau() const { return tau_.imag(); }
    double nome_q() const { return q_; }
    double eta1() const { return eta1_; }
    cplx eta2() const { return eta2_; }
    cplx omega1() const { return {2.0, 0.0}; }
    cplx omega2() const { return 2.0 * tau_; }
    const SeriesConfig& series() const { return cfg_; }

  private:
    cplx tau_;
    double q_;
    double eta1_;
    cplx eta2_;
    SeriesConfig cfg_;
};

// Quasi-period constants (eta_1, eta_2), cached inside Lattice.
std::pair<cplx, cplx> eta_constants(const Lattice& lat);

// Jacobi theta functions in the lattice coordinate: theta1(z) evaluates
// theta_1(pi z / omega_1 | tau), so theta1(z + 2) = -theta1(z). Same scaling
// for theta2..theta4.
cplx theta1(cplx z, const Lattice& lat);
cplx theta2(cplx z, const Lattice& lat);
cplx theta3(cplx z, const Lattice& lat);
cplx theta4(cplx z, const Lattice& lat);

// theta_1'(0 | tau), derivative in the theta argument; normalizes sigma.
double theta1_deriv0(const Lattice& lat);

// Weierstrass sigma, sigma(z) = z + O(z^3). Entire; arguments are reduced by
// quasi-periodicity first, so any finite z is accepted.
cplx weier_sigma(cplx z, const Lattice& lat);

// Weierstrass zeta, zeta(z) = 1/z + O(z^3) near 0.
// Throws domain_error within 1e-9 of a lattice point.
cplx weier_zeta(cplx z, const Lattice& lat);

// Im log sigma(z) with the branch chosen continuously on each half of the
// horizontal strip |Im z| < 1.5 Im tau:
//   * for Im z > 0 the value follows the theta product expansion
//     (DLMF 20.5.3 rearranged into principal-branch logarithms),
//   * for Im z < 0 it is -im_log_sigma(conj z), matching sigma's reflection
//     symmetry on rectangular lattices,
//   * the real axis is taken with the upper-half formula.
// The branch line is Im z = 0; between the two half-strip branches the value
// jumps by 2*pi*floor(Re z/2) across it, which is exactly the bookkeeping the
// harmonic blocks rely on.
// Throws domain_error if |Im z| >= 1.5 Im tau (convergence margin) or within
// 1e-9 of a zero of sigma.
double im_log_sigma(cplx z, const Lattice& lat);

// Im log of sigma(u-b)/sigma(u-a), branch continuous within each half-strip;
// 0 when a == b, and 0 when u-a and u-b are small positive real offsets.
double im_log_sigma_ratio(cplx u, cplx b, cplx a, const Lattice& lat);

namespace detail {

// Weierstrass P. Internal: the library only needs it as the derivative of
// -zeta inside Newton iterations and as a test oracle.
cplx weier_p(cplx z, const Lattice& lat);

// theta_1 and derivatives in the raw theta argument v (no pi/omega_1 scaling).
cplx theta1_v(cplx v, const Lattice& lat);
cplx theta1_dv(cplx v, const Lattice& lat);
cplx theta1_dv2(cplx v, const Lattice& lat);

} // namespace detail

} // namespace arctic
