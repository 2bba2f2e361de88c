#pragma once

// The three concrete models as field evaluators: the uniform Aztec diamond in
// the upper half-plane coordinate (plus its cylinder chart), the two-periodic
// Aztec diamond on an annulus, and the Aztec diamond with a hole. Evaluators
// return the tangent-plane data (s, t, c) with exact Wirtinger u-derivatives.
// Spectral-curve utilities (characteristic polynomials, slope conventions,
// the b <-> tau link) live here as well.

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "arctic/elliptic.hpp"
#include "arctic/harmonic.hpp"

namespace arctic {

// One evaluation of the tangent-plane data at the conformal coordinate u.
struct FieldSample {
    cplx u;
    double s = 0.0;
    double t = 0.0;
    double c = 0.0;
    cplx ds_du;
    cplx dt_du;
    cplx dc_du;
};

// Parameters of the Aztec diamond with a hole. a places the cusp points on
// the inner boundary, kappa scales the hole, tau is the modulus of the
// annulus (purely imaginary), and delta tilts c to change the height of the
// hole relative to the outer boundary.
struct HoleyParams {
    double a = 0.1;
    double kappa = 0.5;
    cplx tau = cplx(0.0, 1.0);
    double delta = 0.0;

    void validate() const; // throws construction_error on violation
};

// A point (z, w) on a spectral curve P(z, w) = 0.
struct SpectralPoint {
    cplx z;
    cplx w;
};

enum class CurveFamily { uniform_1x1, uniform_2x2, two_periodic };

// Characteristic polynomial of a dimer model together with its Newton
// polygon. slope_offset records the global slope translation taking polygon
// coordinates to the translated spectral convention of slope_from_spectral.
struct CharPoly {
    CurveFamily family = CurveFamily::uniform_1x1;
    double b = 1.0; // two-periodic edge weight; 1 for the uniform families
    std::vector<std::array<double, 2>> newton_polygon;
    std::array<double, 2> slope_offset{0.0, 0.0};

    cplx operator()(cplx z, cplx w) const;
};

CharPoly characteristic_polynomial(CurveFamily family, double b = 1.0);

// Slopes (s, t) = (arg w, -arg z) / pi of a spectral point, principal
// branches, in the translated convention. A point with Im z < 0 is replaced
// by its conjugate representative first. When curve is supplied the point is
// required to satisfy |P(z, w)| < 1e-10. Throws domain_error for real z and
// for off-curve points.
std::pair<double, double> slope_from_spectral(const SpectralPoint& p,
                                              const CharPoly* curve = nullptr);

// Membership of a slope pair in the curve's closed Newton polygon after
// undoing slope_offset, with tolerance tol outward.
bool in_newton_polygon(const CharPoly& poly, double s, double t, double tol = 1e-9);

// Modulus link b = sqrt(k') with k' = theta4(0)^2 / theta3(0)^2.
double b_from_tau_im(double tau_im);
double tau_im_from_b(double b); // inverse by bisection over Im tau in [0.3, 40]

// ---------------- uniform Aztec diamond ----------------

// Field in the half-plane coordinate, Im z > 0. Values are the closed forms
// matching the four-interval boundary table; derivatives are exact.
FieldSample uniform_field(cplx z);

// The same field in the cylinder chart z = tan(pi zeta / 2), 0 < Im zeta,
// periodic with period 2. Throws near the chart pole zeta = 1 (mod 2).
FieldSample uniform_field_cylinder(cplx zeta);

// Boundary table of the cylinder chart (four outer intervals, no lattice).
BoundaryTable uniform_cylinder_table();

// ---------------- two-periodic Aztec diamond ----------------

// Outer-boundary table of the two-periodic model; the inner boundary carries
// the gas-plane data (0, 0, 0) and is represented by the absence of inner
// segments, which the extension construction sends to an exact zero on the
// line Im u = Im tau.
BoundaryTable two_periodic_table(const Lattice& lat);

class TwoPeriodicField {
  public:
    explicit TwoPeriodicField(const Lattice& lat);

    FieldSample operator()(cplx zeta) const;

    const BoundaryTable& table() const { return table_; }
    const Extensions& extensions() const { return ext_; }
    const Lattice& lattice() const { return lat_; }

  private:
    Lattice lat_;
    BoundaryTable table_;
    Extensions ext_;
};

FieldSample two_periodic_field(cplx zeta, const Lattice& lat);

// ---------------- Aztec diamond with a hole ----------------

// Full boundary table: the two-periodic outer rows plus twelve inner
// intervals whose first six rows follow the source table and whose last six
// are completed by the half-period symmetry (marked inferred).
BoundaryTable holey_table(const HoleyParams& params);

class HoleyField {
  public:
    explicit HoleyField(const HoleyParams& params);

    FieldSample operator()(cplx u) const;

    // Degree-4 uniformizing coordinate z(u), assembled from the divisor of
    // the s extension as a sigma-function product normalized to be periodic;
    // (1/pi) arg z(u) = s(u) - 2 * branch_offset().
    cplx z_value(cplx u) const;
    cplx z_log_deriv(cplx u) const;  // z_u / z = 2 i pi ds/du
    cplx z_log_deriv2(cplx u) const; // d/du of z_u / z
    int branch_offset() const { return branch_offset_; }

    // Zero/pole counts of z(u) on the boundary, per fundamental domain.
    int divisor_zero_count() const;
    int divisor_pole_count() const;

    // kappa-split of the intercept: c(u) = c_base(u) + kappa * c_hole(u),
    // where c_base carries the outer data and the delta tilt and c_hole the
    // unit-kappa inner data.
    double c_base_value(cplx u) const { return c_base_.value(u); }
    double c_hole_value(cplx u) const { return c_hole_.value(u); }
    cplx c_base_deriv(cplx u) const { return c_base_.deriv(u); }
    cplx c_hole_deriv(cplx u) const { return c_hole_.deriv(u); }
    cplx c_base_deriv2(cplx u) const { return c_base_.deriv2(u); }
    cplx c_hole_deriv2(cplx u) const { return c_hole_.deriv2(u); }

    const HoleyParams& params() const { return params_; }
    const Lattice& lattice() const { return lat_; }
    const BoundaryTable& table() const { return table_; }
    const Extensions& extensions() const { return ext_; }

  private:
    HoleyParams params_;
    Lattice lat_;
    BoundaryTable table_;
    Extensions ext_;
    ExtensionFn c_base_;
    ExtensionFn c_hole_;
    std::vector<ExtensionFn::Term> z_divisor_; // representatives with sum(c*p) = 0
    double z_lambda_ = 0.0;                    // coefficient of u in log z
    cplx z_phase_{1.0, 0.0};                   // constant phase factor
    int branch_offset_ = 0;
};

FieldSample holey_field(cplx u, const HoleyParams& params);
cplx z_of_u(cplx u, const HoleyParams& params);

} // namespace arctic
