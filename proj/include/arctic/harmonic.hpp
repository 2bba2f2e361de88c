#pragma once

// Harmonic extensions of piecewise-constant boundary data on the upper
// half-plane and on the periodic annulus [0,2] x [0, Im tau] (horizontal
// period 2). Annulus extensions are finite sums of sigma-ratio blocks
// (1/pi) Im log sigma(u - p) plus a linear term in Im u and a constant; the
// derivative in u is then exact, a zeta sum, rather than a finite difference.

#include <optional>
#include <string>
#include <vector>

#include "arctic/elliptic.hpp"

namespace arctic {

enum class Boundary { outer, inner }; // Im u = 0 and Im u = Im tau

struct BoundarySegment {
    Boundary component = Boundary::outer;
    double start = 0.0;  // horizontal coordinate, reduced mod 2 into [0, 2)
    double length = 0.0; // in (0, 2); end = start + length may pass 2 (wrap)
    double value_s = 0.0;
    double value_t = 0.0;
    double value_c = 0.0;
    bool inferred = false; // value rows completed by symmetry, kept visible in serialization

    double end() const { return start + length; }
};

// Piecewise-constant data for the three fields on up to two boundary
// components. Segments must partition the circle R/2Z on each component that
// appears; an absent component means zero data there.
struct BoundaryTable {
    std::vector<BoundarySegment> segments;
    std::optional<Lattice> lattice; // required by extend_table
    double delta = 0.0;             // coefficient of the -delta * Im u term in c
    double linear_constant = 0.0;   // additive constant K in c

    void validate() const; // throws construction_error on violation
};

// One harmonic extension u -> value, with exact Wirtinger derivatives.
class ExtensionFn {
  public:
    struct Term {
        cplx point;   // singular point p (outer: real; inner: tau + real)
        double coeff; // multiple of (1/pi) Im log sigma(u - p)
    };

    explicit ExtensionFn(const Lattice& lat) : lat_(lat) {}

    // Interior evaluation, 0 < Im u < Im tau.
    double value(cplx u) const;
    cplx deriv(cplx u) const;  // d/du
    cplx deriv2(cplx u) const; // d^2/du^2

    // value(u + 2*tau) - value(u) by analytic continuation (quasi-periodicity
    // of sigma), using the homotopy class that picks up no winding around the
    // singular points. Constant in Re u whenever the block coefficients sum
    // to zero, which table assembly guarantees.
    double vertical_period_increment(cplx u) const;

    const std::vector<Term>& terms() const { return terms_; }
    double linear() const { return linear_; }     // coefficient of Im u
    double constant() const { return constant_; }
    const Lattice& lattice() const { return lat_; }

    // Assembly access, used by the table builder and the scenario layer.
    void add_term(cplx point, double coeff);
    void add_linear(double lin) { linear_ += lin; }
    void add_constant(double cst) { constant_ += cst; }

  private:
    Lattice lat_;
    std::vector<Term> terms_;
    double linear_ = 0.0;
    double constant_ = 0.0;
};

struct Extensions {
    ExtensionFn s, t, c;
};

// Bounded harmonic function on Im z > 0 equal to 1 on (a, b) and 0 on the
// rest of the real line: the angle subtended by (a, b) at z, over pi.
double halfplane_block(cplx z, double a, double b);

// Harmonic on the annulus, 2-periodic; boundary values 1 on the stated
// interval of one component (read mod 2) and 0 elsewhere, including the
// whole opposite component. "upper" owns the inner boundary interval
// (tau + a, tau + b); "lower" owns the outer interval (a, b).
double annulus_block_upper(cplx u, double a, double b, const Lattice& lat);
double annulus_block_lower(cplx u, double a, double b, const Lattice& lat);
cplx block_derivative_upper(cplx u, double a, double b, const Lattice& lat);
cplx block_derivative_lower(cplx u, double a, double b, const Lattice& lat);

// Block objects for callers that evaluate many times.
ExtensionFn annulus_block_upper_fn(const Lattice& lat, double a, double b);
ExtensionFn annulus_block_lower_fn(const Lattice& lat, double a, double b);

// Harmonic extensions (s, t, c) of a boundary table. s and t must assemble
// into arguments of genuine elliptic functions (coefficients summing to zero
// and weighted singular points summing into the period lattice); violations
// raise construction_error naming the failed condition. c additionally takes
// the -delta*Im u term and the constant K, and is exempt from the gate.
Extensions extend_table(const BoundaryTable& table);

// Text form: header lines (tau_im, delta, K) followed by one line per
// segment: component start end s t c [inferred].
std::string table_to_text(const BoundaryTable& table);
BoundaryTable table_from_text(const std::string& text, SeriesConfig cfg = {});

} // namespace arctic
