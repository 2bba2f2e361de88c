#include "arctic/scenario.hpp"

#include <cmath>
#include <sstream>

#include "arctic/rootfind.hpp"

namespace arctic {

namespace {

constexpr double pi = 3.14159265358979323846;

double reduce_mod2(double x) {
    double r = std::fmod(x, 2.0);
    if (r < 0.0) r += 2.0;
    return r;
}

BoundarySegment make_segment(Boundary comp, double start, double length, double s,
                             double t, double c, bool inferred = false) {
    BoundarySegment seg;
    seg.component = comp;
    seg.start = reduce_mod2(start);
    seg.length = length;
    seg.value_s = s;
    seg.value_t = t;
    seg.value_c = c;
    seg.inferred = inferred;
    return seg;
}

cplx laurent_term(cplx v) {
    if (std::abs(v) < 1e-300) throw domain_error("characteristic polynomial: z or w too close to 0");
    return 1.0 / v;
}

} // namespace

void HoleyParams::validate() const {
    std::ostringstream msg;
    if (!(a > 0.0) || !(a < 0.25)) {
        msg << "holey parameters: a = " << a << " outside (0, 1/4)";
        throw construction_error(msg.str());
    }
    if (!(kappa > 0.0) || !(kappa < 1.0)) {
        msg << "holey parameters: kappa = " << kappa << " outside (0, 1)";
        throw construction_error(msg.str());
    }
    if (!(tau.imag() > 0.0) || std::fabs(tau.real()) > 1e-12) {
        msg << "holey parameters: tau must be purely imaginary with Im tau > 0, got "
            << tau.real() << " + " << tau.imag() << "i";
        throw construction_error(msg.str());
    }
    if (!(delta >= 0.0)) {
        msg << "holey parameters: delta = " << delta << " must be nonnegative";
        throw construction_error(msg.str());
    }
}

cplx CharPoly::operator()(cplx z, cplx w) const {
    switch (family) {
    case CurveFamily::uniform_1x1:
        return 1.0 + z + w - z * w;
    case CurveFamily::uniform_2x2:
        return -4.0 + z + w + laurent_term(z) + laurent_term(w);
    case CurveFamily::two_periodic:
        return -2.0 * (1.0 + b * b) + b * (z + w + laurent_term(z) + laurent_term(w));
    }
    throw construction_error("characteristic polynomial: unknown curve family");
}

CharPoly characteristic_polynomial(CurveFamily family, double b) {
    CharPoly poly;
    poly.family = family;
    switch (family) {
    case CurveFamily::uniform_1x1:
        poly.b = 1.0;
        poly.newton_polygon = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
        poly.slope_offset = {-1.0, -1.0};
        break;
    case CurveFamily::uniform_2x2:
        poly.b = 1.0;
        poly.newton_polygon = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        poly.slope_offset = {0.0, 0.0};
        break;
    case CurveFamily::two_periodic:
        if (!(b > 0.0)) {
            std::ostringstream msg;
            msg << "characteristic polynomial: two-periodic weight b = " << b
                << " must be positive";
            throw construction_error(msg.str());
        }
        poly.b = b;
        poly.newton_polygon = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        poly.slope_offset = {0.0, 0.0};
        break;
    }
    return poly;
}

std::pair<double, double> slope_from_spectral(const SpectralPoint& p, const CharPoly* curve) {
    cplx z = p.z;
    cplx w = p.w;
    if (z.imag() == 0.0)
        throw domain_error("slope_from_spectral: slopes are undefined for real z");
    if (z.imag() < 0.0) { // conjugate representative on the Harnack double cover
        z = std::conj(z);
        w = std::conj(w);
    }
    if (curve != nullptr) {
        cplx residual = (*curve)(z, w);
        if (std::abs(residual) >= 1e-10) {
            std::ostringstream msg;
            msg << "slope_from_spectral: point is off the spectral curve, |P(z,w)| = "
                << std::abs(residual);
            throw domain_error(msg.str());
        }
    }
    return {std::arg(w) / pi, -std::arg(z) / pi};
}

bool in_newton_polygon(const CharPoly& poly, double s, double t, double tol) {
    double x = s - poly.slope_offset[0];
    double y = t - poly.slope_offset[1];
    std::size_t n = poly.newton_polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v0 = poly.newton_polygon[i];
        const auto& v1 = poly.newton_polygon[(i + 1) % n];
        double cross = (v1[0] - v0[0]) * (y - v0[1]) - (v1[1] - v0[1]) * (x - v0[0]);
        if (cross < -tol) return false; // vertices are stored counterclockwise
    }
    return true;
}

double b_from_tau_im(double tau_im) {
    Lattice lat(cplx(0.0, tau_im));
    cplx ratio = theta4(0.0, lat) / theta3(0.0, lat);
    double kprime = std::norm(ratio); // both values are real and positive here
    return std::sqrt(kprime);
}

double tau_im_from_b(double b) {
    if (!(b > 0.0) || !(b < 1.0)) {
        std::ostringstream msg;
        msg << "tau_im_from_b: b = " << b << " outside (0, 1)";
        throw construction_error(msg.str());
    }
    RootConfig cfg;
    cfg.xtol = 1e-13;
    return find_root([b](double T) { return b_from_tau_im(T) - b; }, 0.3, 40.0, cfg);
}

FieldSample uniform_field(cplx z) {
    if (!(z.imag() > 0.0))
        throw domain_error("uniform_field: z must lie in the open upper half-plane");
    FieldSample f;
    f.u = z;
    f.s = std::arg((1.0 + z) / (1.0 - z)) / pi;
    f.t = 1.0 - std::arg(z) / pi;
    f.c = (std::arg(z) - std::arg(z + 1.0)) / pi;
    const cplx i(0.0, 1.0);
    f.ds_du = -i / (pi * (1.0 - z * z));
    f.dt_du = i / (2.0 * pi * z);
    f.dc_du = -i / (2.0 * pi * z * (z + 1.0));
    return f;
}

FieldSample uniform_field_cylinder(cplx zeta) {
    if (!(zeta.imag() > 0.0))
        throw domain_error("uniform_field_cylinder: zeta must satisfy Im zeta > 0");
    cplx half = pi * zeta / 2.0;
    if (std::abs(std::cos(half)) < 1e-12)
        throw domain_error("uniform_field_cylinder: chart pole at zeta = 1 (mod 2)");
    cplx z = std::tan(half);
    FieldSample f = uniform_field(z);
    f.u = zeta;
    cplx dz_dzeta = (pi / 2.0) * (1.0 + z * z);
    f.ds_du *= dz_dzeta;
    f.dt_du *= dz_dzeta;
    f.dc_du *= dz_dzeta;
    return f;
}

BoundaryTable uniform_cylinder_table() {
    BoundaryTable table;
    table.segments = {
        make_segment(Boundary::outer, -1.0, 0.5, 1.0, 0.0, 0.0),
        make_segment(Boundary::outer, -0.5, 0.5, 0.0, 0.0, 1.0),
        make_segment(Boundary::outer, 0.0, 0.5, 0.0, 1.0, 0.0),
        make_segment(Boundary::outer, 0.5, 0.5, 1.0, 1.0, 0.0),
    };
    return table;
}

BoundaryTable two_periodic_table(const Lattice& lat) {
    BoundaryTable table;
    table.segments = {
        make_segment(Boundary::outer, -0.5, 0.5, 1.0, 0.0, -0.5),
        make_segment(Boundary::outer, 0.0, 0.5, 0.0, -1.0, 0.5),
        make_segment(Boundary::outer, 0.5, 0.5, -1.0, 0.0, -0.5),
        make_segment(Boundary::outer, 1.0, 0.5, 0.0, 1.0, 0.5),
    };
    table.lattice = lat;
    return table;
}

TwoPeriodicField::TwoPeriodicField(const Lattice& lat)
    : lat_(lat), table_(two_periodic_table(lat)), ext_(extend_table(table_)) {}

FieldSample TwoPeriodicField::operator()(cplx zeta) const {
    FieldSample f;
    f.u = zeta;
    f.s = ext_.s.value(zeta);
    f.t = ext_.t.value(zeta);
    f.c = ext_.c.value(zeta);
    f.ds_du = ext_.s.deriv(zeta);
    f.dt_du = ext_.t.deriv(zeta);
    f.dc_du = ext_.c.deriv(zeta);
    return f;
}

FieldSample two_periodic_field(cplx zeta, const Lattice& lat) {
    return TwoPeriodicField(lat)(zeta);
}

BoundaryTable holey_table(const HoleyParams& params) {
    params.validate();
    BoundaryTable table;
    table.segments = {
        make_segment(Boundary::outer, -0.5, 0.5, 1.0, 0.0, -0.5),
        make_segment(Boundary::outer, 0.0, 0.5, 0.0, -1.0, 0.5),
        make_segment(Boundary::outer, 0.5, 0.5, -1.0, 0.0, -0.5),
        make_segment(Boundary::outer, 1.0, 0.5, 0.0, 1.0, 0.5),
    };

    const double a = params.a;
    const double x1 = -0.5 - a; // horizontal part of the first inner endpoint
    const double s_row[12] = {0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0, 1};
    const double t_row[12] = {1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0};
    const double c_row[12] = {0.5,  -0.5, -1.5, -0.5, 0.5,  1.5,
                              0.5,  -0.5, -1.5, -0.5, 0.5,  1.5};
    double offsets[13];
    for (int q = 0; q < 4; ++q) {
        offsets[3 * q] = 0.5 * q;
        offsets[3 * q + 1] = 0.5 * q + a;
        offsets[3 * q + 2] = 0.5 * q + 2.0 * a;
    }
    offsets[12] = 2.0;
    for (int i = 0; i < 12; ++i) {
        table.segments.push_back(make_segment(
            Boundary::inner, x1 + offsets[i], offsets[i + 1] - offsets[i], s_row[i],
            t_row[i], params.kappa * c_row[i], /*inferred=*/i >= 6));
    }

    table.lattice = Lattice(params.tau);
    table.delta = params.delta;
    return table;
}

HoleyField::HoleyField(const HoleyParams& params)
    : params_(params), lat_(params.tau), table_(holey_table(params)),
      ext_(extend_table(table_)), c_base_(lat_), c_hole_(lat_) {
    BoundaryTable base = table_;
    for (auto& seg : base.segments)
        if (seg.component == Boundary::inner) seg.value_c = 0.0;
    c_base_ = extend_table(base).c;

    BoundaryTable hole = table_;
    hole.delta = 0.0;
    for (auto& seg : hole.segments)
        seg.value_c = seg.component == Boundary::inner ? seg.value_c / params_.kappa : 0.0;
    c_hole_ = extend_table(hole).c;

    z_divisor_ = ext_.s.terms();
    cplx weighted_sum = 0.0;
    for (const auto& term : z_divisor_) weighted_sum += term.coeff * term.point;
    if (std::abs(weighted_sum.imag()) > 1e-9)
        throw construction_error("holey z(u): divisor sum is not real");
    z_lambda_ = pi * ext_.s.linear();
    double period_defect = z_lambda_ - lat_.eta1() * weighted_sum.real();
    if (std::fabs(period_defect) > 1e-9) {
        std::ostringstream msg;
        msg << "holey z(u): the s extension is not the argument of a periodic "
               "uniformization, defect "
            << period_defect;
        throw construction_error(msg.str());
    }
    z_phase_ = std::exp(cplx(0.0, pi * ext_.s.constant()));

    // The mod-2 ambiguity between arg z / pi and s is a single integer plateau.
    const double T = lat_.im_tau();
    bool anchored = false;
    for (cplx anchor : {cplx(0.51, 0.37 * T), cplx(0.23, 0.61 * T), cplx(0.86, 0.52 * T)}) {
        double gap = ext_.s.value(anchor) - std::arg(z_value(anchor)) / pi;
        double rounded = std::round(gap / 2.0);
        if (std::fabs(gap - 2.0 * rounded) < 1e-6) {
            branch_offset_ = static_cast<int>(rounded);
            anchored = true;
            break;
        }
    }
    if (!anchored)
        throw construction_error("holey z(u): could not anchor the arg branch offset");
}

FieldSample HoleyField::operator()(cplx u) const {
    FieldSample f;
    f.u = u;
    f.s = ext_.s.value(u);
    f.t = ext_.t.value(u);
    f.c = ext_.c.value(u);
    f.ds_du = ext_.s.deriv(u);
    f.dt_du = ext_.t.deriv(u);
    f.dc_du = ext_.c.deriv(u);
    return f;
}

cplx HoleyField::z_value(cplx u) const {
    cplx result = z_phase_ * std::exp(z_lambda_ * u);
    for (const auto& term : z_divisor_) {
        cplx sig = weier_sigma(u - term.point, lat_);
        int mult = static_cast<int>(std::lround(term.coeff));
        if (std::abs(sig) < 1e-9)
            throw domain_error("z(u): evaluation too close to a divisor point");
        for (int k = 0; k < std::abs(mult); ++k) result = mult > 0 ? result * sig : result / sig;
    }
    return result;
}

cplx HoleyField::z_log_deriv(cplx u) const { return 2.0 * cplx(0.0, pi) * ext_.s.deriv(u); }

cplx HoleyField::z_log_deriv2(cplx u) const { return 2.0 * cplx(0.0, pi) * ext_.s.deriv2(u); }

int HoleyField::divisor_zero_count() const {
    int count = 0;
    for (const auto& term : z_divisor_)
        if (term.coeff > 0.0) count += static_cast<int>(std::lround(term.coeff));
    return count;
}

int HoleyField::divisor_pole_count() const {
    int count = 0;
    for (const auto& term : z_divisor_)
        if (term.coeff < 0.0) count -= static_cast<int>(std::lround(term.coeff));
    return count;
}

FieldSample holey_field(cplx u, const HoleyParams& params) { return HoleyField(params)(u); }

cplx z_of_u(cplx u, const HoleyParams& params) { return HoleyField(params).z_value(u); }

} // namespace arctic
