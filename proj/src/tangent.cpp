#include "arctic/tangent.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "arctic/elliptic.hpp"
#include "arctic/errors.hpp"

namespace arctic {

namespace {

std::string format_params(const char* fmt, double a, double b = 0.0, double c = 0.0,
                          double d = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}

} // namespace

Scenario uniform_scenario() {
    Scenario sc;
    sc.name = "uniform";
    sc.parameters = "";
    sc.im_tau = 0.0;
    sc.has_inner = false;
    sc.field = [](cplx zeta) { return uniform_field_cylinder(zeta); };
    return sc;
}

Scenario two_periodic_scenario(cplx tau) {
    auto field = std::make_shared<TwoPeriodicField>(Lattice(tau));
    Scenario sc;
    sc.name = "two_periodic";
    sc.parameters = format_params("tau_im=%.17g b=%.17g", tau.imag(), b_from_tau_im(tau.imag()));
    sc.im_tau = tau.imag();
    sc.has_inner = true;
    sc.field = [field](cplx u) { return (*field)(u); };
    return sc;
}

Scenario holey_scenario(const HoleyParams& params) {
    auto field = std::make_shared<HoleyField>(params);
    Scenario sc;
    sc.name = "holey";
    sc.parameters = format_params("a=%.17g kappa=%.17g tau_im=%.17g delta=%.17g", params.a,
                                  params.kappa, params.tau.imag(), params.delta);
    sc.im_tau = params.tau.imag();
    sc.has_inner = true;
    sc.field = [field](cplx u) { return (*field)(u); };
    return sc;
}

PointSolution solve_point(const FieldSample& sample) {
    const long double a = sample.ds_du.real();
    const long double b = sample.dt_du.real();
    const long double c = sample.ds_du.imag();
    const long double d = sample.dt_du.imag();
    const long double e = sample.dc_du.real();
    const long double f = sample.dc_du.imag();

    const long double det = a * d - b * c;
    if (std::fabs(double(det)) < 1e-12) {
        std::ostringstream msg;
        msg << "tangent-plane system is degenerate at u = (" << sample.u.real() << ", "
            << sample.u.imag() << "), |det| = " << std::fabs(double(det));
        throw degenerate_error(msg.str());
    }

    PointSolution out;
    out.x = double((b * f - e * d) / det);
    out.y = double((e * c - a * f) / det);
    out.det = std::fabs(double(det));
    return out;
}

ArcticCurve trace_curve(const Scenario& sc, Boundary component, int n_samples, double eps) {
    if (n_samples < 2) throw construction_error("trace_curve: need at least 2 samples");
    if (!(eps > 0.0)) throw construction_error("trace_curve: eps must be positive");
    if (component == Boundary::inner && !sc.has_inner)
        throw domain_error("trace_curve: scenario '" + sc.name + "' has no inner boundary");

    const double offset = component == Boundary::outer ? eps : sc.im_tau - eps;

    ArcticCurve curve;
    curve.scenario = sc.name;
    curve.parameters = sc.parameters;
    curve.component = component;
    curve.requested = n_samples;
    curve.eps = eps;
    curve.samples.reserve(std::size_t(n_samples) + 1);

    for (int k = 0; k <= n_samples; ++k) {
        cplx u(2.0 * k / n_samples, offset);
        FieldSample f = sc.field(u);
        PointSolution p;
        try {
            p = solve_point(f);
        } catch (const degenerate_error&) {
            curve.degenerate_at.push_back(u);
            continue;
        }
        double residual = std::abs(f.ds_du * p.x + f.dt_du * p.y + f.dc_du);
        if (residual > curve.max_residual) curve.max_residual = residual;
        curve.samples.push_back({u, p.x, p.y, component, p.det});
    }

    std::size_t total = std::size_t(n_samples) + 1;
    if (curve.degenerate_at.size() * 20 > total) {
        std::ostringstream msg;
        msg << "trace_curve: " << curve.degenerate_at.size() << " of " << total
            << " samples were degenerate; first at u =";
        std::size_t shown = 0;
        for (cplx u : curve.degenerate_at) {
            msg << " (" << u.real() << ", " << u.imag() << ")";
            if (++shown == 5) break;
        }
        curve.warning = msg.str();
    }
    return curve;
}

cplx invert_uniform(double x, double y) {
    if (!(y > 0.0)) throw domain_error("invert_uniform: y must be positive");
    double px = 2.0 * x - 1.0;
    double py = 2.0 * y - 1.0;
    double disc = 1.0 - px * px - py * py;
    if (disc < -1e-12) {
        std::ostringstream msg;
        msg << "invert_uniform: (" << x << ", " << y << ") lies outside the arctic circle";
        throw domain_error(msg.str());
    }
    // Points within rounding distance of the circle snap onto it, so inputs
    // on the circle come back exactly real.
    if (disc < 1e-14) disc = 0.0;
    return cplx(1.0 - 2.0 * x, std::sqrt(disc)) / (2.0 * y);
}

HeightMesh sample_height(const Scenario& sc, const GridSpec& grid) {
    if (grid.nx < 2 || grid.ny < 2)
        throw construction_error("sample_height: grid must be at least 2x2");

    double lo = grid.im_lo;
    double hi = grid.im_hi;
    if (lo == 0.0 && hi == 0.0) {
        if (sc.im_tau > 0.0) {
            lo = 0.02 * sc.im_tau;
            hi = 0.98 * sc.im_tau;
        } else {
            lo = 0.05;
            hi = 3.0;
        }
    }
    if (!(lo > 0.0) || !(hi > lo))
        throw construction_error("sample_height: need 0 < im_lo < im_hi");
    if (sc.im_tau > 0.0 && hi >= sc.im_tau)
        throw construction_error("sample_height: im_hi must stay below the inner boundary");

    HeightMesh mesh;
    mesh.nx = grid.nx;
    mesh.ny = grid.ny;
    mesh.scenario = sc.name;
    mesh.parameters = sc.parameters;
    mesh.nodes.resize(std::size_t(grid.nx) * grid.ny);

    for (int iy = 0; iy < grid.ny; ++iy) {
        double im = lo + (hi - lo) * iy / (grid.ny - 1);
        for (int ix = 0; ix < grid.nx; ++ix) {
            cplx u(2.0 * ix / grid.nx, im);
            HeightNode& node = mesh.nodes[std::size_t(iy) * grid.nx + ix];
            node.u = u;
            FieldSample f = sc.field(u);
            node.s = f.s;
            node.t = f.t;
            try {
                PointSolution p = solve_point(f);
                node.x = p.x;
                node.y = p.y;
                node.h = f.s * p.x + f.t * p.y + f.c;
                node.valid = true;
            } catch (const degenerate_error&) {
                node.valid = false;
                ++mesh.dropped;
            }
        }
    }
    return mesh;
}

double height_change(const HoleyParams& params) {
    HoleyField field(params);
    auto height_at = [&](cplx u) {
        FieldSample f = field(u);
        PointSolution p = solve_point(f);
        return f.s * p.x + f.t * p.y + f.c;
    };
    cplx tau = params.tau;
    return height_at(0.125 + 0.999 * tau) - height_at(0.125 + 0.001 * tau);
}

} // namespace arctic
