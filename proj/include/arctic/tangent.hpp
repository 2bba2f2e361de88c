#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "arctic/harmonic.hpp"
#include "arctic/scenario.hpp"

namespace arctic {

// A scenario bundles a field evaluator with the geometry of its conformal
// domain: the strip/annulus height (im_tau, 0 for half-plane charts solved in
// cylinder coordinates) and whether an inner boundary component exists.
struct Scenario {
    std::string name;
    std::string parameters;
    double im_tau = 0.0;
    bool has_inner = false;
    std::function<FieldSample(cplx)> field;
};

Scenario uniform_scenario();
Scenario two_periodic_scenario(cplx tau);
Scenario holey_scenario(const HoleyParams& params);

struct PointSolution {
    double x = 0.0;
    double y = 0.0;
    double det = 0.0; // magnitude of the 2x2 system determinant
};

// Solves Re(ds_du x + dt_du y + dc_du) = Im(...) = 0 for the tangency point
// (x, y). Throws degenerate_error when |det| < 1e-12 (cusp).
PointSolution solve_point(const FieldSample& sample);

struct CurveSample {
    cplx u;
    double x = 0.0;
    double y = 0.0;
    Boundary component = Boundary::outer;
    double det = 0.0;
};

struct ArcticCurve {
    std::vector<CurveSample> samples; // ordered by Re u
    std::string scenario;
    std::string parameters;
    Boundary component = Boundary::outer;
    int requested = 0;   // sample count asked for (intervals; samples = n+1)
    double eps = 0.0;    // boundary offset used
    double max_residual = 0.0; // max |ds x + dt y + dc| over retained samples
    std::vector<cplx> degenerate_at; // dropped sample locations
    std::string warning; // set when more than 5% of samples were degenerate
};

// Samples u = 2k/n + i*offset for k = 0..n along the requested boundary
// component (offset eps from it), solves each point, and drops degenerate
// samples. The first and last retained samples close the polyline for
// periodic scenarios.
ArcticCurve trace_curve(const Scenario& sc, Boundary component, int n_samples,
                        double eps = 1e-6);

// Inverse of the uniform-scenario tangency map on the open disc bounded by
// the arctic circle: z = (1 - 2x + i sqrt(1-(2x-1)^2-(2y-1)^2)) / (2y).
// Throws domain_error outside the closed disc or when y <= 0.
cplx invert_uniform(double x, double y);

struct GridSpec {
    int nx = 64;
    int ny = 64;
    double im_lo = 0.0; // 0 = automatic band for the scenario
    double im_hi = 0.0;
};

struct HeightNode {
    cplx u;
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
    double s = 0.0;
    double t = 0.0;
    bool valid = false; // false where the tangent solve was degenerate
};

struct HeightMesh {
    int nx = 0;
    int ny = 0;
    std::vector<HeightNode> nodes; // row-major, nodes[iy*nx + ix]
    std::string scenario;
    std::string parameters;
    int dropped = 0;

    const HeightNode& at(int ix, int iy) const { return nodes[std::size_t(iy) * nx + ix]; }
};

// Evaluates the height h = s x + t y + c of the envelope surface on a grid
// uniform in the conformal coordinate u (Re u over one period [0,2),
// Im u over [im_lo, im_hi]).
HeightMesh sample_height(const Scenario& sc, const GridSpec& grid = {});

// r = h(0.125 + 0.999 tau) - h(0.125 + 0.001 tau) for the holey scenario.
double height_change(const HoleyParams& params);

} // namespace arctic
