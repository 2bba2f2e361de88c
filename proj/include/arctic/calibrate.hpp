#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "arctic/scenario.hpp"

namespace arctic {

// Rectangle in the u-plane with the scan resolution used for seeding.
struct Region {
    double re_lo = 0.0;
    double re_hi = 1.0;
    double im_lo = 0.0;
    double im_hi = 1.0;
    int grid_nx = 64;
    int grid_ny = 64;
};

// Half-period fundamental rectangle of an annulus of height im_tau, inset
// from the boundary lines where the extensions have their singularities.
Region annulus_region(double im_tau);

struct CriticalPointSet {
    std::string tag; // which function the zeros belong to, e.g. "z_u"
    std::vector<cplx> points;
    std::vector<double> residuals; // |f| at each point
    std::string note;              // selection or search remarks
};

struct CalibrationResult {
    HoleyParams params;
    double alignment_residual = 0.0;
    int iterations = 0; // gap evaluations spent in the outer solve
    CriticalPointSet z_crit;
    CriticalPointSet c_crit;
};

using CplxFn = std::function<cplx(cplx)>;

// All zeros of f in the region: coarse |f| grid scan for seeds, Newton
// polish with df to |f| < 1e-12, dedupe at separation 1e-6. Points are
// sorted by (Re, Im). Seeds whose evaluation throws are skipped.
std::vector<cplx> locate_zeros(const CplxFn& f, const CplxFn& df, const Region& region);

// locate_zeros plus a hard count check: throws count_error listing the
// points found when the count differs from expected_count.
CriticalPointSet find_critical_points(const CplxFn& f, const CplxFn& df, const Region& region,
                                      int expected_count, const std::string& tag = "f");

// Finds a in (0, 1/4) such that the two interior critical points of z(u)
// share one imaginary part within tol. The critical points of z do not
// depend on kappa or delta.
double fit_a(cplx tau, double delta, double tol = 1e-10);

// kappa from the linear split c_u = cu1 + kappa * cu2 evaluated at the
// z-critical point with Re u near 1/4: the value that cancels Im c_u there.
// The partner point must give the same value within 1e-6.
double kappa_of_tau(cplx tau, double a, double delta);

// Direct alternative: kappa that makes the two roots of c_u share one
// imaginary part (root of the uniqueness-scan gap).
double kappa_alignment(cplx tau, double a, double delta, double tol = 1e-10);

// Nested scheme: bisection over Im tau in [tau_lo, tau_hi]; per step fits a,
// evaluates kappa(tau), and measures the gap between the common height of
// the z-critical points and that of the c_u roots. Stops at |gap| < tol.
CalibrationResult fit_all(double delta, double tol = 1e-6, double tau_lo = 0.3,
                          double tau_hi = 3.0);

struct ScanRow {
    double kappa = 0.0;
    double gap = 0.0; // Im difference of the two c_u roots
    bool ok = false;
    std::string note;
};

// Tabulates the c_u root-height gap over a kappa grid at fixed (tau, a,
// delta). Failures are recorded per row and the scan continues.
std::vector<ScanRow> uniqueness_scan(cplx tau, double a, double delta,
                                     const std::vector<double>& kappa_grid);

// Sign changes between consecutive ok rows.
int sign_change_count(const std::vector<ScanRow>& rows);

} // namespace arctic
