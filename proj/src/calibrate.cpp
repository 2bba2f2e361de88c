#include "arctic/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "arctic/errors.hpp"
#include "arctic/rootfind.hpp"

namespace arctic {

namespace {

std::string point_list(const std::vector<cplx>& pts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "(%.6f, %.6f)", pts[i].real(), pts[i].imag());
        if (i > 0) os << ", ";
        os << buf;
    }
    return os.str();
}

void check_region(const Region& region) {
    if (!(region.re_hi > region.re_lo) || !(region.im_hi > region.im_lo)) {
        std::ostringstream os;
        os << "search region is empty: [" << region.re_lo << ", " << region.re_hi << "] x ["
           << region.im_lo << ", " << region.im_hi << "]";
        throw construction_error(os.str());
    }
    if (region.grid_nx < 8 || region.grid_ny < 8) {
        std::ostringstream os;
        os << "search grid " << region.grid_nx << " x " << region.grid_ny
           << " is too coarse; need at least 8 x 8";
        throw construction_error(os.str());
    }
}

// Newton polish of one seed. Returns true and writes the zero to out when
// the iteration lands inside the slightly padded region with |f| < 1e-12.
bool polish_seed(const CplxFn& f, const CplxFn& df, const Region& region, cplx seed, cplx* out) {
    const double width = region.re_hi - region.re_lo;
    const double height = region.im_hi - region.im_lo;
    const double dx = width / region.grid_nx;
    const double dy = height / region.grid_ny;
    const double max_step = 0.25 * std::min(width, height);

    cplx u = seed;
    bool converged = false;
    try {
        for (int it = 0; it < 80; ++it) {
            cplx fu = f(u);
            if (!std::isfinite(fu.real()) || !std::isfinite(fu.imag())) return false;
            if (std::abs(fu) < 1e-13) {
                converged = true;
                break;
            }
            cplx d = df(u);
            if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) return false;
            if (std::abs(d) < 1e-300) return false;
            cplx step = fu / d;
            if (std::abs(step) > max_step) step *= max_step / std::abs(step);
            u -= step;
            // Abandon iterates that wander more than one cell past the region;
            // they belong to zeros another seed (or none) is responsible for.
            if (u.real() < region.re_lo - dx || u.real() > region.re_hi + dx ||
                u.imag() < region.im_lo - dy || u.imag() > region.im_hi + dy) {
                return false;
            }
        }
        if (!converged && std::abs(f(u)) >= 1e-12) return false;
    } catch (const error&) {
        return false;
    }

    // The scan regions tile functions whose zero sets repeat with the region
    // width, so a zero caught just past a vertical edge is folded back onto
    // its in-region representative before deduplication.
    double re = u.real();
    if (re >= region.re_hi - 0.5 * dx) re -= width;
    if (re < region.re_lo - 0.5 * dx) re += width;
    if (re < region.re_lo - 0.5 * dx || re >= region.re_hi - 0.5 * dx) return false;
    double im = u.imag();
    if (im < region.im_lo - 0.5 * dy || im > region.im_hi + 0.5 * dy) return false;
    *out = cplx(re, im);
    return true;
}

} // namespace

Region annulus_region(double im_tau) {
    if (!(im_tau > 0.0)) {
        std::ostringstream os;
        os << "annulus_region: Im tau = " << im_tau << " must be positive";
        throw construction_error(os.str());
    }
    Region region;
    region.re_lo = 0.0;
    region.re_hi = 1.0;
    region.im_lo = 0.02 * im_tau;
    region.im_hi = 0.98 * im_tau;
    return region;
}

std::vector<cplx> locate_zeros(const CplxFn& f, const CplxFn& df, const Region& region) {
    check_region(region);
    const int nx = region.grid_nx;
    const int ny = region.grid_ny;
    const double dx = (region.re_hi - region.re_lo) / nx;
    const double dy = (region.im_hi - region.im_lo) / ny;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> mag(static_cast<std::size_t>(nx + 1) * (ny + 1), inf);
    auto at = [&](int i, int j) -> double& {
        return mag[static_cast<std::size_t>(j) * (nx + 1) + i];
    };
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            cplx u(region.re_lo + i * dx, region.im_lo + j * dy);
            try {
                double m = std::abs(f(u));
                if (std::isfinite(m)) at(i, j) = m;
            } catch (const error&) {
                // Singular node; stays infinite and never seeds.
            }
        }
    }

    // Seed from every node that does not exceed its in-grid neighbors.
    std::vector<cplx> seeds;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            double m = at(i, j);
            if (!std::isfinite(m)) continue;
            bool minimal = true;
            for (int jj = j - 1; jj <= j + 1 && minimal; ++jj) {
                for (int ii = i - 1; ii <= i + 1 && minimal; ++ii) {
                    if (ii == i && jj == j) continue;
                    if (ii < 0 || ii > nx || jj < 0 || jj > ny) continue;
                    if (at(ii, jj) < m) minimal = false;
                }
            }
            if (minimal) {
                seeds.emplace_back(region.re_lo + i * dx, region.im_lo + j * dy);
            }
        }
    }

    struct Candidate {
        cplx u;
        double residual;
    };
    std::vector<Candidate> candidates;
    for (cplx seed : seeds) {
        cplx zero;
        if (!polish_seed(f, df, region, seed, &zero)) continue;
        double residual = std::abs(f(zero));
        candidates.push_back({zero, residual});
    }

    // Keep the best representative of every cluster closer than 1e-6.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        if (a.u.real() != b.u.real()) return a.u.real() < b.u.real();
        return a.u.imag() < b.u.imag();
    });
    std::vector<cplx> zeros;
    for (const Candidate& cand : candidates) {
        bool dup = false;
        for (cplx kept : zeros) {
            if (std::abs(cand.u - kept) < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) zeros.push_back(cand.u);
    }
    std::sort(zeros.begin(), zeros.end(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return zeros;
}

CriticalPointSet find_critical_points(const CplxFn& f, const CplxFn& df, const Region& region,
                                      int expected_count, const std::string& tag) {
    std::vector<cplx> zeros = locate_zeros(f, df, region);
    if (static_cast<int>(zeros.size()) != expected_count) {
        std::ostringstream os;
        os << tag << ": expected " << expected_count << " zeros in [" << region.re_lo << ", "
           << region.re_hi << "] x [" << region.im_lo << ", " << region.im_hi << "], found "
           << zeros.size();
        if (!zeros.empty()) os << ": " << point_list(zeros);
        throw count_error(os.str());
    }
    CriticalPointSet out;
    out.tag = tag;
    out.points = zeros;
    out.residuals.reserve(zeros.size());
    for (cplx z : zeros) out.residuals.push_back(std::abs(f(z)));
    return out;
}

namespace {

// The two critical points of z(u), i.e. zeros of ds/du, in the fundamental
// rectangle [0, 1] x (0, Im tau). Kappa never enters the s extension, so a
// placeholder kappa builds a valid probe field for any a.
CriticalPointSet z_critical_points(const HoleyField& field) {
    const Extensions& ext = field.extensions();
    Region region = annulus_region(field.params().tau.imag());
    auto f = [&ext](cplx u) { return ext.s.deriv(u); };
    auto df = [&ext](cplx u) { return ext.s.deriv2(u); };
    return find_critical_points(f, df, region, 2, "z_u");
}

HoleyField probe_field(cplx tau, double a, double delta) {
    HoleyParams probe;
    probe.a = a;
    probe.kappa = 0.5; // placeholder; s and the kappa-split of c ignore it
    probe.tau = tau;
    probe.delta = delta;
    probe.validate();
    return HoleyField(probe);
}

// c_u root heights at a given kappa, built from the kappa-split so one probe
// field serves every kappa. Selects the two roots nearest the z-critical
// height when the search finds more, and reports the signed Im difference of
// the selected pair ordered by Re.
struct CuGapResult {
    double gap = 0.0;
    std::array<cplx, 2> roots{};
    std::string note;
};

CuGapResult cu_gap(const HoleyField& field, double kappa, double z_line) {
    Region region = annulus_region(field.params().tau.imag());
    auto f = [&field, kappa](cplx u) {
        return field.c_base_deriv(u) + kappa * field.c_hole_deriv(u);
    };
    auto df = [&field, kappa](cplx u) {
        return field.c_base_deriv2(u) + kappa * field.c_hole_deriv2(u);
    };
    std::vector<cplx> zeros = locate_zeros(f, df, region);
    if (zeros.size() < 2) {
        std::ostringstream os;
        os << "c_u: expected at least 2 roots at kappa = " << kappa << ", found " << zeros.size();
        if (!zeros.empty()) os << ": " << point_list(zeros);
        throw count_error(os.str());
    }
    CuGapResult out;
    if (zeros.size() > 2) {
        std::sort(zeros.begin(), zeros.end(), [z_line](cplx p, cplx q) {
            return std::fabs(p.imag() - z_line) < std::fabs(q.imag() - z_line);
        });
        std::ostringstream os;
        os << "selected 2 of " << zeros.size()
           << " c_u roots by distance to the z-critical height " << z_line;
        out.note = os.str();
    }
    cplx lo = zeros[0];
    cplx hi = zeros[1];
    if (hi.real() < lo.real()) std::swap(lo, hi);
    out.roots = {lo, hi};
    out.gap = lo.imag() - hi.imag();
    return out;
}

} // namespace

double fit_a(cplx tau, double delta, double tol) {
    if (!(tol > 0.0)) throw construction_error("fit_a: tol must be positive");
    auto gap = [&](double a) {
        HoleyField field = probe_field(tau, a, delta);
        CriticalPointSet crits = z_critical_points(field);
        return crits.points[0].imag() - crits.points[1].imag();
    };
    std::vector<std::string> notes;
    auto brackets = scan_brackets(gap, 1e-3, 0.25 - 1e-3, 8, &notes);
    if (brackets.empty()) {
        std::ostringstream os;
        os << "fit_a: no sign change of the critical-height gap for a in (0.001, 0.249)"
           << " at tau = " << tau.imag() << "i";
        for (const std::string& n : notes) os << "; " << n;
        throw bracket_error(os.str());
    }
    RootConfig cfg;
    cfg.xtol = 1e-13;
    cfg.ftol = tol;
    return find_root(gap, brackets.front().first, brackets.front().second, cfg);
}

double kappa_of_tau(cplx tau, double a, double delta) {
    HoleyField field = probe_field(tau, a, delta);
    CriticalPointSet crits = z_critical_points(field);

    auto kappa_at = [&field](cplx u) {
        cplx cu1 = field.c_base_deriv(u);
        cplx cu2 = field.c_hole_deriv(u);
        if (std::abs(cu2) < 1e-10) {
            std::ostringstream os;
            os << "kappa_of_tau: |c_hole'(u*)| = " << std::abs(cu2) << " at u* = (" << u.real()
               << ", " << u.imag() << "); the kappa split is degenerate there";
            throw degenerate_error(os.str());
        }
        if (std::fabs(cu2.imag()) < 1e-12) {
            std::ostringstream os;
            os << "kappa_of_tau: Im c_hole'(u*) = " << cu2.imag() << " at u* = (" << u.real()
               << ", " << u.imag() << "); no kappa cancels Im c_u there";
            throw degenerate_error(os.str());
        }
        return -cu1.imag() / cu2.imag();
    };

    double k_first = kappa_at(crits.points[0]);
    double k_second = kappa_at(crits.points[1]);
    if (std::fabs(k_first - k_second) > 1e-6) {
        std::ostringstream os;
        os << "kappa_of_tau: the two critical points disagree, kappa = " << k_first << " vs "
           << k_second << " at tau = " << tau.imag() << "i, a = " << a;
        throw construction_error(os.str());
    }
    return k_first;
}

double kappa_alignment(cplx tau, double a, double delta, double tol) {
    if (!(tol > 0.0)) throw construction_error("kappa_alignment: tol must be positive");
    HoleyField field = probe_field(tau, a, delta);
    CriticalPointSet crits = z_critical_points(field);
    const double z_line = 0.5 * (crits.points[0].imag() + crits.points[1].imag());

    auto gap = [&](double kappa) { return cu_gap(field, kappa, z_line).gap; };
    std::vector<std::string> notes;
    auto brackets = scan_brackets(gap, 1e-3, 1.0 - 1e-3, 16, &notes);
    if (brackets.empty()) {
        std::ostringstream os;
        os << "kappa_alignment: no sign change of the c_u root-height gap for kappa in"
           << " (0.001, 0.999) at tau = " << tau.imag() << "i, a = " << a;
        for (const std::string& n : notes) os << "; " << n;
        throw bracket_error(os.str());
    }
    RootConfig cfg;
    cfg.xtol = 1e-13;
    cfg.ftol = tol;
    return find_root(gap, brackets.front().first, brackets.front().second, cfg);
}

CalibrationResult fit_all(double delta, double tol, double tau_lo, double tau_hi) {
    if (!(tol > 0.0)) throw construction_error("fit_all: tol must be positive");
    if (!(tau_hi > tau_lo) || !(tau_lo > 0.0)) {
        std::ostringstream os;
        os << "fit_all: bad Im tau bracket [" << tau_lo << ", " << tau_hi << "]";
        throw construction_error(os.str());
    }

    struct StepData {
        double a = 0.0;
        double kappa = 0.0;
        CriticalPointSet z_crit;
        CuGapResult c_roots;
        double gap = 0.0;
    };
    int evaluations = 0;
    const double a_tol = std::min(tol, 1e-8) * 1e-2;

    auto step = [&](double tau_im) {
        ++evaluations;
        cplx tau(0.0, tau_im);
        StepData data;
        data.a = fit_a(tau, delta, a_tol);
        data.kappa = kappa_of_tau(tau, data.a, delta);
        if (!(data.kappa > 0.0) || !(data.kappa < 1.0)) {
            std::ostringstream os;
            os << "fit_all: kappa(tau) = " << data.kappa << " left (0, 1) at Im tau = " << tau_im;
            throw construction_error(os.str());
        }
        HoleyField field = probe_field(tau, data.a, delta);
        data.z_crit = z_critical_points(field);
        const double z_line =
            0.5 * (data.z_crit.points[0].imag() + data.z_crit.points[1].imag());
        data.c_roots = cu_gap(field, data.kappa, z_line);
        const double c_line =
            0.5 * (data.c_roots.roots[0].imag() + data.c_roots.roots[1].imag());
        data.gap = z_line - c_line;
        return data;
    };

    // Scan for a sign change of the alignment gap; evaluation failures count
    // as gaps in the sampled grid, not as fatal errors.
    const int scan_n = 8;
    std::vector<double> grid(scan_n + 1);
    std::vector<double> gaps(scan_n + 1, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> notes;
    for (int i = 0; i <= scan_n; ++i) {
        grid[i] = tau_lo + (tau_hi - tau_lo) * i / scan_n;
        try {
            gaps[i] = step(grid[i]).gap;
        } catch (const error& err) {
            std::ostringstream os;
            os << "Im tau = " << grid[i] << ": " << err.what();
            notes.push_back(os.str());
        }
    }
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (int i = 0; i < scan_n && !bracketed; ++i) {
        if (std::isnan(gaps[i]) || std::isnan(gaps[i + 1])) continue;
        if (gaps[i] == 0.0 || gaps[i] * gaps[i + 1] < 0.0) {
            lo = grid[i];
            hi = grid[i + 1];
            bracketed = true;
        }
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "fit_all: no sign change of the alignment gap over Im tau in [" << tau_lo << ", "
           << tau_hi << "]; samples:";
        for (int i = 0; i <= scan_n; ++i) {
            os << " (" << grid[i] << ", ";
            if (std::isnan(gaps[i])) {
                os << "failed";
            } else {
                os << gaps[i];
            }
            os << ")";
        }
        for (const std::string& n : notes) os << "; " << n;
        throw bracket_error(os.str());
    }

    auto gap_fn = [&](double tau_im) { return step(tau_im).gap; };
    RootConfig cfg;
    cfg.xtol = 1e-13;
    cfg.ftol = tol;
    const double tau_im = find_root(gap_fn, lo, hi, cfg);

    StepData best = step(tau_im);
    CalibrationResult result;
    result.params.a = best.a;
    result.params.kappa = best.kappa;
    result.params.tau = cplx(0.0, tau_im);
    result.params.delta = delta;
    result.params.validate();
    result.alignment_residual = std::fabs(best.gap);
    result.iterations = evaluations;
    result.z_crit = best.z_crit;
    result.c_crit.tag = "c_u";
    result.c_crit.points = {best.c_roots.roots[0], best.c_roots.roots[1]};
    auto cu = [&](cplx u) {
        HoleyField field = probe_field(result.params.tau, best.a, delta);
        return field.c_base_deriv(u) + best.kappa * field.c_hole_deriv(u);
    };
    result.c_crit.residuals = {std::abs(cu(best.c_roots.roots[0])),
                               std::abs(cu(best.c_roots.roots[1]))};
    result.c_crit.note = best.c_roots.note;
    return result;
}

std::vector<ScanRow> uniqueness_scan(cplx tau, double a, double delta,
                                     const std::vector<double>& kappa_grid) {
    HoleyField field = probe_field(tau, a, delta);
    CriticalPointSet crits = z_critical_points(field);
    const double z_line = 0.5 * (crits.points[0].imag() + crits.points[1].imag());

    std::vector<ScanRow> rows;
    rows.reserve(kappa_grid.size());
    for (double kappa : kappa_grid) {
        ScanRow row;
        row.kappa = kappa;
        try {
            CuGapResult res = cu_gap(field, kappa, z_line);
            row.gap = res.gap;
            row.ok = true;
            row.note = res.note;
        } catch (const error& err) {
            row.note = err.what();
        }
        rows.push_back(row);
    }
    return rows;
}

int sign_change_count(const std::vector<ScanRow>& rows) {
    int changes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (const ScanRow& row : rows) {
        if (!row.ok || row.gap == 0.0) continue;
        if (have_prev && prev * row.gap < 0.0) ++changes;
        prev = row.gap;
        have_prev = true;
    }
    return changes;
}

} // namespace arctic
