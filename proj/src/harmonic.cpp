#include "arctic/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "arctic/errors.hpp"

namespace arctic {

namespace {

constexpr double pi = std::numbers::pi;

double reduce_mod2(double x) { return x - 2.0 * std::floor(x / 2.0); }

double circle_dist(double x, double y) {
    double d = std::fabs(reduce_mod2(x) - reduce_mod2(y));
    return std::min(d, 2.0 - d);
}

const char* component_name(Boundary b) {
    return b == Boundary::outer ? "outer" : "inner";
}

double seg_value(const BoundarySegment& seg, int channel) {
    switch (channel) {
        case 0: return seg.value_s;
        case 1: return seg.value_t;
        default: return seg.value_c;
    }
}

const char* channel_name(int channel) {
    switch (channel) {
        case 0: return "s";
        case 1: return "t";
        default: return "c";
    }
}

// Step points (position, coefficient) of one boundary component. Positions
// are kept unreduced: a segment wrapping past 2 keeps its right endpoint
// above 2, so each segment contributes a zero-sum coefficient pair and the
// sigma quasi-periodicity supplies the linear part of constant data.
using StepList = std::vector<std::pair<double, double>>;

StepList merge_steps(StepList pts) {
    std::sort(pts.begin(), pts.end());
    StepList out;
    for (const auto& pc : pts) {
        if (!out.empty() && std::fabs(out.back().first - pc.first) < 1e-12)
            out.back().second += pc.second;
        else
            out.push_back(pc);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& pc) { return std::fabs(pc.second) < 1e-13; }),
              out.end());
    return out;
}

// Probe abscissa for solving the linear coefficient; any generic point works
// because the raw block sum is constant along the opposite boundary line.
constexpr double probe_x = 0.3183098861837907;

// Attach one component's merged steps to fn, together with the linear (and,
// for the inner component, constant) correction that zeroes the raw sum on
// the opposite boundary line.
void attach_steps(ExtensionFn& fn, Boundary comp, const StepList& pts) {
    if (pts.empty()) return;
    const Lattice& lat = fn.lattice();
    const double T = lat.im_tau();
    double raw_opposite = 0.0;
    if (comp == Boundary::outer) {
        for (const auto& [p, cv] : pts)
            raw_opposite += cv * im_log_sigma(cplx(probe_x - p, T), lat);
        raw_opposite /= pi;
        for (const auto& [p, cv] : pts) fn.add_term(cplx(p, 0.0), cv);
        fn.add_linear(-raw_opposite / T);
    } else {
        for (const auto& [p, cv] : pts)
            raw_opposite += cv * im_log_sigma(cplx(probe_x - p, -T), lat);
        raw_opposite /= pi;
        for (const auto& [p, cv] : pts) fn.add_term(cplx(p, T), cv);
        fn.add_linear(raw_opposite / T);
        fn.add_constant(-raw_opposite);
    }
}

ExtensionFn build_channel(const BoundaryTable& table, const Lattice& lat, int channel) {
    ExtensionFn fn(lat);
    for (Boundary comp : {Boundary::outer, Boundary::inner}) {
        StepList pts;
        for (const auto& seg : table.segments) {
            if (seg.component != comp) continue;
            double v = seg_value(seg, channel);
            if (v == 0.0) continue;
            double s0 = reduce_mod2(seg.start);
            double e0 = s0 + seg.length;
            if (comp == Boundary::outer) {
                pts.emplace_back(e0, v);
                pts.emplace_back(s0, -v);
            } else {
                pts.emplace_back(s0, v);
                pts.emplace_back(e0, -v);
            }
        }
        attach_steps(fn, comp, merge_steps(pts));
    }
    if (channel == 2) {
        fn.add_linear(-table.delta);
        fn.add_constant(table.linear_constant);
    }
    return fn;
}

void elliptic_gate(const ExtensionFn& fn, int channel) {
    double coeff_sum = 0.0;
    cplx point_sum = 0.0;
    for (const auto& term : fn.terms()) {
        coeff_sum += term.coeff;
        point_sum += term.coeff * term.point;
    }
    std::ostringstream msg;
    if (std::fabs(coeff_sum) > 1e-10) {
        msg << "extend_table: field " << channel_name(channel)
            << " violates the zero-degree condition: block coefficients sum to " << coeff_sum;
        throw construction_error(msg.str());
    }
    const double T = fn.lattice().im_tau();
    double m = std::round(point_sum.real() / 2.0);
    double n = std::round(point_sum.imag() / (2.0 * T));
    cplx residue = point_sum - cplx(2.0 * m, 2.0 * n * T);
    if (std::abs(residue) > 1e-10) {
        msg << "extend_table: field " << channel_name(channel)
            << " violates the lattice-sum condition: weighted singular points sum to ("
            << point_sum.real() << ", " << point_sum.imag()
            << "), not a point of 2Z + 2*tau*Z";
        throw construction_error(msg.str());
    }
}

void boundary_self_check(const BoundaryTable& table, const Extensions& ext) {
    const double eps = 1e-4;
    const double T = ext.s.lattice().im_tau();
    for (const auto& seg : table.segments) {
        double mid = reduce_mod2(seg.start + seg.length / 2.0);
        cplx u = seg.component == Boundary::outer ? cplx(mid, eps) : cplx(mid, T - eps);
        for (int channel = 0; channel < 3; ++channel) {
            const ExtensionFn& fn = channel == 0 ? ext.s : channel == 1 ? ext.t : ext.c;
            double expect = seg_value(seg, channel);
            if (channel == 2) expect += table.linear_constant - table.delta * u.imag();
            // First-order smoothing of nearby jumps on the same component
            // bounds how far the epsilon-offset value may sit from the
            // plateau; short segments feel their own endpoints.
            double smooth = 0.0;
            for (const auto& term : fn.terms()) {
                bool same = (seg.component == Boundary::outer) == (term.point.imag() == 0.0);
                if (!same) continue;
                double d = std::max(circle_dist(mid, term.point.real()), eps);
                smooth += std::fabs(term.coeff) / d;
            }
            double tol = 1e-3 + (eps / pi) * smooth;
            double got = fn.value(u);
            if (std::fabs(got - expect) > tol) {
                std::ostringstream msg;
                msg << "extend_table: self-check failed for field " << channel_name(channel)
                    << " on " << component_name(seg.component) << " segment ["
                    << seg.start << ", " << seg.end() << "): expected " << expect
                    << ", got " << got << " at offset " << eps;
                throw construction_error(msg.str());
            }
        }
    }
}

} // namespace

void BoundaryTable::validate() const {
    if (!(delta >= 0.0))
        throw construction_error("boundary table: delta must be nonnegative");
    for (const auto& seg : segments) {
        if (!(seg.length > 0.0) || !(seg.length < 2.0)) {
            std::ostringstream msg;
            msg << "boundary table: segment length " << seg.length << " outside (0, 2)";
            throw construction_error(msg.str());
        }
        if (!std::isfinite(seg.value_s) || !std::isfinite(seg.value_t) ||
            !std::isfinite(seg.value_c) || !std::isfinite(seg.start))
            throw construction_error("boundary table: non-finite segment data");
    }
    for (Boundary comp : {Boundary::outer, Boundary::inner}) {
        std::vector<std::pair<double, double>> spans; // (start mod 2, length)
        for (const auto& seg : segments)
            if (seg.component == comp) spans.emplace_back(reduce_mod2(seg.start), seg.length);
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        double total = 0.0;
        for (const auto& [s0, len] : spans) total += len;
        if (std::fabs(total - 2.0) > 1e-12) {
            std::ostringstream msg;
            msg << "boundary table: " << component_name(comp) << " segments cover length "
                << total << ", expected 2";
            throw construction_error(msg.str());
        }
        for (std::size_t i = 0; i < spans.size(); ++i) {
            double expected_next = spans[i].first + spans[i].second;
            double actual_next =
                i + 1 < spans.size() ? spans[i + 1].first : spans[0].first + 2.0;
            if (std::fabs(expected_next - actual_next) > 1e-12) {
                std::ostringstream msg;
                msg << "boundary table: gap or overlap near x=" << reduce_mod2(expected_next)
                    << " on the " << component_name(comp) << " component";
                throw construction_error(msg.str());
            }
        }
    }
}

void ExtensionFn::add_term(cplx point, double coeff) {
    terms_.push_back({point, coeff});
}

double ExtensionFn::value(cplx u) const {
    const double T = lat_.im_tau();
    if (!(u.imag() > 0.0) || !(u.imag() < T))
        throw domain_error("ExtensionFn::value: point not in the open annulus");
    double acc = linear_ * u.imag() + constant_;
    for (const auto& term : terms_)
        acc += term.coeff * im_log_sigma(u - term.point, lat_) / pi;
    return acc;
}

cplx ExtensionFn::deriv(cplx u) const {
    const double T = lat_.im_tau();
    if (!(u.imag() > 0.0) || !(u.imag() < T))
        throw domain_error("ExtensionFn::deriv: point not in the open annulus");
    const cplx half_i(0.0, 0.5); // d(Im u)/du = 1/(2i) = -i/2
    cplx acc = -half_i * linear_;
    for (const auto& term : terms_)
        acc += term.coeff * weier_zeta(u - term.point, lat_) * (-half_i) / pi;
    return acc;
}

cplx ExtensionFn::deriv2(cplx u) const {
    const double T = lat_.im_tau();
    if (!(u.imag() > 0.0) || !(u.imag() < T))
        throw domain_error("ExtensionFn::deriv2: point not in the open annulus");
    const cplx half_i(0.0, 0.5);
    cplx acc = 0.0;
    for (const auto& term : terms_)
        acc -= term.coeff * detail::weier_p(u - term.point, lat_) * (-half_i) / pi;
    return acc;
}

double ExtensionFn::vertical_period_increment(cplx u) const {
    // sigma(z + 2*tau) = -exp(2*eta2*(z + tau)) sigma(z); with coefficients
    // summing to zero the sign contributions cancel and the increment of the
    // full sum under u -> u + 2*tau is exactly the eta2 part plus the linear
    // term's growth.
    const double T = lat_.im_tau();
    const cplx eta2 = lat_.eta2();
    double acc = linear_ * 2.0 * T;
    for (const auto& term : terms_)
        acc += term.coeff * std::imag(2.0 * eta2 * (u - term.point + lat_.tau())) / pi;
    return acc;
}

double halfplane_block(cplx z, double a, double b) {
    if (!(z.imag() > 0.0))
        throw domain_error("halfplane_block: Im z must be positive");
    if (!(a <= b))
        throw domain_error("halfplane_block: interval endpoints out of order");
    if (a == b) return 0.0;
    return (std::arg(z - b) - std::arg(z - a)) / pi;
}

ExtensionFn annulus_block_lower_fn(const Lattice& lat, double a, double b) {
    ExtensionFn fn(lat);
    double len = reduce_mod2(b - a);
    if (len == 0.0) return fn;
    double s0 = reduce_mod2(a);
    attach_steps(fn, Boundary::outer, merge_steps({{s0 + len, 1.0}, {s0, -1.0}}));
    return fn;
}

ExtensionFn annulus_block_upper_fn(const Lattice& lat, double a, double b) {
    ExtensionFn fn(lat);
    double len = reduce_mod2(b - a);
    if (len == 0.0) return fn;
    double s0 = reduce_mod2(a);
    attach_steps(fn, Boundary::inner, merge_steps({{s0, 1.0}, {s0 + len, -1.0}}));
    return fn;
}

double annulus_block_lower(cplx u, double a, double b, const Lattice& lat) {
    return annulus_block_lower_fn(lat, a, b).value(u);
}

double annulus_block_upper(cplx u, double a, double b, const Lattice& lat) {
    return annulus_block_upper_fn(lat, a, b).value(u);
}

cplx block_derivative_lower(cplx u, double a, double b, const Lattice& lat) {
    return annulus_block_lower_fn(lat, a, b).deriv(u);
}

cplx block_derivative_upper(cplx u, double a, double b, const Lattice& lat) {
    return annulus_block_upper_fn(lat, a, b).deriv(u);
}

Extensions extend_table(const BoundaryTable& table) {
    table.validate();
    if (!table.lattice)
        throw construction_error("extend_table: boundary table carries no lattice");
    const Lattice& lat = *table.lattice;
    Extensions ext{build_channel(table, lat, 0), build_channel(table, lat, 1),
                   build_channel(table, lat, 2)};
    elliptic_gate(ext.s, 0);
    elliptic_gate(ext.t, 1);
    boundary_self_check(table, ext);
    return ext;
}

std::string table_to_text(const BoundaryTable& table) {
    std::ostringstream os;
    os.precision(17);
    if (table.lattice) os << "tau_im " << table.lattice->im_tau() << "\n";
    os << "delta " << table.delta << "\n";
    os << "K " << table.linear_constant << "\n";
    for (const auto& seg : table.segments) {
        os << "segment " << component_name(seg.component) << " " << seg.start << " "
           << seg.end() << " " << seg.value_s << " " << seg.value_t << " " << seg.value_c;
        if (seg.inferred) os << " inferred";
        os << "\n";
    }
    return os.str();
}

BoundaryTable table_from_text(const std::string& text, SeriesConfig cfg) {
    BoundaryTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::ostringstream msg;
        msg << "boundary table text, line " << lineno << ": ";
        if (key == "tau_im") {
            double ti;
            if (!(ls >> ti)) throw construction_error(msg.str() + "bad tau_im value");
            table.lattice = Lattice(cplx(0.0, ti), cfg);
        } else if (key == "delta") {
            if (!(ls >> table.delta)) throw construction_error(msg.str() + "bad delta value");
        } else if (key == "K") {
            if (!(ls >> table.linear_constant))
                throw construction_error(msg.str() + "bad K value");
        } else if (key == "segment") {
            BoundarySegment seg;
            std::string comp;
            double start = 0.0, end = 0.0;
            if (!(ls >> comp >> start >> end >> seg.value_s >> seg.value_t >> seg.value_c))
                throw construction_error(msg.str() + "malformed segment line");
            if (comp == "outer")
                seg.component = Boundary::outer;
            else if (comp == "inner")
                seg.component = Boundary::inner;
            else
                throw construction_error(msg.str() + "unknown component '" + comp + "'");
            seg.start = reduce_mod2(start);
            seg.length = reduce_mod2(end - start);
            if (seg.length == 0.0)
                throw construction_error(msg.str() + "segment has zero length");
            std::string tail;
            if (ls >> tail) {
                if (tail == "inferred")
                    seg.inferred = true;
                else
                    throw construction_error(msg.str() + "unexpected token '" + tail + "'");
            }
            table.segments.push_back(seg);
        } else {
            throw construction_error(msg.str() + "unknown key '" + key + "'");
        }
    }
    return table;
}

} // namespace arctic
