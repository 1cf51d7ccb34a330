#include "flatfront/maps.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "flatfront/specfun.hpp"
#include "parallel.hpp"

namespace flatfront::maps {

using hgode::continue_lift;
using hgode::continue_lift_segment;
using hgode::initial_lift;
using hgode::plan_path;
using hgode::sl_coefficient;

// ---------------------------------------------------------------------------
// Ramification classification
// ---------------------------------------------------------------------------

namespace {
constexpr double kBoundaryTol = 1e-12;
}

RamificationReport ramification_report(const HGParams& p) {
    SLCoefficient slc = sl_coefficient(p);
    double m0 = p.mu0 * p.mu0, m1 = p.mu1 * p.mu1, mi = p.muinf * p.muinf;
    RamificationReport rep;
    rep.discriminant = slc.n1 * slc.n1 - 4.0 * slc.n2 * slc.n0;
    rep.s = m0 + m1 + mi;
    rep.t = m0 * m1 + m1 * mi + mi * m0;
    rep.roots = slc.numerator_roots();
    if (std::abs(rep.discriminant) <= kBoundaryTol) {
        rep.klass = RootClass::OneDouble;
        rep.root_orders = {3, 3};
    } else if (rep.discriminant > 0.0) {
        rep.klass = RootClass::TwoReal;
        rep.root_orders = {2, 2};
    } else {
        rep.klass = RootClass::TwoComplexConjugate;
        rep.root_orders = {2, 2};
    }
    return rep;
}

StRegion st_region(double s, double t) {
    double lower = std::max({0.0, s - 1.0, 2.0 * s - 3.0});
    double upper = s * s / 3.0;
    bool inside = s >= -kBoundaryTol && s <= 3.0 + kBoundaryTol &&
                  t >= lower - kBoundaryTol && t <= upper + kBoundaryTol;
    if (!inside) return StRegion::OutsideDomain;
    double D = (s + 1.0) * (s + 1.0) - 4.0 * (t + 1.0);
    if (std::abs(D) <= kBoundaryTol) return StRegion::OnDZero;
    return D < 0.0 ? StRegion::InteriorDNegative : StRegion::InteriorDPositive;
}

// ---------------------------------------------------------------------------
// Map evaluation along explicit paths
// ---------------------------------------------------------------------------

namespace {

HoloLift lift_along(const HGParams& p, Complex x, const PathPlan& path) {
    if (path.vertices.empty()) throw PathError("map evaluation: empty path");
    if (std::abs(path.vertices.back() - x) > 1e-12)
        throw PathError("map evaluation: path does not end at the requested point");
    SLCoefficient slc = sl_coefficient(p);
    HoloLift lift = initial_lift(p, path.vertices.front());
    return continue_lift(lift, path, slc);
}

}  // namespace

ProjectivePoint schwarz_projective(const HGParams& p, Complex x, const PathPlan& path) {
    return lift_along(p, x, path).schwarz_ratio();
}

Complex schwarz(const HGParams& p, Complex x, const PathPlan& path) {
    return schwarz_projective(p, x, path).value();
}

ProjectivePoint derived_schwarz_projective(const HGParams& p, Complex x, const PathPlan& path) {
    return lift_along(p, x, path).derived_ratio();
}

Complex derived_schwarz(const HGParams& p, Complex x, const PathPlan& path) {
    return derived_schwarz_projective(p, x, path).value();
}

// ---------------------------------------------------------------------------
// Connection values and normalization
// ---------------------------------------------------------------------------

namespace {

bool gamma_pole(double v) {
    double r = std::round(v);
    return r <= 0.0 && std::abs(v - r) <= 1e-12;
}

Complex gamma_ratio(std::initializer_list<double> numer, std::initializer_list<double> denom) {
    Complex acc(0.0);
    for (double v : numer) acc += specfun::log_gamma(Complex(v));
    for (double v : denom) acc -= specfun::log_gamma(Complex(v));
    return std::exp(acc);
}

}  // namespace

ConnectionValues connection_values(const HGParams& p) {
    const double a = p.a, b = p.b, c = p.c;
    ConnectionValues cv;

    // S_T(1): the branch of the connection matrix that stays finite depends
    // on the sign of a+b-c; both branches agree where they overlap.
    if (a + b - c > 0.0) {
        for (double v : {a, b}) {
            if (gamma_pole(v))
                throw ParameterError("connection_values: Gamma pole in the S_T(1) formula");
        }
        cv.sT1 = gamma_ratio({2.0 - c, a, b}, {c, a - c + 1.0, b - c + 1.0});
    } else {
        for (double v : {c - a, c - b}) {
            if (gamma_pole(v))
                throw ParameterError("connection_values: Gamma pole in the S_T(1) formula");
        }
        cv.sT1 = gamma_ratio({2.0 - c, c - a, c - b}, {c, 1.0 - a, 1.0 - b});
    }

    // S_T(inf): formula valid for the ordering a <= b (the value itself is
    // symmetric, the right-hand side is not).
    double lo = std::min(a, b), hi = std::max(a, b);
    if (gamma_pole(hi) || gamma_pole(c - lo)) {
        cv.sTinf = ProjectivePoint::infinity();
    } else if (gamma_pole(1.0 - lo) || gamma_pole(1.0 - c + hi)) {
        cv.sTinf = ProjectivePoint{0.0, 1.0};
    } else {
        Complex v = gamma_ratio({2.0 - c, hi, c - lo}, {c, 1.0 - lo, 1.0 - c + hi}) *
                    std::exp(Complex(0.0, kPi * (1.0 - c)));
        cv.sTinf = ProjectivePoint::from_value(v);
    }
    return cv;
}

namespace {

NormalizedMapPair build_pair(const HGParams& p) {
    ConnectionValues cv = connection_values(p);
    Mobius norm = Mobius::to_zero_one_inf(ProjectivePoint{0.0, 1.0},
                                          ProjectivePoint::from_value(cv.sT1), cv.sTinf);
    return NormalizedMapPair{p, cv.sT1, cv.sTinf, norm};
}

}  // namespace

NormalizedMapPair normalize_maps(const HGParams& p) {
    if (!(p.a + p.b - p.c > 0.0))
        throw ParameterError("normalize_maps: hypothesis a + b - c > 0 fails (a + b - c = " +
                             std::to_string(p.a + p.b - p.c) + ")");
    if (!(p.c > 0.0 && p.c < 2.0))
        throw ParameterError("normalize_maps: hypothesis 0 < c < 2 fails (c = " +
                             std::to_string(p.c) + ")");
    return build_pair(p);
}

NormalizedMapPair normalize_maps_general(const HGParams& p) {
    if (!(p.c > 0.0 && p.c < 2.0))
        throw ParameterError("normalize_maps: hypothesis 0 < c < 2 fails (c = " +
                             std::to_string(p.c) + ")");
    return build_pair(p);
}

// ---------------------------------------------------------------------------
// Confluence model
// ---------------------------------------------------------------------------

Complex confluence_model(double t, Complex x) { return -(x * x * x / 3.0 + t * x); }

std::array<Complex, 2> confluence_ramification_points(double t) {
    if (t > 0.0) {
        double r = std::sqrt(t);
        return {Complex(0.0, r), Complex(0.0, -r)};
    }
    if (t < 0.0) {
        double r = std::sqrt(-t);
        return {Complex(-r, 0.0), Complex(r, 0.0)};
    }
    return {Complex(0.0), Complex(0.0)};
}

namespace {

// Continuous argument increment of phi_t - z along the segment [a, b],
// bisecting until each piece turns by less than pi/2.
double arg_sweep(double t, Complex z, Complex a, Complex b, Complex va, Complex vb, int depth) {
    double d = std::arg(vb / va);
    if (std::abs(d) < kPi / 2.0 || depth >= 48) return d;
    Complex m = 0.5 * (a + b);
    Complex vm = confluence_model(t, m) - z;
    if (std::abs(vm) == 0.0) throw ConvergenceError("confluence count: probe hits the image curve");
    return arg_sweep(t, z, a, m, va, vm, depth + 1) + arg_sweep(t, z, m, b, vm, vb, depth + 1);
}

}  // namespace

int confluence_preimage_count(double t, Complex z) {
    // Hemi-disc boundary: diameter [-1,1] then the upper unit semicircle.
    std::vector<Complex> pts;
    const int nd = 256, na = 256;
    for (int i = 0; i <= nd; ++i) pts.push_back(Complex(-1.0 + 2.0 * i / nd, 0.0));
    for (int i = 1; i <= na; ++i) pts.push_back(std::exp(Complex(0.0, kPi * i / na)));
    double total = 0.0;
    Complex va = confluence_model(t, pts.front()) - z;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Complex vb = confluence_model(t, pts[i + 1]) - z;
        if (std::abs(va) == 0.0 || std::abs(vb) == 0.0)
            throw ConvergenceError("confluence count: probe hits the image curve");
        total += arg_sweep(t, z, pts[i], pts[i + 1], va, vb, 0);
        va = vb;
    }
    double winding = total / (2.0 * kPi);
    int count = static_cast<int>(std::lround(winding));
    if (std::abs(winding - count) > 0.05)
        throw ConvergenceError("confluence count: non-integer winding, probe too close to boundary image");
    return count;
}

// ---------------------------------------------------------------------------
// Winding analysis
// ---------------------------------------------------------------------------

namespace {


// Unwrapped angular progression along a sequence of h-chart points.
double theta_total(const std::vector<ProjectivePoint>& ws) {
    double tot = 0.0;
    for (std::size_t i = 0; i + 1 < ws.size(); ++i) {
        Complex r = (ws[i + 1].num * std::conj(ws[i + 1].den)) *
                    std::conj(ws[i].num * std::conj(ws[i].den));
        tot += std::arg(r);
    }
    return tot;
}

struct SweepResult {
    std::vector<ProjectivePoint> S, DS;  // normalized values at the samples
};

SweepResult sweep_interval(const HGParams& p, const NormalizedMapPair& nm, int n, double delta) {
    SLCoefficient slc = sl_coefficient(p);
    SweepResult out;
    out.S.resize(n);
    out.DS.resize(n);
    auto sample_x = [&](int j) { return Complex((j + 1.0) / (n + 1.0), delta); };

    HoloLift base = initial_lift(p, hgode::default_base_point());
    int mid = n / 2;
    HoloLift center = continue_lift_segment(base, sample_x(mid), slc);
    auto record = [&](int j, const HoloLift& lf) {
        out.S[j] = nm.apply(lf.schwarz_ratio());
        out.DS[j] = nm.apply(lf.derived_ratio());
    };
    record(mid, center);
    HoloLift cur = center;
    for (int j = mid - 1; j >= 0; --j) {
        cur = continue_lift_segment(cur, sample_x(j), slc);
        record(j, cur);
    }
    cur = center;
    for (int j = mid + 1; j < n; ++j) {
        cur = continue_lift_segment(cur, sample_x(j), slc);
        record(j, cur);
    }
    return out;
}

std::vector<ProjectivePoint> h_chart(const Mobius& h, const std::vector<ProjectivePoint>& vals,
                                     bool with_anchors) {
    std::vector<ProjectivePoint> ws;
    ws.reserve(vals.size() + 2);
    if (with_anchors) ws.push_back(h.apply(ProjectivePoint{0.0, 1.0}));
    for (const auto& v : vals) ws.push_back(h.apply(v));
    if (with_anchors) ws.push_back(h.apply(ProjectivePoint{1.0, 1.0}));
    return ws;
}

std::vector<double> turning_points_of(const std::vector<ProjectivePoint>& hDS, int n) {
    // hDS holds anchored values; sample j sits at index j+1.
    std::vector<double> th(hDS.size());
    th[0] = 0.0;
    for (std::size_t i = 0; i + 1 < hDS.size(); ++i) {
        Complex r = (hDS[i + 1].num * std::conj(hDS[i + 1].den)) *
                    std::conj(hDS[i].num * std::conj(hDS[i].den));
        th[i + 1] = th[i] + std::arg(r);
    }
    std::vector<double> tps;
    auto xs = [&](int j) { return (j + 1.0) / (n + 1.0); };
    for (int j = 1; j + 1 < n; ++j) {
        double d1 = th[j + 1] - th[j], d2 = th[j + 2] - th[j + 1];
        if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) == (d2 > 0.0)) continue;
        // Parabolic vertex through (x_{j-1}, x_j, x_{j+1}).
        double y0 = th[j], y1 = th[j + 1], y2 = th[j + 2];
        double denom = y0 - 2.0 * y1 + y2;
        double offs = std::abs(denom) > 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
        double h = 1.0 / (n + 1.0);
        tps.push_back(xs(j) + offs * h);
    }
    return tps;
}

}  // namespace

WindingRecord winding_analysis(const HGParams& p, int samples_on_01) {
    if (samples_on_01 < 8) throw ParameterError("winding_analysis: need at least 8 samples");
    const int n = samples_on_01;
    NormalizedMapPair nm = normalize_maps_general(p);

    const double delta0 = 1e-6;
    SweepResult sw0 = sweep_interval(p, nm, n, delta0);
    SweepResult sw1 = sweep_interval(p, nm, n, delta0 / 2.0);
    SweepResult sw2 = sweep_interval(p, nm, n, delta0 / 4.0);

    // Chart taking the generalized circle C through 0, 1 and a mid sample of
    // S((0,1)) to the unit circle; a line C degenerates gracefully.
    ProjectivePoint midS = sw2.S[n / 2];
    Mobius m1 = Mobius::to_zero_one_inf(ProjectivePoint{0.0, 1.0}, ProjectivePoint{1.0, 1.0}, midS);
    Mobius m2 = Mobius::to_zero_one_inf(ProjectivePoint{1.0, 1.0}, ProjectivePoint{Complex(0.0, 1.0), 1.0},
                                        ProjectivePoint{-1.0, 1.0});
    Mobius h = m2.inverse().compose(m1);

    WindingRecord rec;
    rec.delta_theta_S = theta_total(h_chart(h, sw2.S, true));
    rec.delta_theta_DS = theta_total(h_chart(h, sw2.DS, true));
    double diff = rec.delta_theta_DS - rec.delta_theta_S;
    rec.extra_turns = static_cast<int>(std::lround(diff / (2.0 * kPi)));
    rec.residual = diff - 2.0 * kPi * rec.extra_turns;

    // Turning points per offset, extrapolated to the boundary by halving.
    auto tp0 = turning_points_of(h_chart(h, sw0.DS, true), n);
    auto tp1 = turning_points_of(h_chart(h, sw1.DS, true), n);
    auto tp2 = turning_points_of(h_chart(h, sw2.DS, true), n);
    for (double t2 : tp2) {
        auto nearest = [&](const std::vector<double>& v) -> std::optional<double> {
            double best = 1e9, arg = 0.0;
            for (double t : v)
                if (std::abs(t - t2) < best) best = std::abs(t - t2), arg = t;
            if (best < 2.0 / n) return arg;
            return std::nullopt;
        };
        auto t1 = nearest(tp1);
        (void)nearest(tp0);
        double value = t2;
        if (t1) value = 2.0 * t2 - *t1;  // linear-in-delta extrapolation
        rec.turning_points.push_back(value);
    }
    std::sort(rec.turning_points.begin(), rec.turning_points.end());
    return rec;
}

// ---------------------------------------------------------------------------
// Safe routing helper shared by the evaluator and the lift field
// ---------------------------------------------------------------------------

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Appends waypoints leading from `from` to `to`, arcing over a puncture when
// the straight chord passes too close to it. Both endpoints stay fixed.
void append_safe_route(std::vector<Complex>& out, Complex from, Complex to) {
    for (Complex pc : {Complex(0.0), Complex(1.0)}) {
        double r = std::min(std::abs(from - pc), std::abs(to - pc));
        double d = point_segment_distance(pc, from, to);
        if (!(d < 0.6 * r) || r > 0.2) continue;
        double a0 = std::arg(from - pc), a1 = std::arg(to - pc);
        auto wrap_pos = [](double ang) {
            ang = std::fmod(ang, 2.0 * kPi);
            return ang < 0.0 ? ang + 2.0 * kPi : ang;
        };
        double sweep = wrap_pos(a1 - a0);
        if (wrap_pos(kPi / 2.0 - a0) > sweep) sweep -= 2.0 * kPi;
        int nseg = std::max(4, static_cast<int>(std::ceil(std::abs(sweep) / (kPi / 16.0))));
        for (int k = 1; k < nseg; ++k)
            out.push_back(pc + r * std::exp(Complex(0.0, a0 + sweep * k / nseg)));
        break;  // punctures are a unit apart; one detour per short chord
    }
    out.push_back(to);
}

}  // namespace

// ---------------------------------------------------------------------------
// MapEvaluator
// ---------------------------------------------------------------------------

MapEvaluator::MapEvaluator(const HGParams& p)
    : params_(p),
      slc_(sl_coefficient(p)),
      base_(initial_lift(p, hgode::default_base_point())),
      norm_(normalize_maps_general(p)) {}

HoloLift MapEvaluator::lift_at(Complex x) const {
    double dp = std::min(std::abs(x), std::abs(x - 1.0));
    if (dp == 0.0) throw PoleError("lift_at: x coincides with a puncture");
    double clearance = std::min(hgode::kDefaultClearance, 0.45 * dp);
    PathPlan plan = plan_path(base_.x, x, slc_, clearance);
    return continue_lift(base_, plan, slc_);
}

ProjectivePoint MapEvaluator::schwarz_at(Complex x) const { return lift_at(x).schwarz_ratio(); }

ProjectivePoint MapEvaluator::derived_at(Complex x) const { return lift_at(x).derived_ratio(); }

Complex MapEvaluator::normalized_schwarz(Complex x) const {
    return norm_.apply(schwarz_at(x)).value();
}

Complex MapEvaluator::normalized_derived(Complex x) const {
    return norm_.apply(derived_at(x)).value();
}

namespace {

MapEvaluator::Jet jet_from_lift(const HoloLift& lf, const Mobius& g) {
    // Raw jet of S_T = u1/u0 with det U = 1: S' = 1/u0^2, S'' = -2 u0'/u0^3.
    Complex u0 = lf.U.a11, du0 = lf.U.a12, u1 = lf.U.a21;
    Complex S = u1 / u0;
    Complex dS = 1.0 / (u0 * u0);
    Complex ddS = -2.0 * du0 / (u0 * u0 * u0);
    // Chain through the normalizing Moebius map.
    const Mat2& m = g.matrix();
    Complex den = m.a21 * S + m.a22;
    Complex det = m.a11 * m.a22 - m.a12 * m.a21;
    Complex gp = det / (den * den);
    Complex gpp = -2.0 * m.a21 * det / (den * den * den);
    return {(m.a11 * S + m.a12) / den, gp * dS, gpp * dS * dS + gp * ddS};
}

}  // namespace

MapEvaluator::Jet MapEvaluator::normalized_jet(Complex x) const {
    return jet_from_lift(lift_at(x), norm_.normalizer);
}

void MapEvaluator::ensure_seeds() const {
    if (!seeds_.empty()) return;
    // 100x100 grid over the standard rectangle above the punctures.
    const int nu = 100, nv = 100;
    const double x0 = -1.0, x1 = 2.0, y0 = 0.012, y1 = 1.25;
    std::vector<std::vector<Complex>> rows(nv);
    for (int j = 0; j < nv; ++j) {
        double y = y0 + (y1 - y0) * j / (nv - 1.0);
        rows[j].reserve(nu);
        for (int i = 0; i < nu; ++i)
            rows[j].push_back(Complex(x0 + (x1 - x0) * i / (nu - 1.0), y));
    }
    LiftField field(params_, rows);
    for (const auto& row : field.rows())
        for (std::size_t i = 0; i < row.points.size(); ++i) {
            ProjectivePoint s = norm_.apply(row.lifts[i].schwarz_ratio());
            if (s.is_infinite()) continue;
            seeds_.emplace_back(row.points[i], s.value());
            seed_lifts_.push_back(row.lifts[i]);
        }
}

Complex MapEvaluator::composite_f(Complex z) const {
    ensure_seeds();
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seeds_.size(); ++i) {
        double d = std::abs(seeds_[i].second - z);
        if (d < bd) bd = d, best = i;
    }
    HoloLift cur = seed_lifts_[best];
    Jet jet = jet_from_lift(cur, norm_.normalizer);
    for (int it = 0; it < 60; ++it) {
        Complex r = jet.S - z;
        if (std::abs(r) <= 1e-12 * (1.0 + std::abs(z))) {
            if (!(cur.x.imag() > 0.0))
                throw ParameterError("composite_f: z is outside the normalized triangle");
            if (std::abs(jet.ddS) == 0.0)
                throw ConvergenceError("composite_f: S'' vanishes at the preimage");
            return z - 2.0 * jet.dS * jet.dS / jet.ddS;
        }
        Complex step = -r / jet.dS;
        double cap = 0.25;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        Complex next = cur.x + step;
        if (next.imag() < 1e-9) next = Complex(next.real(), 1e-9);
        std::vector<Complex> route{cur.x};
        append_safe_route(route, cur.x, next);
        for (std::size_t i = 1; i < route.size(); ++i)
            cur = continue_lift_segment(cur, route[i], slc_);
        jet = jet_from_lift(cur, norm_.normalizer);
    }
    throw ConvergenceError("composite_f: Newton iteration did not converge");
}

Complex composite_map_f(const HGParams& p, Complex z) {
    MapEvaluator ev(p);
    return ev.composite_f(z);
}

// ---------------------------------------------------------------------------
// LiftField
// ---------------------------------------------------------------------------

LiftField::LiftField(const HGParams& p, const std::vector<std::vector<Complex>>& rows,
                     Complex base)
    : slc_(sl_coefficient(p)) {
    rows_.resize(rows.size());
    if (rows.empty()) return;

    HoloLift base_lift = initial_lift(p, base);

    // Transport to each row head sequentially (row heads are assumed to be
    // mutually reachable by straight or arced chords).
    std::vector<HoloLift> heads;
    heads.reserve(rows.size());
    HoloLift cur = base_lift;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) {
            heads.push_back(cur);
            continue;
        }
        std::vector<Complex> route{cur.x};
        append_safe_route(route, cur.x, rows[r].front());
        for (std::size_t i = 1; i < route.size(); ++i)
            cur = continue_lift_segment(cur, route[i], slc_);
        heads.push_back(cur);
    }

    parallel_for(rows.size(), [&](std::size_t r) {
        const auto& pts = rows[r];
        Row& row = rows_[r];
        row.points = pts;
        row.lifts.reserve(pts.size());
        if (pts.empty()) return;
        HoloLift lf = heads[r];
        row.lifts.push_back(lf);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            std::vector<Complex> route{lf.x};
            append_safe_route(route, lf.x, pts[i]);
            for (std::size_t k = 1; k < route.size(); ++k)
                lf = continue_lift_segment(lf, route[k], slc_);
            row.lifts.push_back(lf);
        }
    });
}

}  // namespace flatfront::maps
