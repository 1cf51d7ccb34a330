#include "flatfront/hgode.hpp"

#include <algorithm>
#include <cmath>

#include "flatfront/specfun.hpp"

namespace flatfront::hgode {

SLCoefficient sl_coefficient(const HGParams& p) {
    double m0 = p.mu0 * p.mu0, m1 = p.mu1 * p.mu1, mi = p.muinf * p.muinf;
    return SLCoefficient{p, 1.0 - mi, mi + m0 - m1 - 1.0, 1.0 - m0};
}

std::array<Complex, 2> SLCoefficient::numerator_roots() const {
    // n2 > 0 always holds under |muinf| < 1.
    double disc = n1 * n1 - 4.0 * n2 * n0;
    if (disc < 0.0) {
        double re = -n1 / (2.0 * n2);
        double im = std::sqrt(-disc) / (2.0 * n2);
        return {Complex(re, im), Complex(re, -im)};
    }
    double sq = std::sqrt(disc);
    // Stable form: avoid cancellation in -n1 +- sq.
    double w = -(n1 + (n1 >= 0.0 ? sq : -sq)) / 2.0;
    Complex r1, r2;
    if (w == 0.0) {
        r1 = r2 = Complex(-n1 / (2.0 * n2));
    } else {
        r1 = Complex(w / n2);
        r2 = Complex(n0 / w);
    }
    if (r1.real() > r2.real()) std::swap(r1, r2);
    return {r1, r2};
}

namespace {

void check_off_punctures(Complex x) {
    if (std::abs(x) == 0.0 || std::abs(x - 1.0) == 0.0)
        throw PoleError("q: pole at puncture x in {0,1}");
}

}  // namespace

Complex q_at(const SLCoefficient& slc, Complex x) {
    check_off_punctures(x);
    Complex om = 1.0 - x;
    return -slc.numerator(x) / (4.0 * x * x * om * om);
}

Complex q_partial_fraction_at(const SLCoefficient& slc, Complex x) {
    check_off_punctures(x);
    const HGParams& p = slc.params;
    double m0 = p.mu0 * p.mu0, m1 = p.mu1 * p.mu1, mi = p.muinf * p.muinf;
    Complex om = 1.0 - x;
    return -0.25 * ((1.0 - m0) / (x * x) + (1.0 - m1) / (om * om) +
                    (1.0 + mi - m0 - m1) / (x * om));
}

Complex derived_sl_coefficient_at(const SLCoefficient& slc, Complex x) {
    check_off_punctures(x);
    Complex P = slc.numerator(x);
    double scale = std::abs(slc.n2 * x * x) + std::abs(slc.n1 * x) + std::abs(slc.n0);
    if (std::abs(P) <= 1e-13 * scale)
        throw PoleError("derived q: singular at a zero of q's numerator");
    Complex dP = 2.0 * slc.n2 * x + slc.n1;
    Complex om = 1.0 - x;
    Complex q = -P / (4.0 * x * x * om * om);
    // g = q'/q and its derivative, assembled from the rational structure.
    Complex g = dP / P - 2.0 / x + 2.0 / om;
    Complex dg = (2.0 * slc.n2 * P - dP * dP) / (P * P) + 2.0 / (x * x) + 2.0 / (om * om);
    return q + 0.25 * g * g - 0.5 * dg;
}

// ---------------------------------------------------------------------------
// Initial data from the hypergeometric series
// ---------------------------------------------------------------------------

HoloLift initial_lift(const HGParams& p, Complex x0) {
    if (std::abs(p.c - std::round(p.c)) < 1e-12)
        throw ParameterError("initial_lift: solution pair degenerates for integer c");
    if (x0.imag() < 0.0)
        throw ParameterError("initial_lift: base point must lie in the closed upper half plane");
    if (std::abs(x0) == 0.0 || std::abs(x0 - 1.0) == 0.0)
        throw ParameterError("initial_lift: base point coincides with a puncture");

    const double a = p.a, b = p.b, c = p.c;
    specfun::HypergeometricValue f0, f1;
    try {
        f0 = specfun::hyp2f1(a, b, c, x0);
        f1 = specfun::hyp2f1(a - c + 1.0, b - c + 1.0, 2.0 - c, x0);
    } catch (const ConvergenceError&) {
        throw ParameterError("initial_lift: base point is not series-reachable");
    }

    Complex xpow = std::pow(x0, 1.0 - c);  // principal branch
    Complex u0 = f0.value;
    Complex du0 = f0.derivative;
    Complex u1 = xpow * f1.value;
    Complex du1 = (1.0 - c) * xpow / x0 * f1.value + xpow * f1.derivative;

    // SL gauge N = sqrt(x^c (1-x)^{a+b+1-c}), principal logs on the upper
    // half plane with cuts along (-inf,0] and [1,inf) approached from above.
    Complex logN = 0.5 * (c * std::log(x0) + (a + b + 1.0 - c) * std::log(1.0 - x0));
    Complex N = std::exp(logN);
    Complex w = 0.5 * (c / x0 - (a + b + 1.0 - c) / (1.0 - x0));  // N'/N

    Mat2 U{N * u0, N * (du0 + w * u0),  //
           N * u1, N * (du1 + w * u1)};

    // det U equals (1-c) times the gauge-invariant Wronskian constant;
    // rescale to det 1 with the deterministic square-root branch.
    Complex scale = sqrt_principal_positive(U.det());
    if (std::abs(scale) == 0.0) throw ConvergenceError("initial_lift: degenerate Wronskian");
    return HoloLift{x0, U * (1.0 / scale)};
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) transport of U' = U A(x), A = (0 q; 1 0)
// ---------------------------------------------------------------------------

namespace {

inline Mat2 rhs(const Mat2& U, Complex q, Complex dx) {
    // U * A(x) * dx with A = (0 q; 1 0); columns: (col2, q col1).
    return Mat2{U.a12 * dx, q * U.a11 * dx, U.a22 * dx, q * U.a21 * dx};
}

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

HoloLift continue_lift_segment(const HoloLift& lift, Complex to, const SLCoefficient& slc,
                               const IntegratorOptions& opts) {
    Complex from = lift.x;
    Complex dx = to - from;
    double len = std::abs(dx);
    if (len == 0.0) return lift;

    auto qof = [&](double tau) { return q_at(slc, from + tau * dx); };

    Mat2 U = lift.U;
    double tau = 0.0;
    double h = std::min(1.0, opts.max_step / len);
    int steps = 0;

    while (tau < 1.0) {
        if (++steps > opts.max_steps)
            throw ConvergenceError("continue_lift: step budget exhausted near a singularity");
        h = std::min(h, 1.0 - tau);

        Mat2 k1 = rhs(U, qof(tau), dx);
        Mat2 k2 = rhs(U + h * a21 * k1, qof(tau + c2 * h), dx);
        Mat2 k3 = rhs(U + h * (a31 * k1 + a32 * k2), qof(tau + c3 * h), dx);
        Mat2 k4 = rhs(U + h * (a41 * k1 + a42 * k2 + a43 * k3), qof(tau + c4 * h), dx);
        Mat2 k5 = rhs(U + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), qof(tau + c5 * h), dx);
        Mat2 k6 = rhs(U + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
                      qof(tau + h), dx);
        Mat2 U5 = U + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Mat2 k7 = rhs(U5, qof(tau + h), dx);
        Mat2 U4 = U + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scale = opts.tol + opts.tol * std::max(U.max_abs(), U5.max_abs());
        double err = (U5 - U4).max_abs() / scale;

        if (err <= 1.0) {
            U = U5;
            tau += h;
        }
        double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
        if (h * len < 1e-15)
            throw ConvergenceError("continue_lift: step underflow near a puncture");
    }
    return HoloLift{to, U};
}

HoloLift continue_lift(const HoloLift& lift, const PathPlan& path, const SLCoefficient& slc,
                       const IntegratorOptions& opts) {
    if (path.vertices.empty()) return lift;
    if (std::abs(path.vertices.front() - lift.x) > 1e-12)
        throw PathError("continue_lift: path does not start at the lift base point");
    HoloLift cur = lift;
    for (std::size_t i = 1; i < path.vertices.size(); ++i)
        cur = continue_lift_segment(cur, path.vertices[i], slc, opts);
    return cur;
}

// ---------------------------------------------------------------------------
// Path planning
// ---------------------------------------------------------------------------

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) {
    Complex ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

std::vector<Complex> obstacle_set(const SLCoefficient& slc) {
    auto roots = slc.numerator_roots();
    return {Complex(0.0), Complex(1.0), roots[0], roots[1]};
}

}  // namespace

double path_clearance(const std::vector<Complex>& vertices, const SLCoefficient& slc) {
    double best = std::numeric_limits<double>::infinity();
    for (Complex o : obstacle_set(slc))
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            best = std::min(best, point_segment_distance(o, vertices[i], vertices[i + 1]));
    return best;
}

PathPlan plan_path(Complex from, Complex to, const SLCoefficient& slc, double clearance) {
    if (!(clearance > 0.0)) throw PathError("plan_path: clearance must be positive");
    for (Complex p : {Complex(0.0), Complex(1.0)}) {
        if (std::abs(from - p) <= clearance || std::abs(to - p) <= clearance)
            throw PathError("plan_path: endpoint violates clearance from a puncture");
    }

    // Obstacles to detour around. Numerator roots are soft: if an endpoint
    // deliberately approaches one (they are not ODE singularities), it is
    // dropped from the detour set.
    std::vector<Complex> obstacles{Complex(0.0), Complex(1.0)};
    for (Complex r : slc.numerator_roots()) {
        if (std::abs(from - r) > clearance && std::abs(to - r) > clearance)
            obstacles.push_back(r);
    }

    struct Hit {
        double t;
        Complex o;
    };
    std::vector<Hit> hits;
    Complex dir = to - from;
    double len2 = std::norm(dir);
    for (Complex o : obstacles) {
        if (len2 == 0.0) break;
        double t = ((o - from) * std::conj(dir)).real() / len2;
        if (t <= 0.0 || t >= 1.0) continue;  // nearest approach at an endpoint is fine
        if (std::abs(o - (from + t * dir)) < clearance) hits.push_back({t, o});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });

    std::vector<Complex> verts{from};
    double prev_exit = 0.0;
    for (const Hit& h : hits) {
        // Enter and exit where the line crosses the circle of radius
        // `clearance` around the obstacle, bridged by the arc through +Im.
        double t0 = h.t, d = std::abs(h.o - (from + t0 * dir));
        double half = std::sqrt(std::max(clearance * clearance - d * d, 0.0)) / std::sqrt(len2);
        double te = std::max(t0 - half, 0.0), tx = std::min(t0 + half, 1.0);
        if (te < prev_exit) continue;  // zone already bridged by the last arc
        prev_exit = tx;
        Complex entry = from + te * dir, depart = from + tx * dir;
        double a0 = std::arg(entry - h.o), a1 = std::arg(depart - h.o);
        // Walk the arc passing the +i direction above the obstacle.
        auto wrap_pos = [](double ang) {
            ang = std::fmod(ang, 2.0 * kPi);
            return ang < 0.0 ? ang + 2.0 * kPi : ang;
        };
        double sweep = wrap_pos(a1 - a0);
        if (wrap_pos(kPi / 2.0 - a0) > sweep) sweep -= 2.0 * kPi;
        int n = std::max(4, static_cast<int>(std::ceil(std::abs(sweep) / (kPi / 16.0))));
        verts.push_back(entry);
        double r = std::max(clearance, std::min(std::abs(entry - h.o), std::abs(depart - h.o)));
        for (int k = 1; k < n; ++k) {
            double ang = a0 + sweep * k / n;
            verts.push_back(h.o + r * std::exp(Complex(0.0, ang)));
        }
        verts.push_back(depart);
    }
    verts.push_back(to);

    PathPlan plan{verts, 0.0};
    plan.clearance = path_clearance(plan.vertices, slc);
    if (!(plan.clearance > 0.0)) throw PathError("plan_path: could not achieve positive clearance");
    return plan;
}

// ---------------------------------------------------------------------------
// Monodromy
// ---------------------------------------------------------------------------

Mat2 monodromy(const HGParams& p, Complex base, int loop_around) {
    if (loop_around != 0 && loop_around != 1)
        throw ParameterError("monodromy: loop_around must be 0 or 1");
    SLCoefficient slc = sl_coefficient(p);
    Complex center(static_cast<double>(loop_around), 0.0);
    Complex other(1.0 - static_cast<double>(loop_around), 0.0);

    // Circle radius: clear of the other puncture, the numerator roots, and
    // reachable from the base point.
    double r = 0.4;
    r = std::min(r, 0.8 * std::abs(other - center));
    for (Complex root : slc.numerator_roots()) {
        double d = std::abs(root - center);
        if (d > 1e-9) r = std::min(r, 0.8 * d);
    }
    r = std::min(r, 0.9 * std::abs(base - center));
    if (!(r > 1e-6)) throw PathError("monodromy: no admissible loop radius");

    HoloLift lift = initial_lift(p, base);
    // Radial approach point on the circle, full positive loop, return.
    Complex dirv = (base - center) / std::abs(base - center);
    Complex start = center + r * dirv;
    std::vector<Complex> verts{base, start};
    const int n = 64;
    double a0 = std::arg(dirv);
    for (int k = 1; k <= n; ++k)
        verts.push_back(center + r * std::exp(Complex(0.0, a0 + 2.0 * kPi * k / n)));
    verts.push_back(base);

    PathPlan loop{verts, 0.0};
    loop.clearance = path_clearance(loop.vertices, slc);
    HoloLift after = continue_lift(lift, loop, slc);
    return lift.U.inverse() * after.U;
}

}  // namespace flatfront::hgode
