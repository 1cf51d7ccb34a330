#include <cmath>
#include <random>

#include "doctest.h"
#include "flatfront/hgode.hpp"
#include "flatfront/specfun.hpp"

using namespace flatfront;
using namespace flatfront::hgode;

namespace {

// Raw SL-gauge lift built directly from the series (oracle-side mirror of
// the initial data, without the determinant normalization).
Mat2 raw_gauge_matrix(const HGParams& p, Complex x) {
    auto f0 = specfun::hyp2f1(p.a, p.b, p.c, x);
    auto f1 = specfun::hyp2f1(p.a - p.c + 1.0, p.b - p.c + 1.0, 2.0 - p.c, x);
    Complex xpow = std::pow(x, 1.0 - p.c);
    Complex u0 = f0.value, du0 = f0.derivative;
    Complex u1 = xpow * f1.value;
    Complex du1 = (1.0 - p.c) * xpow / x * f1.value + xpow * f1.derivative;
    Complex N = std::exp(0.5 * (p.c * std::log(x) + (p.a + p.b + 1.0 - p.c) * std::log(1.0 - x)));
    Complex w = 0.5 * (p.c / x - (p.a + p.b + 1.0 - p.c) / (1.0 - x));
    return {N * u0, N * (du0 + w * u0), N * u1, N * (du1 + w * u1)};
}

std::array<Complex, 2> eig(const Mat2& m) {
    Complex tr = m.trace(), det = m.det();
    Complex disc = std::sqrt(tr * tr - 4.0 * det);
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

}  // namespace

TEST_CASE("sl coefficient for (1/2,1/2,c) is x^2 - x + (2c - c^2)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    for (int k = 0; k < 20; ++k) {
        double c = uni(rng);
        SLCoefficient slc = sl_coefficient(HGParams(0.5, 0.5, c));
        CHECK(std::abs(slc.n2 - 1.0) < 1e-14);
        CHECK(std::abs(slc.n1 + 1.0) < 1e-14);
        CHECK(std::abs(slc.n0 - (2.0 * c - c * c)) < 1e-14);
    }
}

TEST_CASE("sl coefficient of the zero-exponent triple") {
    // mu0 = mu1 = muinf = 0 at (1/2,1/2,1); numerator x^2 - x + 1.
    SLCoefficient slc = sl_coefficient(HGParams(0.5, 0.5, 1.0));
    CHECK(slc.n2 == 1.0);
    CHECK(slc.n1 == -1.0);
    CHECK(slc.n0 == 1.0);
}

TEST_CASE("sl coefficient of the dihedral triple") {
    SLCoefficient slc = sl_coefficient(HGParams(1.0 / 6.0, -1.0 / 6.0, 0.5));
    CHECK(std::abs(slc.n2 - 8.0 / 9.0) < 1e-15);
    CHECK(std::abs(slc.n1 + 8.0 / 9.0) < 1e-15);
    CHECK(std::abs(slc.n0 - 0.75) < 1e-15);
}

TEST_CASE("q vanishes at the marked ramification point for c = 0.2") {
    SLCoefficient slc = sl_coefficient(HGParams(0.5, 0.5, 0.2));
    Complex root(0.5, std::sqrt(0.11));
    CHECK(std::abs(q_at(slc, root)) < 1e-10);
}

TEST_CASE("two displayed forms of q agree") {
    SLCoefficient slc = sl_coefficient(HGParams(0.3, 0.6, 0.8));
    Complex x(0.3, 0.4);
    Complex a = q_at(slc, x), b = q_partial_fraction_at(slc, x);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("q commutes with conjugation for real parameters") {
    SLCoefficient slc = sl_coefficient(HGParams(0.25, 0.55, 0.7));
    Complex x(0.4, 0.7);
    CHECK(std::abs(q_at(slc, std::conj(x)) - std::conj(q_at(slc, x))) < 1e-14);
}

TEST_CASE("q pole errors") {
    SLCoefficient slc = sl_coefficient(HGParams(0.3, 0.6, 0.8));
    CHECK_THROWS_AS(q_at(slc, Complex(0.0)), PoleError);
    CHECK_THROWS_AS(q_at(slc, Complex(1.0)), PoleError);
    CHECK_THROWS_AS(derived_sl_coefficient_at(slc, slc.numerator_roots()[0]), PoleError);
}

TEST_CASE("derived coefficient limits at the puncture and at roots") {
    // lim x^2 qbar at 0 equals -(1 - mu0^2)/4, Richardson over two radii.
    HGParams p(0.3, 0.4, 0.6);
    SLCoefficient slc = sl_coefficient(p);
    auto f = [&](double eps) {
        Complex x = eps * std::exp(Complex(0.0, 0.4));
        return x * x * derived_sl_coefficient_at(slc, x);
    };
    Complex lim = (1e-3 * f(1e-4) - 1e-4 * f(1e-3)) / (1e-3 - 1e-4);
    CHECK(std::abs(lim - Complex(-(1.0 - p.mu0 * p.mu0) / 4.0)) < 1e-6);

    // Simple root: (x - alpha)^2 qbar -> 3/4.
    SLCoefficient s2 = sl_coefficient(HGParams(0.5, 0.5, 0.2));
    Complex alpha(0.5, std::sqrt(0.11));
    auto g = [&](double eps) {
        Complex x = alpha + eps * std::exp(Complex(0.0, 0.7));
        return (x - alpha) * (x - alpha) * derived_sl_coefficient_at(s2, x);
    };
    Complex lim2 = (1e-3 * g(1e-4) - 1e-4 * g(1e-3)) / (1e-3 - 1e-4);
    CHECK(std::abs(lim2 - Complex(0.75)) < 1e-6);

    // Double root at c = 1 - sqrt(3)/2: (x - alpha)^2 qbar -> 2.
    double c = 1.0 - std::sqrt(3.0) / 2.0;
    SLCoefficient s3 = sl_coefficient(HGParams(0.5, 0.5, c));
    Complex beta(0.5, 0.0);
    auto h = [&](double eps) {
        Complex x = beta + eps * std::exp(Complex(0.0, 0.3));
        return (x - beta) * (x - beta) * derived_sl_coefficient_at(s3, x);
    };
    Complex lim3 = (1e-3 * h(1e-4) - 1e-4 * h(1e-3)) / (1e-3 - 1e-4);
    CHECK(std::abs(lim3 - Complex(2.0)) < 1e-5);
}

TEST_CASE("initial lift is unimodular and solves u'' = q u") {
    HGParams p(0.3, 0.6, 0.8);
    Complex x0(0.5, 0.5);
    HoloLift lift = initial_lift(p, x0);
    CHECK(std::abs(lift.U.det() - Complex(1.0)) < 1e-12);

    // Finite-difference second derivative of the first column against q.
    SLCoefficient slc = sl_coefficient(p);
    const double h = 1e-4;
    Mat2 up = initial_lift(p, x0 + h).U;
    Mat2 um = initial_lift(p, x0 - h).U;
    Complex q = q_at(slc, x0);
    Complex dd0 = (up.a11 - 2.0 * lift.U.a11 + um.a11) / (h * h);
    Complex dd1 = (up.a21 - 2.0 * lift.U.a21 + um.a21) / (h * h);
    CHECK(std::abs(dd0 - q * lift.U.a11) < 1e-6);
    CHECK(std::abs(dd1 - q * lift.U.a21) < 1e-6);
}

TEST_CASE("initial lift rejects integer c and far base points") {
    CHECK_THROWS_AS(initial_lift(HGParams(0.5, 0.5, 1.0), Complex(0.3, 0.3)), ParameterError);
    CHECK_THROWS_AS(initial_lift(HGParams(0.3, 0.6, 0.8), Complex(0.9, 0.5)), ParameterError);
}

TEST_CASE("gauge Wronskian is constant in x") {
    HGParams p(0.3, 0.6, 0.8);
    Complex d1 = raw_gauge_matrix(p, Complex(0.4, 0.4)).det();
    Complex d2 = raw_gauge_matrix(p, Complex(0.41, 0.4)).det();
    CHECK(std::abs(d1 - d2) < 1e-9);
    CHECK(std::abs(d1 - Complex(1.0 - p.c)) < 1e-10);
}

TEST_CASE("closed contractible loop is trivial") {
    HGParams p(0.5, 0.5, 0.3);
    SLCoefficient slc = sl_coefficient(p);
    HoloLift lift = initial_lift(p, Complex(0.5, 0.5));
    PathPlan square;
    square.vertices = {Complex(0.5, 0.5), Complex(0.6, 0.5), Complex(0.6, 0.6),
                       Complex(0.5, 0.6), Complex(0.5, 0.5)};
    square.clearance = path_clearance(square.vertices, slc);
    HoloLift back = continue_lift(lift, square, slc);
    CHECK((back.U - lift.U).max_abs() < 1e-8);
}

TEST_CASE("continuation agrees with direct series inside the disc") {
    HGParams p(0.5, 0.5, 0.3);
    SLCoefficient slc = sl_coefficient(p);
    HoloLift lift = initial_lift(p, Complex(0.5, 0.5));
    PathPlan seg;
    seg.vertices = {Complex(0.5, 0.5), Complex(0.5, 0.1)};
    HoloLift moved = continue_lift(lift, seg, slc);
    HoloLift direct = initial_lift(p, Complex(0.5, 0.1));
    CHECK((moved.U - direct.U).max_abs() < 1e-8);
}

TEST_CASE("determinant is conserved along a random walk") {
    HGParams p(0.25, 0.7, 0.6);
    SLCoefficient slc = sl_coefficient(p);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(-0.5, 1.5), uy(0.1, 1.2);
    HoloLift lift = initial_lift(p, Complex(0.5, 0.5));
    for (int k = 0; k < 100; ++k) {
        Complex to(ux(rng), uy(rng));
        lift = continue_lift_segment(lift, to, slc);
    }
    CHECK(std::abs(lift.U.det() - Complex(1.0)) <= 1e-9);
}

TEST_CASE("monodromy eigenvalue ratio around 0 matches the local exponents") {
    // mu0 = 1/2: eigenvalue ratio e^{2 pi i mu0} = -1.
    Mat2 m = monodromy(HGParams(0.5, 0.5, 0.5), Complex(0.5, 0.5), 0);
    CHECK(std::abs(m.det() - Complex(1.0)) < 1e-9);
    auto ev = eig(m);
    Complex ratio = ev[0] / ev[1];
    CHECK(std::abs(ratio + Complex(1.0)) < 1e-7);
}

TEST_CASE("monodromy traces are 2 cos(pi mu) in absolute value") {
    for (auto [a, b, c] : {std::array<double, 3>{0.3, 0.6, 0.8},
                           std::array<double, 3>{0.25, 0.45, 0.7}}) {
        HGParams p(a, b, c);
        Mat2 m0 = monodromy(p, Complex(0.5, 0.5), 0);
        Mat2 m1 = monodromy(p, Complex(0.5, 0.5), 1);
        CHECK(std::abs(std::abs(m0.trace()) - 2.0 * std::abs(std::cos(kPi * p.mu0))) < 1e-6);
        CHECK(std::abs(std::abs(m1.trace()) - 2.0 * std::abs(std::cos(kPi * p.mu1))) < 1e-6);
    }
}

TEST_CASE("derived equation has the same monodromy trace") {
    // Transport w'' = qbar w around the same loop with a test-local RK4 and
    // compare |trace| (the representations agree projectively).
    HGParams p(0.5, 0.5, 0.2);
    SLCoefficient slc = sl_coefficient(p);
    Complex base(0.5, 0.5);
    Mat2 m = monodromy(p, base, 0);

    // Loop matching the implementation's geometry: radial entry, circle, exit.
    std::vector<Complex> verts;
    double r = 0.4;
    for (Complex root : slc.numerator_roots()) r = std::min(r, 0.8 * std::abs(root));
    r = std::min(r, 0.9 * std::abs(base));
    Complex dir = base / std::abs(base);
    verts.push_back(base);
    verts.push_back(r * dir);
    const int n = 256;
    double a0 = std::arg(dir);
    for (int k = 1; k <= n; ++k)
        verts.push_back(r * std::exp(Complex(0.0, a0 + 2.0 * kPi * k / n)));
    verts.push_back(base);

    Mat2 W = Mat2::identity();
    auto rhs = [&](const Mat2& u, Complex x, Complex dx) {
        Complex qb = derived_sl_coefficient_at(slc, x);
        return Mat2{u.a12 * dx, qb * u.a11 * dx, u.a22 * dx, qb * u.a21 * dx};
    };
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        Complex aseg = verts[i], dx = verts[i + 1] - verts[i];
        int steps = std::max(64, static_cast<int>(std::abs(dx) / 1e-4));
        double h = 1.0 / steps;
        for (int k = 0; k < steps; ++k) {
            double tau = k * h;
            Mat2 k1 = rhs(W, aseg + tau * dx, dx);
            Mat2 k2 = rhs(W + (h / 2.0) * k1, aseg + (tau + h / 2.0) * dx, dx);
            Mat2 k3 = rhs(W + (h / 2.0) * k2, aseg + (tau + h / 2.0) * dx, dx);
            Mat2 k4 = rhs(W + h * k3, aseg + (tau + h) * dx, dx);
            W = W + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    CHECK(std::abs(std::abs(W.trace()) - std::abs(m.trace())) < 1e-6);
}

TEST_CASE("lift ratio reproduces the series ratio at random points") {
    HGParams p(0.3, 0.6, 0.8);
    SLCoefficient slc = sl_coefficient(p);
    HoloLift base = initial_lift(p, Complex(0.5, 0.5));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(-0.4, 0.6), ui(0.05, 0.45);
    int done = 0;
    while (done < 50) {
        Complex x(ur(rng), ui(rng));
        if (std::abs(x) > 0.65) continue;
        ++done;
        PathPlan plan = plan_path(base.x, x, slc, 0.02);
        HoloLift lf = continue_lift(base, plan, slc);
        Complex ratio = lf.schwarz_ratio().value();
        auto f0 = specfun::hyp2f1(p.a, p.b, p.c, x);
        auto f1 = specfun::hyp2f1(p.a - p.c + 1.0, p.b - p.c + 1.0, 2.0 - p.c, x);
        Complex want = std::pow(x, 1.0 - p.c) * f1.value / f0.value;
        CHECK(std::abs(ratio - want) < 1e-8 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("homotopic paths give the same continuation") {
    HGParams p(0.5, 0.5, 0.45);
    SLCoefficient slc = sl_coefficient(p);
    HoloLift base = initial_lift(p, Complex(0.5, 0.5));
    PathPlan a, b;
    a.vertices = {Complex(0.5, 0.5), Complex(-0.4, 0.8), Complex(-0.6, 0.3)};
    b.vertices = {Complex(0.5, 0.5), Complex(0.2, 0.2), Complex(-0.2, 0.25), Complex(-0.6, 0.3)};
    HoloLift la = continue_lift(base, a, slc);
    HoloLift lb = continue_lift(base, b, slc);
    CHECK((la.U - lb.U).max_abs() < 1e-7);
}

TEST_CASE("path planning") {
    SLCoefficient slc = sl_coefficient(HGParams(0.5, 0.5, 0.05));

    SUBCASE("unobstructed straight segment") {
        PathPlan plan = plan_path(Complex(0.3, 0.5), Complex(0.7, 0.6), slc, 0.02);
        CHECK(plan.vertices.size() == 2);
        CHECK(plan.clearance > 0.02);
    }

    SUBCASE("detours above the real roots of q") {
        // Roots at 0.5 +- sqrt(0.1525) sit on the axis for c = 0.05.
        PathPlan plan = plan_path(Complex(0.1, 0.01), Complex(0.9, 0.01), slc, 0.012);
        CHECK(plan.vertices.size() > 2);
        // Brute-force distance check along densely sampled polyline.
        double worst = 1e9;
        auto roots = slc.numerator_roots();
        for (std::size_t i = 0; i + 1 < plan.vertices.size(); ++i)
            for (int k = 0; k <= 50; ++k) {
                Complex z = plan.vertices[i] +
                            (plan.vertices[i + 1] - plan.vertices[i]) * (k / 50.0);
                for (Complex o : {Complex(0.0), Complex(1.0), roots[0], roots[1]})
                    worst = std::min(worst, std::abs(z - o));
            }
        CHECK(worst >= plan.clearance - 1e-9);
        CHECK(plan.clearance > 0.01);
    }

    SUBCASE("detours above the double root at 1/2") {
        SLCoefficient dbl = sl_coefficient(HGParams(0.5, 0.5, 1.0 - std::sqrt(3.0) / 2.0));
        PathPlan plan = plan_path(Complex(0.1, 0.01), Complex(0.9, 0.01), dbl, 0.02);
        CHECK(plan.vertices.size() > 2);
        CHECK(path_clearance(plan.vertices, dbl) > 0.015);
    }

    SUBCASE("endpoint clearance violations") {
        CHECK_THROWS_AS(plan_path(Complex(0.005, 0.0), Complex(0.5, 0.5), slc, 0.02), PathError);
        CHECK_THROWS_AS(plan_path(Complex(0.5, 0.5), Complex(1.0, 0.01), slc, 0.02), PathError);
        CHECK_THROWS_AS(plan_path(Complex(0.5, 0.5), Complex(0.6, 0.5), slc, -1.0), PathError);
    }
}
