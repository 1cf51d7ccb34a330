#include <cmath>
#include <random>

#include "doctest.h"
#include "flatfront/hyp3.hpp"
#include "flatfront/maps.hpp"

using namespace flatfront;
using namespace flatfront::maps;

namespace {

PathPlan straight_plan(const HGParams& p, Complex to, double clearance = 0.02) {
    SLCoefficient slc = hgode::sl_coefficient(p);
    return hgode::plan_path(hgode::default_base_point(), to, slc, clearance);
}

// Cubic roots of x^3 + 3t x + 3z = 0 via Cardano (test-side oracle for the
// argument-principle preimage counter).
std::vector<Complex> cardano_preimages(double t, Complex z) {
    Complex p(3.0 * t), q(3.0 * z);
    Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u3 = -q / 2.0 + disc;
    if (std::abs(u3) < 1e-14) u3 = -q / 2.0 - disc;
    Complex u = std::pow(u3, 1.0 / 3.0);
    std::vector<Complex> roots;
    Complex omega = std::polar(1.0, 2.0 * kPi / 3.0);
    Complex w = 1.0;
    for (int k = 0; k < 3; ++k) {
        Complex uk = u * w;
        roots.push_back(uk - p / (3.0 * uk));
        w *= omega;
    }
    return roots;
}

int oracle_count_hemidisc(double t, Complex z) {
    int n = 0;
    for (Complex r : cardano_preimages(t, z))
        if (std::abs(r) < 1.0 && r.imag() > 0.0) ++n;
    return n;
}

// Composite formula via numerical derivatives of a synthetic inverse x(z),
// five-point stencils.
template <typename Fn>
Complex composite_from_inverse(Fn&& x, Complex z, double h = 1e-3) {
    Complex f2 = x(z + 2.0 * h), f1 = x(z + h), f0 = x(z);
    Complex fm1 = x(z - h), fm2 = x(z - 2.0 * h);
    Complex xdot = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
    Complex xddot = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    return z + 2.0 * xdot / xddot;
}

}  // namespace

TEST_CASE("discriminant of (1/2,1/2,c) is 4(1-c)^2 - 3") {
    for (double c : {0.9, 0.5, 0.2, 0.05}) {
        RamificationReport rep = ramification_report(HGParams(0.5, 0.5, c));
        CHECK(std::abs(rep.discriminant - (4.0 * (1.0 - c) * (1.0 - c) - 3.0)) < 1e-14);
    }
    RamificationReport r2 = ramification_report(HGParams(0.5, 0.5, 0.2));
    CHECK(r2.klass == RootClass::TwoComplexConjugate);
    CHECK(std::abs(r2.roots[0] - Complex(0.5, std::sqrt(0.11))) < 1e-12);
    CHECK(std::abs(r2.roots[1] - Complex(0.5, -std::sqrt(0.11))) < 1e-12);
    CHECK(r2.root_orders[0] == 2);

    RamificationReport r3 = ramification_report(HGParams(0.5, 0.5, 0.05));
    CHECK(r3.klass == RootClass::TwoReal);
    CHECK(std::abs(r3.roots[0] - Complex(0.5 - std::sqrt(0.1525))) < 1e-12);
    CHECK(std::abs(r3.roots[1] - Complex(0.5 + std::sqrt(0.1525))) < 1e-12);

    RamificationReport r4 = ramification_report(HGParams(0.5, 0.5, 1.0 - std::sqrt(3.0) / 2.0));
    CHECK(r4.klass == RootClass::OneDouble);
    CHECK(r4.root_orders[0] == 3);
    CHECK(std::abs(r4.roots[0] - Complex(0.5)) < 1e-7);
}

TEST_CASE("discriminant equals the symmetric-function expression") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> uni(-0.999, 0.999);
    for (int k = 0; k < 1000; ++k) {
        double m0 = uni(rng), m1 = uni(rng), mi = uni(rng);
        // Recover (a,b,c) from the exponent differences.
        double c = 1.0 - m0;
        double b = (c - m1 + mi) / 2.0, a = b - mi;
        HGParams p = HGParams::make_relaxed(a, b, c);
        RamificationReport rep = ramification_report(p);
        double D2 = (rep.s + 1.0) * (rep.s + 1.0) - 4.0 * (rep.t + 1.0);
        CHECK(std::abs(rep.discriminant - D2) <= 1e-12);
    }
}

TEST_CASE("st region classification") {
    CHECK(st_region(1.5, 9.0 / 16.0) == StRegion::OnDZero);
    CHECK(st_region(0.0, 0.0) == StRegion::InteriorDNegative);
    double s = 5.0 / 3.0;
    CHECK(st_region(s, s * s / 3.0 + 0.01) == StRegion::OutsideDomain);
    CHECK(st_region(2.5, 2.05) == StRegion::InteriorDPositive);
    CHECK(st_region(2.5, 1.9) == StRegion::OutsideDomain);   // below t = 2s-3
    CHECK(st_region(1.5, 0.45) == StRegion::OutsideDomain);  // below t = s-1
    CHECK(st_region(-0.1, 0.0) == StRegion::OutsideDomain);
}

TEST_CASE("schwarz map is real on (0,1)") {
    HGParams p(0.5, 0.5, 0.7);
    for (double x : {0.2, 0.5, 0.8}) {
        Complex s = schwarz(p, Complex(x), straight_plan(p, Complex(x)));
        CHECK(std::abs(s.imag()) < 1e-9);
    }
}

TEST_CASE("schwarz map is injective on a sample grid") {
    HGParams p(0.3, 0.6, 0.8);
    MapEvaluator ev(p);
    std::vector<Complex> vals;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            Complex x(-0.8 + 2.4 * i / 19.0, 0.08 + 1.1 * j / 19.0);
            vals.push_back(ev.schwarz_at(x).value());
        }
    double closest = 1e9;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            closest = std::min(closest, std::abs(vals[i] - vals[j]));
    CHECK(closest > 1e-9);
}

TEST_CASE("schwarz boundary values agree from both sides") {
    HGParams p(0.5, 0.5, 0.45);
    const double d = 1e-4;
    for (double x : {0.3, 0.6}) {
        Complex above = schwarz(p, Complex(x, d), straight_plan(p, Complex(x, d)));
        Complex below = schwarz(p, Complex(x, -d), straight_plan(p, Complex(x, -d)));
        CHECK(chordal_distance(above, below) < 1e-3);
    }
}

TEST_CASE("derived schwarz agrees with schwarz at the punctures") {
    HGParams p(0.5, 0.5, 0.35);
    for (Complex dir : {std::polar(1.0, 1.0), std::polar(1.0, 2.0)}) {
        double prev = 1e9;
        for (double eps : {1e-3, 1e-4}) {
            Complex x = eps * dir;
            PathPlan plan = straight_plan(p, x, std::min(0.02, 0.4 * eps));
            Complex s = schwarz(p, x, plan);
            Complex ds = derived_schwarz(p, x, plan);
            double dist = chordal_distance(s, ds);
            CHECK(dist < prev);
            prev = dist;
        }
        CHECK(prev < 2e-2);
    }
    // Same at the puncture 1.
    double prev = 1e9;
    for (double eps : {1e-3, 1e-4}) {
        Complex x = 1.0 + eps * std::polar(1.0, 2.4);
        PathPlan plan = straight_plan(p, x, std::min(0.02, 0.4 * eps));
        double dist = chordal_distance(schwarz(p, x, plan), derived_schwarz(p, x, plan));
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 2e-2);
}

TEST_CASE("derived schwarz matches S - 2 S'^2 / S'' by finite differences") {
    HGParams p(0.5, 0.5, 0.3);
    MapEvaluator ev(p);
    const double h = 1e-3;
    int checked = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j) {
            Complex x(0.15 + 0.14 * i, 0.25 + 0.15 * j);
            // Five-point stencils on the normalized S.
            Complex f2 = ev.normalized_schwarz(x + 2.0 * h), f1 = ev.normalized_schwarz(x + h);
            Complex f0 = ev.normalized_schwarz(x);
            Complex fm1 = ev.normalized_schwarz(x - h), fm2 = ev.normalized_schwarz(x - 2.0 * h);
            Complex d1 = (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
            Complex d2 = (-f2 + 16.0 * f1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
            Complex composite = f0 - 2.0 * d1 * d1 / d2;
            Complex ds = ev.normalized_derived(x);
            CHECK(std::abs(composite - ds) < 1e-6);
            ++checked;
        }
    CHECK(checked == 30);
}

TEST_CASE("derived schwarz doubles angles at a simple root") {
    HGParams p(0.5, 0.5, 0.2);
    MapEvaluator ev(p);
    Complex alpha(0.5, std::sqrt(0.11));
    const double eps = 1e-3;
    Complex center = ev.derived_at(alpha).value();
    bool first = true;
    double prev_arg = 0.0, prev_theta = 0.0;
    for (double theta : {0.0, kPi / 4.0, kPi / 2.0}) {
        Complex v = ev.derived_at(alpha + eps * std::polar(1.0, theta)).value() - center;
        double a = std::arg(v);
        if (!first) {
            double expected = 2.0 * (theta - prev_theta);
            double got = a - prev_arg;
            while (got - expected > kPi) got -= 2.0 * kPi;
            while (got - expected < -kPi) got += 2.0 * kPi;
            CHECK(std::abs(got - expected) < 0.02);
        }
        first = false;
        prev_arg = a;
        prev_theta = theta;
    }
}

TEST_CASE("derived schwarz triples angles at the double root") {
    HGParams p(0.5, 0.5, 1.0 - std::sqrt(3.0) / 2.0);
    MapEvaluator ev(p);
    Complex alpha(0.5, 0.0);
    const double eps = 1e-2;
    Complex c0 = ev.derived_at(alpha + Complex(0.0, 1e-7)).value();
    bool first = true;
    double prev_arg = 0.0, prev_theta = 0.0;
    for (double theta : {kPi / 6.0, kPi / 3.0, kPi / 2.0}) {
        Complex v = ev.derived_at(alpha + eps * std::polar(1.0, theta)).value() - c0;
        double a = std::arg(v);
        if (!first) {
            double expected = 3.0 * (theta - prev_theta);
            double got = a - prev_arg;
            while (got - expected > kPi) got -= 2.0 * kPi;
            while (got - expected < -kPi) got += 2.0 * kPi;
            CHECK(std::abs(got - expected) < 0.05);
        }
        first = false;
        prev_arg = a;
        prev_theta = theta;
    }
}

TEST_CASE("normalization fixes 0, 1 and infinity") {
    HGParams p(0.75, 0.75, 0.55);
    NormalizedMapPair nm = normalize_maps(p);
    CHECK(std::abs(nm.apply(Complex(0.0))) < 1e-14);
    CHECK(std::abs(nm.apply(nm.S_T_1) - Complex(1.0)) < 1e-12);
    ProjectivePoint inf_img = nm.apply(nm.S_T_inf);
    CHECK(std::abs(inf_img.den) < 1e-12 * std::abs(inf_img.num));
}

TEST_CASE("normalization closed form matches the ODE continuation") {
    // Light version of the acceptance run: continue u1/u0 toward x = 1-1e-3.
    HGParams p(0.75, 0.75, 0.55);
    SLCoefficient slc = hgode::sl_coefficient(p);
    hgode::HoloLift lift = hgode::initial_lift(p, hgode::default_base_point());
    PathPlan plan = hgode::plan_path(lift.x, Complex(1.0 - 1e-3, 0.0), slc, 2e-4);
    hgode::HoloLift end = hgode::continue_lift(lift, plan, slc);
    Complex ratio = end.schwarz_ratio().value();
    NormalizedMapPair nm = normalize_maps(p);
    CHECK(std::abs(ratio - nm.S_T_1) / std::abs(nm.S_T_1) < 2e-3);
}

TEST_CASE("normalization errors name the failed inequality") {
    CHECK_THROWS_WITH_AS(normalize_maps(HGParams(1.0 / 6.0, -1.0 / 6.0, 0.5)),
                         doctest::Contains("a + b - c > 0"), ParameterError);
}

TEST_CASE("normalized map is a<->b invariant despite the asymmetric formula") {
    HGParams p(0.3, 0.6, 0.8);
    NormalizedMapPair nm1 = normalize_maps(p);
    NormalizedMapPair nm2 = normalize_maps(p.swapped_ab());
    MapEvaluator ev(p);
    Complex x(0.35, 0.4);
    ProjectivePoint raw = ev.schwarz_at(x);
    CHECK(std::abs(nm1.apply(raw).value() - nm2.apply(raw).value()) < 1e-10);
}

TEST_CASE("confluence model basics") {
    auto r1 = confluence_ramification_points(0.25);
    CHECK(std::abs(r1[0] - Complex(0.0, 0.5)) < 1e-15);
    CHECK(std::abs(r1[1] - Complex(0.0, -0.5)) < 1e-15);
    auto r2 = confluence_ramification_points(-0.25);
    CHECK(std::abs(r2[0] - Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(r2[1] - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(confluence_model(0.0, Complex(1.0)) - Complex(-1.0 / 3.0)) < 1e-15);
}

TEST_CASE("confluence preimage counts match the cubic oracle") {
    // Probes inside the image of the hemi-disc; the image is a thin lens
    // around the origin (critical values sit at -+ i/12 for t = 1/4).
    const Complex probes[] = {Complex(0.1, 0.05), Complex(0.02, -0.1), Complex(0.05, -0.05),
                              Complex(-0.05, -0.05), Complex(0.12, -0.06)};
    const int expect_pos[] = {1, 2, 2, 2, 2};   // t = +1/4
    const int expect_neg[] = {1, 2, 2, 2, 1};   // t = -1/4
    for (double t : {0.25, -0.25}) {
        const int* expect = t > 0 ? expect_pos : expect_neg;
        for (int i = 0; i < 5; ++i) {
            int got = confluence_preimage_count(t, probes[i]);
            CHECK(got == oracle_count_hemidisc(t, probes[i]));
            CHECK(got == expect[i]);
        }
    }
}

TEST_CASE("winding of the derived map along (0,1)") {
    SUBCASE("one extra full turn for D < 0") {
        WindingRecord w = winding_analysis(HGParams(0.5, 0.5, 0.5), 1200);
        CHECK(std::abs(w.extra_turns) == 1);
        CHECK(std::abs(w.residual) < 0.05);
        CHECK((w.delta_theta_DS > 0) == (w.delta_theta_S > 0));
        CHECK(w.turning_points.empty());
    }
    SUBCASE("two turning points for D > 0") {
        WindingRecord w = winding_analysis(HGParams(0.5, 0.5, 0.05), 2000);
        REQUIRE(w.turning_points.size() == 2);
        CHECK(std::abs(w.turning_points[0] - (0.5 - std::sqrt(0.1525))) < 1e-3);
        CHECK(std::abs(w.turning_points[1] - (0.5 + std::sqrt(0.1525))) < 1e-3);
    }
    SUBCASE("dihedral case runs with the general normalizer") {
        WindingRecord w = winding_analysis(HGParams(1.0 / 6.0, -1.0 / 6.0, 0.5), 1000);
        CHECK(std::abs(w.extra_turns) == 1);
        CHECK(std::abs(w.residual) < 0.1);
    }
}

TEST_CASE("composite map agrees with the derived map through the lift") {
    HGParams p(0.5, 0.5, 0.3);
    MapEvaluator ev(p);
    for (Complex x : {Complex(0.3, 0.4), Complex(0.6, 0.3), Complex(0.45, 0.7),
                      Complex(0.2, 0.25), Complex(0.75, 0.5)}) {
        Complex z = ev.normalized_schwarz(x);
        Complex f = ev.composite_f(z);
        Complex ds = ev.normalized_derived(x);
        CHECK(std::abs(f - ds) < 1e-6);
    }
}

TEST_CASE("composite formula on synthetic inverse functions") {
    // x(z) = z^2 gives f(z) = 3z identically.
    auto sq = [](Complex z) { return z * z; };
    Complex z0(0.7, 0.3);
    CHECK(std::abs(composite_from_inverse(sq, z0) - 3.0 * z0) < 1e-6);

    // Periodic x(z) = e^{2 pi i z} is invariant under z -> z+1, so f commutes
    // with the translation (covariance under the unipotent Moebius map).
    auto per = [](Complex z) { return std::exp(2.0 * kPi * Complex(0.0, 1.0) * z); };
    Complex z1(0.23, 0.11);
    Complex lhs = composite_from_inverse(per, z1 + 1.0);
    Complex rhs = composite_from_inverse(per, z1) + 1.0;
    CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("derived image of the outer intervals stays on the schwarz arcs") {
    // The derived map reparametrizes each outer interval's arc, so compare
    // against the image of the full interval sampled projectively.
    HGParams p(0.5, 0.5, 0.5);  // D < 0
    NormalizedMapPair nm = normalize_maps_general(p);
    const double d = 1e-5;
    const int narc = 600;

    for (int side = 0; side < 2; ++side) {
        std::vector<std::vector<Complex>> rows(1);
        auto param = [&](double u) {
            // (0,1) -> (-inf,0) resp. (1,inf), densest near the finite ends
            return side == 0 ? Complex(-u / (1.0 - u), d) : Complex(1.0 / u, d);
        };
        for (int k = 1; k < narc; ++k) rows[0].push_back(param(k / static_cast<double>(narc)));
        LiftField field(p, rows);
        const auto& row = field.rows()[0];

        std::vector<hyp3::BallPoint> arc;
        for (const auto& lf : row.lifts)
            arc.push_back(hyp3::chi_boundary(nm.apply(lf.schwarz_ratio())));

        // Probe the derived image at interior samples of the same sweep.
        for (std::size_t k = narc / 10; k + narc / 10 < row.lifts.size(); k += narc / 10) {
            hyp3::BallPoint dsb = hyp3::chi_boundary(nm.apply(row.lifts[k].derived_ratio()));
            double best = 1e9;
            for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
                double ax = arc[i].x, ay = arc[i].y, az = arc[i].z;
                double vx = arc[i + 1].x - ax, vy = arc[i + 1].y - ay, vz = arc[i + 1].z - az;
                double wx = dsb.x - ax, wy = dsb.y - ay, wz = dsb.z - az;
                double len2 = vx * vx + vy * vy + vz * vz;
                double tp = len2 > 0 ? std::clamp((wx * vx + wy * vy + wz * vz) / len2, 0.0, 1.0)
                                     : 0.0;
                double dx = wx - tp * vx, dy = wy - tp * vy, dz = wz - tp * vz;
                best = std::min(best, std::sqrt(dx * dx + dy * dy + dz * dz));
            }
            CHECK(best < 1e-3);
        }
    }
}
