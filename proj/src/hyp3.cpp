#include "flatfront/hyp3.hpp"

#include <cmath>

namespace flatfront::hyp3 {

Vec4 hermitian_to_minkowski(const Mat2& h) {
    return {0.5 * (h.a11.real() + h.a22.real()), h.a12.real(), h.a12.imag(),
            0.5 * (h.a11.real() - h.a22.real())};
}

Mat2 minkowski_to_hermitian(const Vec4& v) {
    Complex off(v.x1, v.x2);
    return {Complex(v.x0 + v.x3), off, std::conj(off), Complex(v.x0 - v.x3)};
}

HPoint HPoint::from_hermitian(const Mat2& h) { return {h, hermitian_to_minkowski(h)}; }

HPoint HPoint::from_minkowski(const Vec4& v) { return {minkowski_to_hermitian(v), v}; }

namespace {

void require_unimodular(const HoloLift& lift) {
    if (std::abs(lift.U.det() - Complex(1.0)) > 1e-6)
        throw ParameterError("hyp3: lift is not unimodular");
}

}  // namespace

HPoint hs_point(const HoloLift& lift) {
    require_unimodular(lift);
    return HPoint::from_hermitian(lift.U * lift.U.conj_transpose());
}

Vec4 unit_normal(const HoloLift& lift) {
    require_unimodular(lift);
    Mat2 j{1.0, 0.0, 0.0, -1.0};
    return hermitian_to_minkowski(lift.U * j * lift.U.conj_transpose());
}

HoloLift parallel_lift(const HoloLift& lift, double t) {
    require_unimodular(lift);
    Mat2 d{std::exp(t / 2.0), 0.0, 0.0, std::exp(-t / 2.0)};
    return HoloLift{lift.x, lift.U * d};
}

double induced_metric_det(const SLCoefficient& slc, Complex x, double t) {
    double qt = std::exp(t) * std::abs(hgode::q_at(slc, x));
    double d = 1.0 - qt * qt;
    return d * d;
}

double singular_time(const SLCoefficient& slc, Complex x) {
    double aq = std::abs(hgode::q_at(slc, x));
    if (aq == 0.0) throw PoleError("singular_time: umbilic point, r diverges");
    return -std::log(aq);
}

HPoint caustic_point(const HoloLift& lift, const SLCoefficient& slc) {
    double aq = std::abs(hgode::q_at(slc, lift.x));
    if (aq <= kUmbilicRadius)
        throw PoleError("caustic_point: umbilic proximity (|q| <= 1e-6)");
    return hs_point(parallel_lift(lift, -std::log(aq)));
}

HPoint caustic_point(const HGParams& p, Complex x, const PathPlan& path) {
    SLCoefficient slc = hgode::sl_coefficient(p);
    hgode::HoloLift lift = hgode::initial_lift(p, path.vertices.front());
    lift = hgode::continue_lift(lift, path, slc);
    if (std::abs(lift.x - x) > 1e-12)
        throw PathError("caustic_point: path does not end at the requested point");
    return caustic_point(lift, slc);
}

BallPoint chi_boundary(const ProjectivePoint& z) {
    double n2 = std::norm(z.num), d2 = std::norm(z.den);
    double s = n2 + d2;
    if (s == 0.0) throw ParameterError("chi: undefined projective point");
    Complex cross = z.num * std::conj(z.den);
    return {2.0 * cross.real() / s, 2.0 * cross.imag() / s, (n2 - d2) / s};
}

BallPoint chi_boundary(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        return {0.0, 0.0, 1.0};
    return chi_boundary(ProjectivePoint::from_value(z));
}

BallPoint ball_chart(const HPoint& pt) {
    const Vec4& v = pt.minkowski;
    double w = 1.0 + v.x0;
    return {v.x1 / w, v.x2 / w, v.x3 / w};
}

std::vector<BallPoint> normal_geodesic(const HoloLift& lift, double t0, double t1, int n) {
    if (n < 2) throw ParameterError("normal_geodesic: need at least two samples");
    HPoint phi = hs_point(lift);
    Vec4 nu = unit_normal(lift);
    std::vector<BallPoint> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        double t = t0 + (t1 - t0) * k / (n - 1.0);
        Vec4 v = std::cosh(t) * phi.minkowski + std::sinh(t) * nu;
        out.push_back(ball_chart(HPoint::from_minkowski(v)));
    }
    return out;
}

ProjectivePoint ideal_endpoint(const HoloLift& lift, int direction) {
    if (direction >= 0) return lift.value_column();
    return lift.derivative_column();
}

HPoint apply_isometry(const Mat2& a, const HPoint& p) {
    return HPoint::from_hermitian(a * p.hermitian * a.conj_transpose());
}

FrontSample front_sample(const HoloLift& lift, const SLCoefficient& slc, double t) {
    FrontSample s;
    s.x = lift.x;
    s.t = t;
    HoloLift lt = parallel_lift(lift, t);
    s.position = hs_point(lt);
    s.normal = unit_normal(lt);
    s.q_t = std::exp(t) * hgode::q_at(slc, lift.x);
    s.singular = std::abs(std::abs(s.q_t) - 1.0) < kSingularFlagTol;
    return s;
}

}  // namespace flatfront::hyp3
