#pragma once

// Hyperbolic 3-space in two charts (positive Hermitian matrices and the
// upper hyperboloid in Minkowski 4-space, signature (-,+,+,+)), the flat
// front of the holomorphic lift, its unit normal, parallel family, induced
// metric, singular locus, caustic, and the ball-model boundary map chi.

#include <vector>

#include "flatfront/hgode.hpp"
#include "flatfront/numeric.hpp"

namespace flatfront::hyp3 {

using hgode::HoloLift;
using hgode::PathPlan;
using hgode::SLCoefficient;

struct Vec4 {
    double x0 = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;
};

// Pairing of signature (-,+,+,+): <u,v> = -u0 v0 + u1 v1 + u2 v2 + u3 v3.
inline double minkowski_dot(const Vec4& u, const Vec4& v) {
    return -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3;
}

inline Vec4 operator+(const Vec4& u, const Vec4& v) {
    return {u.x0 + v.x0, u.x1 + v.x1, u.x2 + v.x2, u.x3 + v.x3};
}
inline Vec4 operator*(double s, const Vec4& v) { return {s * v.x0, s * v.x1, s * v.x2, s * v.x3}; }

// Dictionary between Hermitian 2x2 matrices and Minkowski 4-vectors:
//   x0 = (h11 + h22)/2, x1 = Re h12, x2 = Im h12, x3 = (h11 - h22)/2,
// so that det H = -<x,x> and nu = diag(1,-1) is the unit z-direction.
Vec4 hermitian_to_minkowski(const Mat2& h);
Mat2 minkowski_to_hermitian(const Vec4& v);

// Point of H^3 kept in both charts; <minkowski, minkowski> = -1, x0 > 0.
struct HPoint {
    Mat2 hermitian;
    Vec4 minkowski;

    static HPoint from_hermitian(const Mat2& h);
    static HPoint from_minkowski(const Vec4& v);
};

struct BallPoint {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// H(x) = U(x) * conj-transpose(U(x)); requires det U = 1 (unimodularity is
// validated to 1e-6).
HPoint hs_point(const HoloLift& lift);

// nu = U diag(1,-1) conj-transpose(U); satisfies <nu,nu> = 1, <H,nu> = 0.
Vec4 unit_normal(const HoloLift& lift);

// U_t = U diag(e^{t/2}, e^{-t/2}); realizes the parallel front at distance t.
HoloLift parallel_lift(const HoloLift& lift, double t);

// Determinant of the first fundamental form of phi_t in real coordinates,
// equal to (1 - |q_t|^2)^2 with q_t = e^t q.
double induced_metric_det(const SLCoefficient& slc, Complex x, double t);

// r(x) = -log|q(x)|: the parallel distance at which the front through x is
// singular. Throws PoleError at umbilic points (q = 0).
double singular_time(const SLCoefficient& slc, Complex x);

// psi(x) = phi_{r(x)}(x), the caustic of the parallel family. Points with
// |q| <= 1e-6 are rejected as umbilic-proximate.
HPoint caustic_point(const HGParams& p, Complex x, const PathPlan& path);
HPoint caustic_point(const HoloLift& lift, const SLCoefficient& slc);

// Ideal boundary chart: chi(z) on the unit sphere; infinity -> (0,0,1).
BallPoint chi_boundary(Complex z);
BallPoint chi_boundary(const ProjectivePoint& z);

// Interior ball chart (x1,x2,x3)/(1+x0); its radial limits reproduce chi.
BallPoint ball_chart(const HPoint& pt);

// Samples of exp_{phi(x)}(t nu(x)) = (cosh t) phi + (sinh t) nu in the ball
// chart for n values of t spanning [t0, t1].
std::vector<BallPoint> normal_geodesic(const HoloLift& lift, double t0, double t1, int n);

// Ideal endpoints of the normal geodesic: direction +1 is the t -> +infinity
// limit [u0 : u1] (the Schwarz side), direction -1 the derivative column
// [u0' : u1'] (the derived side), in the chi-compatible chart.
ProjectivePoint ideal_endpoint(const HoloLift& lift, int direction);

// Isometry p -> a p conj-transpose(a).
HPoint apply_isometry(const Mat2& a, const HPoint& p);

// Per-vertex record of a sampled front.
struct FrontSample {
    Complex x;
    double t = 0.0;
    HPoint position;
    Vec4 normal;
    Complex q_t;
    bool singular = false;  // | |q_t| - 1 | < 1e-6
};

FrontSample front_sample(const HoloLift& lift, const SLCoefficient& slc, double t);

constexpr double kSingularFlagTol = 1e-6;
constexpr double kUmbilicRadius = 1e-6;

}  // namespace flatfront::hyp3
