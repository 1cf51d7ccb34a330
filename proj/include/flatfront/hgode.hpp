#pragma once

// SL-form coefficient q of the hypergeometric equation, the holomorphic-lift
// ODE  U' = U (0 q; 1 0),  analytic continuation along piecewise-linear
// paths, and monodromy around the punctures 0 and 1.

#include <array>
#include <vector>

#include "flatfront/numeric.hpp"
#include "flatfront/params.hpp"

namespace flatfront::hgode {

// q(x) = -(n2 x^2 + n1 x + n0) / (4 x^2 (1-x)^2) with real numerator
// coefficients determined by the exponent differences.
struct SLCoefficient {
    HGParams params;
    double n2, n1, n0;

    Complex numerator(Complex x) const { return (n2 * x + n1) * x + n0; }
    std::array<Complex, 2> numerator_roots() const;
};

SLCoefficient sl_coefficient(const HGParams& p);

// Rational form of q; throws PoleError at x in {0, 1}.
Complex q_at(const SLCoefficient& slc, Complex x);

// Partial-fraction form of the same function (used for identity checks).
Complex q_partial_fraction_at(const SLCoefficient& slc, Complex x);

// SL-form coefficient of the derived equation:
//   qbar = q + (1/4)(q'/q)^2 - (1/2)(q'/q)'.
// Singular at the punctures and at zeros of the numerator of q.
Complex derived_sl_coefficient_at(const SLCoefficient& slc, Complex x);

// Holomorphic lift. Rows are (u0, u0') and (u1, u1') in the SL gauge,
// det U = 1 after normalization.
struct HoloLift {
    Complex x;
    Mat2 U;

    // S_T realization u1/u0 as a projective point [u1 : u0].
    ProjectivePoint schwarz_ratio() const { return ProjectivePoint{U.a21, U.a11}.normalized(); }
    // DS_T realization u1'/u0'.
    ProjectivePoint derived_ratio() const { return ProjectivePoint{U.a22, U.a12}.normalized(); }
    // Columns as boundary points in the chart compatible with the Hermitian
    // model ([first row : second row]); these are the ideal endpoints of the
    // normal geodesics of the flat front.
    ProjectivePoint value_column() const { return ProjectivePoint{U.a11, U.a21}.normalized(); }
    ProjectivePoint derivative_column() const {
        return ProjectivePoint{U.a12, U.a22}.normalized();
    }
};

// Polyline in C respecting a clearance from the punctures {0,1} and the
// zeros of q's numerator. `clearance` records the measured minimum distance
// of the final polyline to that obstacle set.
struct PathPlan {
    std::vector<Complex> vertices;
    double clearance = 0.0;
};

inline Complex default_base_point() { return {0.5, 0.5}; }
constexpr double kDefaultClearance = 0.02;

// Series initial data at x0 (upper half plane, |x0| < 0.7): SL-gauge lift
// built from u0 = F(a,b,c;x), u1 = x^{1-c} F(a-c+1,b-c+1,2-c;x) with
// N = sqrt(x^c (1-x)^{a+b+1-c}) on principal branches, then column-scaled
// to det U = 1. Throws ParameterError when c is an integer (degenerate pair).
HoloLift initial_lift(const HGParams& p, Complex x0);

struct IntegratorOptions {
    double tol = 1e-12;      // local error tolerance of the embedded RK 5(4) pair
    double max_step = 0.1;   // cap on step length in domain units
    int max_steps = 400000;  // per segment
};

// Transport the lift along a straight segment to `to`.
HoloLift continue_lift_segment(const HoloLift& lift, Complex to, const SLCoefficient& slc,
                               const IntegratorOptions& opts = {});

// Transport along a full path plan; the plan must start at lift.x.
HoloLift continue_lift(const HoloLift& lift, const PathPlan& path, const SLCoefficient& slc,
                       const IntegratorOptions& opts = {});

// Straight path, detouring above obstacles by sampled arcs when the segment
// would come closer than `clearance`. Endpoints must clear the punctures.
PathPlan plan_path(Complex from, Complex to, const SLCoefficient& slc, double clearance);

// Measured minimum distance from the polyline to the punctures and the
// numerator roots.
double path_clearance(const std::vector<Complex>& vertices, const SLCoefficient& slc);

// Monodromy matrix M with U_after = U_before * M for a simple positive loop
// around the chosen puncture (0 or 1), based at `base`.
Mat2 monodromy(const HGParams& p, Complex base, int loop_around);

}  // namespace flatfront::hgode
