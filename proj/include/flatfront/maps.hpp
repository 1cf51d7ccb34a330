#pragma once

// Schwarz map S, derived Schwarz map DS, their Gamma-function normalization,
// ramification classification by the discriminant of q's numerator, the
// (s,t) region test, the cubic confluence model, winding analysis along
// (0,1), and the composite map f = DS o S^{-1}.

#include <functional>
#include <optional>
#include <vector>

#include "flatfront/hgode.hpp"
#include "flatfront/numeric.hpp"
#include "flatfront/params.hpp"

namespace flatfront::maps {

using hgode::HoloLift;
using hgode::PathPlan;
using hgode::SLCoefficient;

// ---------------------------------------------------------------------------
// Ramification classification
// ---------------------------------------------------------------------------

enum class RootClass { TwoComplexConjugate, OneDouble, TwoReal };

struct RamificationReport {
    double discriminant;  // D = n1^2 - 4 n2 n0
    double s, t;          // symmetric functions of the squared exponent differences
    std::array<Complex, 2> roots;
    RootClass klass;
    std::array<int, 2> root_orders;  // ramification index of DS at each root
};

RamificationReport ramification_report(const HGParams& p);

enum class StRegion { InteriorDNegative, InteriorDPositive, OnDZero, OutsideDomain };

// Membership of (s,t) in the admissible region bounded by t = s^2/3 above
// and max(0, s-1, 2s-3) below, classified by the sign of (s+1)^2 - 4(t+1).
StRegion st_region(double s, double t);

// ---------------------------------------------------------------------------
// Map evaluation through the lift
// ---------------------------------------------------------------------------

// S_T realization u1/u0 of the Schwarz map, continued along `path` from its
// first vertex (where series initial data is taken).
ProjectivePoint schwarz_projective(const HGParams& p, Complex x, const PathPlan& path);
Complex schwarz(const HGParams& p, Complex x, const PathPlan& path);

// DS_T realization u1'/u0' from the same lift.
ProjectivePoint derived_schwarz_projective(const HGParams& p, Complex x, const PathPlan& path);
Complex derived_schwarz(const HGParams& p, Complex x, const PathPlan& path);

// ---------------------------------------------------------------------------
// Normalization (S(0), S(1), S(inf)) -> (0, 1, inf)
// ---------------------------------------------------------------------------

// Connection values of the S_T realization: S_T(1) and S_T(inf) from the
// Gamma-function formulas. S_T(1) uses the branch of the connection matrix
// applicable to the sign of a+b-c; S_T(inf) may be the point at infinity
// when a Gamma factor sits at a pole.
struct ConnectionValues {
    Complex sT1;
    ProjectivePoint sTinf;
};
ConnectionValues connection_values(const HGParams& p);

struct NormalizedMapPair {
    HGParams params;
    Complex S_T_1;
    ProjectivePoint S_T_inf;
    Mobius normalizer;  // sends (0, S_T_1, S_T_inf) to (0, 1, inf)

    Complex apply(Complex w) const { return normalizer.apply(w); }
    ProjectivePoint apply(const ProjectivePoint& w) const { return normalizer.apply(w); }
};

// Normalizer per the closed formulas; preconditions a+b-c > 0 and 0 < c < 2
// are enforced with named-inequality errors. (S_T(inf) is evaluated with
// a <= b ordered internally, matching the symmetry of the left-hand side.)
NormalizedMapPair normalize_maps(const HGParams& p);

// Same normalizer but accepting either sign of a+b-c (plumbing for figure
// frames and winding analysis of triples like (1/6,-1/6,1/2)).
NormalizedMapPair normalize_maps_general(const HGParams& p);

// ---------------------------------------------------------------------------
// Confluence model  phi_t(x) = -(x^3/3 + t x)
// ---------------------------------------------------------------------------

Complex confluence_model(double t, Complex x);
// Ramification points: +-i sqrt(t) for t>0, double 0 for t=0, +-sqrt(-t) for t<0.
std::array<Complex, 2> confluence_ramification_points(double t);
// Number of preimages of z in the open upper unit hemi-disc, computed by the
// argument principle along the hemi-disc boundary.
int confluence_preimage_count(double t, Complex z);

// ---------------------------------------------------------------------------
// Winding analysis of DS along (0,1)
// ---------------------------------------------------------------------------

struct WindingRecord {
    double delta_theta_S;          // anchored angular progression of S over (0,1)
    double delta_theta_DS;         // same for DS
    int extra_turns;               // round((delta_DS - delta_S) / 2 pi)
    double residual;               // delta_DS - delta_S - 2 pi extra_turns
    std::vector<double> turning_points;  // direction reversals of DS, as x in (0,1)
};

WindingRecord winding_analysis(const HGParams& p, int samples_on_01);

// ---------------------------------------------------------------------------
// Cached evaluator and the composite map f(z) = z + 2 xdot/xddot
// ---------------------------------------------------------------------------

// Continuation cache over the closed upper half plane: lifts are transported
// once from the base point and reused; evaluation off cached points continues
// from the nearest cache entry.
class MapEvaluator {
  public:
    explicit MapEvaluator(const HGParams& p);

    const HGParams& params() const { return params_; }
    const SLCoefficient& coefficient() const { return slc_; }

    // Lift at x, continued within the closed upper half plane.
    HoloLift lift_at(Complex x) const;

    ProjectivePoint schwarz_at(Complex x) const;
    ProjectivePoint derived_at(Complex x) const;

    // Normalized jet of S at x: value, dS/dx, d2S/dx2 (exact from the ODE
    // state; the SL form supplies second derivatives for free).
    struct Jet {
        Complex S, dS, ddS;
    };
    Jet normalized_jet(Complex x) const;
    Complex normalized_schwarz(Complex x) const;
    Complex normalized_derived(Complex x) const;

    const NormalizedMapPair& normalization() const { return norm_; }

    // f(z) = z - 2 S'^2/S'' at x = S^{-1}(z), inverted by Newton iteration
    // seeded from a precomputed grid over the upper half plane.
    Complex composite_f(Complex z) const;

  private:
    void ensure_seeds() const;

    HGParams params_;
    SLCoefficient slc_;
    HoloLift base_;
    NormalizedMapPair norm_;
    mutable std::vector<std::pair<Complex, Complex>> seeds_;  // (x, S(x))
    mutable std::vector<HoloLift> seed_lifts_;
};

// One-off convenience wrapper (constructs an evaluator; prefer MapEvaluator
// when calling repeatedly).
Complex composite_map_f(const HGParams& p, Complex z);

// ---------------------------------------------------------------------------
// Lift field over a set of sample points (mesh/figure plumbing)
// ---------------------------------------------------------------------------

// Continues the lift over a row-major grid of sample points in the closed
// upper half plane, bridging exclusion gaps by arcs above the punctures.
// Rows are processed in parallel once the leading column is transported.
class LiftField {
  public:
    struct Row {
        std::vector<Complex> points;   // left to right
        std::vector<HoloLift> lifts;   // same order
    };

    LiftField(const HGParams& p, const std::vector<std::vector<Complex>>& rows,
              Complex base = hgode::default_base_point());

    const std::vector<Row>& rows() const { return rows_; }
    const SLCoefficient& coefficient() const { return slc_; }

  private:
    SLCoefficient slc_;
    std::vector<Row> rows_;
};

}  // namespace flatfront::maps
