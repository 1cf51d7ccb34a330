#pragma once

// Domain sampling over the upper half plane with puncture-exclusion discs,
// front meshes with singular-edge marking, boundary-curve images of the
// marked real segments, and deterministic OBJ / SVG / JSON writers.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flatfront/hyp3.hpp"
#include "flatfront/maps.hpp"
#include "flatfront/numeric.hpp"

namespace flatfront::meshio {

using hyp3::BallPoint;

struct GridSpec {
    double x0 = -1.0, x1 = 2.0;  // the paper-figure rectangle by default
    double y0 = 0.0, y1 = 1.25;
    int nu = 300, nv = 125;
    double exclusion = 0.02;
};

struct MarkedPoint {
    std::string label;
    Complex position;
};

struct DomainGrid {
    GridSpec spec;
    std::vector<Complex> vertices;      // compacted; row-major construction order
    std::vector<int> index;             // nu*nv -> vertex id or -1 (excluded)
    std::vector<std::array<int, 4>> quads;
    // Bottom-edge segments between consecutive marked points / punctures,
    // each an x-interval at y = y0.
    struct AxisSegment {
        std::string label;  // "AB", "BC", ...
        double xa, xb;
    };
    std::vector<AxisSegment> axis_segments;
    std::vector<MarkedPoint> marks;  // A..E present on the boundary

    int vertex_id(int i, int j) const { return index[static_cast<std::size_t>(j) * spec.nu + i]; }
};

DomainGrid build_grid(const GridSpec& spec);

struct VertexScalar {
    Complex x;
    double q_abs = 0.0;
    bool singular = false;
};

struct SurfaceMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> faces;            // 0-based
    std::vector<std::vector<int>> feature_polylines;  // 0-based vertex chains
    std::vector<VertexScalar> scalars;                // one per vertex
    double max_vertex_norm() const;
};

// Parallel front phi_t over the grid in the ball chart. `frame` is an
// optional constant isometry applied to every H^3 point (viewing
// normalization); scalars carry |q_t| and the singular flag. The singular
// locus e^t |q| = 1 is traced over grid edges and appended as feature
// polylines with exact front positions.
SurfaceMesh front_mesh(const HGParams& p, const DomainGrid& grid, double t,
                       const Mat2& frame = Mat2::identity());

// Variant over a prebuilt lift field (one continuation pass, many t values).
SurfaceMesh front_mesh(const maps::LiftField& field, const DomainGrid& grid, double t,
                       const Mat2& frame = Mat2::identity());

// chi-image of one hyperbolic Gauss map over the grid (the t -> +-infinity
// boundary surfaces of the parallel family). direction +1: Schwarz side.
SurfaceMesh gauss_image_mesh(const HGParams& p, const DomainGrid& grid, int direction,
                             const Mat2& frame = Mat2::identity());

enum class MapKind { Schwarz, DerivedSchwarz };

struct LabeledPolyline {
    std::string label;
    std::vector<Complex> points;
    std::vector<MarkedPoint> markers;
};

// Normalized-map images of the marked axis segments (offset +i delta), with
// endpoint markers and images of the ramification points.
std::vector<LabeledPolyline> boundary_curves(const HGParams& p, const DomainGrid& grid,
                                             MapKind which);

// ASCII OBJ: "v x y z" at 9 significant digits, "f i j k" (1-based),
// feature polylines as "l i j" records; a JSON sidecar (<stem>.json) holds
// the per-vertex scalars.
void write_obj(const SurfaceMesh& mesh, const std::filesystem::path& path);

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

// Deterministic SVG 1.1, one path element per polyline and a text anchor per
// marker.
void write_svg_curves(const std::vector<LabeledPolyline>& curves,
                      const std::filesystem::path& path, const Rect& viewport);

}  // namespace flatfront::meshio
