#include "flatfront/meshio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace flatfront::meshio {

using hgode::HoloLift;
using hgode::SLCoefficient;
using maps::LiftField;

// ---------------------------------------------------------------------------
// Domain grid
// ---------------------------------------------------------------------------

DomainGrid build_grid(const GridSpec& spec) {
    if (spec.nu < 2 || spec.nv < 2) throw ParameterError("build_grid: resolution must be >= 2x2");
    if (!(spec.exclusion > 0.0)) throw ParameterError("build_grid: exclusion must be positive");

    DomainGrid g;
    g.spec = spec;
    g.index.assign(static_cast<std::size_t>(spec.nu) * spec.nv, -1);

    double dx = (spec.x1 - spec.x0) / (spec.nu - 1.0);
    double dy = (spec.y1 - spec.y0) / (spec.nv - 1.0);
    for (int j = 0; j < spec.nv; ++j) {
        for (int i = 0; i < spec.nu; ++i) {
            Complex z(spec.x0 + i * dx, spec.y0 + j * dy);
            if (std::abs(z) < spec.exclusion || std::abs(z - 1.0) < spec.exclusion) continue;
            g.index[static_cast<std::size_t>(j) * spec.nu + i] = static_cast<int>(g.vertices.size());
            g.vertices.push_back(z);
        }
    }
    if (g.vertices.empty()) throw ParameterError("build_grid: exclusion discs swallow the region");

    for (int j = 0; j + 1 < spec.nv; ++j)
        for (int i = 0; i + 1 < spec.nu; ++i) {
            int v00 = g.vertex_id(i, j), v10 = g.vertex_id(i + 1, j);
            int v01 = g.vertex_id(i, j + 1), v11 = g.vertex_id(i + 1, j + 1);
            if (v00 >= 0 && v10 >= 0 && v01 >= 0 && v11 >= 0)
                g.quads.push_back({v00, v10, v11, v01});
        }

    // Marked points of the paper-figure domain that lie on the bottom edge.
    if (std::abs(spec.y0) < 1e-12) {
        const std::pair<const char*, double> marks[] = {
            {"A", -1.0}, {"B", 0.0}, {"C", 0.5}, {"D", 1.0}, {"E", 2.0}};
        std::vector<MarkedPoint> present;
        for (auto [label, x] : marks)
            if (x >= spec.x0 - 1e-12 && x <= spec.x1 + 1e-12)
                present.push_back({label, Complex(x, 0.0)});
        g.marks = present;
        for (std::size_t k = 0; k + 1 < present.size(); ++k) {
            g.axis_segments.push_back({present[k].label + present[k + 1].label,
                                       present[k].position.real(),
                                       present[k + 1].position.real()});
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Front meshes
// ---------------------------------------------------------------------------

double SurfaceMesh::max_vertex_norm() const {
    double m = 0.0;
    for (const auto& v : vertices)
        m = std::max(m, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
    return m;
}

namespace {

std::vector<std::vector<Complex>> grid_rows(const DomainGrid& g) {
    std::vector<std::vector<Complex>> rows(g.spec.nv);
    for (int j = 0; j < g.spec.nv; ++j)
        for (int i = 0; i < g.spec.nu; ++i) {
            int id = g.vertex_id(i, j);
            if (id >= 0) rows[j].push_back(g.vertices[id]);
        }
    return rows;
}

// Lifts back in vertex order; rows were emitted row-major, vertices likewise.
std::vector<HoloLift> field_by_vertex(const DomainGrid& g, const LiftField& field) {
    std::vector<HoloLift> lifts(g.vertices.size());
    std::size_t k = 0;
    for (const auto& row : field.rows())
        for (const auto& lf : row.lifts) lifts[k++] = lf;
    return lifts;
}

std::array<double, 3> to_xyz(const hyp3::BallPoint& b) { return {b.x, b.y, b.z}; }

void add_grid_faces(const DomainGrid& g, SurfaceMesh& mesh) {
    for (const auto& q : g.quads) {
        mesh.faces.push_back({q[0], q[1], q[2]});
        mesh.faces.push_back({q[0], q[2], q[3]});
    }
}

}  // namespace

SurfaceMesh front_mesh(const HGParams& p, const DomainGrid& grid, double t, const Mat2& frame) {
    LiftField field(p, grid_rows(grid));
    return front_mesh(field, grid, t, frame);
}

SurfaceMesh front_mesh(const LiftField& field, const DomainGrid& grid, double t,
                       const Mat2& frame) {
    const SLCoefficient& slc = field.coefficient();
    std::vector<HoloLift> lifts = field_by_vertex(grid, field);

    SurfaceMesh mesh;
    mesh.vertices.resize(grid.vertices.size());
    mesh.scalars.resize(grid.vertices.size());
    for (std::size_t k = 0; k < lifts.size(); ++k) {
        hyp3::FrontSample s = hyp3::front_sample(lifts[k], slc, t);
        mesh.vertices[k] = to_xyz(hyp3::ball_chart(hyp3::apply_isometry(frame, s.position)));
        mesh.scalars[k] = {s.x, std::abs(s.q_t), s.singular};
    }
    add_grid_faces(grid, mesh);

    // Singular locus e^t |q| = 1 marched over grid edges; crossing vertices
    // get exact front positions via a short continuation from a grid lift.
    auto level = [&](std::size_t k) { return mesh.scalars[k].q_abs - 1.0; };
    auto add_crossing = [&](int va, int vb) -> int {
        double fa = level(va), fb = level(vb);
        double w = fa / (fa - fb);
        Complex xa = grid.vertices[va], xb = grid.vertices[vb];
        Complex xs = xa + w * (xb - xa);
        HoloLift lf = hgode::continue_lift_segment(w < 0.5 ? lifts[va] : lifts[vb], xs, slc);
        hyp3::FrontSample s = hyp3::front_sample(lf, slc, t);
        mesh.vertices.push_back(
            to_xyz(hyp3::ball_chart(hyp3::apply_isometry(frame, s.position))));
        mesh.scalars.push_back({s.x, std::abs(s.q_t), true});
        return static_cast<int>(mesh.vertices.size()) - 1;
    };

    std::map<std::pair<int, int>, int> edge_cross;
    auto crossing_of = [&](int va, int vb) -> int {
        if (va < 0 || vb < 0) return -1;
        double fa = level(va), fb = level(vb);
        if (!(fa * fb < 0.0)) return -1;
        auto key = std::minmax(va, vb);
        auto it = edge_cross.find(key);
        if (it != edge_cross.end()) return it->second;
        int id = add_crossing(va, vb);
        edge_cross.emplace(key, id);
        return id;
    };

    for (int j = 0; j + 1 < grid.spec.nv; ++j)
        for (int i = 0; i + 1 < grid.spec.nu; ++i) {
            int v00 = grid.vertex_id(i, j), v10 = grid.vertex_id(i + 1, j);
            int v01 = grid.vertex_id(i, j + 1), v11 = grid.vertex_id(i + 1, j + 1);
            if (v00 < 0 || v10 < 0 || v01 < 0 || v11 < 0) continue;
            int c[4] = {crossing_of(v00, v10), crossing_of(v10, v11), crossing_of(v11, v01),
                        crossing_of(v01, v00)};
            std::vector<int> hit;
            for (int e = 0; e < 4; ++e)
                if (c[e] >= 0) hit.push_back(c[e]);
            if (hit.size() == 2) mesh.feature_polylines.push_back({hit[0], hit[1]});
            else if (hit.size() == 4) {
                mesh.feature_polylines.push_back({c[0], c[1]});
                mesh.feature_polylines.push_back({c[2], c[3]});
            }
        }
    return mesh;
}

SurfaceMesh gauss_image_mesh(const HGParams& p, const DomainGrid& grid, int direction,
                             const Mat2& frame) {
    LiftField field(p, grid_rows(grid));
    const SLCoefficient& slc = field.coefficient();
    std::vector<HoloLift> lifts = field_by_vertex(grid, field);
    Mobius fr(frame);

    SurfaceMesh mesh;
    mesh.vertices.resize(grid.vertices.size());
    mesh.scalars.resize(grid.vertices.size());
    for (std::size_t k = 0; k < lifts.size(); ++k) {
        ProjectivePoint e = hyp3::ideal_endpoint(lifts[k], direction);
        mesh.vertices[k] = to_xyz(hyp3::chi_boundary(fr.apply(e)));
        double qa = std::abs(hgode::q_at(slc, grid.vertices[k]));
        mesh.scalars[k] = {grid.vertices[k], qa, false};
    }
    add_grid_faces(grid, mesh);
    return mesh;
}

// ---------------------------------------------------------------------------
// Boundary curves
// ---------------------------------------------------------------------------

std::vector<LabeledPolyline> boundary_curves(const HGParams& p, const DomainGrid& grid,
                                             MapKind which) {
    const double delta = 1e-4;  // offset above the real axis
    maps::NormalizedMapPair nm = maps::normalize_maps_general(p);
    maps::RamificationReport rep = maps::ramification_report(p);

    auto is_puncture = [](double x) {
        return std::abs(x) < 1e-12 || std::abs(x - 1.0) < 1e-12;
    };

    // Sample rows for one lift field pass.
    std::vector<std::vector<Complex>> rows;
    for (const auto& seg : grid.axis_segments) {
        double xa = seg.xa, xb = seg.xb;
        if (is_puncture(xa)) xa += grid.spec.exclusion;
        if (is_puncture(xb)) xb -= grid.spec.exclusion;
        int n = std::max(48, static_cast<int>(std::ceil((xb - xa) / (grid.spec.x1 - grid.spec.x0) *
                                                        4.0 * grid.spec.nu)));
        std::vector<Complex> row;
        row.reserve(n + 1);
        for (int k = 0; k <= n; ++k) row.push_back(Complex(xa + (xb - xa) * k / n, delta));
        rows.push_back(std::move(row));
    }
    LiftField field(p, rows);

    auto map_of = [&](const HoloLift& lf) {
        ProjectivePoint v = which == MapKind::Schwarz ? lf.schwarz_ratio() : lf.derived_ratio();
        return nm.apply(v).value();
    };

    std::vector<LabeledPolyline> out;
    for (std::size_t si = 0; si < grid.axis_segments.size(); ++si) {
        const auto& seg = grid.axis_segments[si];
        const auto& row = field.rows()[si];
        LabeledPolyline poly;
        poly.label = seg.label;
        poly.points.reserve(row.lifts.size());
        for (const auto& lf : row.lifts) poly.points.push_back(map_of(lf));

        // Endpoint markers; punctures carry exact normalized values.
        auto endpoint_value = [&](double x, const Complex& sampled) -> Complex {
            if (std::abs(x) < 1e-12) return Complex(0.0);
            if (std::abs(x - 1.0) < 1e-12) return Complex(1.0);
            return sampled;
        };
        poly.markers.push_back({seg.label.substr(0, 1),
                                endpoint_value(seg.xa, poly.points.front())});
        poly.markers.push_back({seg.label.substr(1, 1),
                                endpoint_value(seg.xb, poly.points.back())});
        out.push_back(std::move(poly));
    }

    // Images of the ramification points decorate the derived-map figure.
    if (which == MapKind::DerivedSchwarz) {
        maps::MapEvaluator ev(p);
        auto add_root_marker = [&](const std::string& label, Complex root) {
            Complex xr = root;
            if (std::abs(xr.imag()) < 1e-9) xr += Complex(0.0, delta);
            Complex img = nm.apply(ev.derived_at(xr)).value();
            for (std::size_t si = 0; si < out.size(); ++si) {
                const auto& seg = grid.axis_segments[si];
                if (root.real() >= seg.xa - 1e-9 && root.real() <= seg.xb + 1e-9) {
                    out[si].markers.push_back({label, img});
                    return;
                }
            }
            if (!out.empty()) out.front().markers.push_back({label, img});
        };
        if (rep.klass == maps::RootClass::TwoComplexConjugate) {
            Complex upper = rep.roots[0].imag() > 0 ? rep.roots[0] : rep.roots[1];
            add_root_marker("X", upper);
        } else if (rep.klass == maps::RootClass::TwoReal) {
            add_root_marker("Y", rep.roots[0]);
            add_root_marker("Z", rep.roots[1]);
        } else {
            add_root_marker("W", rep.roots[0]);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace {

void fail_io(const std::filesystem::path& path) {
    throw IoError("cannot write file: " + path.string());
}

}  // namespace

void write_obj(const SurfaceMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail_io(path);
    char buf[160];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
        out << buf;
    }
    for (const auto& f : mesh.faces) {
        std::snprintf(buf, sizeof(buf), "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out << buf;
    }
    for (const auto& line : mesh.feature_polylines) {
        out << "l";
        for (int v : line) out << ' ' << v + 1;
        out << '\n';
    }
    if (!out) fail_io(path);
    out.close();

    std::filesystem::path side = path;
    side.replace_extension(".json");
    std::ofstream js(side);
    if (!js) fail_io(side);
    js << "{\"vertices\":[";
    for (std::size_t k = 0; k < mesh.scalars.size(); ++k) {
        const auto& s = mesh.scalars[k];
        std::snprintf(buf, sizeof(buf), "%s{\"x\":[%.17g,%.17g],\"q_abs\":%.17g,\"singular\":%s}",
                      k ? "," : "", s.x.real(), s.x.imag(), s.q_abs,
                      s.singular ? "true" : "false");
        js << buf;
    }
    js << "]}\n";
    if (!js) fail_io(side);
}

void write_svg_curves(const std::vector<LabeledPolyline>& curves,
                      const std::filesystem::path& path, const Rect& viewport) {
    if (!(viewport.x1 > viewport.x0) || !(viewport.y1 > viewport.y0))
        throw ParameterError("write_svg_curves: empty viewport");
    std::ofstream out(path);
    if (!out) fail_io(path);

    const double width = 640.0;
    double aspect = (viewport.y1 - viewport.y0) / (viewport.x1 - viewport.x0);
    double height = width * aspect;
    auto px = [&](Complex z) {
        double x = (z.real() - viewport.x0) / (viewport.x1 - viewport.x0) * width;
        double y = height - (z.imag() - viewport.y0) / (viewport.y1 - viewport.y0) * height;
        return std::pair<double, double>(x, y);
    };

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.9g\" "
                  "height=\"%.9g\" viewBox=\"0 0 %.9g %.9g\">\n",
                  width, height, width, height);
    out << buf;
    for (const auto& c : curves) {
        out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
        bool first = true;
        bool pen_up = true;
        for (Complex z : c.points) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                pen_up = true;  // curves through infinity break into subpaths
                continue;
            }
            auto [x, y] = px(z);
            std::snprintf(buf, sizeof(buf), "%s%.8g %.8g", (first || pen_up) ? "M" : "L", x, y);
            out << buf;
            first = false;
            pen_up = false;
        }
        out << "\"/>\n";
        for (const auto& m : c.markers) {
            if (!std::isfinite(m.position.real()) || !std::isfinite(m.position.imag())) continue;
            auto [x, y] = px(m.position);
            std::snprintf(buf, sizeof(buf),
                          "<circle cx=\"%.8g\" cy=\"%.8g\" r=\"3\" fill=\"black\"/>\n", x, y);
            out << buf;
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%.8g\" y=\"%.8g\" font-size=\"12\">%s</text>\n", x + 4.0,
                          y - 4.0, m.label.c_str());
            out << buf;
        }
    }
    out << "</svg>\n";
    if (!out) fail_io(path);
}

}  // namespace flatfront::meshio
