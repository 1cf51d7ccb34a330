#include "flatfront/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "flatfront/sha256.hpp"

namespace flatfront::figures {

using meshio::DomainGrid;
using meshio::GridSpec;
using meshio::LabeledPolyline;
using meshio::MarkedPoint;
using meshio::Rect;
using meshio::SurfaceMesh;

namespace {

Mat2 det_normalized(Mat2 m) {
    Complex s = sqrt_principal_positive(m.det());
    return m * (1.0 / s);
}

const Mat2 kInversion{0.0, 1.0, 1.0, 0.0};  // boundary action z -> 1/z

}  // namespace

Mat2 normalized_frame(const HGParams& p) {
    Mobius g = maps::normalize_maps_general(p).normalizer;
    return det_normalized(g.matrix() * kInversion);
}

Mat2 dihedral_fan_frame(const HGParams& p) {
    maps::NormalizedMapPair nm = maps::normalize_maps_general(p);
    // Vertices of the fan: S(0) -> 1, S(1) -> e^{i pi/3}, S(inf) -> 0.
    Mobius fan = Mobius::three_points(
        ProjectivePoint{0.0, 1.0}, ProjectivePoint::from_value(nm.S_T_1), nm.S_T_inf,
        ProjectivePoint{1.0, 1.0}, ProjectivePoint::from_value(std::polar(1.0, kPi / 3.0)),
        ProjectivePoint{0.0, 1.0});
    return det_normalized(fan.matrix() * kInversion);
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

namespace {

struct Sink {
    std::filesystem::path dir;
    Manifest manifest;

    std::filesystem::path file(const std::string& name) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory: " + dir.string());
        return dir / name;
    }
    void record(const std::string& name) {
        manifest.files.push_back({name, sha256_file_hex(dir / name)});
    }
    void obj(const SurfaceMesh& mesh, const std::string& name) {
        meshio::write_obj(mesh, file(name));
        record(name);
        std::filesystem::path side = std::filesystem::path(name);
        side.replace_extension(".json");
        record(side.string());
    }
    void svg(const std::vector<LabeledPolyline>& curves, const std::string& name,
             const Rect& viewport) {
        meshio::write_svg_curves(curves, file(name), viewport);
        record(name);
    }
};

Rect viewport_of(const std::vector<LabeledPolyline>& curves, double max_span) {
    double x0 = 1e30, x1 = -1e30, y0 = 1e30, y1 = -1e30;
    for (const auto& c : curves)
        for (Complex z : c.points) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
            x0 = std::min(x0, z.real());
            x1 = std::max(x1, z.real());
            y0 = std::min(y0, z.imag());
            y1 = std::max(y1, z.imag());
        }
    if (!(x1 > x0)) return Rect{-1.0, -1.0, 1.0, 1.0};
    // Clamp to a window around [0,1] so curves through infinity stay legible.
    double cx = 0.5, cy = 0.5 * (y0 + y1);
    double half = 0.5 * std::max(x1 - x0, y1 - y0);
    half = std::min(half, 0.5 * max_span);
    half *= 1.1;
    if (x0 >= cx - half && x1 <= cx + half) cx = 0.5 * (x0 + x1);
    cy = std::clamp(cy, -half, half);
    return Rect{cx - half, cy - half, cx + half, cy + half};
}

GridSpec paper_grid(const FigureOptions& opts) {
    GridSpec g;
    g.nu = opts.nu;
    g.nv = opts.nv;
    return g;
}

// ---------------------------------------------------------------------------
// Individual figures
// ---------------------------------------------------------------------------

void figure_upper(Sink& sink, const FigureOptions& opts) {
    GridSpec g = paper_grid(opts);
    LabeledPolyline box;
    box.label = "domain";
    box.points = {Complex(g.x0, g.y0), Complex(g.x1, g.y0), Complex(g.x1, g.y1),
                  Complex(g.x0, g.y1), Complex(g.x0, g.y0)};
    const std::pair<const char*, double> marks[] = {
        {"A", -1.0}, {"B", 0.0}, {"C", 0.5}, {"D", 1.0}, {"E", 2.0}};
    for (auto [label, x] : marks) box.markers.push_back({label, Complex(x, 0.0)});
    std::vector<LabeledPolyline> curves{box};
    for (double pc : {0.0, 1.0}) {
        LabeledPolyline arc;
        arc.label = "exclusion";
        for (int k = 0; k <= 32; ++k)
            arc.points.push_back(Complex(pc, 0.0) +
                                 g.exclusion * std::polar(1.0, kPi * k / 32.0));
        curves.push_back(arc);
    }
    sink.svg(curves, "upper.svg", Rect{g.x0 - 0.2, g.y0 - 0.2, g.x1 + 0.2, g.y1 + 0.2});
}

void figure_illst(Sink& sink, const std::string& id, double c, const FigureOptions& opts) {
    HGParams p(0.5, 0.5, c);
    DomainGrid grid = meshio::build_grid(paper_grid(opts));
    auto s_curves = meshio::boundary_curves(p, grid, meshio::MapKind::Schwarz);
    auto ds_curves = meshio::boundary_curves(p, grid, meshio::MapKind::DerivedSchwarz);
    sink.svg(s_curves, id + "_S.svg", viewport_of(s_curves, 6.0));
    sink.svg(ds_curves, id + "_DS.svg", viewport_of(ds_curves, 6.0));
}

// Level curve Im(phi_t) = 0 inside the upper hemi-disc (the preimages of the
// real axis that subdivide the covering regions).
std::vector<LabeledPolyline> model_dividing_curves(double t) {
    const int n = 201;
    std::vector<LabeledPolyline> out;
    auto inside = [](Complex z) { return std::abs(z) <= 1.0 && z.imag() >= 0.0; };
    auto f = [&](Complex z) { return maps::confluence_model(t, z).imag(); };
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            Complex z00(-1.0 + 2.0 * i / (n - 1.0), 1.0 * j / (n - 1.0));
            Complex z10 = z00 + Complex(2.0 / (n - 1.0), 0.0);
            Complex z01 = z00 + Complex(0.0, 1.0 / (n - 1.0));
            Complex z11 = z10 + Complex(0.0, 1.0 / (n - 1.0));
            if (!inside(z00) || !inside(z10) || !inside(z01) || !inside(z11)) continue;
            Complex corners[4] = {z00, z10, z11, z01};
            std::vector<Complex> hits;
            for (int e = 0; e < 4; ++e) {
                Complex a = corners[e], b = corners[(e + 1) % 4];
                double fa = f(a), fb = f(b);
                if (fa == 0.0) hits.push_back(a);
                if (fa * fb < 0.0) hits.push_back(a + fa / (fa - fb) * (b - a));
            }
            if (hits.size() >= 2) {
                LabeledPolyline seg;
                seg.label = "divider";
                seg.points = {hits[0], hits[1]};
                out.push_back(seg);
            }
        }
    return out;
}

void figure_dsconf(Sink& sink, const std::string& id, double t) {
    // Domain: hemi-disc boundary and dividing curves; image: their phi_t
    // images; matching labels mark corresponding points.
    std::vector<MarkedPoint> marks;
    marks.push_back({"A", Complex(-1.0, 0.0)});
    marks.push_back({"B", Complex(-0.5, 0.0)});
    marks.push_back({"C", Complex(0.0, 0.0)});
    marks.push_back({"D", Complex(0.5, 0.0)});
    marks.push_back({"E", Complex(1.0, 0.0)});
    marks.push_back({"F", std::polar(1.0, kPi / 4.0)});
    marks.push_back({"G", Complex(0.0, 1.0)});
    marks.push_back({"I", std::polar(1.0, 3.0 * kPi / 4.0)});
    auto ram = maps::confluence_ramification_points(t);
    int ram_idx = 0;
    for (Complex r : {ram[0], ram[1]}) {
        if (r.imag() < -1e-12 || std::abs(r) > 1.0) continue;
        marks.push_back({ram_idx == 0 ? "H" : "K", r});
        ++ram_idx;
    }

    LabeledPolyline boundary;
    boundary.label = "hemidisc";
    const int nb = 256;
    for (int k = 0; k <= nb; ++k) boundary.points.push_back(Complex(-1.0 + 2.0 * k / nb, 0.0));
    for (int k = 1; k <= nb; ++k) boundary.points.push_back(std::polar(1.0, kPi * k / nb));

    std::vector<LabeledPolyline> domain_curves{boundary};
    auto dividers = model_dividing_curves(t);
    domain_curves.insert(domain_curves.end(), dividers.begin(), dividers.end());
    domain_curves.front().markers = marks;

    std::vector<LabeledPolyline> image_curves;
    for (const auto& c : domain_curves) {
        LabeledPolyline img;
        img.label = c.label;
        img.points.reserve(c.points.size());
        for (Complex z : c.points) img.points.push_back(maps::confluence_model(t, z));
        image_curves.push_back(img);
    }
    for (const auto& m : marks)
        image_curves.front().markers.push_back({m.label, maps::confluence_model(t, m.position)});

    sink.svg(domain_curves, id + "_domain.svg", Rect{-1.2, -0.2, 1.2, 1.4});
    sink.svg(image_curves, id + "_image.svg", viewport_of(image_curves, 4.0));

    // Marker correspondence table for downstream checks.
    std::ofstream js(sink.file(id + "_markers.json"));
    if (!js) throw IoError("cannot write marker table");
    char buf[256];
    js << "{\"markers\":[";
    for (std::size_t k = 0; k < marks.size(); ++k) {
        Complex z = maps::confluence_model(t, marks[k].position);
        std::snprintf(buf, sizeof(buf),
                      "%s{\"label\":\"%s\",\"x\":[%.17g,%.17g],\"z\":[%.17g,%.17g]}",
                      k ? "," : "", marks[k].label.c_str(), marks[k].position.real(),
                      marks[k].position.imag(), z.real(), z.imag());
        js << buf;
    }
    js << "]}\n";
    js.close();
    sink.record(id + "_markers.json");
}

void figure_lam2(Sink& sink, const FigureOptions& opts) {
    // The c = 1 modular case is rendered from a nearby non-degenerate c.
    HGParams p(0.5, 0.5, 1.0 - 1e-6);
    DomainGrid grid = meshio::build_grid(paper_grid(opts));
    Mat2 frame = normalized_frame(p);
    sink.obj(meshio::gauss_image_mesh(p, grid, +1, frame), "lam2_S.obj");
    sink.obj(meshio::gauss_image_mesh(p, grid, -1, frame), "lam2_DS.obj");
}

HGParams dihedral_params() { return HGParams(1.0 / 6.0, -1.0 / 6.0, 0.5); }

void figure_dihed1(Sink& sink, const FigureOptions& opts) {
    HGParams p = dihedral_params();
    Mat2 frame = dihedral_fan_frame(p);
    DomainGrid grid = meshio::build_grid(paper_grid(opts));
    sink.obj(meshio::gauss_image_mesh(p, grid, +1, frame), "dihed1_S.obj");
    sink.obj(meshio::front_mesh(p, grid, 0.0, frame), "dihed1_HS.obj");
    GridSpec half = paper_grid(opts);
    if (opts.half_domain) {
        half.x1 = 0.5;
        half.nu = std::max(2, opts.nu / 2);
    }
    DomainGrid half_grid = meshio::build_grid(half);
    sink.obj(meshio::gauss_image_mesh(p, half_grid, -1, frame), "dihed1_DS.obj");
}

void figure_dihed2(Sink& sink, const FigureOptions& opts) {
    HGParams p = dihedral_params();
    Mat2 frame = dihedral_fan_frame(p);
    DomainGrid grid = meshio::build_grid(paper_grid(opts));
    std::vector<double> ts = opts.t_values;
    if (ts.empty()) ts = {-2.0, -1.0, -0.3, 0.3, 1.0, 2.0};
    maps::LiftField field(p, [&] {
        std::vector<std::vector<Complex>> rows(grid.spec.nv);
        for (int j = 0; j < grid.spec.nv; ++j)
            for (int i = 0; i < grid.spec.nu; ++i) {
                int id = grid.vertex_id(i, j);
                if (id >= 0) rows[j].push_back(grid.vertices[id]);
            }
        return rows;
    }());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "dihed2_%02zu.obj", k);
        sink.obj(meshio::front_mesh(field, grid, ts[k], frame), name);
    }
}

void figure_dihed3(Sink& sink, const FigureOptions&) {
    HGParams p = dihedral_params();
    Mat2 frame = dihedral_fan_frame(p);
    hgode::SLCoefficient slc = hgode::sl_coefficient(p);
    const double delta = 1e-4;

    const int ngeo = 28;
    std::vector<std::vector<Complex>> rows(1);
    for (int k = 1; k <= ngeo; ++k) rows[0].push_back(Complex(k / (ngeo + 1.0), delta));
    maps::LiftField field(p, rows);

    std::vector<LabeledPolyline> curves;
    LabeledPolyline equator;
    equator.label = "ideal-boundary";
    for (int k = 0; k <= 256; ++k) equator.points.push_back(std::polar(1.0, 2.0 * kPi * k / 256));
    equator.markers.push_back({"X", Complex(1.0, 0.0)});
    equator.markers.push_back({"Y", std::polar(1.0, kPi / 3.0)});
    curves.push_back(equator);

    for (const auto& lf : field.rows()[0].lifts) {
        hgode::HoloLift framed{lf.x, frame * lf.U};
        LabeledPolyline geo;
        geo.label = "geodesic";
        for (const auto& b : hyp3::normal_geodesic(framed, -18.0, 18.0, 160))
            geo.points.push_back(Complex(b.x, b.y));
        curves.push_back(std::move(geo));
    }

    // Section of the caustic: psi over (0,1) lies on the sampled geodesics'
    // envelope in the equatorial plane.
    const int ncau = 400;
    std::vector<std::vector<Complex>> crow(1);
    for (int k = 1; k <= ncau; ++k) crow[0].push_back(Complex(k / (ncau + 1.0), delta));
    maps::LiftField cfield(p, crow);
    LabeledPolyline caustic;
    caustic.label = "caustic-section";
    for (const auto& lf : cfield.rows()[0].lifts) {
        if (std::abs(hgode::q_at(slc, lf.x)) <= hyp3::kUmbilicRadius) continue;
        hyp3::HPoint pt = hyp3::apply_isometry(frame, hyp3::caustic_point(lf, slc));
        hyp3::BallPoint b = hyp3::ball_chart(pt);
        caustic.points.push_back(Complex(b.x, b.y));
    }
    curves.push_back(caustic);

    sink.svg(curves, "dihed3.svg", Rect{-1.1, -1.1, 1.1, 1.1});
}

void figure_dihed4(Sink& sink, const FigureOptions& opts) {
    HGParams p = dihedral_params();
    Mat2 frame = dihedral_fan_frame(p);
    DomainGrid grid = meshio::build_grid(paper_grid(opts));
    maps::LiftField field(p, [&] {
        std::vector<std::vector<Complex>> rows(grid.spec.nv);
        for (int j = 0; j < grid.spec.nv; ++j)
            for (int i = 0; i < grid.spec.nu; ++i) {
                int id = grid.vertex_id(i, j);
                if (id >= 0) rows[j].push_back(grid.vertices[id]);
            }
        return rows;
    }());
    const hgode::SLCoefficient& slc = field.coefficient();

    // Caustic surface, clipped where the singular time exceeds 7 (the
    // surface runs to the ideal boundary at the umbilic points).
    SurfaceMesh mesh;
    std::vector<int> remap(grid.vertices.size(), -1);
    std::size_t k = 0;
    for (const auto& row : field.rows())
        for (const auto& lf : row.lifts) {
            double aq = std::abs(hgode::q_at(slc, lf.x));
            if (aq > std::exp(-7.0)) {
                hyp3::HPoint pt = hyp3::apply_isometry(frame, hyp3::caustic_point(lf, slc));
                hyp3::BallPoint b = hyp3::ball_chart(pt);
                remap[k] = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back({b.x, b.y, b.z});
                mesh.scalars.push_back({lf.x, aq, false});
            }
            ++k;
        }
    for (const auto& q : grid.quads) {
        int v0 = remap[q[0]], v1 = remap[q[1]], v2 = remap[q[2]], v3 = remap[q[3]];
        if (v0 >= 0 && v1 >= 0 && v2 >= 0 && v3 >= 0) {
            mesh.faces.push_back({v0, v1, v2});
            mesh.faces.push_back({v0, v2, v3});
        }
    }
    sink.obj(mesh, "dihed4_caustic.obj");
}

}  // namespace

std::vector<std::string> supported_figures() {
    return {"upper",  "illst1", "illst2", "dsconf1", "dsconf2",
            "lam2",   "dihed1", "dihed2", "dihed3",  "dihed4"};
}

Manifest run_figure(const std::string& id, const std::filesystem::path& outdir,
                    const FigureOptions& opts) {
    Sink sink{outdir, {}};
    if (id == "upper") {
        figure_upper(sink, opts);
    } else if (id == "illst1") {
        figure_illst(sink, id, opts.c, opts);
    } else if (id == "illst2") {
        figure_illst(sink, id, 0.05, opts);
    } else if (id == "dsconf1") {
        figure_dsconf(sink, id, 0.25);
    } else if (id == "dsconf2") {
        figure_dsconf(sink, id, -0.25);
    } else if (id == "lam2") {
        figure_lam2(sink, opts);
    } else if (id == "dihed1") {
        figure_dihed1(sink, opts);
    } else if (id == "dihed2") {
        figure_dihed2(sink, opts);
    } else if (id == "dihed3") {
        figure_dihed3(sink, opts);
    } else if (id == "dihed4") {
        figure_dihed4(sink, opts);
    } else {
        throw ParameterError("unknown figure id: " + id);
    }
    write_manifest(sink.manifest, outdir / (id + "_manifest.json"));
    return sink.manifest;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << "{\"files\":[";
    for (std::size_t k = 0; k < manifest.files.size(); ++k) {
        out << (k ? "," : "") << "{\"path\":\"" << manifest.files[k].path << "\",\"sha256\":\""
            << manifest.files[k].sha256 << "\"}";
    }
    out << "]}\n";
}

}  // namespace flatfront::figures
