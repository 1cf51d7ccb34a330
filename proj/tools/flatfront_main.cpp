// flatfront: classification, map evaluation, figure reproduction, and mesh
// export for the Schwarz / derived Schwarz / hyperbolic Schwarz maps of the
// hypergeometric equation.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 I/O error,
// 4 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flatfront/figures.hpp"
#include "flatfront/hyp3.hpp"
#include "flatfront/maps.hpp"
#include "flatfront/meshio.hpp"

namespace ff = flatfront;
using ff::Complex;

namespace {

// Complex literals of the form "re", "re+imi", "re-imi" (also "1.5i").
Complex parse_complex(const std::string& text) {
    static const std::regex full(R"(^\s*([+-]?[0-9.eE+-]*?)(?:([+-][0-9.eE]*(?:[eE][+-]?[0-9]+)?)i)?\s*$)");
    // Split manually: find the last '+' or '-' that is not part of an exponent.
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ff::ParameterError("empty complex literal");
    if (s.back() == 'i' || s.back() == 'I') {
        std::string body = s.substr(0, s.size() - 1);
        std::size_t split = std::string::npos;
        for (std::size_t k = body.size(); k-- > 1;) {
            char ch = body[k];
            if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                split = k;
                break;
            }
        }
        std::string re = split == std::string::npos ? "0" : body.substr(0, split);
        std::string im = split == std::string::npos ? body : body.substr(split);
        if (im.empty() || im == "+") im = "1";
        if (im == "-") im = "-1";
        try {
            return Complex(std::stod(re), std::stod(im));
        } catch (const std::exception&) {
            throw ff::ParameterError("cannot parse complex literal: " + text);
        }
    }
    try {
        return Complex(std::stod(s), 0.0);
    } catch (const std::exception&) {
        throw ff::ParameterError("cannot parse complex literal: " + text);
    }
}

std::string format_complex(Complex z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

ff::HGParams make_params(const std::vector<double>& abc, bool relaxed) {
    if (abc.size() != 3) throw ff::ParameterError("--abc expects three values a b c");
    if (relaxed) return ff::HGParams::make_relaxed(abc[0], abc[1], abc[2]);
    return ff::HGParams(abc[0], abc[1], abc[2]);
}

const char* klass_name(ff::maps::RootClass k) {
    switch (k) {
        case ff::maps::RootClass::TwoComplexConjugate: return "two-complex-conjugate";
        case ff::maps::RootClass::OneDouble: return "one-double";
        case ff::maps::RootClass::TwoReal: return "two-real";
    }
    return "?";
}

const char* region_name(ff::maps::StRegion r) {
    switch (r) {
        case ff::maps::StRegion::InteriorDNegative: return "interior-D-negative";
        case ff::maps::StRegion::InteriorDPositive: return "interior-D-positive";
        case ff::maps::StRegion::OnDZero: return "on-D-zero";
        case ff::maps::StRegion::OutsideDomain: return "outside-domain";
    }
    return "?";
}

int cmd_classify(const std::vector<double>& abc, bool relaxed, bool as_json) {
    ff::HGParams p = make_params(abc, relaxed);
    ff::maps::RamificationReport rep = ff::maps::ramification_report(p);
    ff::maps::StRegion region = ff::maps::st_region(rep.s, rep.t);
    if (as_json) {
        std::printf("{\"D\":%.17g,\"s\":%.17g,\"t\":%.17g,\"region\":\"%s\","
                    "\"class\":\"%s\",\"roots\":[[%.17g,%.17g],[%.17g,%.17g]],"
                    "\"indices\":[%d,%d]}\n",
                    rep.discriminant, rep.s, rep.t, region_name(region), klass_name(rep.klass),
                    rep.roots[0].real(), rep.roots[0].imag(), rep.roots[1].real(),
                    rep.roots[1].imag(), rep.root_orders[0], rep.root_orders[1]);
    } else {
        std::printf("D          = %.15g\n", rep.discriminant);
        std::printf("(s, t)     = (%.15g, %.15g)\n", rep.s, rep.t);
        std::printf("region     = %s\n", region_name(region));
        std::printf("class      = %s\n", klass_name(rep.klass));
        std::printf("roots      = %s, %s\n", format_complex(rep.roots[0]).c_str(),
                    format_complex(rep.roots[1]).c_str());
        std::printf("indices    = (%d, %d)\n", rep.root_orders[0], rep.root_orders[1]);
    }
    return 0;
}

int cmd_eval(const std::vector<double>& abc, bool relaxed, const std::string& map_name,
             const std::string& points_file, const std::string& out_file) {
    ff::HGParams p = make_params(abc, relaxed);
    std::vector<std::string> lines;
    {
        std::istream* in = &std::cin;
        std::ifstream f;
        if (!points_file.empty() && points_file != "-") {
            f.open(points_file);
            if (!f) throw ff::IoError("cannot read points file: " + points_file);
            in = &f;
        }
        std::string line;
        while (std::getline(*in, line)) {
            if (!line.empty() && line != "x") lines.push_back(line);
        }
    }

    std::ostream* out = &std::cout;
    std::ofstream fout;
    if (!out_file.empty()) {
        fout.open(out_file);
        if (!fout) throw ff::IoError("cannot write: " + out_file);
        out = &fout;
    }

    ff::maps::MapEvaluator ev(p);
    ff::hgode::SLCoefficient slc = ev.coefficient();
    bool ball_output = map_name == "HS";
    *out << (ball_output ? "x,bx,by,bz,q_abs,r,error\n" : "x,value,q_abs,r,error\n");

    std::size_t failures = 0;
    for (const auto& line : lines) {
        std::string cell = line.substr(0, line.find(','));
        std::string err;
        try {
            Complex x = parse_complex(cell);
            Complex probe = map_name == "f" ? Complex(0, 0) : x;  // diagnostics point
            std::string diag_q = "", diag_r = "";
            auto diagnostics = [&](Complex at) {
                char buf[64];
                double qa = std::abs(ff::hgode::q_at(slc, at));
                std::snprintf(buf, sizeof(buf), "%.9g", qa);
                diag_q = buf;
                if (qa > 0.0) {
                    std::snprintf(buf, sizeof(buf), "%.9g", -std::log(qa));
                    diag_r = buf;
                }
            };
            if (map_name == "S" || map_name == "DS") {
                Complex v = map_name == "S" ? ev.normalized_schwarz(x) : ev.normalized_derived(x);
                diagnostics(x);
                *out << cell << ',' << format_complex(v) << ',' << diag_q << ',' << diag_r
                     << ",\n";
            } else if (map_name == "HS") {
                ff::hgode::HoloLift lf = ev.lift_at(x);
                ff::hyp3::BallPoint b = ff::hyp3::ball_chart(ff::hyp3::hs_point(lf));
                diagnostics(x);
                char buf[128];
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", b.x, b.y, b.z);
                *out << cell << ',' << buf << ',' << diag_q << ',' << diag_r << ",\n";
            } else if (map_name == "f") {
                Complex v = ev.composite_f(x);
                (void)probe;
                *out << cell << ',' << format_complex(v) << ",,,\n";
            } else {
                throw ff::ParameterError("--map must be one of S, DS, HS, f");
            }
        } catch (const ff::Error& e) {
            ++failures;
            *out << cell << ",,,," << e.what() << "\n";
        }
    }
    return failures == lines.size() && !lines.empty() ? 4 : 0;
}

int cmd_sweep(double c0, double c1, int steps, int samples, const std::string& out_file) {
    if (!(c0 > 0.0 && c1 < 1.0 && c0 < c1)) throw ff::ParameterError("sweep range must lie inside (0,1)");
    if (steps < 2) throw ff::ParameterError("sweep needs steps >= 2");

    std::ostream* out = &std::cout;
    std::ofstream fout;
    if (!out_file.empty()) {
        fout.open(out_file);
        if (!fout) throw ff::IoError("cannot write: " + out_file);
        out = &fout;
    }
    *out << "c,D,s,t,root1,root2,class,dtheta_S,dtheta_DS,extra_turns,turning_points\n";
    for (int k = 0; k < steps; ++k) {
        double c = c0 + (c1 - c0) * k / (steps - 1.0);
        ff::HGParams p(0.5, 0.5, c);
        ff::maps::RamificationReport rep = ff::maps::ramification_report(p);
        ff::maps::WindingRecord w = ff::maps::winding_analysis(p, samples);
        char buf[512];
        std::string tps;
        for (std::size_t i = 0; i < w.turning_points.size(); ++i) {
            char tb[32];
            std::snprintf(tb, sizeof(tb), "%s%.9g", i ? ";" : "", w.turning_points[i]);
            tps += tb;
        }
        std::snprintf(buf, sizeof(buf), "%.9g,%.17g,%.17g,%.17g,%s,%s,%s,%.9g,%.9g,%d,%s\n", c,
                      rep.discriminant, rep.s, rep.t, format_complex(rep.roots[0]).c_str(),
                      format_complex(rep.roots[1]).c_str(), klass_name(rep.klass),
                      w.delta_theta_S, w.delta_theta_DS, w.extra_turns, tps.c_str());
        *out << buf;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schwarz maps and flat fronts of the hypergeometric equation"};
    app.set_config("--config");
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::vector<double> abc{0.5, 0.5, 0.5};
    bool relaxed = false;
    app.add_option("--abc", abc, "parameter triple a b c")->expected(3);
    app.add_flag("--relaxed", relaxed, "skip the |mu| < 1 admissibility check");

    auto* classify = app.add_subcommand("classify", "discriminant and ramification report");
    bool cls_json = false;
    classify->add_flag("--json", cls_json, "emit JSON");

    auto* figure = app.add_subcommand("figure", "reproduce a named figure data set");
    std::string fig_id;
    std::string fig_out = "figures";
    double fig_c = 0.5;
    std::vector<double> fig_t;
    int fig_nu = 300, fig_nv = 125;
    bool fig_full = false;
    figure->add_option("id", fig_id, "figure id")->required();
    figure->add_option("--out", fig_out, "output directory");
    figure->add_option("--c", fig_c, "parameter c for the illst family");
    figure->add_option("--t", fig_t, "parallel distances for dihed2")->delimiter(',');
    figure->add_option("--grid", [&fig_nu, &fig_nv](const std::vector<std::string>& vals) {
        int nu = 0, nv = 0;
        if (std::sscanf(vals[0].c_str(), "%dx%d", &nu, &nv) != 2 || nu < 2 || nv < 2)
            return false;
        fig_nu = nu;
        fig_nv = nv;
        return true;
    }, "grid resolution WxH");
    figure->add_flag("--full", fig_full, "disable the half-domain view in dihed1");

    auto* eval = app.add_subcommand("eval", "evaluate a map at points from a CSV file");
    std::string eval_map = "S", eval_points, eval_out;
    eval->add_option("--map", eval_map, "map: S, DS, HS or f");
    eval->add_option("--points", eval_points, "points file (one complex literal per line, - for stdin)");
    eval->add_option("--out", eval_out, "output CSV (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "sweep c for (1/2,1/2,c)");
    std::vector<double> sweep_range{0.05, 0.95};
    int sweep_steps = 20, sweep_samples = 600;
    std::string sweep_out;
    sweep->add_option("--crange", sweep_range, "c range lo hi")->expected(2);
    sweep->add_option("--steps", sweep_steps, "number of steps");
    sweep->add_option("--samples", sweep_samples, "winding samples per step");
    sweep->add_option("--out", sweep_out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (classify->parsed()) return cmd_classify(abc, relaxed, cls_json);
        if (figure->parsed()) {
            ff::figures::FigureOptions opts;
            opts.c = fig_c;
            opts.t_values = fig_t;
            opts.nu = fig_nu;
            opts.nv = fig_nv;
            opts.half_domain = !fig_full;
            ff::figures::run_figure(fig_id, fig_out, opts);
            return 0;
        }
        if (eval->parsed()) return cmd_eval(abc, relaxed, eval_map, eval_points, eval_out);
        if (sweep->parsed())
            return cmd_sweep(sweep_range[0], sweep_range[1], sweep_steps, sweep_samples, sweep_out);
    } catch (const ff::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ff::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ff::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
