#pragma once

// Figure reproduction pipeline: renders the named figure data sets (domain
// sketch, planar S/DS images, confluence model, sphere images, parallel
// family, equatorial section, caustic) into SVG/OBJ/JSON files plus a
// manifest with content hashes.

#include <filesystem>
#include <string>
#include <vector>

#include "flatfront/meshio.hpp"

namespace flatfront::figures {

struct FigureOptions {
    double c = 0.5;                      // parameter for the illst family
    std::vector<double> t_values;        // parallel distances for dihed2
    int nu = 300, nv = 125;              // grid resolution
    bool half_domain = true;             // half view of the derived image in dihed1
};

struct Manifest {
    struct Entry {
        std::string path;  // relative to the output directory
        std::string sha256;
    };
    std::vector<Entry> files;
};

std::vector<std::string> supported_figures();

// Renders figure `id` into `outdir` and writes <id>_manifest.json there.
Manifest run_figure(const std::string& id, const std::filesystem::path& outdir,
                    const FigureOptions& opts);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

// Constant isometry whose boundary action carries the lift's geodesic
// endpoints onto the normalized Schwarz / derived Schwarz values.
Mat2 normalized_frame(const HGParams& p);

// Same, but framing the Schwarz triangle of (1/6,-1/6,1/2) as the unit fan
// of angle pi/3 used by the dihedral figures.
Mat2 dihedral_fan_frame(const HGParams& p);

}  // namespace flatfront::figures
