#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "meshlabel/energy.hpp"
#include "meshlabel/error.hpp"
#include "meshlabel/mesh.hpp"

namespace meshlabel {

/// Histogram floor: every bin is at least this after smoothing, so logs stay finite.
inline constexpr double kHistEps = 1e-3;

/// Spherical angles of a unit vector: azimuth in [-pi, pi), inclination in [0, pi].
struct SphericalDirection {
    double azimuth = 0.0;
    double inclination = 0.0;
};

inline SphericalDirection to_spherical(const Vec3& n) {
    SphericalDirection s;
    s.azimuth = (n.x == 0.0 && n.y == 0.0) ? 0.0 : std::atan2(n.y, n.x);
    if (s.azimuth >= std::numbers::pi) s.azimuth -= 2.0 * std::numbers::pi;
    s.inclination = std::acos(std::clamp(n.z, -1.0, 1.0));
    return s;
}

inline Vec3 to_unit_vector(const SphericalDirection& s) {
    const double si = std::sin(s.inclination);
    return {si * std::cos(s.azimuth), si * std::sin(s.azimuth), std::cos(s.inclination)};
}

/// Axis-aligned cubic lattice holding, per cell and class, normalized
/// histograms of facet-normal azimuths and inclinations collected from a
/// coarse labeling.
///
/// Smoothing: each histogram is the empirical distribution mixed with the
/// uniform one so that every bin is at least kHistEps and the mass still
/// sums to 1. A (cell, class) with no facets gets the uniform histogram.
struct HistogramGrid {
    Vec3 origin;
    double cell_size = 0.0;
    std::array<int, 3> dims{1, 1, 1};
    int bins_azim = 0;
    int bins_incl = 0;
    int num_classes = 0;
    // Layout: cell-major, then class, then the azimuth bins followed by the
    // inclination bins.
    std::vector<double> data;

    int num_cells() const { return dims[0] * dims[1] * dims[2]; }

    int cell_index(const Vec3& p) const {
        std::array<int, 3> c{};
        const Vec3 rel = p - origin;
        const double r[3] = {rel.x, rel.y, rel.z};
        for (int a = 0; a < 3; ++a) {
            int i = static_cast<int>(std::floor(r[a] / cell_size));
            c[a] = std::clamp(i, 0, dims[a] - 1);
        }
        return (c[2] * dims[1] + c[1]) * dims[0] + c[0];
    }

    int azim_bin(double azimuth) const {
        const double t = (azimuth + std::numbers::pi) / (2.0 * std::numbers::pi);
        return std::clamp(static_cast<int>(std::floor(t * bins_azim)), 0, bins_azim - 1);
    }

    int incl_bin(double inclination) const {
        const double t = inclination / std::numbers::pi;
        return std::clamp(static_cast<int>(std::floor(t * bins_incl)), 0, bins_incl - 1);
    }

    const double* hist_azim(int cell, int cls) const {
        return data.data() +
               (static_cast<size_t>(cell) * num_classes + cls) * (bins_azim + bins_incl);
    }
    const double* hist_incl(int cell, int cls) const { return hist_azim(cell, cls) + bins_azim; }
    double* hist_azim(int cell, int cls) {
        return data.data() +
               (static_cast<size_t>(cell) * num_classes + cls) * (bins_azim + bins_incl);
    }
    double* hist_incl(int cell, int cls) { return hist_azim(cell, cls) + bins_azim; }
};

namespace prior_detail {

// Mixes raw bin weights with the uniform distribution: the result sums to 1,
// every bin is >= kHistEps, and a single-mode input peaks at 1 - (B-1)*eps.
inline void smooth_histogram(double* bins, int count, double total) {
    if (total <= 0.0) {
        for (int b = 0; b < count; ++b) bins[b] = 1.0 / count;
        return;
    }
    const double keep = 1.0 - count * kHistEps;
    for (int b = 0; b < count; ++b) bins[b] = keep * (bins[b] / total) + kHistEps;
}

}  // namespace prior_detail

/// Builds the lattice from a coarse labeling: for each cell and class, the
/// normals of the facets whose centroid falls in the cell are binned by
/// azimuth and inclination. Counts are per facet unless area_weighted is set.
inline HistogramGrid build_grid(const Mesh& mesh, const std::vector<int>& coarse,
                                double cell_size, int bins_azim, int bins_incl,
                                const ClassSet& classes, bool area_weighted = false) {
    if (cell_size <= 0.0) throw InputError("build_grid: cell_size must be positive");
    if (bins_azim < 2 || bins_incl < 2) throw InputError("build_grid: need at least 2 bins");
    if (bins_azim * kHistEps >= 1.0 || bins_incl * kHistEps >= 1.0)
        throw InputError("build_grid: too many bins for the smoothing floor");
    check_invariant(coarse.size() == static_cast<size_t>(mesh.num_facets()),
                    "build_grid: coarse labeling does not cover all facets");

    HistogramGrid grid;
    grid.cell_size = cell_size;
    grid.bins_azim = bins_azim;
    grid.bins_incl = bins_incl;
    grid.num_classes = classes.count();

    const Aabb box = mesh.bounding_box();
    if (!box.valid()) throw InputError("build_grid: empty mesh");
    grid.origin = box.min;
    const Vec3 ext = box.extent();
    const double e[3] = {ext.x, ext.y, ext.z};
    for (int a = 0; a < 3; ++a)
        grid.dims[a] = std::max(1, static_cast<int>(std::ceil(e[a] / cell_size)));

    const int per_hist = bins_azim + bins_incl;
    grid.data.assign(static_cast<size_t>(grid.num_cells()) * grid.num_classes * per_hist, 0.0);
    std::vector<double> totals(static_cast<size_t>(grid.num_cells()) * grid.num_classes, 0.0);

    for (int f = 0; f < mesh.num_facets(); ++f) {
        const int cls = coarse[f];
        check_invariant(cls >= 0 && cls < grid.num_classes, "build_grid: label out of range");
        const int cell = grid.cell_index(mesh.facet_centroids[f]);
        const SphericalDirection s = to_spherical(mesh.facet_normals[f]);
        const double w = area_weighted ? mesh.facet_areas[f] : 1.0;
        grid.hist_azim(cell, cls)[grid.azim_bin(s.azimuth)] += w;
        grid.hist_incl(cell, cls)[grid.incl_bin(s.inclination)] += w;
        totals[static_cast<size_t>(cell) * grid.num_classes + cls] += w;
    }

    for (int cell = 0; cell < grid.num_cells(); ++cell)
        for (int cls = 0; cls < grid.num_classes; ++cls) {
            const double total = totals[static_cast<size_t>(cell) * grid.num_classes + cls];
            prior_detail::smooth_histogram(grid.hist_azim(cell, cls), bins_azim, total);
            prior_detail::smooth_histogram(grid.hist_incl(cell, cls), bins_incl, total);
        }
    return grid;
}

/// Normal-likelihood energy of assigning class l to a facet with the given
/// centroid and unit normal: -log(hist_azim(az(n)) * hist_incl(inc(n)))
/// evaluated in the cell containing the centroid.
inline double norm_energy(const HistogramGrid& grid, const Vec3& centroid, const Vec3& n,
                          int cls) {
    const int cell = grid.cell_index(centroid);
    const SphericalDirection s = to_spherical(n);
    const double pa = grid.hist_azim(cell, cls)[grid.azim_bin(s.azimuth)];
    const double pi_ = grid.hist_incl(cell, cls)[grid.incl_bin(s.inclination)];
    return -std::log(pa * pi_);
}

/// Normal-likelihood unary table for every (facet, class).
inline UnaryTable fill_unary(const HistogramGrid& grid, const Mesh& mesh,
                             const ClassSet& classes) {
    check_invariant(classes.count() == grid.num_classes,
                    "fill_unary: class count does not match grid");
    UnaryTable table(mesh.num_facets(), classes.count());
    for (int f = 0; f < mesh.num_facets(); ++f)
        for (int l = 0; l < classes.count(); ++l)
            table.at(f, l) = norm_energy(grid, mesh.facet_centroids[f], mesh.facet_normals[f], l);
    return table;
}

/// CSV dump of every (cell, class, bin) value for offline inspection.
inline void dump_grid_csv(const std::string& path, const HistogramGrid& grid) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "cell_i,cell_j,cell_k,class,bin_kind,bin_index,value\n";
    char buf[128];
    for (int ck = 0; ck < grid.dims[2]; ++ck)
        for (int cj = 0; cj < grid.dims[1]; ++cj)
            for (int ci = 0; ci < grid.dims[0]; ++ci) {
                const int cell = (ck * grid.dims[1] + cj) * grid.dims[0] + ci;
                for (int cls = 0; cls < grid.num_classes; ++cls) {
                    for (int b = 0; b < grid.bins_azim; ++b) {
                        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,azim,%d,%.17g\n", ci, cj, ck,
                                      cls, b, grid.hist_azim(cell, cls)[b]);
                        out << buf;
                    }
                    for (int b = 0; b < grid.bins_incl; ++b) {
                        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,incl,%d,%.17g\n", ci, cj, ck,
                                      cls, b, grid.hist_incl(cell, cls)[b]);
                        out << buf;
                    }
                }
            }
}

}  // namespace meshlabel
