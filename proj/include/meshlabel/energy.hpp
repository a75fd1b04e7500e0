#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <vector>

#include "meshlabel/error.hpp"
#include "meshlabel/mesh.hpp"
#include "meshlabel/rasterize.hpp"

namespace meshlabel {

/// Likelihoods are clamped here before the log so energies stay finite.
inline constexpr double kDataEps = 1e-6;

/// Dense |F| x |L| table of per-facet, per-class unary energies.
struct UnaryTable {
    int num_facets = 0;
    int num_classes = 0;
    std::vector<double> values;  // row-major, facet-major

    UnaryTable() = default;
    UnaryTable(int nf, int nl)
        : num_facets(nf), num_classes(nl), values(static_cast<size_t>(nf) * nl, 0.0) {}

    double& at(int f, int l) { return values[static_cast<size_t>(f) * num_classes + l]; }
    double at(int f, int l) const { return values[static_cast<size_t>(f) * num_classes + l]; }

    /// Per-facet argmin label, ties to the lowest index.
    std::vector<int> argmin_labels() const {
        std::vector<int> labels(num_facets, 0);
        for (int f = 0; f < num_facets; ++f) {
            double best = at(f, 0);
            for (int l = 1; l < num_classes; ++l)
                if (at(f, l) < best) {
                    best = at(f, l);
                    labels[f] = l;
                }
        }
        return labels;
    }
};

enum class DataNorm { normalized, raw };

/// Unary evidence term. For each facet, sums classifier likelihoods over the
/// facet's visible footprint in every view, normalizes by the total visible
/// pixel count (unless DataNorm::raw) and takes -log of the clamped result.
/// Facets visible in no view get the uniform value -log(1/|L|).
inline UnaryTable data_term(const Mesh& mesh, const std::vector<CameraView>& views,
                            const std::vector<VisibilityMap>& vis, const ClassSet& classes,
                            DataNorm norm_mode = DataNorm::normalized) {
    if (views.size() != vis.size())
        throw InputError("data_term: need one visibility map per view");
    const int nf = mesh.num_facets();
    const int nl = classes.count();
    UnaryTable table(nf, nl);
    std::vector<double> sums(static_cast<size_t>(nf) * nl, 0.0);
    std::vector<int64_t> pixel_counts(nf, 0);

    for (size_t i = 0; i < views.size(); ++i) {
        const CameraView& view = views[i];
        view.validate_likelihoods(nl);
        const Image<int32_t>& owner = vis[i].owner;
        if (owner.width != view.width || owner.height != view.height)
            throw InputError("data_term: visibility map does not match view dimensions");
        for (size_t p = 0; p < owner.size(); ++p) {
            const int32_t f = owner.data[p];
            if (f == kBackground) continue;
            ++pixel_counts[f];
            for (int l = 0; l < nl; ++l)
                sums[static_cast<size_t>(f) * nl + l] += view.likelihoods[l].data[p];
        }
    }

    const double uniform = -std::log(1.0 / nl);
    for (int f = 0; f < nf; ++f) {
        if (pixel_counts[f] == 0) {
            for (int l = 0; l < nl; ++l) table.at(f, l) = uniform;
            continue;
        }
        for (int l = 0; l < nl; ++l) {
            double s = sums[static_cast<size_t>(f) * nl + l];
            if (norm_mode == DataNorm::normalized) s /= static_cast<double>(pixel_counts[f]);
            table.at(f, l) = -std::log(std::max(kDataEps, s));
        }
    }
    return table;
}

/// Potts smoothness indicator.
inline double smooth_term(int l_f, int l_h) { return l_f != l_h ? 1.0 : 0.0; }

/// Gaussian weight of the discontinuity prior: exp(-theta^2 / (2 (pi/2)^2))
/// where theta is the angle between the two facet normals. The label
/// indicator gating is applied by the solver.
inline double disc_weight(const Vec3& n1, const Vec3& n2) {
    const double d = std::clamp(dot(n1, n2), -1.0, 1.0);
    const double theta = std::acos(d);
    const double sigma = std::numbers::pi / 2.0;
    return std::exp(-(theta * theta) / (2.0 * sigma * sigma));
}

/// Pairwise edge of the facet graph with its precomputed geometry weight.
struct PairwiseEdge {
    int f = 0;
    int h = 0;           // f < h
    double theta = 0.0;  // angle between facet normals, in [0, pi]
    double weight_disc = 0.0;
};

/// One edge per adjacency pair, with the discontinuity weight precomputed.
inline std::vector<PairwiseEdge> build_edges(const Mesh& mesh) {
    std::vector<PairwiseEdge> edges;
    edges.reserve(mesh.adjacency.size());
    for (const auto& [f, h] : mesh.adjacency) {
        const double d = std::clamp(dot(mesh.facet_normals[f], mesh.facet_normals[h]), -1.0, 1.0);
        PairwiseEdge e;
        e.f = f;
        e.h = h;
        e.theta = std::acos(d);
        e.weight_disc = disc_weight(mesh.facet_normals[f], mesh.facet_normals[h]);
        edges.push_back(e);
    }
    return edges;
}

inline void dump_unary_csv(const std::string& path, const UnaryTable& table) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "facet,class,energy\n";
    char buf[96];
    for (int f = 0; f < table.num_facets; ++f)
        for (int l = 0; l < table.num_classes; ++l) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", f, l, table.at(f, l));
            out << buf;
        }
}

inline void dump_edges_csv(const std::string& path, const std::vector<PairwiseEdge>& edges) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "f,h,theta,weight_disc\n";
    char buf[128];
    for (const auto& e : edges) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", e.f, e.h, e.theta, e.weight_disc);
        out << buf;
    }
}

}  // namespace meshlabel
