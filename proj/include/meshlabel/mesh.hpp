#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meshlabel/error.hpp"
#include "meshlabel/geometry.hpp"

namespace meshlabel {

/// Facets below this area are considered degenerate and dropped at load time.
inline constexpr double kDegenerateAreaThreshold = 1e-12;

/// Indexed triangle mesh with per-facet derived geometry and the
/// edge-adjacency graph used as the MRF neighborhood.
///
/// Immutable after construction; safe for shared read access.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> facets;
    std::vector<Vec3> facet_normals;     // unit length
    std::vector<Vec3> facet_centroids;   // mean of the three vertices
    std::vector<double> facet_areas;
    std::vector<std::pair<int, int>> adjacency;  // facet pairs sharing a full edge, f < h

    int num_facets() const { return static_cast<int>(facets.size()); }
    int num_vertices() const { return static_cast<int>(vertices.size()); }

    Aabb bounding_box() const {
        Aabb box;
        for (const Vec3& v : vertices) box.expand(v);
        return box;
    }
};

/// Ordered set of class names; indices into it are the MRF labels.
struct ClassSet {
    std::vector<std::string> names;

    int count() const { return static_cast<int>(names.size()); }

    void validate() const {
        if (count() < 2) throw InputError("class set needs at least 2 classes");
        if (count() > 255) throw InputError("class set too large for 8-bit labels");
        std::set<std::string> uniq(names.begin(), names.end());
        if (static_cast<int>(uniq.size()) != count())
            throw InputError("class names must be unique");
    }
};

/// Facet pairs sharing a full edge (two common vertices), each listed once
/// with f < h. An edge shared by more than two facets yields all pairwise
/// combinations.
inline std::vector<std::pair<int, int>> build_adjacency(
    const std::vector<std::array<int, 3>>& facets) {
    std::map<std::pair<int, int>, std::vector<int>> edge_facets;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
        const auto& t = facets[f];
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_facets[{a, b}].push_back(f);
        }
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& [edge, fs] : edge_facets) {
        for (size_t i = 0; i < fs.size(); ++i)
            for (size_t j = i + 1; j < fs.size(); ++j) {
                int f = fs[i], h = fs[j];
                if (f == h) continue;  // a facet can meet an edge twice only if degenerate
                if (f > h) std::swap(f, h);
                pairs.insert({f, h});
            }
    }
    return {pairs.begin(), pairs.end()};
}

/// Populates normals, centroids, areas and adjacency from vertices + facets,
/// dropping degenerate facets. Returns the number of facets dropped.
inline int finalize_mesh(Mesh& mesh) {
    std::vector<std::array<int, 3>> kept;
    kept.reserve(mesh.facets.size());
    int dropped = 0;
    for (const auto& t : mesh.facets) {
        const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] ||
            triangle_area(a, b, c) < kDegenerateAreaThreshold) {
            ++dropped;
            continue;
        }
        kept.push_back(t);
    }
    mesh.facets = std::move(kept);
    const int nf = mesh.num_facets();
    mesh.facet_normals.resize(nf);
    mesh.facet_centroids.resize(nf);
    mesh.facet_areas.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const auto& t = mesh.facets[f];
        const Vec3 &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
        mesh.facet_normals[f] = triangle_normal(a, b, c);
        mesh.facet_centroids[f] = triangle_centroid(a, b, c);
        mesh.facet_areas[f] = triangle_area(a, b, c);
    }
    mesh.adjacency = build_adjacency(mesh.facets);
    return dropped;
}

}  // namespace meshlabel
