#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "meshlabel/camera.hpp"
#include "meshlabel/error.hpp"
#include "meshlabel/mesh.hpp"

namespace meshlabel {

/// Owner sentinel for pixels covered by no facet.
inline constexpr int32_t kBackground = -1;

/// Reserved class index for background / unlabeled pixels; excluded from metrics.
inline constexpr uint8_t kVoidLabel = 255;

/// Clip plane: homogeneous depth below this is behind the camera.
inline constexpr double kNearClip = 1e-6;

/// Two interpolated depths closer than this are a tie, resolved by facet index.
inline constexpr double kDepthTie = 1e-9;

/// Per-pixel front-most facet and its interpolated depth.
struct VisibilityMap {
    Image<int32_t> owner;
    Image<double> depth;
};

namespace raster_detail {

struct ClipVertex {
    double x, y, w;  // homogeneous pixel coordinates
};

// Clips a homogeneous triangle against w >= kNearClip (Sutherland-Hodgman).
// Yields 0, 3 or 4 vertices.
inline int clip_near(const std::array<ClipVertex, 3>& tri, std::array<ClipVertex, 4>& out) {
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& a = tri[i];
        const ClipVertex& b = tri[(i + 1) % 3];
        const bool ain = a.w >= kNearClip;
        const bool bin = b.w >= kNearClip;
        if (ain) out[n++] = a;
        if (ain != bin) {
            const double t = (kNearClip - a.w) / (b.w - a.w);
            out[n++] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), kNearClip};
        }
    }
    return n;
}

inline double orient2d(double ax, double ay, double bx, double by, double px, double py) {
    return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

// Top-left fill rule: a pixel center exactly on an edge belongs to the
// triangle only if that edge is a top or left edge (y grows downward,
// positive-orientation winding).
inline bool edge_is_top_left(double ax, double ay, double bx, double by) {
    const double dx = bx - ax;
    const double dy = by - ay;
    return dy < 0.0 || (dy == 0.0 && dx > 0.0);
}

// Rasterizes one screen triangle into the z-buffer. Vertices carry pixel
// coordinates and homogeneous depth w (>= kNearClip). Depth is
// perspective-correct: 1/w interpolates linearly in screen space.
inline void raster_triangle(const ClipVertex& v0, const ClipVertex& v1, const ClipVertex& v2,
                            int facet, VisibilityMap& vis) {
    double x0 = v0.x / v0.w, y0 = v0.y / v0.w;
    double x1 = v1.x / v1.w, y1 = v1.y / v1.w;
    double x2 = v2.x / v2.w, y2 = v2.y / v2.w;
    double iw0 = 1.0 / v0.w, iw1 = 1.0 / v1.w, iw2 = 1.0 / v2.w;

    double area2 = orient2d(x0, y0, x1, y1, x2, y2);
    if (area2 == 0.0) return;
    if (area2 < 0.0) {
        std::swap(x1, x2);
        std::swap(y1, y2);
        std::swap(iw1, iw2);
        area2 = -area2;
    }

    const int w = vis.owner.width, h = vis.owner.height;
    int minx = std::max(0, static_cast<int>(std::floor(std::min({x0, x1, x2}) - 0.5)));
    int maxx = std::min(w - 1, static_cast<int>(std::ceil(std::max({x0, x1, x2}))));
    int miny = std::max(0, static_cast<int>(std::floor(std::min({y0, y1, y2}) - 0.5)));
    int maxy = std::min(h - 1, static_cast<int>(std::ceil(std::max({y0, y1, y2}))));
    if (minx > maxx || miny > maxy) return;

    const bool tl0 = edge_is_top_left(x1, y1, x2, y2);
    const bool tl1 = edge_is_top_left(x2, y2, x0, y0);
    const bool tl2 = edge_is_top_left(x0, y0, x1, y1);

    for (int py = miny; py <= maxy; ++py) {
        const double cy = py + 0.5;
        for (int px = minx; px <= maxx; ++px) {
            const double cx = px + 0.5;
            const double e0 = orient2d(x1, y1, x2, y2, cx, cy);
            const double e1 = orient2d(x2, y2, x0, y0, cx, cy);
            const double e2 = orient2d(x0, y0, x1, y1, cx, cy);
            const bool inside = (e0 > 0.0 || (e0 == 0.0 && tl0)) &&
                                (e1 > 0.0 || (e1 == 0.0 && tl1)) &&
                                (e2 > 0.0 || (e2 == 0.0 && tl2));
            if (!inside) continue;
            const double inv_w = (e0 * iw0 + e1 * iw1 + e2 * iw2) / area2;
            if (inv_w <= 0.0) continue;
            const double depth = 1.0 / inv_w;
            const int32_t cur = vis.owner.at(px, py);
            if (cur == kBackground || depth < vis.depth.at(px, py) - kDepthTie) {
                vis.owner.at(px, py) = facet;
                vis.depth.at(px, py) = depth;
            }
        }
    }
}

}  // namespace raster_detail

/// Z-buffered rasterization of the mesh into one view: each pixel is owned by
/// the front-most facet whose projected triangle covers the pixel center.
/// Facets are processed in ascending index order, so depth ties resolve to the
/// lower facet index.
inline VisibilityMap rasterize(const Mesh& mesh, const CameraView& view) {
    VisibilityMap vis;
    vis.owner = Image<int32_t>(view.width, view.height, kBackground);
    vis.depth = Image<double>(view.width, view.height, 0.0);

    using raster_detail::ClipVertex;
    for (int f = 0; f < mesh.num_facets(); ++f) {
        const auto& t = mesh.facets[f];
        std::array<ClipVertex, 3> tri;
        for (int k = 0; k < 3; ++k) {
            const ProjectedPoint p = project(view.projection, mesh.vertices[t[k]]);
            tri[k] = {p.x, p.y, p.w};
        }
        std::array<ClipVertex, 4> poly;
        const int n = raster_detail::clip_near(tri, poly);
        if (n < 3) continue;
        raster_detail::raster_triangle(poly[0], poly[1], poly[2], f, vis);
        if (n == 4) raster_detail::raster_triangle(poly[0], poly[2], poly[3], f, vis);
    }
    return vis;
}

/// Pixels owned by facet f in this view; empty when f is invisible.
inline std::vector<std::pair<int, int>> facet_footprint(const VisibilityMap& vis, int f) {
    std::vector<std::pair<int, int>> px;
    for (int y = 0; y < vis.owner.height; ++y)
        for (int x = 0; x < vis.owner.width; ++x)
            if (vis.owner.at(x, y) == f) px.emplace_back(x, y);
    return px;
}

/// Per-pixel class index of the owning facet; background pixels get kVoidLabel.
inline Image<uint8_t> render_labels(const Mesh& mesh, const std::vector<int>& labels,
                                    const CameraView& view) {
    check_invariant(labels.size() == static_cast<size_t>(mesh.num_facets()),
                    "render_labels: label count does not match facet count");
    const VisibilityMap vis = rasterize(mesh, view);
    Image<uint8_t> img(view.width, view.height, kVoidLabel);
    for (size_t i = 0; i < img.size(); ++i) {
        const int32_t f = vis.owner.data[i];
        if (f != kBackground) img.data[i] = static_cast<uint8_t>(labels[f]);
    }
    return img;
}

}  // namespace meshlabel
