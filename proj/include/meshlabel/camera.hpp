#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meshlabel/error.hpp"
#include "meshlabel/geometry.hpp"
#include "meshlabel/image.hpp"

namespace meshlabel {

/// Row-major 3x4 projection matrix mapping homogeneous world points to
/// homogeneous pixel coordinates.
struct Mat34 {
    std::array<double, 12> m{};

    double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 4 + c]; }
    double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 4 + c]; }
};

/// Homogeneous projection result: pixel = (x/w, y/w), w is the depth.
struct ProjectedPoint {
    double x = 0.0, y = 0.0, w = 0.0;
};

inline ProjectedPoint project(const Mat34& p, const Vec3& v) {
    return {p(0, 0) * v.x + p(0, 1) * v.y + p(0, 2) * v.z + p(0, 3),
            p(1, 0) * v.x + p(1, 1) * v.y + p(1, 2) * v.z + p(1, 3),
            p(2, 0) * v.x + p(2, 1) * v.y + p(2, 2) * v.z + p(2, 3)};
}

/// One calibrated view: projection, image size, and the per-class likelihood
/// rasters produced by a 2D semantic classifier.
struct CameraView {
    int id = 0;
    int width = 0;
    int height = 0;
    Mat34 projection;
    std::vector<Image<float>> likelihoods;  // one raster per class, values in [0,1]

    void validate_likelihoods(int num_classes) const {
        if (static_cast<int>(likelihoods.size()) != num_classes)
            throw InputError("view " + std::to_string(id) + ": expected " +
                             std::to_string(num_classes) + " likelihood rasters, got " +
                             std::to_string(likelihoods.size()));
        for (const auto& img : likelihoods)
            if (img.width != width || img.height != height)
                throw InputError("view " + std::to_string(id) +
                                 ": likelihood raster dimensions mismatch");
    }
};

/// Camera file: one camera per block — view id, width, height, then 12
/// whitespace-separated floats (row-major 3x4 projection). '#' starts a comment.
inline std::vector<CameraView> load_cameras(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open camera file: " + path);
    std::ostringstream filtered;
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        filtered << (hash == std::string::npos ? line : line.substr(0, hash)) << "\n";
    }
    std::istringstream ts(filtered.str());
    std::vector<CameraView> views;
    int id;
    while (ts >> id) {
        CameraView v;
        v.id = id;
        if (!(ts >> v.width >> v.height))
            throw InputError("camera file: malformed block for view " + std::to_string(id) +
                             " in " + path);
        if (v.width <= 0 || v.height <= 0)
            throw InputError("camera file: invalid image size for view " + std::to_string(id));
        for (int i = 0; i < 12; ++i)
            if (!(ts >> v.projection.m[i]))
                throw InputError("camera file: expected 12 projection entries for view " +
                                 std::to_string(id) + " in " + path);
        views.push_back(std::move(v));
    }
    if (views.empty()) throw InputError("camera file: no cameras found in " + path);
    return views;
}

inline void write_cameras(const std::string& path, const std::vector<CameraView>& views) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write camera file: " + path);
    char buf[256];
    for (const auto& v : views) {
        out << v.id << " " << v.width << " " << v.height << "\n";
        for (int r = 0; r < 3; ++r) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", v.projection(r, 0),
                          v.projection(r, 1), v.projection(r, 2), v.projection(r, 3));
            out << buf;
        }
    }
    if (!out) throw InputError("write failed: " + path);
}

inline std::string likelihood_filename(int view_id, int cls) {
    return "view" + std::to_string(view_id) + "_class" + std::to_string(cls) + ".pgm";
}

/// Loads "view{ID}_class{K}.pgm" rasters for every view and class.
inline void load_likelihoods(const std::string& dir, std::vector<CameraView>& views,
                             int num_classes) {
    for (auto& v : views) {
        v.likelihoods.clear();
        for (int k = 0; k < num_classes; ++k) {
            const std::string path = dir + "/" + likelihood_filename(v.id, k);
            v.likelihoods.push_back(read_pgm16(path));
        }
        v.validate_likelihoods(num_classes);
    }
}

}  // namespace meshlabel
