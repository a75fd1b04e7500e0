#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meshlabel/error.hpp"
#include "meshlabel/mesh.hpp"

namespace meshlabel {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

struct LoadReport {
    int facets_loaded = 0;       // after dropping degenerates
    int degenerate_dropped = 0;
};

struct LoadedMesh {
    Mesh mesh;
    LoadReport report;
    std::vector<int> face_labels;  // from an optional per-face "label" property; empty if absent
};

namespace ply_detail {

enum class ScalarType { i8, u8, i16, u16, i32, u32, f32, f64 };

inline ScalarType parse_scalar_type(const std::string& s, const std::string& where) {
    if (s == "char" || s == "int8") return ScalarType::i8;
    if (s == "uchar" || s == "uint8") return ScalarType::u8;
    if (s == "short" || s == "int16") return ScalarType::i16;
    if (s == "ushort" || s == "uint16") return ScalarType::u16;
    if (s == "int" || s == "int32") return ScalarType::i32;
    if (s == "uint" || s == "uint32") return ScalarType::u32;
    if (s == "float" || s == "float32") return ScalarType::f32;
    if (s == "double" || s == "float64") return ScalarType::f64;
    throw InputError("PLY: unknown type '" + s + "' in " + where);
}

inline size_t scalar_size(ScalarType t) {
    switch (t) {
        case ScalarType::i8:
        case ScalarType::u8: return 1;
        case ScalarType::i16:
        case ScalarType::u16: return 2;
        case ScalarType::i32:
        case ScalarType::u32:
        case ScalarType::f32: return 4;
        case ScalarType::f64: return 8;
    }
    return 0;
}

struct Property {
    std::string name;
    bool is_list = false;
    ScalarType count_type = ScalarType::u8;  // list only
    ScalarType value_type = ScalarType::f32;
};

struct Element {
    std::string name;
    size_t count = 0;
    std::vector<Property> properties;
};

inline double read_binary_scalar(std::istream& in, ScalarType t, const std::string& where) {
    unsigned char buf[8];
    const size_t n = scalar_size(t);
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n)))
        throw InputError("PLY: unexpected end of file in " + where);
    switch (t) {
        case ScalarType::i8: return static_cast<int8_t>(buf[0]);
        case ScalarType::u8: return buf[0];
        case ScalarType::i16: {
            int16_t v;
            std::memcpy(&v, buf, 2);
            return v;
        }
        case ScalarType::u16: {
            uint16_t v;
            std::memcpy(&v, buf, 2);
            return v;
        }
        case ScalarType::i32: {
            int32_t v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case ScalarType::u32: {
            uint32_t v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case ScalarType::f32: {
            float v;
            std::memcpy(&v, buf, 4);
            return v;
        }
        case ScalarType::f64: {
            double v;
            std::memcpy(&v, buf, 8);
            return v;
        }
    }
    return 0.0;
}

inline double read_ascii_scalar(std::istream& in, const std::string& where) {
    double v;
    if (!(in >> v)) throw InputError("PLY: malformed value in " + where);
    return v;
}

}  // namespace ply_detail

/// Loads a triangular mesh from an ASCII or binary little-endian PLY file.
/// Unrecognized properties are skipped; an optional per-face "label" scalar
/// is captured. Degenerate facets are dropped and counted in the report.
inline LoadedMesh load_mesh(const std::string& path) {
    using namespace ply_detail;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open mesh file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError("PLY: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") throw InputError("PLY: missing 'ply' magic in " + path);

    bool binary = false;
    bool format_seen = false;
    std::vector<Element> elements;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "comment" || kw == "obj_info" || kw.empty()) continue;
        if (kw == "format") {
            std::string fmt, ver;
            ls >> fmt >> ver;
            if (fmt == "ascii")
                binary = false;
            else if (fmt == "binary_little_endian")
                binary = true;
            else
                throw InputError("PLY: unsupported format '" + fmt + "' in " + path);
            format_seen = true;
        } else if (kw == "element") {
            Element el;
            if (!(ls >> el.name >> el.count))
                throw InputError("PLY: malformed element line in " + path);
            elements.push_back(el);
        } else if (kw == "property") {
            if (elements.empty()) throw InputError("PLY: property before element in " + path);
            Property p;
            std::string t;
            ls >> t;
            if (t == "list") {
                std::string ct, vt;
                if (!(ls >> ct >> vt >> p.name))
                    throw InputError("PLY: malformed list property in " + path);
                p.is_list = true;
                p.count_type = parse_scalar_type(ct, path);
                p.value_type = parse_scalar_type(vt, path);
            } else {
                if (!(ls >> p.name)) throw InputError("PLY: malformed property in " + path);
                p.value_type = parse_scalar_type(t, path);
            }
            elements.back().properties.push_back(p);
        } else if (kw == "end_header") {
            break;
        } else {
            throw InputError("PLY: unknown header keyword '" + kw + "' in " + path);
        }
    }
    if (!format_seen) throw InputError("PLY: missing format line in " + path);

    LoadedMesh out;
    auto read_scalar = [&](ScalarType t, const std::string& where) {
        return binary ? read_binary_scalar(in, t, where) : read_ascii_scalar(in, where);
    };

    for (const Element& el : elements) {
        if (el.name == "vertex") {
            int xi = -1, yi = -1, zi = -1;
            for (int i = 0; i < static_cast<int>(el.properties.size()); ++i) {
                const auto& p = el.properties[i];
                if (p.is_list) continue;
                if (p.name == "x") xi = i;
                if (p.name == "y") yi = i;
                if (p.name == "z") zi = i;
            }
            if (xi < 0 || yi < 0 || zi < 0)
                throw InputError("PLY: vertex element lacks x/y/z in " + path);
            out.mesh.vertices.reserve(el.count);
            for (size_t v = 0; v < el.count; ++v) {
                const std::string where = "vertex " + std::to_string(v) + " of " + path;
                Vec3 pos;
                for (int i = 0; i < static_cast<int>(el.properties.size()); ++i) {
                    const auto& p = el.properties[i];
                    if (p.is_list) {
                        const size_t n = static_cast<size_t>(read_scalar(p.count_type, where));
                        for (size_t k = 0; k < n; ++k) read_scalar(p.value_type, where);
                        continue;
                    }
                    const double val = read_scalar(p.value_type, where);
                    if (i == xi) pos.x = val;
                    if (i == yi) pos.y = val;
                    if (i == zi) pos.z = val;
                }
                out.mesh.vertices.push_back(pos);
            }
        } else if (el.name == "face") {
            int idx_prop = -1, label_prop = -1;
            for (int i = 0; i < static_cast<int>(el.properties.size()); ++i) {
                const auto& p = el.properties[i];
                if (p.is_list && (p.name == "vertex_indices" || p.name == "vertex_index"))
                    idx_prop = i;
                if (!p.is_list && p.name == "label") label_prop = i;
            }
            if (idx_prop < 0)
                throw InputError("PLY: face element lacks vertex_indices in " + path);
            out.mesh.facets.reserve(el.count);
            const int nv = static_cast<int>(out.mesh.vertices.size());
            for (size_t f = 0; f < el.count; ++f) {
                const std::string where = "face " + std::to_string(f) + " of " + path;
                for (int i = 0; i < static_cast<int>(el.properties.size()); ++i) {
                    const auto& p = el.properties[i];
                    if (p.is_list) {
                        const size_t n = static_cast<size_t>(read_scalar(p.count_type, where));
                        if (i == idx_prop) {
                            if (n != 3)
                                throw InputError("PLY: non-triangular face (" +
                                                 std::to_string(n) + " vertices) at " + where);
                            std::array<int, 3> tri{};
                            for (int k = 0; k < 3; ++k) {
                                const double v = read_scalar(p.value_type, where);
                                const int idx = static_cast<int>(v);
                                if (idx < 0 || idx >= nv)
                                    throw InputError("PLY: vertex index " + std::to_string(idx) +
                                                     " out of range [0," + std::to_string(nv) +
                                                     ") at " + where);
                                tri[k] = idx;
                            }
                            out.mesh.facets.push_back(tri);
                        } else {
                            for (size_t k = 0; k < n; ++k) read_scalar(p.value_type, where);
                        }
                    } else {
                        const double v = read_scalar(p.value_type, where);
                        if (i == label_prop) out.face_labels.push_back(static_cast<int>(v));
                    }
                }
            }
        } else {
            // Skip unknown elements property by property.
            for (size_t r = 0; r < el.count; ++r) {
                const std::string where = el.name + " " + std::to_string(r) + " of " + path;
                for (const auto& p : el.properties) {
                    if (p.is_list) {
                        const size_t n = static_cast<size_t>(read_scalar(p.count_type, where));
                        for (size_t k = 0; k < n; ++k) read_scalar(p.value_type, where);
                    } else {
                        read_scalar(p.value_type, where);
                    }
                }
            }
        }
    }

    // Keep captured labels aligned with kept facets.
    std::vector<int> labels_kept;
    const bool has_labels = !out.face_labels.empty();
    if (has_labels && out.face_labels.size() != out.mesh.facets.size())
        throw InputError("PLY: label count does not match face count in " + path);
    if (has_labels) {
        labels_kept.reserve(out.mesh.facets.size());
        for (size_t f = 0; f < out.mesh.facets.size(); ++f) {
            const auto& t = out.mesh.facets[f];
            const Vec3 &a = out.mesh.vertices[t[0]], &b = out.mesh.vertices[t[1]],
                       &c = out.mesh.vertices[t[2]];
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] ||
                triangle_area(a, b, c) < kDegenerateAreaThreshold)
                continue;
            labels_kept.push_back(out.face_labels[f]);
        }
    }
    out.report.degenerate_dropped = finalize_mesh(out.mesh);
    out.report.facets_loaded = out.mesh.num_facets();
    if (has_labels) out.face_labels = std::move(labels_kept);
    return out;
}

/// Default per-class colors for labeled PLY output (cycled when |L| > 8).
inline std::array<uint8_t, 3> class_color(int cls) {
    static constexpr std::array<std::array<uint8_t, 3>, 8> palette = {{{170, 120, 60},
                                                                       {90, 90, 200},
                                                                       {60, 170, 60},
                                                                       {200, 60, 60},
                                                                       {200, 200, 60},
                                                                       {60, 200, 200},
                                                                       {200, 60, 200},
                                                                       {120, 120, 120}}};
    return palette[static_cast<size_t>(cls) % palette.size()];
}

/// Writes the mesh with one 8-bit class label and a palette color per face.
inline void write_labeled_ply(const std::string& path, const Mesh& mesh,
                              const std::vector<int>& labels) {
    check_invariant(labels.size() == static_cast<size_t>(mesh.num_facets()),
                    "label count does not match facet count");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write mesh file: " + path);
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.num_vertices() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.num_facets() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "property uchar label\n";
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        out << buf;
    }
    for (int f = 0; f < mesh.num_facets(); ++f) {
        const auto& t = mesh.facets[f];
        const auto rgb = class_color(labels[f]);
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << " " << labels[f] << " "
            << static_cast<int>(rgb[0]) << " " << static_cast<int>(rgb[1]) << " "
            << static_cast<int>(rgb[2]) << "\n";
    }
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace meshlabel
