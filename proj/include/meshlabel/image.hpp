#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "meshlabel/error.hpp"

namespace meshlabel {

/// Dense row-major raster.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    T& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    const T& at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
};

namespace pgm_detail {

inline int next_token(std::istream& in, const std::string& path) {
    // Skips whitespace and '#' comment lines between header tokens.
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            in.unget();
            int v;
            if (!(in >> v)) throw InputError("PGM: malformed header in " + path);
            return v;
        }
    }
    throw InputError("PGM: truncated header in " + path);
}

inline void read_header(std::istream& in, const std::string& path, int& w, int& h, int& maxval) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw InputError("PGM: not a binary PGM (P5): " + path);
    w = next_token(in, path);
    h = next_token(in, path);
    maxval = next_token(in, path);
    in.get();  // single whitespace before raster data
    if (w <= 0 || h <= 0) throw InputError("PGM: invalid dimensions in " + path);
}

}  // namespace pgm_detail

/// 8-bit binary PGM, used for class-index label images (255 = void).
inline Image<uint8_t> read_pgm8(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open image: " + path);
    int w, h, maxval;
    pgm_detail::read_header(in, path, w, h, maxval);
    if (maxval != 255) throw InputError("PGM: expected maxval 255 in " + path);
    Image<uint8_t> img(w, h);
    if (!in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.size())))
        throw InputError("PGM: truncated pixel data in " + path);
    return img;
}

inline void write_pgm8(const std::string& path, const Image<uint8_t>& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write image: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.size()));
    if (!out) throw InputError("write failed: " + path);
}

/// 16-bit binary PGM (big-endian samples), gray value g encoding a value g/65535.
inline Image<float> read_pgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open image: " + path);
    int w, h, maxval;
    pgm_detail::read_header(in, path, w, h, maxval);
    if (maxval != 65535) throw InputError("PGM: expected maxval 65535 in " + path);
    std::vector<unsigned char> raw(static_cast<size_t>(w) * h * 2);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
        throw InputError("PGM: truncated pixel data in " + path);
    Image<float> img(w, h);
    for (size_t i = 0; i < img.size(); ++i) {
        const unsigned g = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
        img.data[i] = static_cast<float>(g) / 65535.0f;
    }
    return img;
}

inline void write_pgm16(const std::string& path, const Image<float>& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write image: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n65535\n";
    std::vector<unsigned char> raw(img.size() * 2);
    for (size_t i = 0; i < img.size(); ++i) {
        float v = img.data[i];
        if (v < 0.0f) v = 0.0f;
        if (v > 1.0f) v = 1.0f;
        const unsigned g = static_cast<unsigned>(v * 65535.0f + 0.5f);
        raw[2 * i] = static_cast<unsigned char>(g >> 8);
        raw[2 * i + 1] = static_cast<unsigned char>(g & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw InputError("write failed: " + path);
}

}  // namespace meshlabel
