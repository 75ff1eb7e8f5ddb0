#pragma once

// Binary descriptor container ("FFWD"), little-endian.
// Layout: magic "FFWD", u16 version=1, u32 n, u32 f, u16 bins, u16 thumb_w,
// u16 thumb_h, f32 fps; then sections: features (n*f f32), semantic_scores
// (n f32), motion (n f32), histograms (n*3*bins f32), thumbnails
// (n*thumb_h*thumb_w u8, present only when thumb_w*thumb_h > 0).

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "types.hpp"

namespace ffwd {

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

template <typename T>
void put(std::string& buf, T value) {
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& off, const char* section) {
    if (off + sizeof(T) > buf.size())
        throw io_error(std::string("TruncatedSection: ") + section);
    T value;
    std::memcpy(&value, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return value;
}

}  // namespace detail

inline std::string encode_container(const VideoRecord& v) {
    validate(v);
    std::string buf;
    const std::uint32_t n = static_cast<std::uint32_t>(v.frames.size());
    buf.append("FFWD", 4);
    detail::put<std::uint16_t>(buf, 1);
    detail::put<std::uint32_t>(buf, n);
    detail::put<std::uint32_t>(buf, v.feature_dim);
    detail::put<std::uint16_t>(buf, v.hist_bins);
    detail::put<std::uint16_t>(buf, v.thumb_w);
    detail::put<std::uint16_t>(buf, v.thumb_h);
    detail::put<float>(buf, v.fps);
    for (const auto& fr : v.frames)
        for (double x : fr.features) detail::put<float>(buf, static_cast<float>(x));
    for (const auto& fr : v.frames)
        detail::put<float>(buf, static_cast<float>(fr.semantic_score));
    for (const auto& fr : v.frames)
        detail::put<float>(buf, static_cast<float>(fr.motion));
    for (const auto& fr : v.frames)
        for (double x : fr.histograms) detail::put<float>(buf, static_cast<float>(x));
    if (v.has_thumbnails())
        for (const auto& fr : v.frames)
            buf.append(reinterpret_cast<const char*>(fr.thumbnail.data()),
                       fr.thumbnail.size());
    return buf;
}

inline VideoRecord decode_container(const std::string& buf) {
    if (buf.size() < 4 || buf.compare(0, 4, "FFWD") != 0)
        throw io_error("BadMagic: not a FFWD container");
    std::size_t off = 4;
    const auto version = detail::take<std::uint16_t>(buf, off, "header");
    if (version != 1)
        throw io_error("VersionUnsupported: version " + std::to_string(version));
    VideoRecord v;
    const auto n = detail::take<std::uint32_t>(buf, off, "header");
    v.feature_dim = detail::take<std::uint32_t>(buf, off, "header");
    v.hist_bins = detail::take<std::uint16_t>(buf, off, "header");
    v.thumb_w = detail::take<std::uint16_t>(buf, off, "header");
    v.thumb_h = detail::take<std::uint16_t>(buf, off, "header");
    v.fps = detail::take<float>(buf, off, "header");

    const std::size_t thumb_len =
        static_cast<std::size_t>(v.thumb_w) * v.thumb_h;
    const std::size_t expected = off +
        sizeof(float) * (static_cast<std::size_t>(n) * v.feature_dim + 2ul * n +
                         static_cast<std::size_t>(n) * 3 * v.hist_bins) +
        static_cast<std::size_t>(n) * thumb_len;
    if (buf.size() != expected)
        throw io_error("TruncatedSection: file size " + std::to_string(buf.size()) +
                       " does not match header-predicted " + std::to_string(expected));

    v.frames.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        v.frames[i].index = i;
        v.frames[i].features.resize(v.feature_dim);
        for (auto& x : v.frames[i].features)
            x = detail::take<float>(buf, off, "features");
    }
    for (auto& fr : v.frames)
        fr.semantic_score = detail::take<float>(buf, off, "semantic_scores");
    for (auto& fr : v.frames)
        fr.motion = detail::take<float>(buf, off, "motion");
    for (auto& fr : v.frames) {
        fr.histograms.resize(3u * v.hist_bins);
        for (auto& x : fr.histograms)
            x = detail::take<float>(buf, off, "histograms");
    }
    if (thumb_len > 0)
        for (auto& fr : v.frames) {
            fr.thumbnail.resize(thumb_len);
            std::memcpy(fr.thumbnail.data(), buf.data() + off, thumb_len);
            off += thumb_len;
        }
    validate(v);
    return v;
}

// Header-predicted byte size of the encoded container.
inline std::size_t container_size(const VideoRecord& v) {
    const std::size_t n = v.frames.size();
    return 24 +
           sizeof(float) * (n * v.feature_dim + 2 * n + n * 3 * v.hist_bins) +
           n * static_cast<std::size_t>(v.thumb_w) * v.thumb_h;
}

inline void write_container(const VideoRecord& v, const std::string& path) {
    const std::string buf = encode_container(v);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("IoFailure: cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw io_error("IoFailure: short write to " + path);
}

inline VideoRecord read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("IoFailure: cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    return decode_container(buf);
}

}  // namespace ffwd
