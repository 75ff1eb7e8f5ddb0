#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffwd {

// Error hierarchy. Exit-code mapping lives in the CLI.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct io_error : error {
    using error::error;
};
struct invariant_error : error {
    using error::error;
};
struct infeasible_error : error {
    using error::error;
};
struct dimension_mismatch : error {
    using error::error;
};

// One frame's producer-supplied descriptors. Features are dimension f,
// histograms are 3 channels x B bins each normalized to sum 1, thumbnail
// is an optional H*W row-major luminance grid.
struct FrameRecord {
    std::uint32_t index = 0;
    std::vector<double> features;
    double semantic_score = 0.0;
    double motion = 0.0;
    std::vector<double> histograms;   // 3*B, channel-major
    std::vector<std::uint8_t> thumbnail;  // H*W or empty
};

struct VideoRecord {
    std::vector<FrameRecord> frames;
    std::uint32_t feature_dim = 0;
    std::uint16_t hist_bins = 0;
    std::uint16_t thumb_w = 0;
    std::uint16_t thumb_h = 0;
    float fps = 30.0f;

    std::size_t size() const { return frames.size(); }
    bool has_thumbnails() const { return thumb_w > 0 && thumb_h > 0; }
};

// Contiguous frame range [start, end] with an importance level
// (0 = non-semantic) and an assigned speed-up rate.
struct Segment {
    std::uint32_t start = 0;
    std::uint32_t end = 0;  // inclusive
    int importance_level = 0;
    double speedup = 1.0;

    std::uint32_t length() const { return end - start + 1; }
};

enum class Provenance { sampled, smoothed, gapfill };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::sampled: return "sampled";
        case Provenance::smoothed: return "smoothed";
        case Provenance::gapfill: return "gapfill";
    }
    return "?";
}

struct SelectionEntry {
    std::uint32_t frame = 0;   // global index in the original video
    int segment_id = 0;        // -1-based bridge ids are encoded as negatives by gapfill
    Provenance provenance = Provenance::sampled;
};

struct Selection {
    std::vector<SelectionEntry> entries;
    double required_speedup = 0.0;

    std::vector<std::uint32_t> indices() const {
        std::vector<std::uint32_t> out;
        out.reserve(entries.size());
        for (const auto& e : entries) out.push_back(e.frame);
        return out;
    }
};

// Validates all FrameRecord / VideoRecord invariants; throws invariant_error
// naming the offending frame and field.
inline void validate(const VideoRecord& v) {
    if (v.frames.empty()) throw invariant_error("VideoRecord: n must be >= 1");
    const std::size_t f = v.feature_dim;
    const std::size_t hist_len = 3u * v.hist_bins;
    const std::size_t thumb_len =
        static_cast<std::size_t>(v.thumb_w) * v.thumb_h;
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
        const auto& fr = v.frames[i];
        const std::string at = "frame " + std::to_string(i);
        if (fr.index != i)
            throw invariant_error(at + ": index must equal position");
        if (fr.features.size() != f)
            throw invariant_error(at + ": feature dimension mismatch");
        if (fr.semantic_score < 0)
            throw invariant_error(at + ": semantic_score negative");
        if (fr.motion < 0) throw invariant_error(at + ": motion negative");
        if (fr.histograms.size() != hist_len)
            throw invariant_error(at + ": histogram size mismatch");
        for (int c = 0; c < 3; ++c) {
            double sum = 0.0;
            for (std::size_t b = 0; b < v.hist_bins; ++b) {
                double x = fr.histograms[c * v.hist_bins + b];
                if (x < 0)
                    throw invariant_error(at + ": histogram channel " +
                                          std::to_string(c) + " has negative bin");
                sum += x;
            }
            if (sum < 1.0 - 1e-6 || sum > 1.0 + 1e-6)
                throw invariant_error(at + ": histogram channel " +
                                      std::to_string(c) + " sums to " +
                                      std::to_string(sum));
        }
        if (fr.thumbnail.size() != thumb_len)
            throw invariant_error(at + ": thumbnail size mismatch");
    }
}

}  // namespace ffwd
