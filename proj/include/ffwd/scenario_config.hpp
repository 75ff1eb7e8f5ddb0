#pragma once

// Key/value scenario config parser. Lines are "key value" pairs; '#' starts
// a comment. Shake bursts are repeated lines: "burst <start> <length> <amp>".
//
//   n 2000
//   feature_dim 16
//   hist_bins 16
//   thumb_w 8
//   thumb_h 8
//   fps 30
//   semantic_fraction 0.5
//   seed 42
//   burst 100 40 1.5

#include <fstream>
#include <sstream>
#include <string>

#include "synth.hpp"
#include "types.hpp"

namespace ffwd {

inline ScenarioSpec parse_scenario(std::istream& in) {
    ScenarioSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream iss(line);
        std::string key;
        if (!(iss >> key)) continue;
        try {
            if (key == "n") iss >> spec.n;
            else if (key == "feature_dim") iss >> spec.feature_dim;
            else if (key == "hist_bins") iss >> spec.hist_bins;
            else if (key == "thumb_w") iss >> spec.thumb_w;
            else if (key == "thumb_h") iss >> spec.thumb_h;
            else if (key == "fps") iss >> spec.fps;
            else if (key == "semantic_fraction") iss >> spec.semantic_fraction;
            else if (key == "seed") iss >> spec.seed;
            else if (key == "burst") {
                ShakeBurst b;
                iss >> b.start >> b.length >> b.amplitude;
                spec.shake_bursts.push_back(b);
            } else {
                throw io_error("scenario config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
            }
        } catch (const std::ios_base::failure&) {
            throw io_error("scenario config line " + std::to_string(lineno) +
                           ": bad value");
        }
        if (iss.fail())
            throw io_error("scenario config line " + std::to_string(lineno) +
                           ": bad value for '" + key + "'");
    }
    return spec;
}

inline ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("IoFailure: cannot open " + path);
    return parse_scenario(in);
}

}  // namespace ffwd
