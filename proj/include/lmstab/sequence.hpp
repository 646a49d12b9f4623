#pragma once

#include <map>
#include <string>
#include <vector>

#include "lmstab/image.hpp"

namespace lmstab {

// Video frames plus aligned per-frame landmark tracks keyed by label
// ("gt", "detected", "fused", ...).
struct FrameSequence {
    std::vector<ImageBuffer> frames;
    std::map<std::string, std::vector<LandmarkSet>> tracks;
    double fps = 30.0;

    std::size_t n_frames() const { return frames.size(); }

    const std::vector<LandmarkSet>& track(const std::string& label) const {
        auto it = tracks.find(label);
        if (it == tracks.end()) throw DataError("missing track: " + label);
        return it->second;
    }

    // Every track must have one LandmarkSet per frame and all sets share N.
    void validate() const {
        std::size_t n = 0;
        bool have_n = false;
        for (const auto& [label, track] : tracks) {
            if (track.size() != frames.size())
                throw DataError("track '" + label + "' length does not match frame count");
            for (const auto& lms : track) {
                if (!have_n) {
                    n = lms.size();
                    have_n = true;
                } else if (lms.size() != n) {
                    throw DataError("track '" + label + "' has inconsistent landmark count");
                }
            }
        }
    }
};

}  // namespace lmstab
