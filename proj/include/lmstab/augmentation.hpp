#pragma once

#include <cstdint>
#include <string>

#include "lmstab/sequence.hpp"

namespace lmstab {

// One keyframe of the pseudo-video storyboard: photometric settings plus a
// geometric homography. Photometric stages never touch landmark coordinates.
struct StoryboardState {
    double brightness_gain = 1.0;
    double brightness_offset = 0.0;  // [-1, 1]
    double pixel_noise_sigma = 0.0;  // intensity units
    double blur_sigma = 0.0;         // px
    double motion_blur_length = 0.0; // px
    double motion_blur_angle = 0.0;  // radians
    Homography geometric;

    void validate() const;
};

struct Storyboard {
    StoryboardState start;
    StoryboardState end;
    int n_frames = 1;
    double fps = 30.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
    static Storyboard from_json(const std::string& text);
};

// State at frame j (1-based): scalars lerp at t=(j-1)/(n_frames-1), the blur
// angle along the shortest arc, and the homography by lerping the images of
// the four unit-square corners and refitting.
StoryboardState interpolate_state(const Storyboard& sb, int frame_index);

struct RenderedFrame {
    ImageBuffer image;
    LandmarkSet landmarks;
    int landmarks_outside = 0;  // count mapped outside the frame (not fatal)
};

// Pipeline order: geometric warp (image and landmarks by the same homography),
// blur, brightness with clamping, then seeded additive pixel noise.
RenderedFrame render_frame(const ImageBuffer& img, const LandmarkSet& lms,
                           const StoryboardState& state, std::uint64_t frame_seed);

// Renders all frames (parallel across frames, order-independent via per-frame
// seeds derived from sb.seed) and attaches the exact "gt" landmark track.
FrameSequence generate_pseudo_video(const ImageBuffer& img, const LandmarkSet& lms,
                                    const Storyboard& sb);

// Seed for frame j (1-based), derived from the storyboard seed.
std::uint64_t frame_seed(std::uint64_t seed, int frame_index);

}  // namespace lmstab
