#include "lmstab/optical_flow.hpp"

#include <cmath>
#include <limits>

#include "lmstab/kernels.hpp"

namespace lmstab {

std::vector<ImageBuffer> build_pyramid(const ImageBuffer& img, int levels) {
    if (levels < 1) throw DataError("pyramid needs at least 1 level");
    std::vector<ImageBuffer> pyr;
    pyr.reserve(levels);
    pyr.push_back(to_gray(img));
    // 5-tap binomial smoothing before each 2x decimation.
    static const float taps[3] = {6.0f / 16.0f, 4.0f / 16.0f, 1.0f / 16.0f};
    const auto& k = kernels::ops();
    for (int level = 1; level < levels; ++level) {
        const ImageBuffer& src = pyr.back();
        if (src.width / 2 < 8 || src.height / 2 < 8)
            throw DataError("image too small for " + std::to_string(levels) + " pyramid levels");

        // Horizontal pass.
        ImageBuffer blurred(src.width, src.height, 1);
        for (int y = 0; y < src.height; ++y)
            k.convolve_sym(&src.samples[static_cast<std::size_t>(y) * src.width],
                           &blurred.samples[static_cast<std::size_t>(y) * src.width],
                           static_cast<std::size_t>(src.width), taps, 2);
        // Vertical pass over columns, via transpose.
        std::vector<float> col(src.height), colv(src.height);
        for (int x = 0; x < src.width; ++x) {
            for (int y = 0; y < src.height; ++y) col[y] = blurred.at(x, y);
            k.convolve_sym(col.data(), colv.data(), col.size(), taps, 2);
            for (int y = 0; y < src.height; ++y) blurred.at(x, y) = colv[y];
        }

        ImageBuffer down(src.width / 2, src.height / 2, 1);
        for (int y = 0; y < down.height; ++y)
            for (int x = 0; x < down.width; ++x) down.at(x, y) = blurred.at(2 * x, 2 * y);
        pyr.push_back(std::move(down));
    }
    return pyr;
}

namespace {

struct WindowBuffers {
    std::vector<float> ix, iy, prev_vals, diff;
};

bool window_inside(const ImageBuffer& img, const Point2& c, int margin) {
    return c.x - margin >= 0.0 && c.y - margin >= 0.0 && c.x + margin <= img.width - 1.0 &&
           c.y + margin <= img.height - 1.0;
}

// Tracks a single point through the two pyramids. Returns false when lost.
bool track_one(const std::vector<ImageBuffer>& prev_pyr, const std::vector<ImageBuffer>& next_pyr,
               const Point2& p, const FlowParams& prm, WindowBuffers& buf, Point2& out,
               double& residual) {
    const int w = prm.window;
    const std::size_t count = static_cast<std::size_t>(2 * w + 1) * (2 * w + 1);
    buf.ix.resize(count);
    buf.iy.resize(count);
    buf.prev_vals.resize(count);
    buf.diff.resize(count);
    const int margin = w + 2;
    const auto& kern = kernels::ops();

    Point2 g{0, 0};  // displacement guess carried from coarser levels
    residual = 0.0;
    const int levels = static_cast<int>(prev_pyr.size());
    for (int level = levels - 1; level >= 0; --level) {
        const ImageBuffer& prev = prev_pyr[level];
        const ImageBuffer& next = next_pyr[level];
        const double inv_scale = 1.0 / static_cast<double>(1 << level);
        const Point2 pl{p.x * inv_scale, p.y * inv_scale};
        const bool finest = level == 0;

        if (!window_inside(prev, pl, margin)) {
            if (finest) {
                out = p + g;
                return false;
            }
            g = g * 2.0;
            continue;
        }

        // Spatial gradients and template values, fixed per level.
        std::size_t idx = 0;
        for (int dy = -w; dy <= w; ++dy)
            for (int dx = -w; dx <= w; ++dx, ++idx) {
                const double sx = pl.x + dx;
                const double sy = pl.y + dy;
                buf.ix[idx] = 0.5f * (bilinear_sample(prev, sx + 1, sy) -
                                      bilinear_sample(prev, sx - 1, sy));
                buf.iy[idx] = 0.5f * (bilinear_sample(prev, sx, sy + 1) -
                                      bilinear_sample(prev, sx, sy - 1));
                buf.prev_vals[idx] = bilinear_sample(prev, sx, sy);
            }

        double sums[5] = {0, 0, 0, 0, 0};
        kern.lk_accumulate(buf.ix.data(), buf.iy.data(), buf.prev_vals.data(), count, sums);
        const double sxx = sums[0], sxy = sums[1], syy = sums[2];
        const double tr = sxx + syy;
        const double det = sxx * syy - sxy * sxy;
        const double min_eig = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
        if (min_eig / static_cast<double>(count) < prm.min_eigen) {
            if (finest) {
                out = p + g;
                return false;
            }
            g = g * 2.0;
            continue;
        }

        Point2 v{0, 0};
        for (int iter = 0; iter < prm.max_iters; ++iter) {
            const Point2 q{pl.x + g.x + v.x, pl.y + g.y + v.y};
            if (!window_inside(next, q, margin)) {
                if (finest) {
                    out = p + g + v;
                    return false;
                }
                break;
            }
            std::size_t j = 0;
            for (int dy = -w; dy <= w; ++dy)
                for (int dx = -w; dx <= w; ++dx, ++j)
                    buf.diff[j] = buf.prev_vals[j] - bilinear_sample(next, q.x + dx, q.y + dy);

            double rhs[5] = {0, 0, 0, 0, 0};
            kern.lk_accumulate(buf.ix.data(), buf.iy.data(), buf.diff.data(), count, rhs);
            const double bx = rhs[3], by = rhs[4];
            const Point2 dv{(syy * bx - sxy * by) / det, (sxx * by - sxy * bx) / det};
            v = v + dv;
            if (dv.norm() < prm.epsilon) break;
        }
        if (finest) {
            residual = kern.sum_abs(buf.diff.data(), count) / static_cast<double>(count);
            out = p + g + v;
            return window_inside(next, {pl.x + g.x + v.x, pl.y + g.y + v.y}, margin);
        }
        g = (g + v) * 2.0;
    }
    out = p;
    return false;  // unreachable for levels >= 1
}

}  // namespace

TrackResult track_points(const ImageBuffer& prev, const ImageBuffer& next,
                         const std::vector<Point2>& pts, const FlowParams& params) {
    if (prev.width != next.width || prev.height != next.height)
        throw DataError("track_points: image dimensions differ");
    if (pts.empty()) throw DataError("track_points: empty point list");
    if (params.window < 1 || params.pyramid_levels < 1 || params.max_iters < 1 ||
        params.epsilon <= 0.0)
        throw DataError("invalid flow parameters");

    const auto prev_pyr = build_pyramid(prev, params.pyramid_levels);
    const auto next_pyr = build_pyramid(next, params.pyramid_levels);

    TrackResult res;
    res.points.resize(pts.size());
    res.status.resize(pts.size());
    res.residual.assign(pts.size(), 0.0);
    WindowBuffers buf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool ok =
            track_one(prev_pyr, next_pyr, pts[i], params, buf, res.points[i], res.residual[i]);
        res.status[i] = ok ? TrackStatus::ok : TrackStatus::lost;
    }
    return res;
}

ForwardBackwardResult forward_backward(const ImageBuffer& prev, const ImageBuffer& next,
                                       const std::vector<Point2>& pts, const FlowParams& params) {
    ForwardBackwardResult r;
    r.forward = track_points(prev, next, pts, params);
    const TrackResult back = track_points(next, prev, r.forward.points, params);
    r.back_points = back.points;
    r.fb_error.resize(pts.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool ok =
            r.forward.status[i] == TrackStatus::ok && back.status[i] == TrackStatus::ok;
        r.fb_error[i] = ok ? distance(back.points[i], pts[i]) : inf;
    }
    return r;
}

}  // namespace lmstab
