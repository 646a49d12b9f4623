// Command-line front end for the landmark stability toolkit.
//
// Subcommands: metrics, inject, augment, stabilize, correct, sweep.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmstab/augmentation.hpp"
#include "lmstab/detector.hpp"
#include "lmstab/fusion.hpp"
#include "lmstab/metrics.hpp"
#include "lmstab/noise.hpp"
#include "lmstab/png_io.hpp"
#include "lmstab/pts_io.hpp"
#include "lmstab/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lmstab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Atomic write: temp file in the same directory, then rename.
void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot write file: " + path.string());
        f << content;
    }
    fs::rename(tmp, path);
}

void save_png_atomic(const fs::path& path, const ImageBuffer& img) {
    const fs::path tmp = path.string() + ".tmp";
    save_png(tmp.string(), img);
    fs::rename(tmp, path);
}

void save_pts_atomic(const fs::path& path, const LandmarkSet& lms) {
    write_file_atomic(path, serialize_pts(lms));
}

// Frame files are paired by the last run of digits in the stem; no fuzzy
// matching.
std::map<long, fs::path> numbered_files(const std::string& dir, const std::string& ext) {
    if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir);
    std::map<long, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ext) continue;
        const std::string stem = entry.path().stem().string();
        std::size_t end = stem.find_last_of("0123456789");
        if (end == std::string::npos) continue;
        std::size_t begin = end;
        while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
        const long key = std::stol(stem.substr(begin, end - begin + 1));
        if (!out.emplace(key, entry.path()).second)
            throw DataError("duplicate frame number " + std::to_string(key) + " in " + dir);
    }
    if (out.empty()) throw DataError("no numbered " + ext + " files in " + dir);
    return out;
}

std::vector<LandmarkSet> load_track(const std::map<long, fs::path>& files) {
    std::vector<LandmarkSet> track;
    track.reserve(files.size());
    for (const auto& [key, path] : files) track.push_back(load_pts(path.string()));
    return track;
}

void require_aligned(const std::map<long, fs::path>& a, const std::map<long, fs::path>& b,
                     const std::string& what) {
    if (a.size() == b.size() &&
        std::equal(a.begin(), a.end(), b.begin(),
                   [](const auto& x, const auto& y) { return x.first == y.first; }))
        return;
    std::string msg = what + ": frame numbers do not align; ";
    msg += "left has " + std::to_string(a.size()) + " files, right has " +
           std::to_string(b.size()) + ". Unmatched:";
    int listed = 0;
    for (const auto& [k, p] : a)
        if (!b.count(k) && listed++ < 8) msg += " " + p.filename().string();
    for (const auto& [k, p] : b)
        if (!a.count(k) && listed++ < 8) msg += " " + p.filename().string();
    throw DataError(msg);
}

FlowParams flow_params_from_json(const json& j) {
    FlowParams p;
    p.window = j.value("window", p.window);
    p.pyramid_levels = j.value("pyramid_levels", p.pyramid_levels);
    p.max_iters = j.value("max_iters", p.max_iters);
    p.epsilon = j.value("epsilon", p.epsilon);
    p.min_eigen = j.value("min_eigen", p.min_eigen);
    return p;
}

FusionParams fusion_params_from_json(const json& j) {
    FusionParams p;
    p.tau_dt = j.value("tau_dt", p.tau_dt);
    p.tau_fb = j.value("tau_fb", p.tau_fb);
    p.normalize_by_d = j.value("normalize_by_d", p.normalize_by_d);
    p.seed_from_detections = j.value("seed_from_detections", p.seed_from_detections);
    if (j.contains("flow")) p.flow = flow_params_from_json(j["flow"]);
    if (p.tau_dt <= 0.0 || p.tau_fb <= 0.0) throw DataError("fusion params: taus must be > 0");
    return p;
}

FusionParams load_fusion_params(const std::string& path) {
    if (path.empty()) return {};
    try {
        return fusion_params_from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
        throw ParseError("invalid fusion params JSON: " + std::string(e.what()));
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Minimal grouped bar chart with optional error whiskers, two series.
std::string bar_chart_svg(const std::string& title, const std::string& series_a,
                          const std::string& series_b, const std::vector<double>& a,
                          const std::vector<double>& b, const std::vector<double>& a_err,
                          const std::vector<double>& b_err) {
    const std::size_t n = a.size();
    const double plot_w = std::max<double>(640.0, 10.0 * n);
    const double plot_h = 320.0;
    const double margin = 60.0;
    double lo = 0.0, hi = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        hi = std::max({hi, a[i] + (a_err.empty() ? 0.0 : a_err[i]),
                       b[i] + (b_err.empty() ? 0.0 : b_err[i])});
        lo = std::min({lo, a[i] - (a_err.empty() ? 0.0 : a_err[i]),
                       b[i] - (b_err.empty() ? 0.0 : b_err[i])});
    }
    const double span = hi - lo;
    auto ypix = [&](double v) { return margin + plot_h * (hi - v) / span; };

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << plot_w + 2 * margin << "' height='"
        << plot_h + 2 * margin << "'>\n";
    svg << "<text x='" << margin << "' y='30' font-size='16'>" << title << "</text>\n";
    svg << "<text x='" << margin << "' y='46' font-size='12' fill='#1f77b4'>" << series_a
        << "</text>\n";
    svg << "<text x='" << margin + 120 << "' y='46' font-size='12' fill='#d62728'>" << series_b
        << "</text>\n";
    // Axes.
    svg << "<line x1='" << margin << "' y1='" << ypix(lo) << "' x2='" << margin + plot_w
        << "' y2='" << ypix(lo) << "' stroke='black'/>\n";
    svg << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << ypix(lo) << "' stroke='black'/>\n";
    svg << "<text x='8' y='" << margin + 8 << "' font-size='10'>" << fmt(hi) << "</text>\n";
    svg << "<text x='8' y='" << ypix(0.0) << "' font-size='10'>0</text>\n";

    const double group_w = plot_w / n;
    const double bar_w = group_w * 0.35;
    for (std::size_t i = 0; i < n; ++i) {
        const double gx = margin + group_w * i;
        auto bar = [&](double x, double v, double err, const char* color) {
            const double y0 = ypix(std::max(0.0, v));
            const double y1 = ypix(std::min(0.0, v));
            svg << "<rect x='" << x << "' y='" << y0 << "' width='" << bar_w << "' height='"
                << std::max(0.5, y1 - y0) << "' fill='" << color << "'/>\n";
            if (err > 0.0) {
                const double cx = x + bar_w / 2;
                svg << "<line x1='" << cx << "' y1='" << ypix(v - err) << "' x2='" << cx
                    << "' y2='" << ypix(v + err) << "' stroke='black'/>\n";
            }
        };
        bar(gx + group_w * 0.1, a[i], a_err.empty() ? 0.0 : a_err[i], "#1f77b4");
        bar(gx + group_w * 0.55, b[i], b_err.empty() ? 0.0 : b_err[i], "#d62728");
        if (n <= 80 && (i % 5 == 0 || n <= 20))
            svg << "<text x='" << gx + group_w / 2 - 4 << "' y='" << ypix(lo) + 14
                << "' font-size='9'>" << i + 1 << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

// ---------------------------------------------------------------------------

int cmd_metrics(const std::string& pred_dir, const std::string& gt_dir, const std::string& out_dir,
                int bins, const std::string& format) {
    const auto pred_files = numbered_files(pred_dir, ".pts");
    const auto gt_files = numbered_files(gt_dir, ".pts");
    require_aligned(pred_files, gt_files, "metrics");

    const auto pred = load_track(pred_files);
    const auto gt = load_track(gt_files);
    const StabilityReport rep = noise_report(pred, gt, bins);

    double nme_sum = 0.0;
    for (std::size_t j = 0; j < pred.size(); ++j) nme_sum += nme(pred[j], gt[j]);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    if (format != "json") write_file_atomic(out / "report.csv", rep.to_csv());
    if (format != "csv") write_file_atomic(out / "report.json", rep.to_json());
    for (std::size_t i = 0; i < rep.per_landmark.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "hist_l%02zu.csv", i + 1);
        write_file_atomic(out / name, rep.histogram_csv(i));
    }
    std::vector<double> mx, my, ex, ey;
    for (const auto& st : rep.per_landmark) {
        mx.push_back(st.mean_diff.x);
        my.push_back(st.mean_diff.y);
        ex.push_back(st.sdd.x);
        ey.push_back(st.sdd.y);
    }
    write_file_atomic(out / "report.svg",
                      bar_chart_svg("per-landmark mean difference with SDD whiskers (units of d)",
                                    "X", "Y", mx, my, ex, ey));
    std::cout << "frames: " << rep.n_frames << "  mean NME: " << nme_sum / pred.size()
              << "  d: " << rep.d_used << "\n";
    return kExitOk;
}

int cmd_inject(const std::string& gt_dir, const std::string& noise_json, std::uint64_t seed,
               const std::string& out_dir) {
    std::string spec_text = noise_json;
    if (fs::is_regular_file(noise_json)) spec_text = read_file(noise_json);
    NoiseSpec spec = NoiseSpec::from_json(spec_text);
    spec.seed = seed;

    const auto files = numbered_files(gt_dir, ".pts");
    fs::create_directories(out_dir);
    for (const auto& [key, path] : files) {
        const LandmarkSet lms = load_pts(path.string());
        NoiseSpec frame_spec = spec;
        frame_spec.seed = frame_seed(seed, static_cast<int>(key));
        const NoisySample noised = inject(lms, frame_spec);
        save_pts_atomic(fs::path(out_dir) / path.filename(), noised.points);
    }
    std::cout << "injected " << files.size() << " frames -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_augment(const std::string& image_path, const std::string& pts_path,
                const std::string& storyboard_path, const std::string& out_dir) {
    const ImageBuffer img = load_png(image_path);
    const LandmarkSet lms = load_pts(pts_path);
    const Storyboard sb = Storyboard::from_json(read_file(storyboard_path));

    const FrameSequence seq = generate_pseudo_video(img, lms, sb);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    const auto& gt = seq.track("gt");
    for (int j = 0; j < static_cast<int>(seq.n_frames()); ++j) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05d.png", j + 1);
        save_png_atomic(out / name, seq.frames[j]);
        std::snprintf(name, sizeof(name), "frame_%05d.pts", j + 1);
        save_pts_atomic(out / name, gt[j]);
    }
    json manifest;
    manifest["n_frames"] = sb.n_frames;
    manifest["fps"] = sb.fps;
    manifest["seed"] = sb.seed;
    manifest["storyboard"] = json::parse(sb.to_json());
    write_file_atomic(out / "sequence.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << seq.n_frames() << " frames -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_stabilize(const std::string& frames_dir, const std::string& detections_dir,
                  const std::string& params_path, const std::string& out_dir) {
    const auto frame_files = numbered_files(frames_dir, ".png");
    const auto det_files = numbered_files(detections_dir, ".pts");
    require_aligned(frame_files, det_files, "stabilize");

    FrameSequence seq;
    for (const auto& [key, path] : frame_files) seq.frames.push_back(load_png(path.string()));
    seq.tracks["detected"] = load_track(det_files);

    const FusionParams params = load_fusion_params(params_path);
    const FusedTrack fused = stabilize_sequence(seq, "detected", params);

    fs::create_directories(out_dir);
    std::size_t j = 0;
    for (const auto& [key, path] : det_files)
        save_pts_atomic(fs::path(out_dir) / path.filename(), fused.landmarks[j++]);
    write_file_atomic(fs::path(out_dir) / "alpha.csv", fused.diagnostics_csv());
    std::cout << "stabilized " << fused.landmarks.size() << " frames -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    json cfg;
    try {
        cfg = json::parse(read_file(config_path));
    } catch (const json::exception& e) {
        throw ParseError("invalid sweep config JSON: " + std::string(e.what()));
    }

    // Input pseudo-video: explicit image+pts, or the built-in synthetic face.
    const int width = cfg.value("width", 256);
    const int height = cfg.value("height", 256);
    ImageBuffer img;
    LandmarkSet lms;
    if (cfg.contains("image")) {
        img = load_png(cfg["image"].get<std::string>());
        lms = load_pts(cfg.at("pts").get<std::string>());
    } else {
        img = synthetic_textured_image(width, height);
        lms = synthetic_face_landmarks(width, height);
    }
    Storyboard sb;
    if (cfg.contains("storyboard"))
        sb = Storyboard::from_json(cfg["storyboard"].dump());
    else
        sb.n_frames = cfg.value("n_frames", 50);
    sb.seed = cfg.value("seed", sb.seed);

    std::vector<double> sigmas = cfg.value("sigmas", std::vector<double>{0.0, 0.01, 0.02, 0.03});
    std::vector<std::uint64_t> seeds =
        cfg.value("seeds", std::vector<std::uint64_t>{1, 2, 3, 4, 5});
    FusionParams params;
    if (cfg.contains("fusion")) params = fusion_params_from_json(cfg["fusion"]);

    const FrameSequence seq = generate_pseudo_video(img, lms, sb);
    const SweepReport rep = run_noise_sweep(seq, "gt", sigmas, params, seeds);

    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    write_file_atomic(out / "sweep.csv", rep.to_csv());
    fs::create_directories(out / "cells");
    for (const auto& cell : rep.cells) {
        char name[64];
        std::snprintf(name, sizeof(name), "cell_sigma%.4f_seed%llu.csv", cell.sigma,
                      static_cast<unsigned long long>(cell.seed));
        write_file_atomic(out / "cells" / name, rep.cell_csv(cell));
    }

    // Seed-averaged per-landmark SDD bars at the largest sigma, raw vs fused.
    const double top_sigma = *std::max_element(sigmas.begin(), sigmas.end());
    std::vector<double> raw, fused;
    int count = 0;
    for (const auto& cell : rep.cells) {
        if (cell.sigma != top_sigma) continue;
        if (raw.empty()) {
            raw.assign(cell.sdd_raw_per_landmark.size(), 0.0);
            fused.assign(cell.sdd_fused_per_landmark.size(), 0.0);
        }
        for (std::size_t i = 0; i < raw.size(); ++i) {
            raw[i] += cell.sdd_raw_per_landmark[i];
            fused[i] += cell.sdd_fused_per_landmark[i];
        }
        ++count;
    }
    for (auto& v : raw) v /= count;
    for (auto& v : fused) v /= count;
    write_file_atomic(out / "sweep.svg",
                      bar_chart_svg("per-landmark SDD at sigma=" + fmt(top_sigma) +
                                        " (seed-averaged, units of d)",
                                    "raw", "fused", raw, fused, {}, {}));
    std::cout << "sweep: " << rep.cells.size() << " cells -> " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facial landmark stability toolkit"};
    app.require_subcommand(1);

    std::string pred_dir, gt_dir, out_dir, format = "csv";
    int bins = 16;
    auto* metrics_cmd = app.add_subcommand("metrics", "Stability report for pred vs gt pts dirs");
    metrics_cmd->add_option("--pred", pred_dir, "Directory of predicted pts files")->required();
    metrics_cmd->add_option("--gt", gt_dir, "Directory of ground-truth pts files")->required();
    metrics_cmd->add_option("--out", out_dir, "Output directory")->required();
    metrics_cmd->add_option("--bins", bins, "Histogram bins per axis");
    metrics_cmd->add_option("--format", format, "csv|json|both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    std::string noise_json;
    std::uint64_t seed = 0;
    auto* inject_cmd = app.add_subcommand("inject", "Inject coordinate noise into a pts dir");
    inject_cmd->add_option("--gt", gt_dir, "Directory of pts files")->required();
    inject_cmd->add_option("--noise", noise_json, "NoiseSpec JSON (inline or file path)")
        ->required();
    inject_cmd->add_option("--seed", seed, "Base RNG seed")->required();
    inject_cmd->add_option("--out", out_dir, "Output directory")->required();

    std::string image_path, pts_path, storyboard_path;
    auto* augment_cmd = app.add_subcommand("augment", "Render a storyboard pseudo-video");
    augment_cmd->add_option("--image", image_path, "Source PNG")->required();
    augment_cmd->add_option("--pts", pts_path, "Source annotation")->required();
    augment_cmd->add_option("--storyboard", storyboard_path, "Storyboard JSON file")->required();
    augment_cmd->add_option("--out", out_dir, "Output directory")->required();

    std::string frames_dir, detections_dir, params_path;
    auto* stabilize_cmd = app.add_subcommand("stabilize", "Fuse detections with tracking");
    stabilize_cmd->add_option("--frames", frames_dir, "Directory of frame PNGs")->required();
    stabilize_cmd->add_option("--detections", detections_dir, "Directory of detection pts")
        ->required();
    stabilize_cmd->add_option("--params", params_path, "FusionParams JSON file");
    stabilize_cmd->add_option("--out", out_dir, "Output directory")->required();

    auto* correct_cmd = app.add_subcommand("correct", "Correct noisy annotations (fusion)");
    correct_cmd->add_option("--frames", frames_dir, "Directory of frame PNGs")->required();
    correct_cmd->add_option("--annotations", detections_dir, "Directory of annotation pts")
        ->required();
    correct_cmd->add_option("--params", params_path, "FusionParams JSON file");
    correct_cmd->add_option("--out", out_dir, "Output directory")->required();

    std::string config_path;
    auto* sweep_cmd = app.add_subcommand("sweep", "Noise-injection sweep experiment");
    sweep_cmd->add_option("--config", config_path, "Sweep config JSON file")->required();
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitUsage : kExitOk;
    }

    try {
        if (metrics_cmd->parsed()) return cmd_metrics(pred_dir, gt_dir, out_dir, bins, format);
        if (inject_cmd->parsed()) return cmd_inject(gt_dir, noise_json, seed, out_dir);
        if (augment_cmd->parsed())
            return cmd_augment(image_path, pts_path, storyboard_path, out_dir);
        if (stabilize_cmd->parsed())
            return cmd_stabilize(frames_dir, detections_dir, params_path, out_dir);
        if (correct_cmd->parsed())
            return cmd_stabilize(frames_dir, detections_dir, params_path, out_dir);
        if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
