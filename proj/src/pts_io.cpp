#include "lmstab/pts_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lmstab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& tok, int line) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw ParseError("non-numeric coordinate '" + tok + "'", line);
    return v;
}

}  // namespace

LandmarkSet parse_pts(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    auto next_line = [&](const char* what) {
        while (std::getline(in, raw)) {
            ++line;
            std::string t = trim(raw);
            if (!t.empty()) return t;
        }
        throw ParseError(std::string("unexpected end of file, expected ") + what, line + 1);
    };

    std::string version = next_line("'version: 1'");
    if (version.rfind("version:", 0) != 0)
        throw ParseError("malformed header, expected 'version: 1'", line);

    std::string npoints = next_line("'n_points: K'");
    if (npoints.rfind("n_points:", 0) != 0)
        throw ParseError("malformed header, expected 'n_points: K'", line);
    std::string count_tok = trim(npoints.substr(9));
    int declared = 0;
    {
        auto [ptr, ec] = std::from_chars(count_tok.data(), count_tok.data() + count_tok.size(), declared);
        if (ec != std::errc() || ptr != count_tok.data() + count_tok.size() || declared < 0)
            throw ParseError("invalid point count '" + count_tok + "'", line);
    }

    if (next_line("'{'") != "{") throw ParseError("expected '{'", line);

    LandmarkSet lms;
    lms.points.reserve(declared);
    for (int i = 0; i < declared; ++i) {
        std::string pt = next_line("a coordinate line");
        if (pt == "}")
            throw ParseError("point-count mismatch: got " + std::to_string(i) + " of " +
                                 std::to_string(declared) + " points",
                             line);
        std::istringstream ps(pt);
        std::string xs, ys, extra;
        ps >> xs >> ys;
        if (ps >> extra) throw ParseError("expected exactly two coordinates", line);
        if (ys.empty()) throw ParseError("expected exactly two coordinates", line);
        lms.points.push_back({parse_real(xs, line), parse_real(ys, line)});
    }
    if (next_line("'}'") != "}")
        throw ParseError("point-count mismatch: more points than declared", line);
    lms.validate();
    return lms;
}

std::string serialize_pts(const LandmarkSet& lms) {
    std::string out = "version: 1\nn_points: " + std::to_string(lms.size()) + "\n{\n";
    char buf[64];
    for (const auto& p : lms.points) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f\n", p.x, p.y);
        out += buf;
    }
    out += "}\n";
    return out;
}

LandmarkSet load_pts(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open pts file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    try {
        return parse_pts(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), -1);
    }
}

void save_pts(const std::string& path, const LandmarkSet& lms) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write pts file: " + path);
    f << serialize_pts(lms);
}

}  // namespace lmstab
