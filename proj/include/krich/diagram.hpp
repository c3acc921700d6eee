#pragma once

#include "krich/lattice.hpp"

#include <array>
#include <cstdio>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace krich {

struct DiagramCell {
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::uint32_t mask = 0;
    friend bool operator==(const DiagramCell&, const DiagramCell&) = default;
};

struct LegendEntry {
    std::uint32_t bit = 0;
    std::string name;
    std::string region;
    std::string fill;
};

/// Membership of every window cell in a list of regions. Bit k of a mask is
/// region k of the input list. Only cells with a nonzero mask are stored,
/// sorted by (i, j).
struct DiagramData {
    Window window;
    std::vector<LatticeRegion> regions;
    std::vector<DiagramCell> cells;
    std::vector<LegendEntry> legend;
};

namespace detail {

inline constexpr std::string_view kGlyphs =
    ".123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz@#";

inline constexpr std::array<std::array<int, 3>, 6> kPalette{{
    {0x1f, 0x77, 0xb4},
    {0xd6, 0x27, 0x28},
    {0x2c, 0xa0, 0x2c},
    {0xff, 0x7f, 0x0e},
    {0x94, 0x67, 0xbd},
    {0x8c, 0x56, 0x4b},
}};

inline std::string hex_color(int r, int g, int b) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Average of the palette colours of the member regions.
inline std::string mask_fill(std::uint32_t mask) {
    int r = 0, g = 0, b = 0, n = 0;
    for (std::size_t k = 0; k < kPalette.size(); ++k)
        if (mask & (1u << k)) {
            r += kPalette[k][0];
            g += kPalette[k][1];
            b += kPalette[k][2];
            ++n;
        }
    if (n == 0)
        return "#ffffff";
    return hex_color(r / n, g / n, b / n);
}

inline std::string mask_names(const DiagramData& d, std::uint32_t mask) {
    std::string out;
    for (std::size_t k = 0; k < d.regions.size(); ++k)
        if (mask & (1u << k))
            out += (out.empty() ? "" : "+") + d.legend[k].name;
    return out;
}

} // namespace detail

inline DiagramData support_diagram(const std::vector<LatticeRegion>& regions, const Window& window) {
    if (regions.size() > detail::kPalette.size())
        throw Error(ErrorCode::invalid_argument, "at most six regions per diagram");
    if (window.i_lo >= window.i_hi || window.j_lo >= window.j_hi)
        throw Error(ErrorCode::window_too_small, "diagram window is empty");
    DiagramData d;
    d.window = window;
    d.regions = regions;
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const auto& c = detail::kPalette[k];
        d.legend.push_back({1u << k,
                            regions[k].name().empty() ? "R" + std::to_string(k + 1)
                                                      : regions[k].name(),
                            regions[k].to_string(), detail::hex_color(c[0], c[1], c[2])});
    }
    for (std::int64_t i = window.i_lo; i < window.i_hi; ++i)
        for (std::int64_t j = window.j_lo; j < window.j_hi; ++j) {
            std::uint32_t mask = 0;
            for (std::size_t k = 0; k < regions.size(); ++k)
                if (regions[k].contains(i, j))
                    mask |= 1u << k;
            if (mask)
                d.cells.push_back({i, j, mask});
        }
    return d;
}

/// The six rings of twist d in their fixed order.
inline DiagramData six_ring_diagram(std::int64_t d, const Window& window) {
    std::vector<LatticeRegion> regions;
    const StandardRings rings = standard_rings(d);
    for (const LatticeRegion* r : rings.all())
        regions.push_back(*r);
    return support_diagram(regions, window);
}

/// Rows from the top j downwards, one glyph per i; glyph k encodes mask k.
inline std::string to_ascii(const DiagramData& d) {
    const Window& w = d.window;
    std::vector<std::uint32_t> grid(static_cast<std::size_t>((w.i_hi - w.i_lo) * (w.j_hi - w.j_lo)));
    const auto at = [&](std::int64_t i, std::int64_t j) -> std::uint32_t& {
        return grid[static_cast<std::size_t>((j - w.j_lo) * (w.i_hi - w.i_lo) + (i - w.i_lo))];
    };
    for (const auto& c : d.cells)
        at(c.i, c.j) = c.mask;

    std::ostringstream out;
    out << "# window i:[" << w.i_lo << "," << w.i_hi << ") j:[" << w.j_lo << "," << w.j_hi
        << ")\n";
    for (const auto& e : d.legend)
        out << "# bit " << e.bit << " " << e.name << " " << e.region << "\n";
    std::vector<bool> seen(64, false);
    for (const auto& c : d.cells)
        seen[c.mask] = true;
    for (std::uint32_t m = 1; m < 64; ++m)
        if (seen[m])
            out << "# glyph " << detail::kGlyphs[m] << " = " << detail::mask_names(d, m) << "\n";
    for (std::int64_t j = w.j_hi - 1; j >= w.j_lo; --j) {
        char label[24];
        std::snprintf(label, sizeof label, "%5lld ", static_cast<long long>(j));
        out << label;
        for (std::int64_t i = w.i_lo; i < w.i_hi; ++i)
            out << detail::kGlyphs[at(i, j)];
        out << "\n";
    }
    return out.str();
}

inline std::string to_svg(const DiagramData& d, int cell = 16) {
    const Window& w = d.window;
    const std::int64_t width = (w.i_hi - w.i_lo) * cell;
    const std::int64_t grid_h = (w.j_hi - w.j_lo) * cell;
    const std::int64_t legend_h = static_cast<std::int64_t>(d.legend.size()) * 20 + 10;
    const std::int64_t height = grid_h + legend_h;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\" data-i-lo=\""
        << w.i_lo << "\" data-i-hi=\"" << w.i_hi << "\" data-j-lo=\"" << w.j_lo
        << "\" data-j-hi=\"" << w.j_hi << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << grid_h
        << "\" fill=\"#ffffff\" stroke=\"#cccccc\"/>\n";
    for (const auto& c : d.cells) {
        out << "<rect class=\"cell\" x=\"" << (c.i - w.i_lo) * cell << "\" y=\""
            << (w.j_hi - 1 - c.j) * cell << "\" width=\"" << cell << "\" height=\"" << cell
            << "\" fill=\"" << detail::mask_fill(c.mask) << "\" data-i=\"" << c.i
            << "\" data-j=\"" << c.j << "\" data-mask=\"" << c.mask << "\"/>\n";
    }
    if (w.i_lo <= 0 && 0 < w.i_hi)
        out << "<line x1=\"" << (-w.i_lo) * cell << "\" y1=\"0\" x2=\"" << (-w.i_lo) * cell
            << "\" y2=\"" << grid_h << "\" stroke=\"#000000\"/>\n";
    if (w.j_lo <= 0 && 0 < w.j_hi)
        out << "<line x1=\"0\" y1=\"" << w.j_hi * cell << "\" x2=\"" << width << "\" y2=\""
            << w.j_hi * cell << "\" stroke=\"#000000\"/>\n";
    std::int64_t y = grid_h + 10;
    for (const auto& e : d.legend) {
        out << "<rect class=\"legend\" x=\"4\" y=\"" << y << "\" width=\"12\" height=\"12\" fill=\""
            << e.fill << "\"/>\n";
        out << "<text x=\"22\" y=\"" << y + 11 << "\" font-family=\"monospace\" font-size=\"12\">"
            << e.bit << " " << e.name << " " << e.region << "</text>\n";
        y += 20;
    }
    out << "</svg>\n";
    return out.str();
}

struct RecountReport {
    bool passed = true;
    std::size_t cells_checked = 0;
    std::size_t mismatches = 0;
    std::string detail;
};

/// Re-derives every glyph of an ASCII diagram from region membership.
inline RecountReport recount_ascii(const std::string& text, const std::vector<LatticeRegion>& regions,
                                   const Window& w) {
    RecountReport r;
    std::istringstream in(text);
    std::string line;
    std::int64_t expected_j = w.j_hi - 1;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        std::istringstream ls(line);
        std::int64_t j = 0;
        std::string row;
        if (!(ls >> j >> row) || j != expected_j ||
            static_cast<std::int64_t>(row.size()) != w.i_hi - w.i_lo) {
            r.passed = false;
            r.detail = "malformed row: " + line;
            return r;
        }
        for (std::int64_t i = w.i_lo; i < w.i_hi; ++i) {
            std::uint32_t mask = 0;
            for (std::size_t k = 0; k < regions.size(); ++k)
                if (regions[k].contains(i, j))
                    mask |= 1u << k;
            ++r.cells_checked;
            if (row[static_cast<std::size_t>(i - w.i_lo)] != detail::kGlyphs[mask])
                ++r.mismatches;
        }
        --expected_j;
    }
    if (expected_j != w.j_lo - 1) {
        r.passed = false;
        r.detail = "missing rows";
        return r;
    }
    r.passed = r.mismatches == 0;
    if (!r.passed)
        r.detail = std::to_string(r.mismatches) + " glyphs disagree with membership";
    return r;
}

/// Checks that the SVG carries exactly one cell rect per member cell of the
/// window, each with the correct mask.
inline RecountReport recount_svg(const std::string& svg, const std::vector<LatticeRegion>& regions,
                                 const Window& w) {
    RecountReport r;
    static const std::regex cell_re(
        "<rect class=\"cell\"[^>]*data-i=\"(-?[0-9]+)\" data-j=\"(-?[0-9]+)\" "
        "data-mask=\"([0-9]+)\"");
    std::size_t listed = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), cell_re); it != std::sregex_iterator();
         ++it) {
        const std::int64_t i = std::stoll((*it)[1]);
        const std::int64_t j = std::stoll((*it)[2]);
        const std::uint32_t mask = static_cast<std::uint32_t>(std::stoul((*it)[3]));
        std::uint32_t actual = 0;
        for (std::size_t k = 0; k < regions.size(); ++k)
            if (regions[k].contains(i, j))
                actual |= 1u << k;
        ++listed;
        if (!w.contains(i, j) || actual != mask || mask == 0)
            ++r.mismatches;
    }
    std::size_t members = 0;
    for (std::int64_t i = w.i_lo; i < w.i_hi; ++i)
        for (std::int64_t j = w.j_lo; j < w.j_hi; ++j)
            for (const auto& reg : regions)
                if (reg.contains(i, j)) {
                    ++members;
                    break;
                }
    r.cells_checked = listed;
    r.passed = r.mismatches == 0 && listed == members;
    if (!r.passed)
        r.detail = std::to_string(listed) + " cells listed, " + std::to_string(members) +
                   " expected, " + std::to_string(r.mismatches) + " wrong";
    return r;
}

} // namespace krich
