#include "krich/diagram.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace krich;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<LatticeRegion> six(std::int64_t d) {
    std::vector<LatticeRegion> out;
    const StandardRings rings = standard_rings(d);
    for (const LatticeRegion* r : rings.all())
        out.push_back(*r);
    return out;
}

} // namespace

TEST(Diagram, CellCounts) {
    const auto a = LatticeRegion::from_constraints("A", {ge(1, 0, 0), le(1, 1, 0)});
    EXPECT_EQ(support_diagram({a}, Window::square(-4, 4)).cells.size(), 14u);
    const auto op = LatticeRegion::from_constraints("O_P", {ge(1, 0, 0), ge(0, 1, 0)});
    EXPECT_EQ(support_diagram({op}, Window::square(-2, 2)).cells.size(), 4u);
}

TEST(Diagram, EmptyRegionLegendOnly) {
    const DiagramData d = support_diagram({LatticeRegion::empty("E")}, Window::square(-3, 3));
    EXPECT_TRUE(d.cells.empty());
    ASSERT_EQ(d.legend.size(), 1u);
    EXPECT_EQ(d.legend[0].name, "E");
    const std::string svg = to_svg(d);
    EXPECT_EQ(svg.find("class=\"cell\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"legend\""), std::string::npos);
    EXPECT_TRUE(recount_svg(svg, d.regions, d.window).passed);
    const std::string ascii = to_ascii(d);
    EXPECT_TRUE(recount_ascii(ascii, d.regions, d.window).passed);
}

TEST(Diagram, MasksMatchMembership) {
    const DiagramData d = six_ring_diagram(1, Window::square(-5, 5));
    const auto regions = six(1);
    for (const auto& c : d.cells)
        for (std::size_t k = 0; k < regions.size(); ++k)
            EXPECT_EQ((c.mask >> k) & 1u, regions[k].contains(c.i, c.j) ? 1u : 0u);
    EXPECT_TRUE(std::is_sorted(d.cells.begin(), d.cells.end(), [](const auto& x, const auto& y) {
        return std::pair(x.i, x.j) < std::pair(y.i, y.j);
    }));
}

TEST(Diagram, RecountAcceptsRenderings) {
    for (std::int64_t d : {-3, 0, 2}) {
        const Window w = Window::square(-6, 6);
        const DiagramData data = six_ring_diagram(d, w);
        EXPECT_TRUE(recount_ascii(to_ascii(data), data.regions, w).passed);
        EXPECT_TRUE(recount_svg(to_svg(data), data.regions, w).passed);
    }
}

TEST(Diagram, RecountRejectsTampering) {
    const Window w = Window::square(-6, 6);
    const DiagramData data = six_ring_diagram(0, w);
    std::string ascii = to_ascii(data);
    const auto row = ascii.find("\n    0 ");
    ASSERT_NE(row, std::string::npos);
    char& g = ascii[row + 7];
    g = g == '.' ? '1' : '.';
    EXPECT_FALSE(recount_ascii(ascii, data.regions, w).passed);

    std::string svg = to_svg(data);
    const auto cell = svg.find("<rect class=\"cell\"");
    svg.erase(cell, svg.find('\n', cell) - cell + 1);
    EXPECT_FALSE(recount_svg(svg, data.regions, w).passed);
}

TEST(Diagram, DistinctGlyphsPerClass) {
    const DiagramData data = six_ring_diagram(0, Window::square(-6, 6));
    std::set<std::uint32_t> masks;
    for (const auto& c : data.cells)
        masks.insert(c.mask);
    EXPECT_GE(masks.size(), 4u);
    const std::string ascii = to_ascii(data);
    for (std::uint32_t m : masks)
        EXPECT_NE(ascii.find(std::string("# glyph ") + detail::kGlyphs[m] + " = "), std::string::npos);
}

TEST(Diagram, GoldenSixRings) {
    const Window w = Window::square(-6, 6);
    const std::string golden = slurp(KRICH_SOURCE_DIR "/tests/golden/six_rings_d0.txt");
    ASSERT_FALSE(golden.empty());
    EXPECT_TRUE(recount_ascii(golden, six(0), w).passed);
    EXPECT_EQ(to_ascii(six_ring_diagram(0, w)), golden);
}

TEST(Diagram, Deterministic) {
    const Window w = Window::square(-7, 5);
    EXPECT_EQ(to_svg(six_ring_diagram(2, w)), to_svg(six_ring_diagram(2, w)));
}

TEST(Diagram, Errors) {
    EXPECT_THROW(support_diagram({}, Window::square(2, 2)), Error);
    std::vector<LatticeRegion> seven(7, LatticeRegion::full());
    EXPECT_THROW(support_diagram(seven, Window::square(-1, 1)), Error);
}
