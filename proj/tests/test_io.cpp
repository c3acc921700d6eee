#include "krich/diagram.hpp"
#include "krich/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace krich;

namespace {

const std::string kSamples = KRICH_SOURCE_DIR "/samples/";

struct CliRun {
    int status = -1;
    std::string out;
};

CliRun run_cli(const std::string& args, const std::string& env = {}) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const std::string path = ::testing::TempDir() + "krich_io_" + info->name() + ".txt";
    const std::string cmd = env + " \"" KRICH_CLI "\" " + args + " > \"" + path + "\" 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    return r;
}

} // namespace

TEST(Parse, FieldOption) {
    EXPECT_TRUE(parse_field_option("rationals").is_rationals());
    EXPECT_TRUE(parse_field_option("Q").is_rationals());
    EXPECT_EQ(parse_field_option("fp:7"), FieldSpec::prime(7));
    EXPECT_THROW(parse_field_option("fp:8"), Error);
    EXPECT_THROW(parse_field_option("fp:"), Error);
    EXPECT_THROW(parse_field_option("reals"), Error);
}

TEST(Parse, Range) {
    EXPECT_EQ(parse_range("-6:6"), (std::pair<std::int64_t, std::int64_t>{-6, 6}));
    EXPECT_EQ(parse_range("-8:-2"), (std::pair<std::int64_t, std::int64_t>{-8, -2}));
    EXPECT_THROW(parse_range("6"), Error);
    EXPECT_THROW(parse_range("a:b"), Error);
    EXPECT_THROW(parse_range("1:2x"), Error);
}

TEST(Parse, RegionRoundTrip) {
    const StandardRings rings = standard_rings(3);
    for (const LatticeRegion* r : rings.all())
        EXPECT_EQ(region_from_json(region_to_json(*r)), *r);
    EXPECT_TRUE(region_from_json(region_to_json(LatticeRegion::empty("E"))).is_empty());
    EXPECT_THROW(region_from_json(Json::parse(R"({"constraints": [{"a": 1, "b": 0, "sense": "<", "c": 0}]})")),
                 Error);
}

TEST(Parse, CurveScenario) {
    const CurveScenario s = curve_scenario_from_json(read_json_file(kSamples + "elliptic_rank2.json"));
    EXPECT_EQ(s.sheaf.rank, 2u);
    EXPECT_EQ(s.generator_text, (std::vector<std::vector<std::string>>{{"1", "0"}, {"0", "y"}}));
    EXPECT_EQ(s.window, (OrderWindow{-12, 12}));
    EXPECT_EQ(s.curve.x.order, -2);
}

TEST(Parse, Errors) {
    try {
        read_json_file(kSamples + "malformed.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse);
    }
    EXPECT_THROW(curve_scenario_from_json(Json::parse(R"({"curve": {"f": "y - x"}})")), Error);
    EXPECT_THROW(surface_config_from_json(Json::parse(R"({"model": "k3"})")), Error);
    EXPECT_THROW(field_from_json(Json::parse(R"({"kind": "reals"})")), Error);
}

TEST(Report, EllipticCurve) {
    const Json r = run_curve(curve_scenario_from_json(read_json_file(kSamples + "elliptic.json")));
    EXPECT_EQ(r.at("h"), Json({1, 1}));
    EXPECT_EQ(r.at("index"), 0);
    EXPECT_EQ(r.at("pivot_gap_index"), 0);
    EXPECT_EQ(r.at("hilbert").at("4"), 4);
    EXPECT_TRUE(r.at("closure").at("A*A").at("passed").get<bool>());
    EXPECT_EQ(r.begin().key(), "config");
}

TEST(Report, Surface) {
    const Json r = run_surface(surface_config_from_json(read_json_file(kSamples + "surface_d0.json")));
    EXPECT_EQ(r.at("h"), Json({1, 0, 0}));
    EXPECT_TRUE(r.at("oracle_agrees").get<bool>());
    EXPECT_EQ(r.at("indices").at("-2"), 3);
    EXPECT_TRUE(r.at("prop2").get<bool>());
    EXPECT_EQ(r.dump(), run_surface(surface_config_from_json(read_json_file(kSamples + "surface_d0.json"))).dump());
}

TEST(ExitStatus, Mapping) {
    EXPECT_EQ(exit_status(ErrorCode::parse), 1);
    EXPECT_EQ(exit_status(ErrorCode::invalid_argument), 1);
    EXPECT_EQ(exit_status(ErrorCode::not_stabilized), 2);
    EXPECT_EQ(exit_status(ErrorCode::window_too_small), 2);
}

TEST(Cli, CurveSucceeds) {
    const CliRun r = run_cli("curve --spec " + kSamples + "elliptic.json");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(Json::parse(r.out).at("h"), Json({1, 1}));
}

TEST(Cli, MalformedIsParseError) {
    const CliRun r = run_cli("curve --spec " + kSamples + "malformed.json");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(Json::parse(r.out).at("error").at("code"), "parse");
}

TEST(Cli, UsageError) {
    EXPECT_EQ(run_cli("curve").status, 1);
    EXPECT_EQ(run_cli("diagram --spec " + kSamples + "regions_A.json --format png").status, 1);
}

TEST(Cli, NoStabilizationExitsTwo) {
    const CliRun r = run_cli("curve --spec " + kSamples + "elliptic.json", "KRICH_MAX_ENLARGE=0");
    EXPECT_EQ(r.status, 2);
    EXPECT_EQ(Json::parse(r.out).at("error").at("code"), "not_stabilized");
}

TEST(Cli, SurfaceTwistOverride) {
    const CliRun r = run_cli("surface --spec " + kSamples + "surface_d0.json --twist -3 --n-range 0:1");
    EXPECT_EQ(r.status, 0);
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j.at("h"), Json({0, 0, 1}));
    EXPECT_EQ(j.at("indices").size(), 2u);
}

TEST(Cli, DiagramAscii) {
    const CliRun r = run_cli("diagram --spec " + kSamples + "regions_A.json --format ascii");
    EXPECT_EQ(r.status, 0);
    std::istringstream in(r.out);
    std::string line;
    std::size_t count = 0;
    while (std::getline(in, line))
        if (!line.empty() && line.front() != '#')
            count += static_cast<std::size_t>(std::count(line.begin() + 6, line.end(), '1'));
    EXPECT_EQ(count, 14u);
    const auto regions = diagram_config_from_json(read_json_file(kSamples + "regions_A.json")).regions;
    EXPECT_TRUE(recount_ascii(r.out, regions, Window::square(-4, 4)).passed);
}
