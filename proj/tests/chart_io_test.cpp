#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "s5frames/chart_io.hpp"

using namespace s5frames;
using nlohmann::json;

namespace {

const std::string kData = S5_TEST_DATA_DIR;

std::string error_of(const json& doc) {
    try {
        chart_from_json(doc);
    } catch (const ChartSpecError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(ChartIO, CatalogDocument) {
    const ChartSpec c = chart_from_json(json::parse(R"({"type":"catalog","name":"legendrian-clifford"})"));
    EXPECT_EQ(c.name, "legendrian-clifford");
    EXPECT_TRUE(c.analytic_jet.has_value());
}

TEST(ChartIO, TorusDocumentMatchesNamedFixture) {
    const ChartSpec loaded = load_chart_spec(kData + "/legendrian_torus.json");
    const ChartSpec named = chart_by_name("legendrian-clifford");
    for (double u : {0.0, 0.9, 3.3, 5.9})
        for (double v : {0.2, 2.7, 4.4}) EXPECT_LE(norm(loaded.immersion(u, v) - named.immersion(u, v)), 1e-9);
}

TEST(ChartIO, OptionalPhases) {
    const ChartSpec c = chart_from_json(json::parse(
        R"({"type":"homogeneous-torus","radii":[0.6,0.8,0],"freq":[[1,0],[0,1],[0,0]],"phases":[0.5,0,0]})"));
    EXPECT_NEAR(std::arg(c.immersion(0.0, 0.0)[0]), 0.5, 1e-15);
}

TEST(ChartIO, SchemaViolations) {
    EXPECT_NE(error_of(json::parse(R"({"type":"homogeneous-torus","radii":[1,1,1],"freq":[[1,0],[0,1],[-1,-1]]})"))
                  .find("radii"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"klein"})")).find("unknown chart type"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"name":"geodesic-s2"})")).find("'type'"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"catalog","name":"nowhere"})")).find("'name'"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"homogeneous-torus","radii":[0.6,0.8],"freq":[[1,0],[0,1],[0,0]]})"))
                  .find("'radii'"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"type":"homogeneous-torus","radii":[0.6,0.8,0],"freq":[[1,0],[0,1.5],[0,0]]})"))
                  .find("freq[1]"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"([1,2])")).find("object"), std::string::npos);
}

TEST(ChartIO, MalformedFileReportsLine) {
    try {
        load_chart_spec(kData + "/malformed.json");
        FAIL() << "expected ChartSpecError";
    } catch (const ChartSpecError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_chart_spec(kData + "/missing.json"), ChartSpecError);
}
