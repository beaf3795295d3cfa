#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wak/driver.hpp"
#include "wak/errors.hpp"

using namespace wak;
using nlohmann::json;

namespace {

CampaignConfig tiny() {
    CampaignConfig c;
    c.max_mode = 1;
    c.max_weight = 2;
    return c;
}

json strip_timing(json doc) {
    doc.erase("generated_at");
    doc.erase("total_seconds");
    for (auto& c : doc["campaigns"]) c.erase("seconds");
    return doc;
}

std::string write_temp(const std::string& name, const json& doc) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << doc.dump();
    return path.string();
}

}  // namespace

TEST(Driver, RejectsBadConfig) {
    CampaignConfig c;
    c.max_mode = 0;
    EXPECT_THROW(validate_config("affine", c), ConfigError);
    EXPECT_THROW(validate_config("nonsense", CampaignConfig{}), ConfigError);
    CampaignConfig pole;
    pole.k_values = {BigRational(-2)};
    EXPECT_THROW(validate_config("sugawara", pole), ConfigError);
    EXPECT_THROW(validate_config("all", pole), ConfigError);
    EXPECT_NO_THROW(validate_config("affine", pole));
    EXPECT_NO_THROW(validate_config("virasoro", pole));
}

TEST(Driver, ReportAggregateMatchesMembers) {
    CampaignConfig c = tiny();
    c.k_values = {BigRational(1)};
    const json doc = report_document(run_verify("affine", c), c);
    ASSERT_EQ(doc["campaigns"].size(), 2u);
    bool all = true;
    for (const auto& r : doc["campaigns"]) all = all && r["pass"].get<bool>();
    EXPECT_EQ(doc["pass"].get<bool>(), all);
    EXPECT_EQ(doc["engine_version"], kEngineVersion);
    EXPECT_EQ(doc["config"]["max_mode"], 1);
}

TEST(Driver, ReportIsDeterministicModuloTiming) {
    const CampaignConfig c = tiny();
    const json a = report_document(run_verify("heisenberg", c), c);
    const json b = report_document(run_verify("heisenberg", c), c);
    EXPECT_EQ(strip_timing(a).dump(), strip_timing(b).dump());
}

TEST(Driver, CriticalLevelUsesCriticalLattice) {
    CampaignConfig c = tiny();
    const auto reps = run_target_reports("virasoro", c, Level::at(-2));
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0].campaign, "virasoro-lattice-critical");
    EXPECT_TRUE(reps[0].pass());
}

TEST(Driver, FailingReportIsListed) {
    const json pass_doc = {{"campaigns", {{{"name", "affine"}, {"level", "symbolic"}, {"checks", 3}, {"failed", 0},
                                           {"pass", true}, {"seconds", 0.5}}}}};
    const json fail_doc = {{"campaigns", {{{"name", "twisted-hierarchy"}, {"level", "symbolic"}, {"checks", 13},
                                           {"failed", 8}, {"pass", false}, {"seconds", 0.1}}}}};
    const std::string p1 = write_temp("wak_pass.json", pass_doc), p2 = write_temp("wak_fail.json", fail_doc);
    EXPECT_TRUE(aggregate_reports({p1, p1})["pass"].get<bool>());
    const json agg = aggregate_reports({p1, p2});
    EXPECT_FALSE(agg["pass"].get<bool>());
    ASSERT_EQ(agg["failing"].size(), 1u);
    EXPECT_EQ(agg["failing"][0], "twisted-hierarchy (symbolic)");
    // order of inputs does not change the merged document
    EXPECT_EQ(aggregate_reports({p2, p1})["failing"], agg["failing"]);
}

TEST(Driver, EmptyReportListPassesWithWarning) {
    const json agg = aggregate_reports({});
    EXPECT_TRUE(agg["pass"].get<bool>());
    EXPECT_EQ(agg["campaigns"].size(), 0u);
    EXPECT_EQ(agg["warnings"].size(), 1u);
}

TEST(Driver, UnreadableOrMalformedReportThrows) {
    EXPECT_THROW(aggregate_reports({"/nonexistent/report.json"}), IoError);
    const auto path = std::filesystem::temp_directory_path() / "wak_bad.json";
    std::ofstream(path) << "{not json";
    EXPECT_THROW(aggregate_reports({path.string()}), IoError);
}

TEST(Driver, EquationJsonCarriesTermsAndLatex) {
    Wakimoto wak(Level::symbolic());
    const auto eq = extract_sector_equation(wak, 0, 0, Monomial(), ExtractionWindow::reduced()).normalized();
    const json j = equation_json(eq);
    EXPECT_EQ(j["blocks"][0]["tau"], json({-1, 1}));
    EXPECT_EQ(j["blocks"][0]["terms"].size(), 4u);
    EXPECT_EQ(j["latex"], eq.to_latex());
}
