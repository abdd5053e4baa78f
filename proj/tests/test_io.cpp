#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "icerank/io.hpp"
#include "support.hpp"

using namespace icerank;
using icerank::testing::TempDir;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::io_error;
}

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-200), "-200");
    const double x = 42.630385487528315;
    EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(LoadCurve, Valid) {
    TempDir dir;
    const auto curve = load_curve(dir.write("c.csv", "tenor,rate\n1,0.04\n2,0.05\n"));
    EXPECT_EQ(curve.horizon(), 2);
    EXPECT_EQ(curve.rate(1), 0.04);
}

TEST(LoadCurve, Errors) {
    TempDir dir;
    EXPECT_EQ(code_of([&] { load_curve(dir.path() / "missing.csv"); }), Errc::io_error);
    EXPECT_EQ(code_of([&] { load_curve(dir.write("h.csv", "t,r\n1,0.05\n")); }), Errc::parse_error);
    EXPECT_EQ(code_of([&] { load_curve(dir.write("x.csv", "tenor,rate\n1,abc\n")); }), Errc::parse_error);
    EXPECT_EQ(code_of([&] { load_curve(dir.write("e.csv", "tenor,rate\n")); }), Errc::parse_error);
    const auto gap = message_of([&] { load_curve(dir.write("g.csv", "tenor,rate\n1,0.05\n3,0.05\n")); });
    EXPECT_NE(gap.find("expected tenor 2"), std::string::npos) << gap;
}

TEST(LoadScenarios, TableOneShape) {
    TempDir dir;
    const auto set = load_scenarios(dir.write("s.csv", "t0,t1,t2\n-200,300,-100\n-200,400,-100\n"), 2, "p");
    EXPECT_EQ(set.size(), 2u);
    EXPECT_EQ(set.horizon(), 2);
    EXPECT_EQ(set[1].at(1), 400);
    EXPECT_EQ(set.weights()[0], 0.5);
}

TEST(LoadScenarios, WeightColumn) {
    TempDir dir;
    const auto set = load_scenarios(dir.write("w.csv", "weight,t0,t1\n0.25,-1,2\n0.75,-1,3\n"));
    EXPECT_EQ(set.weights()[0], 0.25);
    EXPECT_EQ(set.weights()[1], 0.75);
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("bad.csv", "weight,t0,t1\n0.5,-1,2\n0.6,-1,3\n")); }),
              Errc::weight_sum);
}

TEST(LoadScenarios, RaggedRowNamesTheRow) {
    TempDir dir;
    const auto file = dir.write("r.csv", "t0,t1,t2\n-200,300,-100\n-200,400\n");
    EXPECT_EQ(code_of([&] { load_scenarios(file); }), Errc::parse_error);
    EXPECT_NE(message_of([&] { load_scenarios(file); }).find("row 3"), std::string::npos);
}

TEST(LoadScenarios, OtherErrors) {
    TempDir dir;
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("h.csv", "a,b\n1,2\n")); }), Errc::parse_error);
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("n.csv", "t0,t1\n-1,zz\n")); }), Errc::parse_error);
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("p.csv", "t0,t1\n5,1\n")); }), Errc::parse_error);
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("m.csv", "t0,t1\n-1,1\n"), 3); }), Errc::horizon_mismatch);
    EXPECT_EQ(code_of([&] { load_scenarios(dir.write("e.csv", "t0,t1\n")); }), Errc::empty_set);
}

TEST(WriteScenarios, RoundTrip) {
    TempDir dir;
    const ScenarioSet set("p", {CashFlowScenario({-200, 0.1 + 0.2, -100}), CashFlowScenario({-1, 1e-17, 3})},
                          {0.3, 0.7});
    for (bool weights : {false, true}) {
        std::ostringstream out;
        write_scenarios(out, set, weights);
        const auto back = load_scenarios(dir.write("rt.csv", out.str()));
        ASSERT_EQ(back.size(), set.size());
        for (std::size_t i = 0; i < set.size(); ++i) EXPECT_EQ(back[i], set[i]);
        if (weights) {
            EXPECT_EQ(back.weights()[1], 0.7);
        }
    }
}

TEST(Project, ScenarioFileResolvedRelativeToJson) {
    TempDir dir;
    std::filesystem::create_directories(dir.path() / "sub");
    dir.write("sub/flows.csv", "t0,t1\n-1,2\n");
    const auto file = dir.write("sub/p.json", R"({"id":"p","horizon":1,"scenario_file":"flows.csv"})");
    const auto project = load_project(file);
    EXPECT_EQ(project.id, "p");
    EXPECT_EQ(project.name, "p");
    EXPECT_EQ(*project.scenario_file, dir.path() / "sub" / "flows.csv");
    EXPECT_EQ(materialize(project).size(), 1u);
}

TEST(Project, GeneratorBlock) {
    TempDir dir;
    const auto file = dir.write("g.json", R"({"id":"g","name":"G","horizon":2,
        "generator":{"family":"shifted_lognormal","mean":350,"std":40,"skew":2.7,
                     "template":[-200,null,-100],"n":50,"seed":42}})");
    const auto project = load_project(file);
    ASSERT_TRUE(project.generator.has_value());
    EXPECT_EQ(project.generator->n_scenarios, 50u);
    EXPECT_EQ(materialize(project).size(), 50u);
    EXPECT_EQ(materialize(project, {10, 7}).size(), 10u);
    EXPECT_NE(materialize(project, {10, 7})[0], materialize(project, {10, std::nullopt})[0]);
    const auto round = parse_generator(to_json(*project.generator));
    EXPECT_EQ(round.seed, 42u);
    EXPECT_EQ(round.flow_template.size(), 3u);
    EXPECT_FALSE(round.flow_template[1].has_value());
}

TEST(Project, Errors) {
    TempDir dir;
    auto load = [&](const std::string& text) { return [&, text] { load_project(dir.write("x.json", text)); }; };
    EXPECT_EQ(code_of(load("{")), Errc::parse_error);
    EXPECT_EQ(code_of(load(R"({"horizon":1,"scenario_file":"a.csv"})")), Errc::config_error);
    EXPECT_EQ(code_of(load(R"({"id":"x","horizon":1})")), Errc::config_error);
    EXPECT_EQ(code_of(load(R"({"id":"x","horizon":0,"scenario_file":"a.csv"})")), Errc::config_error);
    EXPECT_EQ(code_of(load(R"({"id":"x","horizon":"2","scenario_file":"a.csv"})")), Errc::config_error);
    const auto both = R"({"id":"x","horizon":1,"scenario_file":"a.csv","generator":{}})";
    EXPECT_EQ(code_of(load(both)), Errc::config_error);
    const auto wrong_len = R"({"id":"x","horizon":3,"generator":{"family":"normal","mean":1,"std":1,
        "template":[-1,null],"n":2,"seed":1}})";
    EXPECT_NE(message_of(load(wrong_len)).find("horizon+1"), std::string::npos);
    const auto bad_family = R"({"id":"x","horizon":1,"generator":{"family":"weird","mean":1,"std":1,
        "template":[-1,null],"n":2,"seed":1}})";
    EXPECT_NE(message_of(load(bad_family)).find("field 'family'"), std::string::npos);
    const auto missing_std = R"({"id":"x","horizon":1,"generator":{"family":"normal","mean":1,
        "template":[-1,null],"n":2,"seed":1}})";
    EXPECT_NE(message_of(load(missing_std)).find("'std'"), std::string::npos);
    EXPECT_EQ(code_of([&] { load_project(dir.path() / "none.json"); }), Errc::io_error);
}

TEST(GeneratorSpecFile, BareBlockOrProject) {
    TempDir dir;
    const std::string block = R"({"family":"discrete","mean":1,"std":1,"skew":0.5,"template":[-1,null],"n":3,"seed":9})";
    EXPECT_EQ(load_generator_spec(dir.write("b.json", block)).family, Family::discrete);
    EXPECT_EQ(load_generator_spec(dir.write("p.json", R"({"id":"p","horizon":1,"generator":)" + block + "}"))
                  .seed,
              9u);
}
