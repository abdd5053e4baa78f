#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "icerank/cashflow.hpp"
#include "support.hpp"

using namespace icerank;
using icerank::testing::Cases;
using icerank::testing::rel_close;

namespace {

using V = std::vector<double>;

void expect_vec_eq(std::span<const double> actual, const V& expected) {
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(actual[i], expected[i]) << i;
}

}  // namespace

TEST(Split, TableOneStream) {
    const auto parts = split(CashFlowScenario({-200, 350, -100}));
    EXPECT_EQ(parts.initial_outlay, 200);
    expect_vec_eq(parts.positive, {350, 0});
    expect_vec_eq(parts.negative, {0, 100});
}

TEST(Split, OutlayOnly) {
    const auto parts = split(CashFlowScenario({-100, 0, 0}));
    EXPECT_EQ(parts.initial_outlay, 100);
    expect_vec_eq(parts.positive, {0, 0});
    expect_vec_eq(parts.negative, {0, 0});
}

TEST(Split, ZeroInitialFlow) {
    const auto parts = split(CashFlowScenario({0, -50, 50}));
    EXPECT_EQ(parts.initial_outlay, 0);
    expect_vec_eq(parts.positive, {0, 50});
    expect_vec_eq(parts.negative, {50, 0});
}

TEST(Split, RecombinesToFlows) {
    Cases cases(21);
    for (int i = 0; i < 300; ++i) {
        const CashFlowScenario s(cases.flows(cases.integer(1, 20), 0.5));
        const auto parts = split(s);
        for (int t = 1; t <= s.horizon(); ++t) {
            const auto k = static_cast<std::size_t>(t - 1);
            EXPECT_EQ(parts.positive[k] - parts.negative[k], s.at(t));
            EXPECT_GE(parts.positive[k], 0.0);
            EXPECT_GE(parts.negative[k], 0.0);
        }
    }
}

TEST(Scenario, Validation) {
    EXPECT_THROW(CashFlowScenario({-1}), Error);
    EXPECT_THROW(CashFlowScenario({10, 20}), Error);
    EXPECT_THROW(CashFlowScenario({-10, INFINITY}), Error);
    try {
        CashFlowScenario({5, 1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_input);
    }
}

TEST(Replicate, TableOneStream) {
    const auto curve = YieldCurve::flat(0.05, 2);
    const auto rep = replicate(CashFlowScenario({-200, 350, -100}), curve);
    EXPECT_NEAR(rep.additional_outlay, 100.0 / (1.05 * 1.05), 1e-12);
    EXPECT_NEAR(rep.additional_outlay, 90.7029, 5e-5);
    EXPECT_NEAR(rep.total_outlay, 290.7029, 5e-5);
    EXPECT_NEAR(rep.bond_notionals[0], 350.0 / 1.05, 1e-12);
    EXPECT_NEAR(rep.bond_notionals[0], 333.333, 5e-4);
    EXPECT_EQ(rep.bond_notionals[1], 0.0);
    EXPECT_EQ(rep.partial_outlays[0], 0.0);
    EXPECT_NEAR(rep.certainty_equivalent_outlay, 350.0 / 1.05, 1e-12);
}

TEST(Replicate, AllPositiveStream) {
    const auto rep = replicate(CashFlowScenario({-80, 10, 20, 30}), YieldCurve({0.01, 0.02, 0.03}));
    EXPECT_EQ(rep.additional_outlay, 0.0);
    EXPECT_EQ(rep.total_outlay, 80.0);
}

TEST(Replicate, ZeroRateCurve) {
    const auto rep = replicate(CashFlowScenario({-10, 0, -100}), YieldCurve::flat(0.0, 2));
    EXPECT_EQ(rep.additional_outlay, 100.0);
}

TEST(Replicate, CurveTooShort) {
    try {
        (void)replicate(CashFlowScenario({-10, 5, 5, 5}), YieldCurve::flat(0.05, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::horizon_mismatch);
        EXPECT_NE(std::string(e.what()).find("tenor 3"), std::string::npos);
    }
}

TEST(Replicate, WeightIndependent) {
    const CashFlowScenario s({-200, 350, -100});
    const ScenarioSet heavy("p", {s, CashFlowScenario({-200, 300, -100})}, {0.9, 0.1});
    const ScenarioSet light("p", {CashFlowScenario({-200, 300, -100}), s}, {0.7, 0.3});
    const auto curve = YieldCurve({0.03, 0.045});
    const auto a = replicate(heavy[0], curve);
    const auto b = replicate(light[1], curve);
    EXPECT_EQ(a.total_outlay, b.total_outlay);
    EXPECT_EQ(a.certainty_equivalent_outlay, b.certainty_equivalent_outlay);
    EXPECT_EQ(a.bond_notionals, b.bond_notionals);
    EXPECT_EQ(a.partial_outlays, b.partial_outlays);
}

TEST(PresentValue, Examples) {
    const auto curve = YieldCurve::flat(0.05, 2);
    EXPECT_NEAR(present_value(V{350, 0}, curve), 333.333, 5e-4);
    EXPECT_EQ(present_value(V{0, 0}, curve), 0.0);
    EXPECT_NEAR(present_value(V{105}, curve), 100.0, 1e-12);
}

TEST(PresentValue, FutureValueConsistencyProperty) {
    Cases cases(22);
    for (int i = 0; i < 500; ++i) {
        const int T = cases.integer(1, 30);
        const YieldCurve curve(cases.rates(T, -0.02, 0.3));
        const auto positive = cases.samples(static_cast<std::size_t>(T), 0.0, 1000.0);
        const double fv = future_value(positive, forward_curve(curve, T));
        const double pv = present_value(positive, curve);
        EXPECT_TRUE(rel_close(fv, pv * std::pow(1.0 + curve.rate(T), T), 1e-10));
    }
}

TEST(ScenarioSet, UniformWeightsByDefault) {
    const ScenarioSet set("x", {CashFlowScenario({-1, 2}), CashFlowScenario({-1, 3}),
                                CashFlowScenario({-1, 4})});
    EXPECT_EQ(set.size(), 3u);
    EXPECT_EQ(set.horizon(), 1);
    EXPECT_EQ(set.project_id(), "x");
    for (double w : set.weights()) EXPECT_EQ(w, 1.0 / 3.0);
}

TEST(ScenarioSet, ManyUniformWeightsPassTheSumCheck) {
    std::vector<CashFlowScenario> many(100000, CashFlowScenario({-1, 2}));
    std::vector<double> w(many.size(), 1.0 / static_cast<double>(many.size()));
    EXPECT_NO_THROW(ScenarioSet("x", many, w));
}

TEST(ScenarioSet, Validation) {
    EXPECT_THROW(ScenarioSet("x", {}), Error);
    EXPECT_THROW(ScenarioSet("x", {CashFlowScenario({-1, 2}), CashFlowScenario({-1, 2, 3})}), Error);
    EXPECT_THROW(ScenarioSet("x", {CashFlowScenario({-1, 2})}, {0.5, 0.5}), Error);
    EXPECT_THROW(ScenarioSet("x", {CashFlowScenario({-1, 2}), CashFlowScenario({-1, 3})}, {1.2, -0.2}),
                 Error);
    try {
        ScenarioSet("x", {CashFlowScenario({-1, 2}), CashFlowScenario({-1, 3})}, {0.5, 0.5 + 1e-9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::weight_sum);
    }
    EXPECT_NO_THROW(
        ScenarioSet("x", {CashFlowScenario({-1, 2}), CashFlowScenario({-1, 3})}, {0.5, 0.5 + 1e-13}));
}
