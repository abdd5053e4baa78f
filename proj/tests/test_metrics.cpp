#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "icerank/metrics.hpp"
#include "support.hpp"

using namespace icerank;
using icerank::testing::Cases;
using icerank::testing::rel_close;

namespace {

// Direct discounting of the whole stream; independent of the split/replication path.
double npv_oracle(const std::vector<double>& flows, const YieldCurve& curve) {
    double total = flows[0];
    for (std::size_t t = 1; t < flows.size(); ++t) {
        total += flows[t] / std::pow(1.0 + curve.rate(static_cast<int>(t)), static_cast<double>(t));
    }
    return total;
}

double mu_oracle(const std::vector<double>& flows, const YieldCurve& curve) {
    const int T = static_cast<int>(flows.size()) - 1;
    const double terminal = std::pow(1.0 + curve.rate(T), T);
    double fv = 0.0;
    double outlay = -flows[0];
    for (int t = 1; t <= T; ++t) {
        const double f = flows[static_cast<std::size_t>(t)];
        const double growth = std::pow(1.0 + curve.rate(t), t);
        if (f > 0) fv += f * terminal / growth;
        else outlay += -f / growth;
    }
    return std::pow(fv / outlay, 1.0 / T) - 1.0;
}

const YieldCurve flat5 = YieldCurve::flat(0.05, 2);

}  // namespace

TEST(Evaluate, TableOneStream) {
    const auto r = evaluate(CashFlowScenario({-200, 350, -100}), flat5);
    EXPECT_NEAR(r.npv, -200.0 + 350.0 / 1.05 - 100.0 / 1.1025, 1e-12);
    EXPECT_NEAR(r.npv, 42.63, 5e-3);
    EXPECT_NEAR(r.annualized_return, 0.1244, 5e-5);
    EXPECT_NEAR(r.profitability_index, r.npv / (200.0 + 100.0 / 1.1025), 1e-15);
    EXPECT_NEAR(r.profitability_index, 0.1467, 1e-4);
    EXPECT_NEAR(r.premium_return, 0.1617, 5e-5);
    EXPECT_EQ(r.premium_npv, r.npv);
    EXPECT_NEAR(r.replication.total_outlay, 290.7029, 5e-5);
    EXPECT_NEAR(r.terminal_value, 367.5, 1e-12);
    EXPECT_NEAR(r.terminal_profit, 367.5 - r.replication.total_outlay, 1e-12);
}

TEST(Evaluate, LeftSkewedMedianStream) {
    const auto r = evaluate(CashFlowScenario({-200, 370, -100}), flat5);
    EXPECT_NEAR(r.npv, 61.68, 5e-3);
}

TEST(Evaluate, RisklessReplicationHasNoPremium) {
    Cases cases(31);
    for (int i = 0; i < 200; ++i) {
        const int T = cases.integer(1, 15);
        const YieldCurve curve(cases.rates(T, 0.0, 0.12));
        std::vector<double> flows(static_cast<std::size_t>(T) + 1, 0.0);
        for (int t = 1; t <= T; ++t) {
            const double bond = cases.uniform(0.0, 100.0);
            flows[static_cast<std::size_t>(t)] = bond * curve.growth(t);
            flows[0] -= bond;
        }
        const auto r = evaluate(CashFlowScenario(flows), curve);
        const double scale = -flows[0];
        EXPECT_NEAR(r.npv, 0.0, 1e-12 * scale);
        EXPECT_NEAR(r.annualized_return, curve.rate(T), 1e-12);
        EXPECT_NEAR(r.premium_return, 0.0, 1e-12);
    }
}

TEST(Evaluate, MatchesDirectOracles) {
    Cases cases(32);
    for (int i = 0; i < 500; ++i) {
        const int T = cases.integer(1, 20);
        const YieldCurve curve(cases.rates(T));
        const auto flows = cases.flows(T);
        const auto r = evaluate(CashFlowScenario(flows), curve);
        const double scale = 1000.0;
        EXPECT_NEAR(r.npv, npv_oracle(flows, curve), 1e-11 * scale);
        EXPECT_TRUE(rel_close(1.0 + r.annualized_return, 1.0 + mu_oracle(flows, curve), 1e-12));
        EXPECT_NEAR(r.profitability_index, r.npv / r.replication.total_outlay, 1e-15);
    }
}

TEST(Evaluate, PremiumReturnBothForms) {
    Cases cases(33);
    for (int i = 0; i < 500; ++i) {
        const int T = cases.integer(1, 20);
        const YieldCurve curve(cases.rates(T));
        const auto r = evaluate(CashFlowScenario(cases.flows(T)), curve);
        const double cumulative = cumulative_rate(curve, T);
        // M_T = R_T + Delta_M
        EXPECT_NEAR(r.terminal_return, cumulative + r.premium_return,
                    1e-12 * (1.0 + std::abs(r.terminal_return)));
    }
}

TEST(Evaluate, TotalLossIsMinusOneHundredPercent) {
    const auto r = evaluate(CashFlowScenario({-100, 0, -20}), flat5);
    EXPECT_EQ(r.annualized_return, -1.0);
    EXPECT_EQ(r.terminal_return, -1.0);
}

TEST(Evaluate, ZeroOutlayIsAnError) {
    try {
        (void)evaluate(CashFlowScenario({0, 5, 5}), flat5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::zero_total_outlay);
    }
}

TEST(Evaluate, MonotoneInFlowsAndOutlay) {
    Cases cases(34);
    for (int i = 0; i < 300; ++i) {
        const int T = cases.integer(1, 10);
        const YieldCurve curve(cases.rates(T, 0.0, 0.1));
        auto flows = cases.flows(T);
        const double base = evaluate(CashFlowScenario(flows), curve).npv;
        auto bumped = flows;
        const auto t = static_cast<std::size_t>(cases.integer(1, T));
        bumped[t] += cases.uniform(0.0, 50.0);
        EXPECT_GE(evaluate(CashFlowScenario(bumped), curve).npv, base);
        auto costlier = flows;
        costlier[0] -= cases.uniform(1.0, 50.0);
        EXPECT_LT(evaluate(CashFlowScenario(costlier), curve).npv, base);
    }
}

TEST(Evaluate, FlatCurveMuEqualsMirr) {
    Cases cases(35);
    for (int i = 0; i < 500; ++i) {
        const int T = cases.integer(1, 20);
        const double r = cases.uniform(-0.02, 0.15);
        const CashFlowScenario s(cases.flows(T));
        const auto result = evaluate(s, YieldCurve::flat(r, T));
        EXPECT_NEAR(result.annualized_return, mirr(s, r, r), 1e-10);
    }
}

TEST(EvaluateAll, WorkerCountDoesNotMatter) {
    Cases cases(36);
    std::vector<CashFlowScenario> scenarios;
    for (int i = 0; i < 2000; ++i) scenarios.emplace_back(cases.flows(4));
    const ScenarioSet set("p", scenarios);
    const YieldCurve curve(cases.rates(4));
    const auto serial = evaluate_all(set, curve, 1);
    const auto threaded = evaluate_all(set, curve, 5);
    ASSERT_EQ(serial.size(), threaded.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].npv, threaded[i].npv);
        EXPECT_EQ(serial[i].annualized_return, threaded[i].annualized_return);
    }
}

TEST(MuFromNpv, Examples) {
    const double basis = 200.0 + 100.0 / 1.1025;
    EXPECT_NEAR(mu_from_npv(0.0, basis, flat5, 2), 0.05, 1e-15);
    EXPECT_NEAR(mu_from_npv(42.63, 290.70, flat5, 2), 0.1244, 5e-5);
    EXPECT_NEAR(mu_from_npv(58.01, 290.70, flat5, 2), 0.15, 5e-5);
    EXPECT_THROW((void)mu_from_npv(-basis, basis, flat5, 2), Error);
    EXPECT_THROW((void)mu_from_npv(1.0, 0.0, flat5, 2), Error);
}

TEST(MuFromNpv, RoundTripProperty) {
    Cases cases(37);
    for (int i = 0; i < 1000; ++i) {
        const int T = cases.integer(1, 30);
        const YieldCurve curve(cases.rates(T));
        const double basis = cases.uniform(1.0, 1000.0);
        const double npv = cases.uniform(-0.95, 3.0) * basis;
        const double mu = mu_from_npv(npv, basis, curve, T);
        EXPECT_TRUE(rel_close(npv_from_mu(mu, basis, curve, T), npv, 1e-10) ||
                    std::abs(npv_from_mu(mu, basis, curve, T) - npv) < 1e-10 * basis);
        EXPECT_TRUE(rel_close(mu_from_npv(npv_from_mu(mu, basis, curve, T), basis, curve, T), mu, 1e-10) ||
                    std::abs(mu) < 1e-12);
    }
}

TEST(Thresholds, TableFiveCriticalValues) {
    const double basis = 200.0 + 100.0 / 1.1025;
    const auto t = thresholds({HurdleKind::delta_mu, 0.10}, basis, flat5, 2);
    EXPECT_NEAR(t.mu_star, 0.15, 1e-15);
    EXPECT_NEAR(t.npv_star, (1.15 * 1.15 / 1.1025 - 1.0) * basis, 1e-12);
    EXPECT_NEAR(t.npv_star, 58.01, 5e-3);
    EXPECT_NEAR(t.delta_mu, 0.10, 1e-15);
    EXPECT_EQ(t.basis_outlay, basis);
}

TEST(Thresholds, RisklessHurdle) {
    const auto zero = thresholds({HurdleKind::delta_mu, 0.0}, 290.7, flat5, 2);
    EXPECT_EQ(zero.npv_star, 0.0);
    EXPECT_EQ(zero.mu_star, 0.05);
    const auto inverse = thresholds({HurdleKind::npv_star, 0.0}, 290.7, flat5, 2);
    EXPECT_NEAR(inverse.delta_mu, 0.0, 1e-16);
}

TEST(Thresholds, AllKindsAgree) {
    Cases cases(38);
    for (int i = 0; i < 300; ++i) {
        const int T = cases.integer(1, 20);
        const YieldCurve curve(cases.rates(T));
        const double basis = cases.uniform(10.0, 1000.0);
        const double delta = cases.uniform(-0.03, 0.2);
        const auto a = thresholds({HurdleKind::delta_mu, delta}, basis, curve, T);
        const auto b = thresholds({HurdleKind::mu_star, a.mu_star}, basis, curve, T);
        const auto c = thresholds({HurdleKind::npv_star, a.npv_star}, basis, curve, T);
        const double profit = (a.npv_star + basis) * curve.growth(T) - basis;
        const auto d = thresholds({HurdleKind::profit_star, profit}, basis, curve, T);
        for (const auto* t : {&b, &c, &d}) {
            EXPECT_NEAR(t->mu_star, a.mu_star, 1e-12);
            EXPECT_NEAR(t->npv_star, a.npv_star, 1e-9 * basis);
        }
    }
}

TEST(Thresholds, ProfitHurdleMatchesTerminalProfit) {
    // A scenario sitting exactly on a profit hurdle sits exactly on the converted NPV hurdle.
    const auto r = evaluate(CashFlowScenario({-200, 350, -100}), flat5);
    const auto t = thresholds({HurdleKind::profit_star, r.terminal_profit}, r.replication.total_outlay,
                              flat5, 2);
    EXPECT_NEAR(t.npv_star, r.npv, 1e-11);
    EXPECT_NEAR(t.mu_star, r.annualized_return, 1e-13);
}

TEST(Thresholds, InvalidHurdles) {
    auto code = [](HurdleSpec h) {
        try {
            (void)thresholds(h, 290.7, flat5, 2);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::io_error;
    };
    EXPECT_EQ(code({HurdleKind::mu_star, -1.5}), Errc::invalid_hurdle);
    EXPECT_EQ(code({HurdleKind::npv_star, -400.0}), Errc::invalid_hurdle);
    EXPECT_EQ(code({HurdleKind::delta_mu, NAN}), Errc::invalid_hurdle);
    EXPECT_THROW((void)thresholds({HurdleKind::delta_mu, 0.1}, 0.0, flat5, 2), Error);
}

TEST(Thresholds, EquivalenceSweepProperty) {
    Cases cases(39);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const int T = cases.integer(1, 12);
        const YieldCurve curve(cases.rates(T, 0.0, 0.1));
        auto flows = cases.flows(T);
        const auto slot = static_cast<std::size_t>(cases.integer(1, T));
        const HurdleSpec hurdle{HurdleKind::delta_mu, cases.uniform(0.0, 0.2)};
        // Sweep a non-negative flow so the basis outlay stays fixed.
        for (int step = 0; step <= 60; ++step) {
            flows[slot] = 20.0 * step;
            const auto r = evaluate(CashFlowScenario(flows), curve);
            const auto t = thresholds(hurdle, r.replication.total_outlay, curve, T);
            const double gap = r.npv - t.npv_star;
            if (std::abs(gap) < 1e-9 * r.replication.total_outlay) continue;
            if (r.annualized_return == -1.0) continue;
            EXPECT_EQ(gap > 0, r.annualized_return > t.mu_star) << "case " << i << " step " << step;
            ++checked;
        }
    }
    EXPECT_GT(checked, 5000);
}

TEST(ThresholdProfile, UniformAndVaryingBasis) {
    const auto curve = flat5;
    const std::vector<EvaluationResult> same{evaluate(CashFlowScenario({-200, 300, -100}), curve),
                                             evaluate(CashFlowScenario({-200, 400, -100}), curve)};
    const std::vector<double> w{0.5, 0.5};
    const auto uniform = threshold_profile({HurdleKind::delta_mu, 0.1}, same, w, curve, 2);
    EXPECT_TRUE(uniform.uniform_basis);
    EXPECT_EQ(uniform.at_mean_basis.npv_star, uniform.per_scenario[0].npv_star);

    const std::vector<EvaluationResult> mixed{evaluate(CashFlowScenario({-200, 300, -100}), curve),
                                              evaluate(CashFlowScenario({-200, -50, 400}), curve)};
    const auto varying = threshold_profile({HurdleKind::delta_mu, 0.1}, mixed, w, curve, 2);
    EXPECT_FALSE(varying.uniform_basis);
    const double mean_basis = 0.5 * (mixed[0].replication.total_outlay + mixed[1].replication.total_outlay);
    EXPECT_NEAR(varying.at_mean_basis.basis_outlay, mean_basis, 1e-12);
    EXPECT_NE(varying.per_scenario[0].npv_star, varying.per_scenario[1].npv_star);
}

TEST(Mirr, TableFourMeanStreams) {
    EXPECT_NEAR(mirr(CashFlowScenario({-200, 350, -100}), 0.15, 0.15), 0.2085, 5e-5);
    EXPECT_NEAR(mirr(CashFlowScenario({-200, 355, -100}), 0.15, 0.15), 0.2171, 5e-5);
}

TEST(Mirr, SinglePeriod) {
    EXPECT_NEAR(mirr(CashFlowScenario({-100, 110}), 0.3, 0.7), 0.10, 1e-15);
}

TEST(Mirr, NeedsAnOutlay) {
    EXPECT_THROW((void)mirr(CashFlowScenario({0, 10, 10}), 0.1, 0.1), Error);
}
