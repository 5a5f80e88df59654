#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bernpoly/simplex.hpp"
#include "bernpoly/transform.hpp"
#include "test_support.hpp"

using namespace bernpoly;
namespace bt = bernpoly::testing;

TEST(Quadrature, PolynomialsAndBreaks)
{
    const auto q = integrate_unit_interval([](double u) { return u * u * u; }, {});
    EXPECT_NEAR(q.value, 0.25, 1e-12);
    EXPECT_TRUE(q.converged);
    const auto step =
        integrate_unit_interval([](double u) { return u < 0.3 ? 1.0 : 4.0; }, {0.3});
    EXPECT_NEAR(step.value, 0.3 + 2.8, 1e-10);
}

TEST(FhBounds, WorkedExamplePairs)
{
    const auto ms = bt::example_marginals();
    std::size_t pos = 0;
    for (const PairIndex p : all_pairs(4)) {
        const FHBounds b = fh_bounds(ms[p.i - 1], ms[p.j - 1]);
        EXPECT_NEAR(b.rho_min, bt::kOracleRhoMin[pos], 1e-6) << p.i << "," << p.j;
        EXPECT_NEAR(b.rho_max, bt::kOracleRhoMax[pos], 1e-6) << p.i << "," << p.j;
        EXPECT_FALSE(b.precision_warning);
        ++pos;
    }
    // Published four-decimal pair (2,3).
    const FHBounds b23 = fh_bounds(ms[1], ms[2]);
    EXPECT_NEAR(b23.rho_min, -0.7882, 1e-4);
    EXPECT_NEAR(b23.rho_max, 0.5448, 1e-4);
}

TEST(FhBounds, UnderOneSecond)
{
    const auto ms = bt::example_marginals();
    const auto t0 = std::chrono::steady_clock::now();
    fh_bounds(ms[1], ms[2]);
    const auto dt = std::chrono::steady_clock::now() - t0;
    EXPECT_LT(std::chrono::duration<double>(dt).count(), 1.0);
}

TEST(FhBounds, ClosedForms)
{
    const auto u = Marginal::uniform(0, 1);
    const auto z = Marginal::normal(0, 1);
    const FHBounds uz = fh_bounds(u, z);
    EXPECT_NEAR(uz.rho_max, std::sqrt(3.0 / M_PI), 1e-8);
    EXPECT_NEAR(uz.rho_min, -std::sqrt(3.0 / M_PI), 1e-8);

    const FHBounds ue = fh_bounds(u, Marginal::exponential(1));
    EXPECT_NEAR(ue.rho_max, std::sqrt(3.0) / 2.0, 1e-8);

    const FHBounds ee = fh_bounds(Marginal::exponential(1), Marginal::exponential(5));
    EXPECT_NEAR(ee.rho_max, 1.0, 1e-8);
    EXPECT_NEAR(ee.rho_min, 1.0 - M_PI * M_PI / 6.0, 1e-8);

    const auto b = Marginal::bernoulli(0.75);
    const FHBounds bb = fh_bounds(b, b);
    EXPECT_NEAR(bb.rho_min, -1.0 / 3.0, 1e-8);
    EXPECT_NEAR(bb.rho_max, 1.0, 1e-8);

    const auto two = Marginal::finite_discrete({-1, 1}, {0.5, 0.5});
    const FHBounds tt = fh_bounds(two, two);
    EXPECT_NEAR(tt.rho_min, -1.0, 1e-8);
    EXPECT_NEAR(tt.rho_max, 1.0, 1e-8);
}

TEST(FhBounds, SelfComonotoneIsOne)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> pos(0.1, 5.0), loc(-3.0, 3.0), prob(0.05, 0.95);
    for (int t = 0; t < 20; ++t) {
        const double a = loc(rng);
        std::vector<Marginal> ms{Marginal::uniform(a, a + pos(rng)), Marginal::exponential(pos(rng)),
                                 Marginal::normal(loc(rng), pos(rng)),
                                 Marginal::bernoulli(prob(rng))};
        const double p = prob(rng);
        ms.push_back(Marginal::finite_discrete({loc(rng), 4.0, 4.0 + pos(rng)},
                                               {p / 2, p / 2, 1 - p}));
        for (const auto& m : ms) {
            const FHBounds b = fh_bounds(m, m);
            ASSERT_NEAR(b.rho_max, 1.0, 1e-8) << m.kind_name();
            ASSERT_LE(b.rho_min, b.rho_max);
        }
    }
}

TEST(FhBounds, Symmetric)
{
    const auto ms = bt::example_marginals();
    for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = 0; j < ms.size(); ++j) {
            const FHBounds a = fh_bounds(ms[i], ms[j]);
            const FHBounds b = fh_bounds(ms[j], ms[i]);
            EXPECT_NEAR(a.rho_min, b.rho_min, 1e-9);
            EXPECT_NEAR(a.rho_max, b.rho_max, 1e-9);
        }
}

TEST(PairMixing, Examples)
{
    const FHBounds b{-0.7882, 0.5448, false};
    const PairMixing m = pair_mixing_weight(-0.4, b);
    EXPECT_NEAR(m.w, 0.291223, 1e-6);
    EXPECT_NEAR(m.bern_rho, 2 * m.w - 1, 1e-15);

    const FHBounds sym{-1, 1, false};
    EXPECT_DOUBLE_EQ(pair_mixing_weight(0.0, sym).w, 0.5);
    EXPECT_DOUBLE_EQ(pair_mixing_weight(1.0, sym).w, 1.0);
    EXPECT_DOUBLE_EQ(pair_mixing_weight(-1.0, sym).w, 0.0);

    EXPECT_THROW(pair_mixing_weight(0.6, b), InfeasiblePair);
    EXPECT_THROW(pair_mixing_weight(0.1, FHBounds{0.2, 0.2, false}), DegenerateBounds);
}

TEST(PairMixing, AffineInverse)
{
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double lo = -d(rng), hi = d(rng) + 1e-3;
        const double target = lo + (hi - lo) * d(rng);
        const PairMixing m = pair_mixing_weight(target, FHBounds{lo, hi, false});
        ASSERT_NEAR(m.w * hi + (1 - m.w) * lo, target, 1e-14);
    }
}

TEST(TransformPlan, WorkedExample)
{
    const auto plan = build_transform_plan(bt::example_marginals(),
                                           CorrelationVector(4, bt::kExampleTarget));
    ASSERT_EQ(plan.pairs.size(), 6u);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_NEAR(plan.bernoulli_target[k], bt::kExampleBernoulli[k], 1e-4);
        EXPECT_NEAR(plan.bernoulli_target[k], bt::kOracleBernoulli[k], 1e-6);
    }
    EXPECT_NEAR(plan.pairs[3].w, 0.291209, 1e-4);
    EXPECT_NEAR(plan.pairs[3].bern_rho, -0.417582, 1e-4);
    const auto res = phase1_feasibility(build_vertex_matrix(4), plan.bernoulli_target);
    EXPECT_TRUE(res.feasible);
}

TEST(TransformPlan, InfeasiblePairIsNamed)
{
    const std::vector<Marginal> ms{Marginal::uniform(0, 1), Marginal::exponential(1)};
    try {
        build_transform_plan(ms, CorrelationVector(2, {-0.9}));
        FAIL() << "expected InfeasiblePair";
    }
    catch (const InfeasiblePair& e) {
        EXPECT_EQ(e.i(), 1u);
        EXPECT_EQ(e.j(), 2u);
        EXPECT_NEAR(e.rho_min(), -std::sqrt(3.0) / 2.0, 1e-8);
    }
    EXPECT_THROW(build_transform_plan(ms, CorrelationVector(3, {0, 0, 0})), ShapeError);
}

TEST(SampleGeneral, SingleUniform)
{
    TransformPlan plan;
    plan.n = 1;
    plan.marginals = {Marginal::uniform(0, 1)};
    plan.target = CorrelationVector(1, std::vector<double>{});
    plan.bernoulli_target = CorrelationVector(1, std::vector<double>{});
    RandomSource rng(31);
    const auto batch = sample_general(plan, MixingWeights(1, {1.0}), 200000, rng);
    double mean = 0.0;
    for (double x : batch.values) {
        ASSERT_GT(x, 0.0);
        ASSERT_LT(x, 1.0);
        mean += x;
    }
    EXPECT_NEAR(mean / batch.count, 0.5, 0.005);
}

TEST(SampleGeneral, WorkedExample)
{
    const auto plan = build_transform_plan(bt::example_marginals(),
                                           CorrelationVector(4, bt::kExampleTarget));
    const VertexMatrix m = build_vertex_matrix(4);
    const auto res = phase1_feasibility(m, plan.bernoulli_target);
    ASSERT_TRUE(res.feasible);
    const auto w = MixingWeights::normalized(4, *res.alpha);
    RandomSource rng(32);
    const std::size_t count = 1000000;
    const auto batch = sample_general(plan, w, count, rng);
    const auto rho = empirical_correlation(batch);
    for (std::size_t k = 0; k < 6; ++k)
        EXPECT_NEAR(rho[k], bt::kExampleTarget[k], 0.01) << "pair " << k;
    for (std::size_t i = 0; i < 4; ++i) {
        double mean = 0.0;
        for (std::size_t r = 0; r < count; ++r) {
            ASSERT_TRUE(plan.marginals[i].in_support(batch.at(r, i)));
            mean += batch.at(r, i);
        }
        mean /= static_cast<double>(count);
        EXPECT_NEAR(mean, bt::kExampleMeans[i], 3 * bt::kExampleSd[i] / std::sqrt(count));
    }
}

TEST(SampleGeneral, ComonotoneRoundTrip)
{
    const Marginal e = Marginal::exponential(1.5);
    const auto plan = build_transform_plan({e, e}, CorrelationVector(2, {1.0}));
    EXPECT_NEAR(plan.pairs[0].w, 1.0, 1e-8);
    RandomSource rng(33);
    const auto w = MixingWeights::normalized(2, {plan.pairs[0].w, 1 - plan.pairs[0].w}, 1e-6);
    const auto batch = sample_general(plan, w, 50000, rng);
    // Identical marginals coupled comonotonically are equal draw for draw.
    for (std::size_t r = 0; r < batch.count; ++r)
        ASSERT_EQ(batch.at(r, 0), batch.at(r, 1));
}

TEST(SampleGeneral, AntitheticBitsFlipTheUniform)
{
    const Marginal u = Marginal::uniform(0, 1);
    const auto plan = build_transform_plan({u, u}, CorrelationVector(2, {-1.0}));
    RandomSource rng(34);
    const auto batch = sample_general(plan, MixingWeights(2, {0.0, 1.0}), 20000, rng);
    for (std::size_t r = 0; r < batch.count; ++r)
        ASSERT_EQ(batch.at(r, 0), 1.0 - batch.at(r, 1));
}

TEST(SampleGeneral, RejectsMismatchedWeights)
{
    const auto plan = build_transform_plan(bt::example_marginals(),
                                           CorrelationVector(4, bt::kExampleTarget));
    RandomSource rng(35);
    const MixingWeights uniform(4, std::vector<double>(8, 0.125));
    EXPECT_THROW(sample_general(plan, uniform, 10, rng), DomainError);
}
